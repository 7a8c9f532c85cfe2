#include "qcp/lattice.hpp"

#include <algorithm>
#include <set>

#include "qcp/errors.hpp"

namespace qcp {

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic-x") return Boundary::periodic_x;
  if (s == "periodic-y") return Boundary::periodic_y;
  if (s == "periodic-both") return Boundary::periodic_both;
  throw ConfigError("unknown boundary: " + s);
}

std::string boundary_to_string(Boundary b) {
  switch (b) {
    case Boundary::open: return "open";
    case Boundary::periodic_x: return "periodic-x";
    case Boundary::periodic_y: return "periodic-y";
    case Boundary::periodic_both: return "periodic-both";
  }
  return "?";
}

int Topology::translate(int site, int dx, int dy) const {
  if (kind != LatticeKind::square || !periodic_both()) {
    throw ConfigError("translate: requires a fully periodic square lattice");
  }
  const int x = (coords[site][0] + dx % n_x + n_x) % n_x;
  const int y = (coords[site][1] + dy % n_y + n_y) % n_y;
  return y * n_x + x;
}

std::vector<std::array<int, 2>> Topology::translation_vectors() const {
  if (kind == LatticeKind::square && periodic_both()) return {{1, 0}, {0, 1}};
  return {};
}

namespace {

struct EdgeCollector {
  std::set<std::pair<int, int>> seen;
  std::vector<Edge> edges;

  void add(int a, int b, int axis) {
    if (a == b) return;  // wrap self-loop on size-1 dimensions
    auto key = std::minmax(a, b);
    if (seen.insert({key.first, key.second}).second) {
      edges.push_back({key.first, key.second, axis});
    }
  }
};

Topology build_square(int n_x, int n_y, Boundary boundary) {
  if (n_x < 2 || n_y < 2) {
    throw ConfigError("square lattice requires n_x, n_y >= 2");
  }
  Topology t;
  t.kind = LatticeKind::square;
  t.boundary = boundary;
  t.n_x = n_x;
  t.n_y = n_y;
  t.n_sites = n_x * n_y;
  t.coords.resize(t.n_sites);
  for (int y = 0; y < n_y; ++y) {
    for (int x = 0; x < n_x; ++x) t.coords[y * n_x + x] = {x, y};
  }
  const bool px = boundary == Boundary::periodic_x ||
                  boundary == Boundary::periodic_both;
  const bool py = boundary == Boundary::periodic_y ||
                  boundary == Boundary::periodic_both;
  auto site = [&](int x, int y) { return y * n_x + x; };
  EdgeCollector nn, nnn;
  for (int y = 0; y < n_y; ++y) {
    for (int x = 0; x < n_x; ++x) {
      const int s = site(x, y);
      if (x + 1 < n_x) nn.add(s, site(x + 1, y), 0);
      else if (px) nn.add(s, site(0, y), 0);
      if (y + 1 < n_y) nn.add(s, site(x, y + 1), 1);
      else if (py) nn.add(s, site(x, 0), 1);
      // diagonal neighbors
      const bool xr_ok = x + 1 < n_x || px;
      const int xr = (x + 1) % n_x;
      if (xr_ok && (y + 1 < n_y || py)) nnn.add(s, site(xr, (y + 1) % n_y), -1);
      if (xr_ok && (y - 1 >= 0 || py)) {
        nnn.add(s, site(xr, (y - 1 + n_y) % n_y), -1);
      }
    }
  }
  t.nn_edges = std::move(nn.edges);
  t.nnn_edges = std::move(nnn.edges);
  return t;
}

// 127-qubit heavy-hex layout: seven horizontal rows of qubits joined by
// groups of four vertical bridge qubits, matching the published 127-qubit
// coupling map (144 edges, max degree 3).
Topology build_heavy_hex_127() {
  Topology t;
  t.kind = LatticeKind::heavy_hex;
  t.boundary = Boundary::open;
  t.n_sites = 127;
  t.coords.assign(127, {0, 0});

  struct Row {
    int start;
    int first_col;
    int length;
  };
  const std::array<Row, 7> rows = {{{0, 0, 14},
                                    {18, 0, 15},
                                    {37, 0, 15},
                                    {56, 0, 15},
                                    {75, 0, 15},
                                    {94, 0, 15},
                                    {113, 1, 14}}};
  const std::array<int, 6> bridge_starts = {14, 33, 52, 71, 90, 109};

  EdgeCollector nn;
  for (int r = 0; r < 7; ++r) {
    for (int i = 0; i < rows[r].length; ++i) {
      t.coords[rows[r].start + i] = {rows[r].first_col + i, 2 * r};
      if (i + 1 < rows[r].length) {
        nn.add(rows[r].start + i, rows[r].start + i + 1, -1);
      }
    }
  }
  for (int r = 0; r < 6; ++r) {
    // bridges alternate between columns {0,4,8,12} and {2,6,10,14}
    const int col0 = (r % 2 == 0) ? 0 : 2;
    for (int k = 0; k < 4; ++k) {
      const int col = col0 + 4 * k;
      const int bridge = bridge_starts[r] + k;
      t.coords[bridge] = {col, 2 * r + 1};
      nn.add(rows[r].start + (col - rows[r].first_col), bridge, -1);
      nn.add(bridge, rows[r + 1].start + (col - rows[r + 1].first_col), -1);
    }
  }
  t.nn_edges = std::move(nn.edges);
  return t;
}

}  // namespace

Topology build_topology(LatticeKind kind, int n_x, int n_y, Boundary boundary) {
  if (kind == LatticeKind::square) return build_square(n_x, n_y, boundary);
  if (n_x == 127) return build_heavy_hex_127();
  throw ConfigError(
      "heavy_hex: only the 127-qubit layout is built in; use an explicit "
      "edge-list fixture for other sizes");
}

Topology topology_from_edge_list(
    int n_sites, const std::vector<std::array<int, 2>>& edges) {
  if (n_sites < 1) throw ConfigError("edge list: invalid site count");
  Topology t;
  t.kind = LatticeKind::heavy_hex;
  t.boundary = Boundary::open;
  t.n_sites = n_sites;
  t.coords.assign(n_sites, {0, 0});
  EdgeCollector nn;
  for (const auto& e : edges) {
    if (e[0] < 0 || e[0] >= n_sites || e[1] < 0 || e[1] >= n_sites ||
        e[0] == e[1]) {
      throw ConfigError("edge list: invalid edge");
    }
    nn.add(e[0], e[1], -1);
  }
  t.nn_edges = std::move(nn.edges);
  return t;
}

}  // namespace qcp
