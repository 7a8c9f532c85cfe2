#pragma once

#include <array>
#include <string>
#include <vector>

namespace qcp {

enum class Boundary { open, periodic_x, periodic_y, periodic_both };
enum class LatticeKind { square, heavy_hex };

struct Edge {
  int a = 0;
  int b = 0;
  int axis = -1;  // 0 = x, 1 = y, -1 = unclassified (heavy-hex)

  bool operator==(const Edge& o) const = default;
};

struct Topology {
  LatticeKind kind = LatticeKind::square;
  Boundary boundary = Boundary::open;
  int n_sites = 0;
  int n_x = 0, n_y = 0;  // 0 for non-grid topologies
  std::vector<std::array<int, 2>> coords;
  std::vector<Edge> nn_edges;
  std::vector<Edge> nnn_edges;

  bool periodic_both() const { return boundary == Boundary::periodic_both; }

  /// Site relabeling under a lattice translation by (dx, dy). Only valid
  /// for fully periodic square lattices.
  int translate(int site, int dx, int dy) const;

  /// Generators of the translation group: {(1,0),(0,1)} when periodic in
  /// both directions, empty otherwise.
  std::vector<std::array<int, 2>> translation_vectors() const;
};

Boundary boundary_from_string(const std::string& s);
std::string boundary_to_string(Boundary b);

/// Square lattices with open/periodic boundaries, or the 127-qubit
/// heavy-hex layout (kind = heavy_hex ignores the boundary argument and
/// uses n_x as the qubit count).
Topology build_topology(LatticeKind kind, int n_x, int n_y,
                        Boundary boundary = Boundary::open);

/// Explicit edge-list topologies, for small heavy-hex test fixtures.
Topology topology_from_edge_list(int n_sites,
                                 const std::vector<std::array<int, 2>>& edges);

}  // namespace qcp
