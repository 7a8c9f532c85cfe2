#include "qcp/propagation.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "qcp/errors.hpp"

namespace qcp {

void PropagationStats::absorb(const PropagationStats& other) {
  peak_terms = std::max(peak_terms, other.peak_terms);
  final_terms += other.final_terms;
  truncated_by_weight += other.truncated_by_weight;
  truncated_by_coeff += other.truncated_by_coeff;
  truncated_by_sines += other.truncated_by_sines;
  seed_propagations += other.seed_propagations;
  discarded_coefficient_mass += other.discarded_coefficient_mass;
}

nlohmann::json PropagationStats::to_json() const {
  return nlohmann::json{{"peak_terms", peak_terms},
                        {"final_terms", final_terms},
                        {"truncated_by_weight", truncated_by_weight},
                        {"truncated_by_coeff", truncated_by_coeff},
                        {"truncated_by_sines", truncated_by_sines},
                        {"seed_propagations", seed_propagations},
                        {"discarded_coefficient_mass",
                         discarded_coefficient_mass}};
}

namespace {

struct LocalImage {
  Pauli code;
  int sign;  // +1 or -1
};

struct LocalImage2 {
  Pauli code0;
  Pauli code1;
  int sign;
};

// Image of a local Pauli under conjugation, composed from the images of
// the X and Z generators via the exact multiply() phase bookkeeping.
// gens = images of {X_s, Z_s} for each of the k sites, as k-qubit strings
// with a sign.
template <int K>
std::pair<PauliString, int> conjugate_local(
    const std::array<Pauli, K>& codes,
    const std::array<std::pair<PauliString, int>, 2 * K>& gens) {
  PauliString acc = PauliString::identity(K);
  int exponent = 0;
  // P = i^{sum x_s z_s} prod_s X_s^{x_s} prod_s Z_s^{z_s}
  for (int s = 0; s < K; ++s) {
    const Pauli c = codes[s];
    if (c == Pauli::Y) exponent += 1;
    if (c == Pauli::X || c == Pauli::Y) {
      const auto& [g, sgn] = gens[2 * s];
      auto [prod, e] = multiply(acc, g);
      acc = prod;
      exponent += e + (sgn < 0 ? 2 : 0);
    }
  }
  for (int s = 0; s < K; ++s) {
    const Pauli c = codes[s];
    if (c == Pauli::Z || c == Pauli::Y) {
      const auto& [g, sgn] = gens[2 * s + 1];
      auto [prod, e] = multiply(acc, g);
      acc = prod;
      exponent += e + (sgn < 0 ? 2 : 0);
    }
  }
  return {acc, ((exponent % 4) + 4) % 4};
}

std::array<LocalImage, 4> build_table_1q(
    std::pair<Pauli, int> img_x, std::pair<Pauli, int> img_z) {
  std::array<std::pair<PauliString, int>, 2> gens = {
      std::make_pair(PauliString::single(1, 0, img_x.first), img_x.second),
      std::make_pair(PauliString::single(1, 0, img_z.first), img_z.second)};
  std::array<LocalImage, 4> table{};
  for (int c = 0; c < 4; ++c) {
    auto [p, e] = conjugate_local<1>({static_cast<Pauli>(c)}, gens);
    table[c] = {p.at(0), e == 0 ? 1 : -1};
  }
  return table;
}

std::array<LocalImage2, 16> build_table_cnot() {
  // control = site 0, target = site 1; CNOT is self-inverse.
  auto ps = [](Pauli a, Pauli b) {
    PauliString p(2);
    p.set(0, a);
    p.set(1, b);
    return p;
  };
  std::array<std::pair<PauliString, int>, 4> gens = {
      std::make_pair(ps(Pauli::X, Pauli::X), 1),  // X_c -> X_c X_t
      std::make_pair(ps(Pauli::Z, Pauli::I), 1),  // Z_c -> Z_c
      std::make_pair(ps(Pauli::I, Pauli::X), 1),  // X_t -> X_t
      std::make_pair(ps(Pauli::Z, Pauli::Z), 1)}; // Z_t -> Z_c Z_t
  std::array<LocalImage2, 16> table{};
  for (int c0 = 0; c0 < 4; ++c0) {
    for (int c1 = 0; c1 < 4; ++c1) {
      auto [p, e] = conjugate_local<2>(
          {static_cast<Pauli>(c0), static_cast<Pauli>(c1)}, gens);
      table[c0 * 4 + c1] = {p.at(0), p.at(1), e == 0 ? 1 : -1};
    }
  }
  return table;
}

const std::array<LocalImage, 4>& table_h() {
  static const auto t = build_table_1q({Pauli::Z, 1}, {Pauli::X, 1});
  return t;
}
const std::array<LocalImage, 4>& table_s() {
  // S X S^dag = Y, S Z S^dag = Z
  static const auto t = build_table_1q({Pauli::Y, 1}, {Pauli::Z, 1});
  return t;
}
const std::array<LocalImage, 4>& table_sdg() {
  static const auto t = build_table_1q({Pauli::Y, -1}, {Pauli::Z, 1});
  return t;
}
const std::array<LocalImage2, 16>& table_cnot() {
  static const auto t = build_table_cnot();
  return t;
}

}  // namespace

std::pair<PauliString, int> clifford_image(const PauliString& p,
                                           const CliffordGate& gate,
                                           bool inverse) {
  PauliString q = p;
  int sign;
  if (gate.kind == CliffordKind::CNOT) {
    const LocalImage2& img = table_cnot()[static_cast<int>(p.at(gate.site0)) * 4 +
                                          static_cast<int>(p.at(gate.site1))];
    q.set(gate.site0, img.code0);
    q.set(gate.site1, img.code1);
    sign = img.sign;
  } else {
    const auto& table = gate.kind == CliffordKind::H
                            ? table_h()
                            : (inverse ? table_sdg() : table_s());
    const LocalImage& img = table[static_cast<int>(p.at(gate.site0))];
    q.set(gate.site0, img.code);
    sign = img.sign;
  }
  return {q, sign};
}

void apply_clifford(PauliSum& s, const CliffordGate& gate, bool inverse) {
  if (gate.site0 < 0 || gate.site0 >= s.n_qubits() ||
      (gate.arity() == 2 &&
       (gate.site1 < 0 || gate.site1 >= s.n_qubits()))) {
    throw std::invalid_argument("apply_clifford: site out of range");
  }
  PauliSum::Map out;
  out.reserve(s.terms().size());
  if (gate.kind == CliffordKind::CNOT) {
    const auto& table = table_cnot();
    for (const auto& [p, t] : s.terms()) {
      const int idx = static_cast<int>(p.at(gate.site0)) * 4 +
                      static_cast<int>(p.at(gate.site1));
      const LocalImage2& img = table[idx];
      PauliString q = p;
      q.set(gate.site0, img.code0);
      q.set(gate.site1, img.code1);
      out.emplace(q, PauliTerm{t.coefficient * img.sign, t.sine_count});
    }
  } else {
    const auto& table = gate.kind == CliffordKind::H
                            ? table_h()
                            : (inverse ? table_sdg() : table_s());
    for (const auto& [p, t] : s.terms()) {
      const LocalImage& img = table[static_cast<int>(p.at(gate.site0))];
      PauliString q = p;
      q.set(gate.site0, img.code);
      out.emplace(q, PauliTerm{t.coefficient * img.sign, t.sine_count});
    }
  }
  s.terms() = std::move(out);
}

void apply_rotation_adjoint(PauliSum& s, const PauliString& generator,
                            double angle, const TruncationConfig& trunc,
                            PropagationStats& stats) {
  if (generator.n_qubits() != s.n_qubits()) {
    throw std::invalid_argument("apply_rotation_adjoint: size mismatch");
  }
  const double c = std::cos(angle), sn = std::sin(angle);

  struct Pending {
    PauliString string;
    double coeff;
    std::uint32_t sines;
  };
  std::vector<Pending> sine_branches;
  std::vector<PauliString> anticommuting;
  for (const auto& [p, t] : s.terms()) {
    if (!p.commutes_with(generator)) anticommuting.push_back(p);
  }

  for (const PauliString& p : anticommuting) {
    auto it = s.terms().find(p);
    const double a = it->second.coefficient;
    const std::uint32_t r = it->second.sine_count;

    // sine branch: i sin(angle) * G P, with G P = i^e Q and e odd
    auto [q, e] = multiply(generator, p);
    const int sign = (e + 1) % 4 == 0 ? 1 : -1;
    const double b = sign * sn * a;
    if (b != 0.0) {
      if (q.weight() > trunc.max_weight) {
        ++stats.truncated_by_weight;
        stats.discarded_coefficient_mass += std::abs(b);
      } else if (r + 1 > static_cast<std::uint32_t>(trunc.max_sines)) {
        ++stats.truncated_by_sines;
        stats.discarded_coefficient_mass += std::abs(b);
      } else if (std::abs(b) < trunc.coeff_eps) {
        ++stats.truncated_by_coeff;
        stats.discarded_coefficient_mass += std::abs(b);
      } else {
        sine_branches.push_back({q, b, r + 1});
      }
    }

    // cosine branch keeps the string and sine count
    const double ac = c * a;
    if (ac == 0.0) {
      s.terms().erase(it);
    } else if (std::abs(ac) < trunc.coeff_eps) {
      ++stats.truncated_by_coeff;
      stats.discarded_coefficient_mass += std::abs(ac);
      s.terms().erase(it);
    } else {
      it->second.coefficient = ac;
    }
  }

  for (const Pending& b : sine_branches) s.add(b.string, b.coeff, b.sines);
  stats.peak_terms = std::max(stats.peak_terms, s.size());
}

std::pair<PauliSum, PropagationStats> propagate(
    const ParametrizedCircuit& circ, const Eigen::VectorXd& params,
    const PauliSum& seed, Direction direction, const TruncationConfig& trunc,
    std::size_t term_cap) {
  if (params.size() != circ.n_params) {
    throw std::invalid_argument("propagate: parameter length mismatch");
  }
  if (seed.n_qubits() != circ.n_qubits) {
    throw std::invalid_argument("propagate: qubit count mismatch");
  }
  PauliSum sum = seed;
  PropagationStats stats;
  stats.seed_propagations = 1;
  stats.peak_terms = sum.size();

  const bool heisenberg = direction == Direction::circuit;
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(circ.gates.size());
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const Gate& g = circ.gates[heisenberg ? m - 1 - i : i];
    if (const auto* cg = std::get_if<CliffordGate>(&g)) {
      apply_clifford(sum, *cg, /*inverse=*/heisenberg);
    } else {
      const auto& r = std::get<PauliRotation>(g);
      const double theta = r.scale * params[r.param_index];
      apply_rotation_adjoint(sum, r.generator, heisenberg ? theta : -theta,
                             trunc, stats);
    }
    if (term_cap != 0 && sum.size() > term_cap) {
      throw ResourceError("propagate: term cap exceeded (" +
                          std::to_string(sum.size()) + " > " +
                          std::to_string(term_cap) + ")");
    }
  }
  stats.final_terms = sum.size();
  return {std::move(sum), stats};
}

}  // namespace qcp
