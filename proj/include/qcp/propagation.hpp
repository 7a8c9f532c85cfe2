#pragma once

#include <cstddef>
#include <limits>
#include <nlohmann/json_fwd.hpp>

#include "qcp/circuit.hpp"
#include "qcp/pauli.hpp"

namespace qcp {

struct TruncationConfig {
  static constexpr int kUnlimited = std::numeric_limits<int>::max();

  int max_weight = kUnlimited;
  double coeff_eps = 0.0;
  int max_sines = kUnlimited;

  static TruncationConfig permissive() { return {}; }
};

struct PropagationStats {
  std::size_t peak_terms = 0;
  std::size_t final_terms = 0;
  std::size_t truncated_by_weight = 0;
  std::size_t truncated_by_coeff = 0;
  std::size_t truncated_by_sines = 0;
  std::size_t seed_propagations = 0;
  double discarded_coefficient_mass = 0.0;

  void absorb(const PropagationStats& other);
  nlohmann::json to_json() const;
};

/// Direction of a propagation through a circuit U (gates listed in the
/// order they act on states):
///   circuit:            O -> U^dag O U   (Heisenberg evolution)
///   adjoint_of_circuit: O -> U O U^dag
enum class Direction { circuit, adjoint_of_circuit };

/// In-place branching rule for exp(i angle/2 G) O exp(-i angle/2 G):
/// commuting terms pass, anticommuting terms split into a cosine branch
/// (same string) and a sine branch (string multiplied by the generator,
/// sine count incremented). Truncation checks run weight, then sine
/// count, then coefficient; dropped terms are recorded in stats.
void apply_rotation_adjoint(PauliSum& s, const PauliString& generator,
                            double angle, const TruncationConfig& trunc,
                            PropagationStats& stats);

/// Conjugation by a Clifford gate: bijective relabeling with sign flips.
/// With inverse=true applies conjugation by the inverse gate.
void apply_clifford(PauliSum& s, const CliffordGate& gate,
                    bool inverse = false);

/// Image of a single string under the same conjugation; returns the
/// relabeled string and its sign (+1 or -1).
std::pair<PauliString, int> clifford_image(const PauliString& p,
                                           const CliffordGate& gate,
                                           bool inverse = false);

std::pair<PauliSum, PropagationStats> propagate(
    const ParametrizedCircuit& circ, const Eigen::VectorXd& params,
    const PauliSum& seed, Direction direction, const TruncationConfig& trunc,
    std::size_t term_cap = 0);

}  // namespace qcp
