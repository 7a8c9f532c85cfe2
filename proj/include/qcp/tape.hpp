#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "qcp/circuit.hpp"
#include "qcp/propagation.hpp"
#include "qcp/risk.hpp"

namespace qcp {

/// Signals that the recorded branch structure should be re-recorded
/// because the parameters drifted too far from the recording point.
struct StaleTopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The branch/merge structure of the ansatz-side propagation, recorded at
/// a reference parameter vector with coefficient truncation disabled
/// (weight and sine-count truncation stay active). Because those two
/// truncations are parameter-independent, replaying the tape reproduces
/// the coeff_eps = 0 cost exactly at any parameter vector, and reverse
/// sweeps give its exact gradient.
class FrozenCostTopology {
 public:
  static FrozenCostTopology record(const TargetCache& cache,
                                   const ParametrizedCircuit& ansatz,
                                   const Eigen::VectorXd& params,
                                   const TruncationConfig& trunc,
                                   int threads = 1);

  double cost(const Eigen::VectorXd& params, int threads = 1) const;

  std::pair<double, Eigen::VectorXd> cost_and_gradient(
      const Eigen::VectorXd& params, int threads = 1) const;

  const Eigen::VectorXd& recorded_params() const { return recorded_params_; }
  int n_params() const { return n_params_; }
  std::size_t instruction_count() const;

 private:
  enum Kind : std::uint8_t { kConst = 0, kCos = 1, kSin = 2 };

  // val[out] += factor * f(scale * theta[param]) * val[in]
  struct Instr {
    std::int32_t out;
    std::int32_t in;
    std::int32_t param;  // -1 for kConst
    Kind kind;
    double scale;
    double factor;
  };

  struct SeedTape {
    std::vector<Instr> instrs;
    std::int32_t n_nodes = 1;  // node 0 is the seed root with value 1
    std::vector<std::pair<std::int32_t, double>> overlaps;
  };

  double seed_value(const SeedTape& tape, const Eigen::VectorXd& params,
                    std::vector<double>* vals) const;

  std::vector<SeedTape> tapes_;
  Eigen::VectorXd recorded_params_;
  int n_params_ = 0;
  double denom_ = 6.0;
};

/// Gradient of the frozen cost with a staleness guard: throws
/// StaleTopologyError when the displacement from the recording point
/// exceeds max_displacement in infinity norm.
Eigen::VectorXd gradient(const FrozenCostTopology& frozen,
                         const Eigen::VectorXd& params,
                         double max_displacement = 0.1, int threads = 1);

}  // namespace qcp
