#pragma once

#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "qcp/circuit.hpp"
#include "qcp/propagation.hpp"

namespace qcp {

enum class SeedSet { all_sites, one_site };

/// Backpropagated target sums, one per weight-1 seed. Immutable after
/// construction; safe for concurrent reads.
struct TargetCache {
  struct Entry {
    int site = 0;
    Pauli axis = Pauli::X;
    PauliSum sum;
  };

  int n_qubits = 0;
  SeedSet seeds = SeedSet::all_sites;
  std::vector<Entry> entries;  // ordered by (site, axis)
  PropagationStats stats;
};

inline constexpr std::size_t kDefaultTermCap = 20'000'000;

TargetCache build_target_cache(const ParametrizedCircuit& target,
                               const TruncationConfig& trunc,
                               SeedSet seeds = SeedSet::all_sites,
                               std::size_t term_cap = kDefaultTermCap,
                               int threads = 1);

struct RiskValue {
  double value = 0.0;
  std::vector<double> contributions;  // one diagonal element per seed
  PropagationStats stats;

  nlohmann::json to_json() const;
};

/// Analytically Haar-averaged local risk:
/// 1/2 - (1/6n) * sum over weight-1 seeds of <<P_j| V U^dag |P_j>>,
/// evaluated meet-in-the-middle against the cached target sums.
RiskValue local_risk(const TargetCache& cache, const ParametrizedCircuit& V,
                     const Eigen::VectorXd& params,
                     const TruncationConfig& trunc_V, int threads = 1,
                     std::size_t term_cap = kDefaultTermCap);

/// Translation-invariant reduction: three seeds on one site,
/// 1/2 - (1/6) * sum of the three diagonal elements.
RiskValue local_risk_ti(const TargetCache& cache_one_site,
                        const ParametrizedCircuit& V,
                        const Eigen::VectorXd& params,
                        const TruncationConfig& trunc_V, int threads = 1,
                        std::size_t term_cap = kDefaultTermCap);

/// Exact weight-resolved expected risk over product Haar states,
/// 1 - (1/2^n) sum_P 3^{-W(P)} <<P| V U^dag |P>>, by dense enumeration
/// of all 4^n Pauli strings. n <= 6.
double weighted_full_risk(const ParametrizedCircuit& U,
                          const Eigen::VectorXd& params_U,
                          const ParametrizedCircuit& V,
                          const Eigen::VectorXd& params_V);

}  // namespace qcp
