#include "qcp/risk.hpp"

#include <bit>
#include <cmath>
#include <nlohmann/json.hpp>

#include "qcp/errors.hpp"
#include "qcp/oracle.hpp"
#include "qcp/parallel.hpp"

namespace qcp {

TargetCache build_target_cache(const ParametrizedCircuit& target,
                               const TruncationConfig& trunc, SeedSet seeds,
                               std::size_t term_cap, int threads) {
  TargetCache cache;
  cache.n_qubits = target.n_qubits;
  cache.seeds = seeds;
  const int n_seed_sites = seeds == SeedSet::one_site ? 1 : target.n_qubits;
  cache.entries.resize(static_cast<std::size_t>(3 * n_seed_sites));
  std::vector<PropagationStats> stats(cache.entries.size());
  parallel_for(
      static_cast<int>(cache.entries.size()), threads, [&](int idx) {
        const int site = idx / 3;
        const Pauli axis = static_cast<Pauli>(idx % 3 + 1);  // X, Y, Z
        const PauliString p = PauliString::single(target.n_qubits, site, axis);
        auto& entry = cache.entries[static_cast<std::size_t>(idx)];
        entry.site = site;
        entry.axis = axis;
        try {
          auto [sum, st] =
              propagate(target, target.reference_params,
                        PauliSum::single(target.n_qubits, p),
                        Direction::circuit, trunc, term_cap);
          entry.sum = std::move(sum);
          stats[static_cast<std::size_t>(idx)] = st;
        } catch (const ResourceError& e) {
          throw ResourceError("target cache, seed " + p.str() + ": " +
                              e.what());
        }
      });
  for (const auto& st : stats) cache.stats.absorb(st);
  return cache;
}

namespace {

RiskValue risk_from_cache(const TargetCache& cache,
                          const ParametrizedCircuit& V,
                          const Eigen::VectorXd& params,
                          const TruncationConfig& trunc_V, int threads,
                          std::size_t term_cap, double denom) {
  if (V.n_qubits != cache.n_qubits) {
    throw std::invalid_argument("local_risk: qubit count mismatch");
  }
  RiskValue out;
  out.contributions.resize(cache.entries.size());
  std::vector<PropagationStats> stats(cache.entries.size());
  parallel_for(
      static_cast<int>(cache.entries.size()), threads, [&](int idx) {
        const auto& entry = cache.entries[static_cast<std::size_t>(idx)];
        const PauliString p =
            PauliString::single(cache.n_qubits, entry.site, entry.axis);
        auto [sum, st] = propagate(V, params, PauliSum::single(cache.n_qubits, p),
                                   Direction::circuit, trunc_V, term_cap);
        out.contributions[static_cast<std::size_t>(idx)] =
            inner_product(sum, entry.sum);
        stats[static_cast<std::size_t>(idx)] = st;
      });
  double sum = 0.0;
  for (double c : out.contributions) sum += c;  // fixed seed order
  for (const auto& st : stats) out.stats.absorb(st);
  out.value = 0.5 - sum / denom;
  return out;
}

}  // namespace

RiskValue local_risk(const TargetCache& cache, const ParametrizedCircuit& V,
                     const Eigen::VectorXd& params,
                     const TruncationConfig& trunc_V, int threads,
                     std::size_t term_cap) {
  if (cache.seeds != SeedSet::all_sites) {
    throw ConfigError("local_risk: cache was built with one-site seeds");
  }
  return risk_from_cache(cache, V, params, trunc_V, threads, term_cap,
                         6.0 * cache.n_qubits);
}

RiskValue local_risk_ti(const TargetCache& cache, const ParametrizedCircuit& V,
                        const Eigen::VectorXd& params,
                        const TruncationConfig& trunc_V, int threads,
                        std::size_t term_cap) {
  if (cache.seeds != SeedSet::one_site) {
    throw ConfigError("local_risk_ti: cache must be built with one-site seeds");
  }
  return risk_from_cache(cache, V, params, trunc_V, threads, term_cap, 6.0);
}

nlohmann::json RiskValue::to_json() const {
  return nlohmann::json{{"value", value},
                        {"contributions", contributions},
                        {"stats", stats.to_json()}};
}

double weighted_full_risk(const ParametrizedCircuit& U,
                          const Eigen::VectorXd& params_U,
                          const ParametrizedCircuit& V,
                          const Eigen::VectorXd& params_V) {
  if (U.n_qubits != V.n_qubits) {
    throw std::invalid_argument("weighted_full_risk: qubit count mismatch");
  }
  const int n = U.n_qubits;
  if (n > 6) throw ResourceError("weighted_full_risk: n > 6");
  const Eigen::MatrixXcd mu = oracle::circuit_unitary(U, params_U);
  const Eigen::MatrixXcd mv = oracle::circuit_unitary(V, params_V);
  // the sampled overlap is <psi| U^dag V |psi>, so the ordering matters
  const Eigen::MatrixXcd w = mu.adjoint() * mv;
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t n_paulis = std::uint64_t{1} << (2 * n);

  using cplx = std::complex<double>;
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double acc = 0.0;
  for (std::uint64_t code = 0; code < n_paulis; ++code) {
    std::uint64_t xmask = 0, zmask = 0;
    int wgt = 0;
    for (int s = 0; s < n; ++s) {
      const std::uint64_t c = (code >> (2 * s)) & 3;  // 0 I, 1 X, 2 Y, 3 Z
      if (c == 1 || c == 2) xmask |= std::uint64_t{1} << s;
      if (c == 2 || c == 3) zmask |= std::uint64_t{1} << s;
      if (c != 0) ++wgt;
    }
    const cplx base = kIPow[std::popcount(xmask & zmask) & 3];
    // P|i> = phi_i |i ^ xmask>, phi_i = base * (-1)^{popcount(z & i)}
    cplx trace = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) {
      const double si = (std::popcount(i & zmask) & 1) ? -1.0 : 1.0;
      const cplx phi_i_conj = std::conj(base) * si;
      for (std::uint64_t j = 0; j < dim; ++j) {
        const double sj = (std::popcount(j & zmask) & 1) ? -1.0 : 1.0;
        trace += phi_i_conj * (base * sj) * w(i ^ xmask, j ^ xmask) *
                 std::conj(w(i, j));
      }
    }
    const double diag = trace.real() / static_cast<double>(dim);
    acc += diag * std::pow(3.0, -wgt);
  }
  return 1.0 - acc / static_cast<double>(dim);
}

}  // namespace qcp
