#include "qcp/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>

#include "qcp/errors.hpp"

namespace qcp {

void CompressionProblem::build_cache() {
  cache = build_target_cache(target, trunc_target, seeds, term_cap, threads);
}

RiskValue CompressionProblem::evaluate(const Eigen::VectorXd& params) const {
  if (!has_cache()) throw std::logic_error("evaluate: cache not built");
  return seeds == SeedSet::one_site
             ? local_risk_ti(cache, ansatz, params, trunc_ansatz, threads,
                             term_cap)
             : local_risk(cache, ansatz, params, trunc_ansatz, threads,
                          term_cap);
}

nlohmann::json history_to_json(const std::vector<HistoryEntry>& history) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& h : history) {
    arr.push_back({{"iteration", h.iteration},
                   {"cost", h.cost},
                   {"grad_norm", h.grad_norm},
                   {"wall_time", h.wall_time}});
  }
  return arr;
}

MinimizeResult minimize(CompressionProblem& problem,
                        const OptimizerConfig& config) {
  if (!problem.has_cache()) problem.build_cache();
  // The tape fixes the branch structure, so coefficient truncation is
  // turned off for it; weight and sine-count limits carry over.
  TruncationConfig frozen_trunc = problem.trunc_ansatz;
  frozen_trunc.coeff_eps = 0.0;

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&t_start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  Eigen::VectorXd theta = problem.ansatz.reference_params;
  MinimizeResult result;

  auto record = [&](const Eigen::VectorXd& at) {
    ++result.tape_recordings;
    return FrozenCostTopology::record(problem.cache, problem.ansatz, at,
                                      frozen_trunc, problem.threads);
  };
  FrozenCostTopology tape = record(theta);

  auto [f, g] = tape.cost_and_gradient(theta, problem.threads);
  if (!std::isfinite(f)) {
    throw std::runtime_error("minimize: non-finite initial cost");
  }
  Eigen::VectorXd d = -g;
  Eigen::VectorXd best_theta = theta;
  double best_f = f;
  // Carried across iterations so the step length adapts to the local
  // cost scale instead of re-probing from initial_step every time.
  double alpha_start = config.initial_step;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const double gnorm = g.norm();
    result.history.push_back({iter, f, gnorm, elapsed()});
    result.iterations = iter;

    if (gnorm < config.gradient_tolerance) {
      // Confirm against a tape recorded at the current point before
      // declaring convergence.
      const double drift = (theta - tape.recorded_params())
                               .lpNorm<Eigen::Infinity>();
      if (drift > 0.0) {
        tape = record(theta);
        auto [f2, g2] = tape.cost_and_gradient(theta, problem.threads);
        const double scale = std::max(1.0, std::abs(f));
        if (std::abs(f2 - f) > config.refresh_rtol * scale ||
            g2.norm() >= config.gradient_tolerance) {
          f = f2;
          g = g2;
          d = -g;
          continue;
        }
        f = f2;
        g = g2;
      }
      result.converged = true;
      break;
    }

    double slope = g.dot(d);
    if (slope >= 0.0) {  // not a descent direction, restart on steepest
      d = -g;
      slope = g.dot(d);
    }

    // Armijo line search: backtrack from the adaptive starting step, and
    // if the very first trial already satisfies the bound, expand while
    // the cost keeps improving.
    double alpha = alpha_start;
    double f_new = f;
    Eigen::VectorXd theta_new;
    bool accepted = false;
    bool backtracked = false;
    for (int bt = 0; bt < config.max_backtracks; ++bt) {
      theta_new = theta + alpha * d;
      f_new = tape.cost(theta_new, problem.threads);
      if (std::isfinite(f_new) &&
          f_new <= f + config.armijo_c1 * alpha * slope) {
        accepted = true;
        break;
      }
      backtracked = true;
      alpha *= 0.5;
    }
    if (accepted && !backtracked) {
      for (int ex = 0; ex < config.max_backtracks; ++ex) {
        const double alpha2 = alpha * 2.0;
        Eigen::VectorXd cand = theta + alpha2 * d;
        const double f2 = tape.cost(cand, problem.threads);
        if (std::isfinite(f2) && f2 < f_new &&
            f2 <= f + config.armijo_c1 * alpha2 * slope) {
          alpha = alpha2;
          theta_new = std::move(cand);
          f_new = f2;
        } else {
          break;
        }
      }
    }
    if (accepted) {
      alpha_start = std::clamp(alpha * 2.0, 1e-20, 1e20);
    }
    if (!accepted) {
      // Either a stale tape or genuinely flat; refresh once and retry from
      // the steepest descent direction.
      if ((theta - tape.recorded_params()).lpNorm<Eigen::Infinity>() > 0.0) {
        tape = record(theta);
        std::tie(f, g) = tape.cost_and_gradient(theta, problem.threads);
        d = -g;
        continue;
      }
      break;  // at a recorded point with no Armijo descent: local minimum
    }

    theta = theta_new;
    if ((theta - tape.recorded_params()).lpNorm<Eigen::Infinity>() >
        config.refresh_displacement) {
      tape = record(theta);
      f_new = tape.cost(theta, problem.threads);
    }

    auto [f_next, g_next] = tape.cost_and_gradient(theta, problem.threads);
    if (!std::isfinite(f_next) || !g_next.allFinite()) {
      throw std::runtime_error("minimize: non-finite cost or gradient");
    }

    const double beta =
        std::max(0.0, g_next.dot(g_next - g) / std::max(g.dot(g), 1e-300));
    d = -g_next + beta * d;
    f = f_next;
    g = g_next;

    if (f < best_f) {
      best_f = f;
      best_theta = theta;
    }
  }

  if (f < best_f) {
    best_f = f;
    best_theta = theta;
  }
  if (static_cast<int>(result.history.size()) == config.max_iterations) {
    // Iteration cap reached: record the final state.
    result.history.push_back(
        {config.max_iterations, f, g.norm(), elapsed()});
    result.iterations = config.max_iterations;
  }
  result.params = best_theta;
  result.cost = best_f;
  result.grad_norm = g.norm();
  return result;
}

}  // namespace qcp
