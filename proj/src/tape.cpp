#include "qcp/tape.hpp"

#include <algorithm>
#include <cmath>

#include "qcp/parallel.hpp"

namespace qcp {

namespace {

struct RecTerm {
  std::int32_t node;
  double cfac;          // constant prefactor folded from Cliffords and merges
  std::uint32_t sines;
  std::ptrdiff_t stamp;  // gate index that allocated `node`, -1 for the seed
};

}  // namespace

FrozenCostTopology FrozenCostTopology::record(const TargetCache& cache,
                                              const ParametrizedCircuit& ansatz,
                                              const Eigen::VectorXd& params,
                                              const TruncationConfig& trunc,
                                              int threads) {
  if (ansatz.n_qubits != cache.n_qubits) {
    throw std::invalid_argument("FrozenCostTopology: qubit count mismatch");
  }
  if (params.size() != ansatz.n_params) {
    throw std::invalid_argument("FrozenCostTopology: parameter length mismatch");
  }
  FrozenCostTopology frozen;
  frozen.recorded_params_ = params;
  frozen.n_params_ = ansatz.n_params;
  frozen.denom_ =
      cache.seeds == SeedSet::one_site ? 6.0 : 6.0 * cache.n_qubits;
  frozen.tapes_.resize(cache.entries.size());

  parallel_for(static_cast<int>(cache.entries.size()), threads, [&](int idx) {
    const auto& entry = cache.entries[static_cast<std::size_t>(idx)];
    SeedTape& tape = frozen.tapes_[static_cast<std::size_t>(idx)];

    std::unordered_map<PauliString, RecTerm, PauliStringHash> terms;
    terms.emplace(PauliString::single(cache.n_qubits, entry.site, entry.axis),
                  RecTerm{0, 1.0, 0, -1});
    tape.n_nodes = 1;

    auto new_node = [&tape]() { return tape.n_nodes++; };

    // Heisenberg order: gates reversed, Cliffords inverted, angles kept.
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(ansatz.gates.size());
    for (std::ptrdiff_t gi = 0; gi < m; ++gi) {
      const Gate& g = ansatz.gates[m - 1 - gi];
      if (const auto* cg = std::get_if<CliffordGate>(&g)) {
        std::unordered_map<PauliString, RecTerm, PauliStringHash> out;
        out.reserve(terms.size());
        for (const auto& [p, t] : terms) {
          auto [q, sign] = clifford_image(p, *cg, /*inverse=*/true);
          RecTerm nt = t;
          nt.cfac *= sign;
          out.emplace(q, nt);
        }
        terms = std::move(out);
        continue;
      }
      const auto& rot = std::get<PauliRotation>(g);

      struct Pending {
        PauliString string;
        std::int32_t in;
        double factor;
        std::uint32_t sines;
      };
      std::vector<Pending> sine_branches;
      std::vector<PauliString> anticommuting;
      for (const auto& [p, t] : terms) {
        if (!p.commutes_with(rot.generator)) anticommuting.push_back(p);
      }

      for (const PauliString& p : anticommuting) {
        auto it = terms.find(p);
        const RecTerm old = it->second;

        // Sine branch structure. Coefficient truncation is disabled while
        // recording; weight and sine-count cuts are angle-independent and
        // stay in force.
        auto [q, e] = multiply(rot.generator, p);
        const int sign = (e + 1) % 4 == 0 ? 1 : -1;
        if (q.weight() <= trunc.max_weight &&
            old.sines + 1 <= static_cast<std::uint32_t>(trunc.max_sines)) {
          sine_branches.push_back(
              {q, old.node, sign * old.cfac, old.sines + 1});
        }

        // Cosine branch: fresh node, prefactor folded into the instruction.
        const std::int32_t nc = new_node();
        tape.instrs.push_back(
            {nc, old.node, rot.param_index, kCos, rot.scale, old.cfac});
        it->second = RecTerm{nc, 1.0, old.sines, gi};
      }

      for (const Pending& b : sine_branches) {
        auto it = terms.find(b.string);
        if (it == terms.end()) {
          const std::int32_t ns = new_node();
          tape.instrs.push_back(
              {ns, b.in, rot.param_index, kSin, rot.scale, b.factor});
          terms.emplace(b.string, RecTerm{ns, 1.0, b.sines, gi});
        } else if (it->second.stamp == gi) {
          // Node allocated by this gate: accumulate into it directly.
          tape.instrs.push_back({it->second.node, b.in, rot.param_index, kSin,
                                 rot.scale, b.factor});
          it->second.sines = std::min(it->second.sines, b.sines);
        } else {
          // Merge with a commuting pass-through term.
          const std::int32_t nm = new_node();
          tape.instrs.push_back(
              {nm, it->second.node, -1, kConst, 0.0, it->second.cfac});
          tape.instrs.push_back(
              {nm, b.in, rot.param_index, kSin, rot.scale, b.factor});
          it->second =
              RecTerm{nm, 1.0, std::min(it->second.sines, b.sines), gi};
        }
      }
    }

    for (const auto& [p, t] : terms) {
      const double c = entry.sum.coefficient(p);
      if (c != 0.0) tape.overlaps.emplace_back(t.node, t.cfac * c);
    }
    std::sort(tape.overlaps.begin(), tape.overlaps.end());
  });
  return frozen;
}

double FrozenCostTopology::seed_value(const SeedTape& tape,
                                      const Eigen::VectorXd& params,
                                      std::vector<double>* vals) const {
  vals->assign(static_cast<std::size_t>(tape.n_nodes), 0.0);
  (*vals)[0] = 1.0;
  for (const Instr& in : tape.instrs) {
    double f = 1.0;
    if (in.kind == kCos) {
      f = std::cos(in.scale * params[in.param]);
    } else if (in.kind == kSin) {
      f = std::sin(in.scale * params[in.param]);
    }
    (*vals)[static_cast<std::size_t>(in.out)] +=
        in.factor * f * (*vals)[static_cast<std::size_t>(in.in)];
  }
  double contrib = 0.0;
  for (const auto& [node, w] : tape.overlaps) {
    contrib += w * (*vals)[static_cast<std::size_t>(node)];
  }
  return contrib;
}

double FrozenCostTopology::cost(const Eigen::VectorXd& params,
                                int threads) const {
  if (params.size() != n_params_) {
    throw std::invalid_argument("FrozenCostTopology::cost: bad length");
  }
  std::vector<double> contribs(tapes_.size(), 0.0);
  parallel_for(static_cast<int>(tapes_.size()), threads, [&](int idx) {
    std::vector<double> vals;
    contribs[static_cast<std::size_t>(idx)] =
        seed_value(tapes_[static_cast<std::size_t>(idx)], params, &vals);
  });
  double sum = 0.0;
  for (double c : contribs) sum += c;
  return 0.5 - sum / denom_;
}

std::pair<double, Eigen::VectorXd> FrozenCostTopology::cost_and_gradient(
    const Eigen::VectorXd& params, int threads) const {
  if (params.size() != n_params_) {
    throw std::invalid_argument(
        "FrozenCostTopology::cost_and_gradient: bad length");
  }
  std::vector<double> contribs(tapes_.size(), 0.0);
  std::vector<Eigen::VectorXd> grads(
      tapes_.size(), Eigen::VectorXd::Zero(n_params_));
  parallel_for(static_cast<int>(tapes_.size()), threads, [&](int idx) {
    const SeedTape& tape = tapes_[static_cast<std::size_t>(idx)];
    std::vector<double> vals;
    contribs[static_cast<std::size_t>(idx)] = seed_value(tape, params, &vals);

    std::vector<double> adj(static_cast<std::size_t>(tape.n_nodes), 0.0);
    for (const auto& [node, w] : tape.overlaps) {
      adj[static_cast<std::size_t>(node)] += -w / denom_;
    }
    Eigen::VectorXd& grad = grads[static_cast<std::size_t>(idx)];
    for (auto it = tape.instrs.rbegin(); it != tape.instrs.rend(); ++it) {
      const Instr& in = *it;
      const double a_out = adj[static_cast<std::size_t>(in.out)];
      double f = 1.0, df = 0.0;
      if (in.kind != kConst) {
        const double u = in.scale * params[in.param];
        if (in.kind == kCos) {
          f = std::cos(u);
          df = -std::sin(u);
        } else {
          f = std::sin(u);
          df = std::cos(u);
        }
      }
      adj[static_cast<std::size_t>(in.in)] += in.factor * f * a_out;
      if (in.param >= 0) {
        grad[in.param] += a_out * in.factor * df * in.scale *
                          vals[static_cast<std::size_t>(in.in)];
      }
    }
  });
  double sum = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_params_);
  for (std::size_t i = 0; i < tapes_.size(); ++i) {
    sum += contribs[i];
    grad += grads[i];
  }
  return {0.5 - sum / denom_, std::move(grad)};
}

std::size_t FrozenCostTopology::instruction_count() const {
  std::size_t total = 0;
  for (const auto& t : tapes_) total += t.instrs.size();
  return total;
}

Eigen::VectorXd gradient(const FrozenCostTopology& frozen,
                         const Eigen::VectorXd& params,
                         double max_displacement, int threads) {
  const double disp =
      (params - frozen.recorded_params()).lpNorm<Eigen::Infinity>();
  if (disp > max_displacement) {
    throw StaleTopologyError(
        "frozen cost topology is stale: displacement " + std::to_string(disp) +
        " exceeds " + std::to_string(max_displacement));
  }
  return frozen.cost_and_gradient(params, threads).second;
}

}  // namespace qcp
