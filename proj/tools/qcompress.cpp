// Experiment runner: compresses Trotterized time-evolution circuits by
// minimizing the propagated local risk, with statevector cross-checks.
#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qcp/errors.hpp"
#include "qcp/lattice.hpp"
#include "qcp/optimize.hpp"
#include "qcp/oracle.hpp"
#include "qcp/risk.hpp"
#include "qcp/trotter.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// ----------------------------------------------------------------------
// config schema

struct ExperimentConfig {
  qcp::HamiltonianSpec hamiltonian;
  qcp::LatticeKind lattice_kind = qcp::LatticeKind::square;
  int n_x = 2, n_y = 2;
  qcp::Boundary boundary = qcp::Boundary::open;

  double delta_t = 0.1;
  int layers_target = 1;
  int layers_ansatz = 1;
  qcp::SharingMode sharing = qcp::SharingMode::per_term_group;
  std::vector<double> times;
  double t_0 = 0.0;

  qcp::TruncationConfig trunc_target;
  qcp::TruncationConfig trunc_ansatz;
  qcp::OptimizerConfig optimizer;
  std::size_t term_cap = qcp::kDefaultTermCap;

  std::vector<int> weights;  // sweep-weights only

  std::vector<int> initial_occupied;  // hcb-demo only
  int repetitions = 3;
  double reference_substep = 0.005;

  std::uint64_t seed = 0;
  std::string output_dir = "out";

  ordered_json resolved;  // canonical echo of the config
};

void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw qcp::ConfigError("config field '" + ctx + "' must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) {
      throw qcp::ConfigError("config: unknown key '" + key + "' in '" + ctx +
                             "'");
    }
  }
}

template <typename T>
T require(const json& j, const std::string& ctx, const char* key) {
  if (!j.contains(key)) {
    throw qcp::ConfigError("config: missing required key '" + ctx + "." + key +
                           "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw qcp::ConfigError("config: key '" + ctx + "." + key +
                           "' has the wrong type");
  }
}

template <typename T>
T optional(const json& j, const std::string& ctx, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw qcp::ConfigError("config: key '" + ctx + "." + key +
                           "' has the wrong type");
  }
}

qcp::TruncationConfig parse_truncation(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"max_weight", "coeff_eps", "max_sines"});
  qcp::TruncationConfig t;
  const int w = optional<int>(j, ctx, "max_weight", 0);
  t.max_weight = w > 0 ? w : qcp::TruncationConfig::kUnlimited;
  t.coeff_eps = optional<double>(j, ctx, "coeff_eps", 0.0);
  if (t.coeff_eps < 0) {
    throw qcp::ConfigError("config: '" + ctx + ".coeff_eps' must be >= 0");
  }
  const int r = optional<int>(j, ctx, "max_sines", 0);
  t.max_sines = r > 0 ? r : qcp::TruncationConfig::kUnlimited;
  return t;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qcp::ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw qcp::ConfigError(std::string("config parse error: ") + e.what());
  }

  check_keys(j, "<root>",
             {"schema_version", "model", "couplings", "topology", "target",
              "ansatz", "times", "t_0", "truncation_target",
              "truncation_ansatz", "optimizer", "term_cap", "weights", "hcb",
              "seed", "output_dir"});
  if (require<int>(j, "<root>", "schema_version") != 1) {
    throw qcp::ConfigError("config: unsupported schema_version (expected 1)");
  }

  ExperimentConfig cfg;
  cfg.hamiltonian.model =
      qcp::model_from_string(require<std::string>(j, "<root>", "model"));

  const json& cj = j.at("couplings");
  switch (cfg.hamiltonian.model) {
    case qcp::Model::TFIM:
      check_keys(cj, "couplings", {"J", "h"});
      cfg.hamiltonian.J = require<double>(cj, "couplings", "J");
      cfg.hamiltonian.h = require<double>(cj, "couplings", "h");
      break;
    case qcp::Model::NNTFIM:
      check_keys(cj, "couplings", {"J", "h", "kappa", "omega_drive"});
      cfg.hamiltonian.J = require<double>(cj, "couplings", "J");
      cfg.hamiltonian.h = require<double>(cj, "couplings", "h");
      cfg.hamiltonian.kappa = require<double>(cj, "couplings", "kappa");
      cfg.hamiltonian.omega_drive =
          require<double>(cj, "couplings", "omega_drive");
      if (cfg.hamiltonian.omega_drive <= 0) {
        throw qcp::ConfigError("config: couplings.omega_drive must be > 0");
      }
      break;
    case qcp::Model::HCB:
      check_keys(cj, "couplings", {"J_x", "J_y"});
      cfg.hamiltonian.J_x = require<double>(cj, "couplings", "J_x");
      cfg.hamiltonian.J_y = require<double>(cj, "couplings", "J_y");
      break;
  }

  const json& tj = j.at("topology");
  check_keys(tj, "topology", {"kind", "n_x", "n_y", "boundary"});
  const std::string kind = optional<std::string>(tj, "topology", "kind", "square");
  if (kind == "square") {
    cfg.lattice_kind = qcp::LatticeKind::square;
  } else if (kind == "heavy_hex") {
    cfg.lattice_kind = qcp::LatticeKind::heavy_hex;
  } else {
    throw qcp::ConfigError("config: topology.kind must be square or heavy_hex");
  }
  cfg.n_x = require<int>(tj, "topology", "n_x");
  cfg.n_y = optional<int>(tj, "topology", "n_y", 1);
  cfg.boundary = qcp::boundary_from_string(
      optional<std::string>(tj, "topology", "boundary", "open"));

  const json& uj = j.at("target");
  check_keys(uj, "target", {"delta_t", "layers"});
  cfg.delta_t = require<double>(uj, "target", "delta_t");
  cfg.layers_target = require<int>(uj, "target", "layers");
  if (cfg.delta_t <= 0 || cfg.layers_target < 1) {
    throw qcp::ConfigError("config: target.delta_t > 0 and target.layers >= 1");
  }

  const json& vj = j.at("ansatz");
  check_keys(vj, "ansatz", {"layers", "sharing"});
  cfg.layers_ansatz = require<int>(vj, "ansatz", "layers");
  cfg.sharing = qcp::sharing_from_string(
      optional<std::string>(vj, "ansatz", "sharing", "per_term_group"));
  if (cfg.layers_ansatz < 1) {
    throw qcp::ConfigError("config: ansatz.layers must be >= 1");
  }

  cfg.times = require<std::vector<double>>(j, "<root>", "times");
  if (cfg.times.empty()) {
    throw qcp::ConfigError("config: times must be non-empty");
  }
  for (double t : cfg.times) {
    if (t <= 0) throw qcp::ConfigError("config: all times must be > 0");
  }
  cfg.t_0 = optional<double>(j, "<root>", "t_0", 0.0);

  cfg.trunc_target =
      parse_truncation(j.at("truncation_target"), "truncation_target");
  cfg.trunc_ansatz =
      parse_truncation(j.at("truncation_ansatz"), "truncation_ansatz");

  if (j.contains("optimizer")) {
    const json& oj = j.at("optimizer");
    check_keys(oj, "optimizer",
               {"max_iterations", "gradient_tolerance", "refresh_displacement",
                "refresh_rtol"});
    cfg.optimizer.max_iterations =
        optional<int>(oj, "optimizer", "max_iterations", 200);
    cfg.optimizer.gradient_tolerance =
        optional<double>(oj, "optimizer", "gradient_tolerance", 1e-8);
    cfg.optimizer.refresh_displacement =
        optional<double>(oj, "optimizer", "refresh_displacement", 0.1);
    cfg.optimizer.refresh_rtol =
        optional<double>(oj, "optimizer", "refresh_rtol", 1e-9);
    if (cfg.optimizer.gradient_tolerance <= 0 ||
        cfg.optimizer.max_iterations < 0) {
      throw qcp::ConfigError("config: invalid optimizer settings");
    }
  }

  cfg.term_cap = optional<std::uint64_t>(j, "<root>", "term_cap",
                                         qcp::kDefaultTermCap);
  cfg.weights = optional<std::vector<int>>(j, "<root>", "weights", {});

  if (j.contains("hcb")) {
    const json& hj = j.at("hcb");
    check_keys(hj, "hcb",
               {"initial_occupied", "repetitions", "reference_substep"});
    cfg.initial_occupied =
        optional<std::vector<int>>(hj, "hcb", "initial_occupied", {});
    cfg.repetitions = optional<int>(hj, "hcb", "repetitions", 3);
    cfg.reference_substep =
        optional<double>(hj, "hcb", "reference_substep", 0.005);
    if (cfg.repetitions < 0 || cfg.reference_substep <= 0) {
      throw qcp::ConfigError("config: invalid hcb settings");
    }
  }

  cfg.seed = optional<std::uint64_t>(j, "<root>", "seed", 0);
  cfg.output_dir = optional<std::string>(j, "<root>", "output_dir", "out");

  cfg.resolved = ordered_json(j);
  return cfg;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ordered_json& resolved) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a(resolved.dump()));
  return buf;
}

// ----------------------------------------------------------------------
// shared run helpers

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

struct RunContext {
  ExperimentConfig cfg;
  qcp::Topology topo;
  int threads = 1;
  fs::path out_dir;

  ordered_json provenance() const {
    return ordered_json{{"config_hash", config_hash(cfg.resolved)},
                        {"seed", cfg.seed},
                        {"config", cfg.resolved}};
  }
};

RunContext make_context(const ExperimentConfig& cfg, int threads,
                        const std::string& out_override) {
  RunContext ctx;
  ctx.cfg = cfg;
  ctx.topo = qcp::build_topology(cfg.lattice_kind, cfg.n_x, cfg.n_y,
                                 cfg.boundary);
  ctx.threads = threads;
  ctx.out_dir = out_override.empty() ? fs::path(cfg.output_dir)
                                     : fs::path(out_override);
  return ctx;
}

qcp::ParametrizedCircuit target_circuit(const RunContext& ctx, double t) {
  const qcp::TrotterPlan plan{ctx.cfg.delta_t, ctx.cfg.layers_target, t,
                              ctx.cfg.t_0};
  return qcp::trotter_circuit(ctx.cfg.hamiltonian, ctx.topo, plan,
                              qcp::SharingMode::per_term_group,
                              qcp::CircuitRole::target);
}

qcp::ParametrizedCircuit ansatz_circuit(const RunContext& ctx, double t,
                                        double t_total = -1.0) {
  // One block of L_V sub-steps spanning the whole interval.
  const qcp::TrotterPlan plan{t, ctx.cfg.layers_ansatz,
                              t_total > 0 ? t_total : t, ctx.cfg.t_0};
  return qcp::trotter_circuit(ctx.cfg.hamiltonian, ctx.topo, plan,
                              ctx.cfg.sharing, qcp::CircuitRole::ansatz);
}

struct CompressOutcome {
  double cost_trotter = 0.0;
  double cost_optimized = 0.0;
  qcp::MinimizeResult minimize;
  qcp::PropagationStats cache_stats;
  qcp::ParametrizedCircuit optimized;  // ansatz with optimized parameters
};

CompressOutcome compress_at(const RunContext& ctx, double t,
                            const qcp::TruncationConfig& trunc_u,
                            const qcp::TruncationConfig& trunc_v) {
  qcp::CompressionProblem problem;
  problem.target = target_circuit(ctx, t);
  problem.ansatz = ansatz_circuit(ctx, t);
  problem.trunc_target = trunc_u;
  problem.trunc_ansatz = trunc_v;
  problem.seeds = ctx.cfg.sharing == qcp::SharingMode::translation_invariant
                      ? qcp::SeedSet::one_site
                      : qcp::SeedSet::all_sites;
  problem.term_cap = ctx.cfg.term_cap;
  problem.threads = ctx.threads;
  problem.build_cache();

  CompressOutcome out;
  out.cache_stats = problem.cache.stats;
  out.cost_trotter = problem.evaluate(problem.ansatz.reference_params).value;
  out.minimize = qcp::minimize(problem, ctx.cfg.optimizer);
  out.cost_optimized = problem.evaluate(out.minimize.params).value;
  out.optimized = problem.ansatz;
  out.optimized.reference_params = out.minimize.params;
  return out;
}

void append_history(std::string& csv, double t,
                    const std::vector<qcp::HistoryEntry>& history) {
  for (const auto& h : history) {
    csv += fmt_time(t);
    csv += ',';
    csv += std::to_string(h.iteration);
    csv += ',';
    csv += fmt(h.cost);
    csv += ',';
    csv += fmt(h.grad_norm);
    csv += ',';
    csv += fmt(h.wall_time);
    csv += '\n';
  }
}

// ----------------------------------------------------------------------
// subcommands

int run_compress(const RunContext& ctx) {
  std::string csv = "t,cost_trotter,cost_optimized,improvement,converged,iterations\n";
  std::string history_csv = "t,iteration,cost,grad_norm,wall_time\n";
  ordered_json records = ordered_json::array();
  ordered_json stats = ordered_json::array();

  for (double t : ctx.cfg.times) {
    const CompressOutcome r =
        compress_at(ctx, t, ctx.cfg.trunc_target, ctx.cfg.trunc_ansatz);
    const bool finite = std::isfinite(r.cost_trotter) &&
                        std::isfinite(r.cost_optimized) &&
                        r.cost_optimized != 0.0;
    const double improvement =
        finite ? r.cost_trotter / r.cost_optimized
               : std::numeric_limits<double>::quiet_NaN();

    csv += fmt_time(t) + "," + fmt(r.cost_trotter) + "," +
           fmt(r.cost_optimized) + "," + fmt(improvement) + "," +
           (r.minimize.converged ? "1" : "0") + "," +
           std::to_string(r.minimize.iterations) + "\n";
    records.push_back(ordered_json{
        {"t", t},
        {"cost_trotter", r.cost_trotter},
        {"cost_optimized", r.cost_optimized},
        {"improvement", improvement},
        {"converged", r.minimize.converged},
        {"iterations", r.minimize.iterations}});
    stats.push_back(ordered_json{
        {"t", t},
        {"target_cache", json(r.cache_stats.to_json())},
        {"tape_recordings", r.minimize.tape_recordings},
        {"wall_time",
         r.minimize.history.empty() ? 0.0
                                    : r.minimize.history.back().wall_time}});
    append_history(history_csv, t, r.minimize.history);
    write_file(ctx.out_dir / "circuits" / ("t_" + fmt_time(t) + ".json"),
               ordered_json(r.optimized.to_json()).dump(2) + "\n");
  }

  ordered_json results = ctx.provenance();
  results["records"] = records;
  write_file(ctx.out_dir / "results.csv", csv);
  write_file(ctx.out_dir / "results.json", results.dump(2) + "\n");
  write_file(ctx.out_dir / "stats.json", ordered_json{{"runs", stats}}.dump(2) + "\n");
  write_file(ctx.out_dir / "history.csv", history_csv);
  return 0;
}

int run_sweep_weights(const RunContext& ctx) {
  const std::vector<int>& weights = ctx.cfg.weights;
  if (weights.size() < 2) {
    throw qcp::ConfigError(
        "sweep-weights: 'weights' needs at least two ascending entries "
        "(the largest is the reference)");
  }
  for (std::size_t i = 1; i < weights.size(); ++i) {
    if (weights[i] <= weights[i - 1]) {
      throw qcp::ConfigError("sweep-weights: 'weights' must be ascending");
    }
  }
  const double t = ctx.cfg.times.front();

  struct WeightRun {
    int weight;
    CompressOutcome outcome;
  };
  std::vector<WeightRun> runs;
  for (int w : weights) {
    qcp::TruncationConfig tu = ctx.cfg.trunc_target;
    qcp::TruncationConfig tv = ctx.cfg.trunc_ansatz;
    tu.max_weight = w;
    tv.max_weight = w;
    runs.push_back({w, compress_at(ctx, t, tu, tv)});
  }

  // All optima re-scored at the reference weight for comparability.
  qcp::CompressionProblem ref;
  ref.target = target_circuit(ctx, t);
  ref.ansatz = ansatz_circuit(ctx, t);
  ref.trunc_target = ctx.cfg.trunc_target;
  ref.trunc_ansatz = ctx.cfg.trunc_ansatz;
  ref.trunc_target.max_weight = weights.back();
  ref.trunc_ansatz.max_weight = weights.back();
  ref.seeds = ctx.cfg.sharing == qcp::SharingMode::translation_invariant
                  ? qcp::SeedSet::one_site
                  : qcp::SeedSet::all_sites;
  ref.term_cap = ctx.cfg.term_cap;
  ref.threads = ctx.threads;
  ref.build_cache();

  const Eigen::VectorXd& theta_ref = runs.back().outcome.minimize.params;
  const double risk_ref = ref.evaluate(theta_ref).value;

  std::string csv = "weight,e_w,e_theta,cost_optimized\n";
  ordered_json records = ordered_json::array();
  std::string history_csv = "t,iteration,cost,grad_norm,wall_time\n";
  for (const WeightRun& r : runs) {
    const double risk_w = ref.evaluate(r.outcome.minimize.params).value;
    const double e_w = std::abs((risk_w - risk_ref) / risk_ref);
    const double e_theta = (r.outcome.minimize.params - theta_ref).norm();
    csv += std::to_string(r.weight) + "," + fmt(e_w) + "," + fmt(e_theta) +
           "," + fmt(r.outcome.cost_optimized) + "\n";
    records.push_back(ordered_json{{"weight", r.weight},
                                   {"e_w", e_w},
                                   {"e_theta", e_theta},
                                   {"cost_optimized", r.outcome.cost_optimized}});
    append_history(history_csv, t, r.outcome.minimize.history);
  }

  ordered_json results = ctx.provenance();
  results["t"] = t;
  results["reference_weight"] = weights.back();
  results["reference_risk"] = risk_ref;
  results["records"] = records;
  write_file(ctx.out_dir / "results.csv", csv);
  write_file(ctx.out_dir / "results.json", results.dump(2) + "\n");
  write_file(ctx.out_dir / "history.csv", history_csv);
  return 0;
}

int run_hcb_demo(const RunContext& ctx) {
  if (ctx.cfg.hamiltonian.model != qcp::Model::HCB) {
    throw qcp::ConfigError("hcb-demo requires model = hcb");
  }
  if (ctx.cfg.initial_occupied.empty()) {
    throw qcp::ConfigError("hcb-demo requires hcb.initial_occupied");
  }
  const int n = ctx.topo.n_sites;
  if (n > 24) throw qcp::ResourceError("hcb-demo: oracle limited to 24 qubits");
  std::uint64_t init_index = 0;
  for (int site : ctx.cfg.initial_occupied) {
    if (site < 0 || site >= n) {
      throw qcp::ConfigError("hcb-demo: initial_occupied site out of range");
    }
    init_index |= std::uint64_t{1} << site;
  }

  const double t = ctx.cfg.times.front();
  const CompressOutcome comp =
      compress_at(ctx, t, ctx.cfg.trunc_target, ctx.cfg.trunc_ansatz);

  std::string csv =
      "k,fidelity_compressed,fidelity_trotter,infidelity_compressed,"
      "infidelity_trotter,total_occupation\n";
  std::string occ_csv = "k,site,x,y,n_reference,n_compressed,n_trotter\n";
  ordered_json records = ordered_json::array();

  for (int k = 1; k <= ctx.cfg.repetitions; ++k) {
    // Fine-Trotter reference for time k*t.
    const int ref_layers = std::max(
        1, static_cast<int>(std::ceil(t / ctx.cfg.reference_substep)));
    const qcp::TrotterPlan ref_plan{t, ref_layers, k * t, ctx.cfg.t_0};
    const qcp::ParametrizedCircuit ref_circ =
        qcp::trotter_circuit(ctx.cfg.hamiltonian, ctx.topo, ref_plan,
                             qcp::SharingMode::per_term_group,
                             qcp::CircuitRole::ansatz);
    qcp::oracle::StateVector psi_ref =
        qcp::oracle::StateVector::basis_state(n, init_index);
    qcp::oracle::apply_circuit(psi_ref, ref_circ, ref_circ.reference_params);

    // Compressed circuit applied k times.
    qcp::oracle::StateVector psi_comp =
        qcp::oracle::StateVector::basis_state(n, init_index);
    for (int rep = 0; rep < k; ++rep) {
      qcp::oracle::apply_circuit(psi_comp, comp.optimized,
                                 comp.optimized.reference_params);
    }

    // Equal-depth plain Trotter: L_V sub-steps per interval, k intervals.
    const qcp::ParametrizedCircuit eq_circ = ansatz_circuit(ctx, t, k * t);
    qcp::oracle::StateVector psi_trot =
        qcp::oracle::StateVector::basis_state(n, init_index);
    qcp::oracle::apply_circuit(psi_trot, eq_circ, eq_circ.reference_params);

    const auto rep_c = qcp::oracle::fidelity_and_occupations(psi_ref, psi_comp);
    const auto rep_t = qcp::oracle::fidelity_and_occupations(psi_ref, psi_trot);
    double total_occ = 0.0;
    for (double o : rep_c.occupations_b) total_occ += o;

    csv += std::to_string(k) + "," + fmt(rep_c.fidelity) + "," +
           fmt(rep_t.fidelity) + "," + fmt(1 - rep_c.fidelity) + "," +
           fmt(1 - rep_t.fidelity) + "," + fmt(total_occ) + "\n";
    for (int site = 0; site < n; ++site) {
      occ_csv += std::to_string(k) + "," + std::to_string(site) + "," +
                 std::to_string(ctx.topo.coords[site][0]) + "," +
                 std::to_string(ctx.topo.coords[site][1]) + "," +
                 fmt(rep_c.occupations_a[site]) + "," +
                 fmt(rep_c.occupations_b[site]) + "," +
                 fmt(rep_t.occupations_b[site]) + "\n";
    }
    records.push_back(ordered_json{{"k", k},
                                   {"fidelity_compressed", rep_c.fidelity},
                                   {"fidelity_trotter", rep_t.fidelity},
                                   {"total_occupation", total_occ}});
  }

  ordered_json results = ctx.provenance();
  results["t"] = t;
  results["cost_trotter"] = comp.cost_trotter;
  results["cost_optimized"] = comp.cost_optimized;
  results["records"] = records;
  write_file(ctx.out_dir / "results.csv", csv);
  write_file(ctx.out_dir / "occupations.csv", occ_csv);
  write_file(ctx.out_dir / "results.json", results.dump(2) + "\n");
  write_file(ctx.out_dir / "circuits" / ("t_" + fmt_time(t) + ".json"),
             ordered_json(comp.optimized.to_json()).dump(2) + "\n");
  return 0;
}

int run_oracle_check(const RunContext& ctx) {
  const int n = ctx.topo.n_sites;
  const double t = ctx.cfg.times.front();
  const qcp::ParametrizedCircuit target = target_circuit(ctx, t);
  const qcp::ParametrizedCircuit ansatz = ansatz_circuit(ctx, t);

  qcp::CompressionProblem problem;
  problem.target = target;
  problem.ansatz = ansatz;
  problem.trunc_target = ctx.cfg.trunc_target;
  problem.trunc_ansatz = ctx.cfg.trunc_ansatz;
  problem.term_cap = ctx.cfg.term_cap;
  problem.threads = ctx.threads;
  problem.build_cache();
  const double pp_risk = problem.evaluate(ansatz.reference_params).value;

  ordered_json results = ctx.provenance();
  results["method"] = "oracle";
  results["t"] = t;
  results["local_risk_propagated"] = pp_risk;
  if (n <= 10) {
    const double exact = qcp::oracle::exact_local_risk(
        target, target.reference_params, ansatz, ansatz.reference_params);
    results["local_risk_exact"] = exact;
    results["local_risk_abs_err"] = std::abs(pp_risk - exact);
  }
  if (n <= 12) {
    const double hst = qcp::oracle::hst_cost(
        target, ansatz, target.reference_params, ansatz.reference_params);
    results["hst_cost"] = hst;
    results["hst_cost_over_n"] = hst / n;
  }
  write_file(ctx.out_dir / "results.json", results.dump(2) + "\n");
  std::cout << results.dump(2) << "\n";
  return 0;
}

int run_export_circuit(const RunContext& ctx) {
  for (double t : ctx.cfg.times) {
    const qcp::ParametrizedCircuit target = target_circuit(ctx, t);
    const qcp::ParametrizedCircuit ansatz = ansatz_circuit(ctx, t);
    write_file(ctx.out_dir / "circuits" / ("target_t_" + fmt_time(t) + ".json"),
               ordered_json(target.to_json()).dump(2) + "\n");
    write_file(ctx.out_dir / "circuits" / ("ansatz_t_" + fmt_time(t) + ".json"),
               ordered_json(ansatz.to_json()).dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Trotter circuit compression via truncated Pauli propagation"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 1;
  std::uint64_t seed_override = 0;
  bool seed_given = false;

  app.add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--threads", threads, "worker thread cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed_override, "RNG seed (overrides config)")
      ->each([&seed_given](const std::string&) { seed_given = true; });

  auto* cmd_compress = app.add_subcommand(
      "compress", "optimize the ansatz on the configured time grid");
  auto* cmd_sweep = app.add_subcommand(
      "sweep-weights", "convergence sweep over weight truncations");
  auto* cmd_hcb = app.add_subcommand(
      "hcb-demo", "hard-core boson state preparation comparison");
  auto* cmd_oracle = app.add_subcommand(
      "oracle-check", "cross-check propagated risk against the statevector");
  auto* cmd_export = app.add_subcommand(
      "export-circuit", "write target/ansatz circuits as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (seed_given) {
      cfg.seed = seed_override;
      cfg.resolved["seed"] = seed_override;
    }
    const RunContext ctx = make_context(cfg, threads, out_dir);
    if (cmd_compress->parsed()) return run_compress(ctx);
    if (cmd_sweep->parsed()) return run_sweep_weights(ctx);
    if (cmd_hcb->parsed()) return run_hcb_demo(ctx);
    if (cmd_oracle->parsed()) return run_oracle_check(ctx);
    if (cmd_export->parsed()) return run_export_circuit(ctx);
    return 2;
  } catch (const qcp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qcp::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
