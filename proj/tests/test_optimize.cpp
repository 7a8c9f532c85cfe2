#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include "qcp/lattice.hpp"
#include "qcp/optimize.hpp"
#include "qcp/trotter.hpp"

using namespace qcp;

namespace {

ParametrizedCircuit one_rotation(double angle) {
  ParametrizedCircuit c;
  c.n_qubits = 1;
  c.add_rotation(PauliString::parse("X"), 0, 1.0);
  c.n_params = 1;
  c.reference_params = Eigen::VectorXd::Constant(1, angle);
  return c;
}

CompressionProblem tfim_problem(int n_x, int n_y, double dt = 0.2) {
  CompressionProblem p;
  const Topology topo = build_topology(LatticeKind::square, n_x, n_y);
  HamiltonianSpec spec;
  spec.model = Model::TFIM;
  spec.J = 1.0;
  spec.h = 1.1;
  p.target = trotter_circuit(spec, topo, {dt, 8, dt, 0.0},
                             SharingMode::per_term_group, CircuitRole::target);
  p.ansatz = trotter_circuit(spec, topo, {dt, 2, dt, 0.0},
                             SharingMode::per_term_group, CircuitRole::ansatz);
  p.trunc_target.coeff_eps = 1e-12;
  p.trunc_ansatz.coeff_eps = 1e-12;
  p.build_cache();
  return p;
}

}  // namespace

TEST_CASE("already-optimal start converges immediately") {
  CompressionProblem p;
  p.target = one_rotation(0.3);
  p.ansatz = one_rotation(0.3);
  p.build_cache();
  const MinimizeResult r = minimize(p, OptimizerConfig{});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(std::abs(r.cost) < 1e-14);
  CHECK(r.grad_norm < 1e-8);
  REQUIRE(r.history.size() == 1);
  CHECK(r.history[0].iteration == 0);
}

TEST_CASE("recovers the target angle through scaled shared parameters") {
  // target R_X(0.3); ansatz two rotations at scale 0.5 sharing one
  // parameter, started away from the optimum
  CompressionProblem p;
  p.target = one_rotation(0.3);
  p.ansatz.n_qubits = 1;
  p.ansatz.add_rotation(PauliString::parse("X"), 0, 0.5);
  p.ansatz.add_rotation(PauliString::parse("X"), 0, 0.5);
  p.ansatz.n_params = 1;
  p.ansatz.reference_params = Eigen::VectorXd::Constant(1, 0.8);
  p.build_cache();

  const MinimizeResult r = minimize(p, OptimizerConfig{});
  CHECK(r.converged);
  CHECK(std::abs(r.cost) < 1e-12);
  CHECK(r.params[0] == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(r.history.size() >= 2);
}

TEST_CASE("compression improves on the trotter initialization") {
  CompressionProblem p = tfim_problem(3, 2, 0.3);
  OptimizerConfig cfg;
  cfg.max_iterations = 80;
  const double initial = p.evaluate(p.ansatz.reference_params).value;
  const MinimizeResult r = minimize(p, cfg);
  CHECK(r.cost <= initial + 1e-15);
  CHECK(r.cost < 0.5 * initial);  // this instance compresses well
  CHECK(p.evaluate(r.params).value ==
        doctest::Approx(r.cost).epsilon(1e-6));
  CHECK(r.tape_recordings >= 1);

  // history is chronological and starts at the initial cost
  REQUIRE(!r.history.empty());
  CHECK(r.history.front().cost == doctest::Approx(initial).epsilon(1e-9));
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    CHECK(r.history[i].iteration == r.history[i - 1].iteration + 1);
    CHECK(r.history[i].wall_time >= r.history[i - 1].wall_time);
    // accepted line-search steps never increase the frozen cost
    CHECK(r.history[i].cost <= r.history[i - 1].cost + 1e-12);
  }
}

TEST_CASE("iteration cap reports an unconverged result") {
  CompressionProblem p = tfim_problem(2, 2);
  OptimizerConfig cfg;
  cfg.max_iterations = 1;
  cfg.gradient_tolerance = 1e-14;
  const MinimizeResult r = minimize(p, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.cost <= p.evaluate(p.ansatz.reference_params).value + 1e-15);
}

TEST_CASE("threaded optimization is deterministic") {
  CompressionProblem p1 = tfim_problem(2, 2);
  CompressionProblem p4 = tfim_problem(2, 2);
  p4.threads = 4;
  OptimizerConfig cfg;
  cfg.max_iterations = 20;
  const MinimizeResult r1 = minimize(p1, cfg);
  const MinimizeResult r4 = minimize(p4, cfg);
  CHECK(r1.cost == r4.cost);
  CHECK((r1.params - r4.params).norm() == 0.0);
  CHECK(r1.iterations == r4.iterations);
}
