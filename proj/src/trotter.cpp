#include "qcp/trotter.hpp"

#include <cmath>
#include <iostream>

#include "qcp/errors.hpp"

namespace qcp {

Model model_from_string(const std::string& s) {
  if (s == "tfim") return Model::TFIM;
  if (s == "nntfim") return Model::NNTFIM;
  if (s == "hcb") return Model::HCB;
  throw ConfigError("unknown model: " + s);
}

std::string model_to_string(Model m) {
  switch (m) {
    case Model::TFIM: return "tfim";
    case Model::NNTFIM: return "nntfim";
    case Model::HCB: return "hcb";
  }
  return "?";
}

SharingMode sharing_from_string(const std::string& s) {
  if (s == "per_term_group") return SharingMode::per_term_group;
  if (s == "per_gate") return SharingMode::per_gate;
  if (s == "translation_invariant") return SharingMode::translation_invariant;
  throw ConfigError("unknown sharing mode: " + s);
}

std::string sharing_to_string(SharingMode m) {
  switch (m) {
    case SharingMode::per_term_group: return "per_term_group";
    case SharingMode::per_gate: return "per_gate";
    case SharingMode::translation_invariant: return "translation_invariant";
  }
  return "?";
}

int TrotterPlan::repetitions() const {
  const double k = t_total / delta_t;
  const int ki = static_cast<int>(std::lround(k));
  if (ki < 1 || std::abs(k - ki) > 1e-9) {
    throw ConfigError("TrotterPlan: t_total must be an integer multiple of delta_t");
  }
  return ki;
}

std::vector<double> step_times(const TrotterPlan& plan) {
  if (plan.layers < 1) throw ConfigError("TrotterPlan: layers must be >= 1");
  const int n_steps = plan.repetitions() * plan.layers;
  const double d = plan.substep();
  std::vector<double> times(n_steps);
  for (int i = 0; i < n_steps; ++i) times[i] = plan.t_0 + (i + 0.5) * d;
  return times;
}

namespace {

// One shared-parameter group of identical-coefficient rotations.
struct TermGroup {
  std::vector<PauliString> generators;
  // Trotter rotation angle for sub-step duration a at midpoint time t_j.
  double (*angle)(const HamiltonianSpec&, double a, double t_j);
  // Consecutive generators sharing one parameter in per_gate mode.
  // The HCB hopping pairs need 2 so XX and YY keep equal angles and the
  // circuit commutes with total Z for any parameter values.
  int gens_per_param = 1;
};

PauliString two_site(int n, int a, Pauli pa, int b, Pauli pb) {
  PauliString p(n);
  p.set(a, pa);
  p.set(b, pb);
  return p;
}

}  // namespace

ParametrizedCircuit trotter_circuit(const HamiltonianSpec& spec,
                                    const Topology& topo,
                                    const TrotterPlan& plan,
                                    SharingMode sharing, CircuitRole role) {
  const int n = topo.n_sites;
  if (n > PauliString::kMaxQubits) {
    throw ConfigError("lattice too large for the Pauli string capacity");
  }
  if (sharing == SharingMode::translation_invariant && !topo.periodic_both()) {
    throw ConfigError(
        "translation_invariant sharing requires a fully periodic lattice");
  }
  if (plan.substep() >= 0.03 && role == CircuitRole::target) {
    std::cerr << "warning: target sub-step dt/L = " << plan.substep()
              << " >= 0.03; Trotter error may dominate\n";
  }
  if (spec.model == Model::NNTFIM && spec.omega_drive <= 0) {
    throw ConfigError("NNTFIM requires omega_drive > 0");
  }

  // A and B groups; terms within a group (and within A or B) commute.
  std::vector<TermGroup> groups_a, groups_b;
  switch (spec.model) {
    case Model::TFIM: {
      TermGroup field;
      for (int j = 0; j < n; ++j) {
        field.generators.push_back(PauliString::single(n, j, Pauli::X));
      }
      field.angle = [](const HamiltonianSpec& s, double a, double) {
        return -2.0 * a * s.h;  // term coefficient -h
      };
      groups_a.push_back(std::move(field));

      TermGroup zz;
      for (const Edge& e : topo.nn_edges) {
        zz.generators.push_back(two_site(n, e.a, Pauli::Z, e.b, Pauli::Z));
      }
      zz.angle = [](const HamiltonianSpec& s, double a, double) {
        return a * s.J;  // term coefficient J/2
      };
      groups_b.push_back(std::move(zz));
      break;
    }
    case Model::NNTFIM: {
      TermGroup field;
      for (int j = 0; j < n; ++j) {
        field.generators.push_back(PauliString::single(n, j, Pauli::X));
      }
      field.angle = [](const HamiltonianSpec& s, double a, double t_j) {
        return -2.0 * a * s.h * std::cos(s.omega_drive * t_j);
      };
      groups_a.push_back(std::move(field));

      TermGroup zz_nn;
      for (const Edge& e : topo.nn_edges) {
        zz_nn.generators.push_back(two_site(n, e.a, Pauli::Z, e.b, Pauli::Z));
      }
      zz_nn.angle = [](const HamiltonianSpec& s, double a, double) {
        return -2.0 * a * s.J;
      };
      groups_b.push_back(std::move(zz_nn));

      TermGroup zz_nnn;
      for (const Edge& e : topo.nnn_edges) {
        zz_nnn.generators.push_back(two_site(n, e.a, Pauli::Z, e.b, Pauli::Z));
      }
      zz_nnn.angle = [](const HamiltonianSpec& s, double a, double) {
        return 2.0 * a * s.J * s.kappa;
      };
      if (!zz_nnn.generators.empty()) groups_b.push_back(std::move(zz_nnn));
      break;
    }
    case Model::HCB: {
      // hopping -(J/2)(a^dag a + h.c.) maps to -(J/4)(XX + YY); the XX
      // and YY rotations of each edge stay adjacent with one shared
      // angle so every pair conserves the total occupation exactly
      for (int axis = 0; axis < 2; ++axis) {
        TermGroup hop;
        hop.gens_per_param = 2;
        for (const Edge& e : topo.nn_edges) {
          if (e.axis != axis) continue;
          hop.generators.push_back(two_site(n, e.a, Pauli::X, e.b, Pauli::X));
          hop.generators.push_back(two_site(n, e.a, Pauli::Y, e.b, Pauli::Y));
        }
        if (hop.generators.empty()) continue;
        if (axis == 0) {
          hop.angle = [](const HamiltonianSpec& s, double a, double) {
            return -a * s.J_x / 2.0;
          };
        } else {
          hop.angle = [](const HamiltonianSpec& s, double a, double) {
            return -a * s.J_y / 2.0;
          };
        }
        groups_a.push_back(std::move(hop));
      }
      if (groups_a.empty()) {
        throw ConfigError("HCB requires axis-classified nearest-neighbor edges");
      }
      break;
    }
  }

  ParametrizedCircuit circ;
  circ.n_qubits = n;
  const std::vector<double> times = step_times(plan);
  const double d = plan.substep();
  std::vector<double> ref;

  auto emit = [&](const TermGroup& g, double a, double t_j, bool reversed) {
    const double theta = g.angle(spec, a, t_j);
    const int m = static_cast<int>(g.generators.size());
    if (sharing == SharingMode::per_gate) {
      int param = -1;
      for (int i = 0; i < m; ++i) {
        if (i % g.gens_per_param == 0) {
          param = static_cast<int>(ref.size());
          ref.push_back(theta);
        }
        circ.add_rotation(g.generators[reversed ? m - 1 - i : i], param, 1.0);
      }
    } else {
      const int param = static_cast<int>(ref.size());
      ref.push_back(theta);
      for (int i = 0; i < m; ++i) {
        circ.add_rotation(g.generators[reversed ? m - 1 - i : i], param, 1.0);
      }
    }
  };

  for (double t_j : times) {
    if (spec.model == Model::HCB) {
      // hopping groups do not commute internally, so the second-order
      // splitting mirrors the full group sequence instead of A-B-A
      for (const TermGroup& g : groups_a) emit(g, d / 2, t_j, false);
      for (auto it = groups_a.rbegin(); it != groups_a.rend(); ++it) {
        emit(*it, d / 2, t_j, true);
      }
    } else {
      for (const TermGroup& g : groups_a) emit(g, d / 2, t_j, false);
      for (const TermGroup& g : groups_b) emit(g, d, t_j, false);
      for (const TermGroup& g : groups_a) emit(g, d / 2, t_j, false);
    }
  }

  circ.n_params = static_cast<int>(ref.size());
  circ.reference_params = Eigen::Map<const Eigen::VectorXd>(
      ref.data(), static_cast<Eigen::Index>(ref.size()));
  circ.validate();
  return circ;
}

}  // namespace qcp
