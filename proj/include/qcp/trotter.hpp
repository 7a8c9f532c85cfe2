#pragma once

#include <string>
#include <vector>

#include "qcp/circuit.hpp"
#include "qcp/lattice.hpp"

namespace qcp {

enum class Model { TFIM, NNTFIM, HCB };

Model model_from_string(const std::string& s);
std::string model_to_string(Model m);

struct HamiltonianSpec {
  Model model = Model::TFIM;
  // TFIM / NNTFIM
  double J = 1.0;
  double h = 1.0;
  double kappa = 0.0;    // NNTFIM next-nearest-neighbor ratio
  double omega_drive = 0.0;  // NNTFIM drive frequency, > 0
  // HCB
  double J_x = 1.0;
  double J_y = 1.0;
};

struct TrotterPlan {
  double delta_t = 0.1;  // reference interval covered by one application
  int layers = 1;        // layers per application (L_U or L_V)
  double t_total = 0.1;  // full evolved time; repetitions = t_total/delta_t
  double t_0 = 0.0;

  int repetitions() const;
  double substep() const { return delta_t / layers; }
};

enum class SharingMode { per_term_group, per_gate, translation_invariant };

SharingMode sharing_from_string(const std::string& s);
std::string sharing_to_string(SharingMode m);

enum class CircuitRole { target, ansatz };

/// Midpoint evaluation times of every Trotter sub-step across all
/// repetitions, covering [t_0, t_0 + t_total).
std::vector<double> step_times(const TrotterPlan& plan);

/// Second-order A-B-A Trotter circuit for the given model and lattice.
/// reference_params carry the Trotter angles. The role controls the
/// dt/L sanity warning only.
ParametrizedCircuit trotter_circuit(const HamiltonianSpec& spec,
                                    const Topology& topo,
                                    const TrotterPlan& plan,
                                    SharingMode sharing,
                                    CircuitRole role = CircuitRole::target);

}  // namespace qcp
