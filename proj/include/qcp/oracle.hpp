#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qcp/circuit.hpp"
#include "qcp/pauli.hpp"

namespace qcp::oracle {

/// Counter-based generator: the k-th output is a pure function of
/// (seed, k), so streams are reproducible and splittable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct StateVector {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;

  static StateVector zero_state(int n_qubits);
  static StateVector basis_state(int n_qubits, std::uint64_t index);

  double norm() const { return amplitudes.norm(); }
};

/// Per-site Euler angles of a Haar-random single-qubit unitary
/// R_Z(phi) R_Y(gamma) R_Z(omega); phi, omega uniform on [0, 2pi),
/// gamma with density sin(gamma)/2 on [0, pi].
struct HaarSample {
  std::vector<double> phi, gamma, omega;

  static HaarSample draw(int n_qubits, SplitMix64& rng);
};

void apply_pauli(StateVector& state, const PauliString& p);

/// Exact action of the circuit at the given parameters. With
/// inverse=true applies the inverse circuit.
void apply_circuit(StateVector& state, const ParametrizedCircuit& circ,
                   const Eigen::VectorXd& params, bool inverse = false);

void apply_haar_layer(StateVector& state, const HaarSample& sample);

/// Dense 2^n x 2^n unitary of the circuit, column by column. n <= 12.
Eigen::MatrixXcd circuit_unitary(const ParametrizedCircuit& circ,
                                 const Eigen::VectorXd& params);

/// 1 - |tr(U^dag V)|^2 / 4^n via 2^n basis-state runs. n <= 12.
double hst_cost(const ParametrizedCircuit& U, const ParametrizedCircuit& V,
                const Eigen::VectorXd& params_U,
                const Eigen::VectorXd& params_V);

/// Untruncated local risk: 1/2 - (1/6n) sum over weight-1 P_j of
/// tr(P_j V U^dag P_j U V^dag)/2^n, from statevector runs. n <= 10.
double exact_local_risk(const ParametrizedCircuit& U,
                        const Eigen::VectorXd& params_U,
                        const ParametrizedCircuit& V,
                        const Eigen::VectorXd& params_V);

struct SampledRisk {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte-Carlo estimate of the expected risk over product single-qubit
/// Haar states: mean of 1 - |<0|S^dag U^dag V S|0>|^2 over M draws.
SampledRisk sampled_product_risk(const ParametrizedCircuit& U,
                                 const ParametrizedCircuit& V,
                                 const Eigen::VectorXd& params_U,
                                 const Eigen::VectorXd& params_V,
                                 std::size_t samples, std::uint64_t seed);

struct FidelityReport {
  double fidelity = 0.0;
  std::vector<double> occupations_a;  // n_j = (1 - <Z_j>)/2
  std::vector<double> occupations_b;
};

FidelityReport fidelity_and_occupations(const StateVector& a,
                                        const StateVector& b);

}  // namespace qcp::oracle
