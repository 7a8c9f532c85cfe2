#include "qcp/oracle.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qcp/errors.hpp"

namespace qcp::oracle {

using cplx = std::complex<double>;

namespace {

constexpr int kMaxStateQubits = 24;

void check_size(int n, int limit, const char* what) {
  if (n < 1 || n > limit) {
    throw ResourceError(std::string(what) + ": qubit count " +
                        std::to_string(n) + " exceeds limit " +
                        std::to_string(limit));
  }
}

void apply_h(StateVector& s, int site) {
  const std::uint64_t mask = std::uint64_t{1} << site;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  auto& a = s.amplitudes;
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(a.size()); ++i) {
    if (i & mask) continue;
    const cplx lo = a[i], hi = a[i | mask];
    a[i] = inv_sqrt2 * (lo + hi);
    a[i | mask] = inv_sqrt2 * (lo - hi);
  }
}

void apply_s_gate(StateVector& s, int site, bool inverse) {
  const std::uint64_t mask = std::uint64_t{1} << site;
  const cplx factor = inverse ? cplx(0, -1) : cplx(0, 1);
  auto& a = s.amplitudes;
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(a.size()); ++i) {
    if (i & mask) a[i] *= factor;
  }
}

void apply_cnot(StateVector& s, int control, int target) {
  const std::uint64_t cmask = std::uint64_t{1} << control;
  const std::uint64_t tmask = std::uint64_t{1} << target;
  auto& a = s.amplitudes;
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(a.size()); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(a[i], a[i | tmask]);
  }
}

// |psi> -> cos(theta/2)|psi> - i sin(theta/2) P|psi>
void apply_pauli_rotation(StateVector& s, const PauliString& p, double theta) {
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  const std::uint64_t xmask = p.x_bits()[0];
  const std::uint64_t zmask = p.z_bits()[0];
  int y_count = std::popcount(xmask & zmask);
  // global i^{y_count} from Y = i X Z
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = cplx(0, -sn) * kIPow[y_count & 3];
  auto& a = s.amplitudes;
  Eigen::VectorXcd out(a.size());
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(a.size()); ++i) {
    const double zsign = (std::popcount(i & zmask) & 1) ? -1.0 : 1.0;
    out[i ^ xmask] = base * zsign * a[i];
  }
  a = c * a + out;
}

}  // namespace

StateVector StateVector::zero_state(int n_qubits) {
  return basis_state(n_qubits, 0);
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
  check_size(n_qubits, kMaxStateQubits, "StateVector");
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << n_qubits);
  s.amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

HaarSample HaarSample::draw(int n_qubits, SplitMix64& rng) {
  HaarSample h;
  h.phi.resize(n_qubits);
  h.gamma.resize(n_qubits);
  h.omega.resize(n_qubits);
  constexpr double two_pi = 2 * std::numbers::pi;
  for (int j = 0; j < n_qubits; ++j) {
    h.phi[j] = rng.uniform(0, two_pi);
    // density sin(gamma)/2 on [0, pi]: invert the CDF (1-cos)/2
    h.gamma[j] = std::acos(1.0 - 2.0 * rng.uniform());
    h.omega[j] = rng.uniform(0, two_pi);
  }
  return h;
}

void apply_pauli(StateVector& s, const PauliString& p) {
  if (p.n_qubits() != s.n_qubits) {
    throw std::invalid_argument("apply_pauli: size mismatch");
  }
  const std::uint64_t xmask = p.x_bits()[0];
  const std::uint64_t zmask = p.z_bits()[0];
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = kIPow[std::popcount(xmask & zmask) & 3];
  auto& a = s.amplitudes;
  Eigen::VectorXcd out(a.size());
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(a.size()); ++i) {
    const double zsign = (std::popcount(i & zmask) & 1) ? -1.0 : 1.0;
    out[i ^ xmask] = base * zsign * a[i];
  }
  a = std::move(out);
}

void apply_circuit(StateVector& state, const ParametrizedCircuit& circ,
                   const Eigen::VectorXd& params, bool inverse) {
  if (circ.n_qubits != state.n_qubits) {
    throw std::invalid_argument("apply_circuit: size mismatch");
  }
  if (params.size() != circ.n_params) {
    throw std::invalid_argument("apply_circuit: parameter length mismatch");
  }
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(circ.gates.size());
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const Gate& g = circ.gates[inverse ? m - 1 - k : k];
    if (const auto* cg = std::get_if<CliffordGate>(&g)) {
      switch (cg->kind) {
        case CliffordKind::H: apply_h(state, cg->site0); break;
        case CliffordKind::S: apply_s_gate(state, cg->site0, inverse); break;
        case CliffordKind::CNOT: apply_cnot(state, cg->site0, cg->site1); break;
      }
    } else {
      const auto& r = std::get<PauliRotation>(g);
      const double theta = r.scale * params[r.param_index];
      apply_pauli_rotation(state, r.generator, inverse ? -theta : theta);
    }
  }
}

void apply_haar_layer(StateVector& state, const HaarSample& sample) {
  // U3 = R_Z(phi) R_Y(gamma) R_Z(omega), rightmost factor first
  for (int j = 0; j < state.n_qubits; ++j) {
    apply_pauli_rotation(state, PauliString::single(state.n_qubits, j, Pauli::Z),
                         sample.omega[j]);
    apply_pauli_rotation(state, PauliString::single(state.n_qubits, j, Pauli::Y),
                         sample.gamma[j]);
    apply_pauli_rotation(state, PauliString::single(state.n_qubits, j, Pauli::Z),
                         sample.phi[j]);
  }
}

Eigen::MatrixXcd circuit_unitary(const ParametrizedCircuit& circ,
                                 const Eigen::VectorXd& params) {
  check_size(circ.n_qubits, 12, "circuit_unitary");
  const Eigen::Index dim = Eigen::Index{1} << circ.n_qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    StateVector s = StateVector::basis_state(circ.n_qubits,
                                             static_cast<std::uint64_t>(i));
    apply_circuit(s, circ, params);
    u.col(i) = s.amplitudes;
  }
  return u;
}

double hst_cost(const ParametrizedCircuit& U, const ParametrizedCircuit& V,
                const Eigen::VectorXd& params_U,
                const Eigen::VectorXd& params_V) {
  if (U.n_qubits != V.n_qubits) {
    throw std::invalid_argument("hst_cost: qubit count mismatch");
  }
  check_size(U.n_qubits, 12, "hst_cost");
  const std::uint64_t dim = std::uint64_t{1} << U.n_qubits;
  cplx trace = 0.0;
  for (std::uint64_t i = 0; i < dim; ++i) {
    StateVector a = StateVector::basis_state(U.n_qubits, i);
    StateVector b = StateVector::basis_state(U.n_qubits, i);
    apply_circuit(a, U, params_U);
    apply_circuit(b, V, params_V);
    trace += a.amplitudes.dot(b.amplitudes);  // <a|b>
  }
  const double dim_d = static_cast<double>(dim);
  return 1.0 - std::norm(trace) / (dim_d * dim_d);
}

double exact_local_risk(const ParametrizedCircuit& U,
                        const Eigen::VectorXd& params_U,
                        const ParametrizedCircuit& V,
                        const Eigen::VectorXd& params_V) {
  if (U.n_qubits != V.n_qubits) {
    throw std::invalid_argument("exact_local_risk: qubit count mismatch");
  }
  const int n = U.n_qubits;
  check_size(n, 10, "exact_local_risk");
  const std::uint64_t dim = std::uint64_t{1} << n;
  double sum = 0.0;
  for (int site = 0; site < n; ++site) {
    for (Pauli axis : {Pauli::X, Pauli::Y, Pauli::Z}) {
      const PauliString p = PauliString::single(n, site, axis);
      cplx trace = 0.0;
      for (std::uint64_t i = 0; i < dim; ++i) {
        // <i| P V U^dag P U V^dag |i>
        StateVector ket = StateVector::basis_state(n, i);
        apply_circuit(ket, V, params_V, /*inverse=*/true);
        apply_circuit(ket, U, params_U);
        apply_pauli(ket, p);
        apply_circuit(ket, U, params_U, /*inverse=*/true);
        apply_circuit(ket, V, params_V);
        StateVector bra = StateVector::basis_state(n, i);
        apply_pauli(bra, p);
        trace += bra.amplitudes.dot(ket.amplitudes);
      }
      sum += trace.real() / static_cast<double>(dim);
    }
  }
  return 0.5 - sum / (6.0 * n);
}

SampledRisk sampled_product_risk(const ParametrizedCircuit& U,
                                 const ParametrizedCircuit& V,
                                 const Eigen::VectorXd& params_U,
                                 const Eigen::VectorXd& params_V,
                                 std::size_t samples, std::uint64_t seed) {
  if (U.n_qubits != V.n_qubits) {
    throw std::invalid_argument("sampled_product_risk: qubit count mismatch");
  }
  if (samples == 0) {
    throw std::invalid_argument("sampled_product_risk: sample count is zero");
  }
  check_size(U.n_qubits, 12, "sampled_product_risk");
  SplitMix64 rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const HaarSample h = HaarSample::draw(U.n_qubits, rng);
    StateVector base = StateVector::zero_state(U.n_qubits);
    apply_haar_layer(base, h);
    StateVector a = base, b = base;
    apply_circuit(a, U, params_U);
    apply_circuit(b, V, params_V);
    const double val = 1.0 - std::norm(a.amplitudes.dot(b.amplitudes));
    sum += val;
    sum_sq += val * val;
  }
  const double m = static_cast<double>(samples);
  const double mean = sum / m;
  const double var = std::max(0.0, sum_sq / m - mean * mean);
  return {mean, std::sqrt(var / m)};
}

FidelityReport fidelity_and_occupations(const StateVector& a,
                                        const StateVector& b) {
  if (a.n_qubits != b.n_qubits) {
    throw std::invalid_argument("fidelity: qubit count mismatch");
  }
  FidelityReport rep;
  rep.fidelity = std::norm(a.amplitudes.dot(b.amplitudes));
  auto occupations = [](const StateVector& s) {
    std::vector<double> occ(s.n_qubits, 0.0);
    const auto& amps = s.amplitudes;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(amps.size());
         ++i) {
      const double w = std::norm(amps[i]);
      if (w == 0.0) continue;
      for (int j = 0; j < s.n_qubits; ++j) {
        if (i & (std::uint64_t{1} << j)) occ[j] += w;  // occupied = |1>
      }
    }
    return occ;
  };
  rep.occupations_a = occupations(a);
  rep.occupations_b = occupations(b);
  return rep;
}

}  // namespace qcp::oracle
