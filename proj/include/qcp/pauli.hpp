#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qcp {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// An n-qubit Pauli string in symplectic form: per-site X and Z bits,
/// packed 64 sites per word. Site 0 lives in the least significant bit of
/// word 0 and is the leftmost character of the textual "IXYZ..." format.
class PauliString {
 public:
  static constexpr int kMaxQubits = 128;
  static constexpr int kWords = 2;

  PauliString() = default;
  explicit PauliString(int n_qubits);

  static PauliString identity(int n_qubits) { return PauliString(n_qubits); }
  static PauliString single(int n_qubits, int site, Pauli p);
  static PauliString parse(std::string_view text);

  int n_qubits() const { return n_; }

  Pauli at(int site) const {
    const int w = site >> 6, b = site & 63;
    const std::uint64_t xb = (x_[w] >> b) & 1, zb = (z_[w] >> b) & 1;
    // (x,z): 00=I 10=X 11=Y 01=Z
    static constexpr Pauli kCode[2][2] = {{Pauli::I, Pauli::Z},
                                          {Pauli::X, Pauli::Y}};
    return kCode[xb][zb];
  }

  void set(int site, Pauli p);

  int weight() const;

  /// True iff the string lies in {I,Z}^n.
  bool is_diagonal() const { return (x_[0] | x_[1]) == 0; }

  bool commutes_with(const PauliString& other) const;

  std::string str() const;

  bool operator==(const PauliString& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
  }
  bool operator!=(const PauliString& o) const { return !(*this == o); }

  /// Total order by packed value, used for deterministic materialization.
  bool operator<(const PauliString& o) const;

  std::size_t hash() const;

  const std::array<std::uint64_t, kWords>& x_bits() const { return x_; }
  const std::array<std::uint64_t, kWords>& z_bits() const { return z_; }

  friend std::pair<PauliString, int> multiply(const PauliString& p,
                                              const PauliString& q);

 private:
  std::array<std::uint64_t, kWords> x_{};
  std::array<std::uint64_t, kWords> z_{};
  int n_ = 0;
};

inline int weight(const PauliString& p) { return p.weight(); }

bool commutes(const PauliString& p, const PauliString& q);

/// Product p*q. Returns the resulting string and the phase as an exponent
/// of i modulo 4, so that p*q == i^phase * result.
std::pair<PauliString, int> multiply(const PauliString& p,
                                     const PauliString& q);

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    return p.hash();
  }
};

/// One entry of a PauliSum: a real coefficient plus the number of sine
/// branches the term has accumulated during propagation.
struct PauliTerm {
  double coefficient = 0.0;
  std::uint32_t sine_count = 0;
};

/// Sparse observable O = sum_P a_P P over Pauli strings, merged by string.
/// Coefficients use the orthonormal convention <<A|B>> = sum_P a_P b_P,
/// so <0|O|0> is the plain sum of the {I,Z}-only coefficients.
class PauliSum {
 public:
  using Map = std::unordered_map<PauliString, PauliTerm, PauliStringHash>;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_(n_qubits) {}

  static PauliSum single(int n_qubits, const PauliString& p,
                         double coeff = 1.0);

  int n_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Map& terms() { return terms_; }
  const Map& terms() const { return terms_; }

  /// Merge a contribution into the sum. Coefficients add; on merge the
  /// smaller sine count is kept. Exact zeros are not stored.
  void add(const PauliString& p, double coeff, std::uint32_t sines = 0);

  double coefficient(const PauliString& p) const;

  /// <0|O|0>: sum of coefficients of {I,Z}-only strings.
  double overlap_with_zero() const;

  /// sum_P a_P^2, conserved under exact unitary propagation.
  double l2_norm_sq() const;

  /// Terms sorted by packed string value, for reproducible output.
  std::vector<std::pair<PauliString, PauliTerm>> sorted_terms() const;

 private:
  int n_ = 0;
  Map terms_;
};

/// <<a|b>> = sum over common strings of the coefficient products.
/// Iterates the smaller of the two collections.
double inner_product(const PauliSum& a, const PauliSum& b);

}  // namespace qcp
