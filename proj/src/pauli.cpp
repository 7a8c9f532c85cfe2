#include "qcp/pauli.hpp"

#include <algorithm>
#include <bit>

namespace qcp {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("invalid Pauli character: ") + c);
}

PauliString::PauliString(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("PauliString: n_qubits out of range");
  }
}

PauliString PauliString::single(int n_qubits, int site, Pauli p) {
  PauliString s(n_qubits);
  s.set(site, p);
  return s;
}

PauliString PauliString::parse(std::string_view text) {
  PauliString s(static_cast<int>(text.size()));
  for (std::size_t i = 0; i < text.size(); ++i) {
    s.set(static_cast<int>(i), pauli_from_char(text[i]));
  }
  return s;
}

void PauliString::set(int site, Pauli p) {
  if (site < 0 || site >= n_) {
    throw std::out_of_range("PauliString::set: site out of range");
  }
  const int w = site >> 6, b = site & 63;
  const std::uint64_t mask = std::uint64_t{1} << b;
  x_[w] &= ~mask;
  z_[w] &= ~mask;
  if (p == Pauli::X || p == Pauli::Y) x_[w] |= mask;
  if (p == Pauli::Z || p == Pauli::Y) z_[w] |= mask;
}

int PauliString::weight() const {
  int w = 0;
  for (int i = 0; i < kWords; ++i) w += std::popcount(x_[i] | z_[i]);
  return w;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (n_ != other.n_) {
    throw std::invalid_argument("commutes: qubit count mismatch");
  }
  int anti = 0;
  for (int i = 0; i < kWords; ++i) {
    anti += std::popcount(x_[i] & other.z_[i]) +
            std::popcount(z_[i] & other.x_[i]);
  }
  return (anti & 1) == 0;
}

bool commutes(const PauliString& p, const PauliString& q) {
  return p.commutes_with(q);
}

std::string PauliString::str() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int i = 0; i < n_; ++i) s[i] = pauli_char(at(i));
  return s;
}

bool PauliString::operator<(const PauliString& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  for (int i = kWords - 1; i >= 0; --i) {
    if (x_[i] != o.x_[i]) return x_[i] < o.x_[i];
    if (z_[i] != o.z_[i]) return z_[i] < o.z_[i];
  }
  return false;
}

std::size_t PauliString::hash() const {
  // splitmix64-style mixing of the packed words
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
  };
  std::uint64_t h = static_cast<std::uint64_t>(n_);
  for (int i = 0; i < kWords; ++i) {
    h = mix(h, x_[i]);
    h = mix(h, z_[i]);
  }
  return static_cast<std::size_t>(h);
}

std::pair<PauliString, int> multiply(const PauliString& p,
                                     const PauliString& q) {
  if (p.n_ != q.n_) {
    throw std::invalid_argument("multiply: qubit count mismatch");
  }
  PauliString r(p.n_);
  // Site-wise, with Y = i X Z: the product of i^{x1 z1} X^{x1} Z^{z1} and
  // i^{x2 z2} X^{x2} Z^{z2} is i^{x1 z1 + x2 z2 - x3 z3 + 2 z1 x2} times
  // the normalized operator with x3 = x1^x2, z3 = z1^z2.
  int exponent = 0;
  for (int i = 0; i < PauliString::kWords; ++i) {
    const std::uint64_t x1 = p.x_[i], z1 = p.z_[i];
    const std::uint64_t x2 = q.x_[i], z2 = q.z_[i];
    const std::uint64_t x3 = x1 ^ x2, z3 = z1 ^ z2;
    exponent += std::popcount(x1 & z1) + std::popcount(x2 & z2) -
                std::popcount(x3 & z3) + 2 * std::popcount(z1 & x2);
    r.x_[i] = x3;
    r.z_[i] = z3;
  }
  return {r, ((exponent % 4) + 4) % 4};
}

PauliSum PauliSum::single(int n_qubits, const PauliString& p, double coeff) {
  PauliSum s(n_qubits);
  s.add(p, coeff);
  return s;
}

void PauliSum::add(const PauliString& p, double coeff, std::uint32_t sines) {
  auto it = terms_.find(p);
  if (it == terms_.end()) {
    if (coeff != 0.0) terms_.emplace(p, PauliTerm{coeff, sines});
    return;
  }
  it->second.coefficient += coeff;
  it->second.sine_count = std::min(it->second.sine_count, sines);
  if (it->second.coefficient == 0.0) terms_.erase(it);
}

double PauliSum::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? 0.0 : it->second.coefficient;
}

double PauliSum::overlap_with_zero() const {
  double sum = 0.0;
  for (const auto& [p, t] : terms_) {
    if (p.is_diagonal()) sum += t.coefficient;
  }
  return sum;
}

double PauliSum::l2_norm_sq() const {
  double sum = 0.0;
  for (const auto& [p, t] : terms_) sum += t.coefficient * t.coefficient;
  return sum;
}

std::vector<std::pair<PauliString, PauliTerm>> PauliSum::sorted_terms() const {
  std::vector<std::pair<PauliString, PauliTerm>> out(terms_.begin(),
                                                     terms_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

double inner_product(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("inner_product: qubit count mismatch");
  }
  const PauliSum& small = a.size() <= b.size() ? a : b;
  const PauliSum& large = a.size() <= b.size() ? b : a;
  double sum = 0.0;
  for (const auto& [p, t] : small.terms()) {
    auto it = large.terms().find(p);
    if (it != large.terms().end()) sum += t.coefficient * it->second.coefficient;
  }
  return sum;
}

}  // namespace qcp
