#include "ogrp/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace ogrp {

namespace {

std::size_t words_for(int n) { return (static_cast<std::size_t>(n) + 63) / 64; }

int popcount_and(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  int total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

}  // namespace

PauliString::PauliString(int n) : n_(n), x_words_(words_for(n), 0), z_words_(words_for(n), 0) {
  if (n < 1) throw std::invalid_argument("PauliString: qubit count must be >= 1");
}

PauliString PauliString::parse(const std::string& label) {
  if (label.empty()) throw std::invalid_argument("parse_pauli: empty label");
  PauliString p(static_cast<int>(label.size()));
  for (int q = 0; q < p.n_; ++q) {
    switch (label[static_cast<std::size_t>(q)]) {
      case 'I':
        break;
      case 'X':
        p.set_x(q, true);
        break;
      case 'Y':
        p.set_x(q, true);
        p.set_z(q, true);
        break;
      case 'Z':
        p.set_z(q, true);
        break;
      default:
        throw std::invalid_argument(std::string("parse_pauli: illegal character '") +
                                    label[static_cast<std::size_t>(q)] + "' in label \"" + label +
                                    "\"");
    }
  }
  return p;
}

bool PauliString::is_identity() const {
  for (std::size_t i = 0; i < x_words_.size(); ++i)
    if (x_words_[i] | z_words_[i]) return false;
  return true;
}

bool PauliString::is_z_diagonal() const {
  for (const auto w : x_words_)
    if (w) return false;
  return true;
}

int PauliString::weight() const {
  int total = 0;
  for (std::size_t i = 0; i < x_words_.size(); ++i)
    total += std::popcount(x_words_[i] | z_words_[i]);
  return total;
}

std::string PauliString::to_string() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int q = 0; q < n_; ++q) {
    const bool xb = x(q), zb = z(q);
    if (xb && zb)
      s[static_cast<std::size_t>(q)] = 'Y';
    else if (xb)
      s[static_cast<std::size_t>(q)] = 'X';
    else if (zb)
      s[static_cast<std::size_t>(q)] = 'Z';
  }
  return s;
}

std::uint64_t PauliString::x_mask_index_space() const {
  if (n_ > 64) throw std::invalid_argument("x_mask_index_space: more than 64 qubits");
  std::uint64_t m = 0;
  for (int q = 0; q < n_; ++q)
    if (x(q)) m |= std::uint64_t(1) << (n_ - 1 - q);
  return m;
}

std::uint64_t PauliString::z_mask_index_space() const {
  if (n_ > 64) throw std::invalid_argument("z_mask_index_space: more than 64 qubits");
  std::uint64_t m = 0;
  for (int q = 0; q < n_; ++q)
    if (z(q)) m |= std::uint64_t(1) << (n_ - 1 - q);
  return m;
}

bool PauliString::operator<(const PauliString& other) const {
  if (n_ != other.n_) return n_ < other.n_;
  if (x_words_ != other.x_words_) return x_words_ < other.x_words_;
  return z_words_ < other.z_words_;
}

std::size_t PauliString::hash() const {
  std::size_t h = static_cast<std::size_t>(n_) * 0x9E3779B97F4A7C15ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  };
  for (const auto w : x_words_) mix(w);
  for (const auto w : z_words_) mix(~w);
  return h;
}

int PauliProduct::real_sign() const {
  if (phase_exponent & 1) throw std::logic_error("PauliProduct: phase is imaginary, no real sign");
  return (phase_exponent & 2) ? -1 : +1;
}

bool commutes(const PauliString& p, const PauliString& q) {
  if (p.n_ != q.n_)
    throw std::invalid_argument("commutes: dimension mismatch (" + std::to_string(p.n_) + " vs " +
                                std::to_string(q.n_) + " qubits)");
  const int s = popcount_and(p.x_words_, q.z_words_) + popcount_and(p.z_words_, q.x_words_);
  return (s & 1) == 0;
}

PauliProduct multiply(const PauliString& p, const PauliString& q) {
  if (p.n_ != q.n_)
    throw std::invalid_argument("multiply: dimension mismatch (" + std::to_string(p.n_) + " vs " +
                                std::to_string(q.n_) + " qubits)");
  PauliProduct out;
  out.pauli = PauliString(p.n_);
  for (std::size_t i = 0; i < p.x_words_.size(); ++i) {
    out.pauli.x_words_[i] = p.x_words_[i] ^ q.x_words_[i];
    out.pauli.z_words_[i] = p.z_words_[i] ^ q.z_words_[i];
  }
  // Writing each factor as i^(x.z) X^x Z^z, the product picks up i from the
  // Y counts of the inputs and output plus (-1)^(z_p . x_q) from commuting
  // Z^z_p past X^x_q. Exponent arithmetic is mod 4.
  const int yp = popcount_and(p.x_words_, p.z_words_);
  const int yq = popcount_and(q.x_words_, q.z_words_);
  const int yr = popcount_and(out.pauli.x_words_, out.pauli.z_words_);
  const int cross = popcount_and(p.z_words_, q.x_words_);
  out.phase_exponent = ((yp + yq + 2 * cross - yr) % 4 + 4) % 4;
  return out;
}

}  // namespace ogrp
