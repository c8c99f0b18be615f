#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace ogrp {

class PauliString;
struct PauliProduct;
bool commutes(const PauliString& p, const PauliString& q);
PauliProduct multiply(const PauliString& p, const PauliString& q);

/// An n-qubit Pauli string in symplectic form: two bit vectors (x, z), one
/// bit per qubit. Qubit q has X iff x(q), Z iff z(q), Y iff both. The label
/// representation puts qubit 0 leftmost (most significant).
///
/// Bits are packed into 64-bit words so commutation checks reduce to a few
/// popcounts; pairwise checks dominate the cost of grouping, so this is the
/// hot path of the whole library.
class PauliString {
 public:
  PauliString() = default;

  /// Identity on n qubits.
  explicit PauliString(int n);

  static PauliString parse(const std::string& label);

  int num_qubits() const { return n_; }

  bool x(int q) const { return get_bit(x_words_, q); }
  bool z(int q) const { return get_bit(z_words_, q); }
  void set_x(int q, bool v) { set_bit(x_words_, q, v); }
  void set_z(int q, bool v) { set_bit(z_words_, q, v); }

  bool is_identity() const;

  /// True iff the string contains only Z and I factors (all x bits zero).
  bool is_z_diagonal() const;

  /// Number of non-identity tensor factors.
  int weight() const;

  std::string to_string() const;

  /// Index-space masks for the simulator: bit (n-1-q) of the mask corresponds
  /// to qubit q, matching the basis-state index convention.
  std::uint64_t x_mask_index_space() const;
  std::uint64_t z_mask_index_space() const;

  bool operator==(const PauliString& other) const {
    return n_ == other.n_ && x_words_ == other.x_words_ && z_words_ == other.z_words_;
  }
  bool operator!=(const PauliString& other) const { return !(*this == other); }

  /// Strict ordering for use in ordered containers (n, then x, then z words).
  bool operator<(const PauliString& other) const;

  std::size_t hash() const;

  friend bool ogrp::commutes(const PauliString& p, const PauliString& q);
  friend PauliProduct ogrp::multiply(const PauliString& p, const PauliString& q);

 private:
  static bool get_bit(const std::vector<std::uint64_t>& w, int q) {
    return (w[static_cast<std::size_t>(q) >> 6] >> (q & 63)) & 1u;
  }
  static void set_bit(std::vector<std::uint64_t>& w, int q, bool v) {
    const std::uint64_t mask = std::uint64_t(1) << (q & 63);
    if (v)
      w[static_cast<std::size_t>(q) >> 6] |= mask;
    else
      w[static_cast<std::size_t>(q) >> 6] &= ~mask;
  }

  int n_ = 0;
  std::vector<std::uint64_t> x_words_;
  std::vector<std::uint64_t> z_words_;
};

/// A Pauli string with a sign in {+1, -1}. Hermitian Paulis conjugated by
/// Clifford circuits stay Hermitian Paulis up to such a sign.
struct SignedPauli {
  PauliString pauli;
  int sign = +1;  // +1 or -1
};

/// Result of multiplying two Pauli strings: phase * pauli equals the operator
/// product. The phase is i^phase_exponent with phase_exponent in {0,1,2,3};
/// commuting inputs always yield an even exponent (phase +/-1).
struct PauliProduct {
  int phase_exponent = 0;
  PauliString pauli;

  std::complex<double> phase() const {
    static const std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_exponent & 3];
  }
  /// Sign for even exponents; throws if the phase is imaginary.
  int real_sign() const;
};

inline PauliString parse_pauli(const std::string& label) { return PauliString::parse(label); }
inline std::string serialize_pauli(const PauliString& p) { return p.to_string(); }
inline int pauli_weight(const PauliString& p) { return p.weight(); }

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const { return p.hash(); }
};

}  // namespace ogrp
