#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ogrp/pauli.hpp"

namespace ogrp {

struct Term {
  double coefficient = 0.0;
  PauliString pauli;
};

/// A qubit Hamiltonian as an ordered list of weighted Pauli strings.
/// Invariants enforced on construction: all Paulis distinct and on the same
/// qubit count, no identity term, no zero coefficient, at least one term.
class Hamiltonian {
 public:
  Hamiltonian(int n, std::vector<Term> terms);

  int num_qubits() const { return n_; }
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& term(std::size_t i) const { return terms_.at(i); }
  double coefficient(std::size_t i) const { return terms_.at(i).coefficient; }
  const PauliString& pauli(std::size_t i) const { return terms_.at(i).pauli; }

  /// Sum of squared coefficients.
  double squared_norm() const;

 private:
  int n_ = 0;
  std::vector<Term> terms_;
};

/// Coefficients plus a commutation graph, with no concrete Pauli strings.
/// Used for instances whose commutation relations are specified directly.
struct AbstractHamiltonian {
  std::vector<double> coefficients;
  std::vector<std::vector<bool>> adjacency;  // symmetric, true diagonal

  std::size_t term_count() const { return coefficients.size(); }
  void validate() const;  // throws std::invalid_argument on bad shape
};

/// Parses the .ham text format: one term per line, "coefficient label",
/// '#' starts a comment. Errors carry 1-based line numbers.
Hamiltonian parse_hamiltonian(const std::string& text);
std::string write_hamiltonian(const Hamiltonian& h);

Hamiltonian load_hamiltonian_file(const std::string& path);
void save_hamiltonian_file(const Hamiltonian& h, const std::string& path);

/// Random Hamiltonian: round(density * (4^n - 1)) distinct non-identity Pauli
/// strings drawn without replacement, coefficients i.i.d. uniform on [-1, 1]
/// (resampled if exactly zero). Deterministic in the seed.
Hamiltonian gen_random(int n, double density, std::uint64_t seed);

/// All-to-all Ising: -sum_{i<j} Z_i Z_j on n qubits.
Hamiltonian gen_ising_all_to_all(int n);

/// Spinless Fermi-Hubbard model on a periodic 2 x n lattice, mapped to 2n
/// qubits by the Jordan-Wigner transformation with row-major snake ordering.
/// Hopping -t sum_<ij> (c^dag_i c_j + h.c.) and interaction V sum_<ij> n_i n_j;
/// the constant part of the interaction is dropped.
Hamiltonian gen_hubbard_spinless_2xn(int n, double t = 1.0, double V = 1.0);

/// Commutation graph of a concrete Hamiltonian.
AbstractHamiltonian to_abstract(const Hamiltonian& h);

}  // namespace ogrp
