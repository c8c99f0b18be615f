#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ogrp/clifford.hpp"
#include "ogrp/estimator.hpp"
#include "ogrp/hamiltonian.hpp"
#include "ogrp/moments.hpp"
#include "ogrp/rng.hpp"

namespace ogrp {

inline constexpr int kMaxSimQubits = 14;

/// Dense statevector on up to kMaxSimQubits qubits. Basis index bit
/// (n-1-q) holds qubit q, so qubit 0 is the most significant bit, matching
/// the label convention.
class StateVector {
 public:
  explicit StateVector(int n);  // |0...0>
  StateVector(int n, std::vector<std::complex<double>> amplitudes);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::complex<double>& amp(std::size_t idx) { return amps_[idx]; }
  const std::complex<double>& amp(std::size_t idx) const { return amps_[idx]; }

  double norm() const;
  void check_normalized(double tol = 1e-12) const;

 private:
  int n_;
  std::vector<std::complex<double>> amps_;
};

struct BlochAngles {
  double theta = 0;
  double phi = 0;
};

/// Tensor product of single-qubit states |q> = cos(theta/2)|0> +
/// e^{i phi} sin(theta/2)|1>.
StateVector product_state(int n, const std::vector<BlochAngles>& angles);

/// Random product state, each qubit drawn Haar-uniformly on the Bloch sphere.
StateVector random_product_state(int n, Rng& rng);

/// <psi| P |psi>, guaranteed real for Hermitian Paulis.
double expectation(const StateVector& psi, const PauliString& p);

StateVector apply_circuit(const StateVector& psi, const CliffordCircuit& circuit);

/// H |psi>, used for the independent <H^2> route.
std::vector<std::complex<double>> apply_hamiltonian(const StateVector& psi, const Hamiltonian& h);

/// Exact moments of a state: var_i = 1 - <P_i>^2 and cov(i,k) computed from
/// the signed operator product. Covariances are defined for commuting pairs;
/// requesting a non-commuting pair throws.
class ExactStateMoments final : public MomentsProvider {
 public:
  ExactStateMoments(const StateVector& psi, const Hamiltonian& h);

  double variance(std::size_t i) const override;
  double covariance(std::size_t i, std::size_t k) const override;
  Flavor flavor() const override { return Flavor::ExactState; }
  std::size_t term_count() const override { return expectations_.size(); }

  double expectation_of(std::size_t i) const { return expectations_.at(i); }
  double energy() const;

 private:
  const Hamiltonian* h_;
  StateVector psi_;
  std::vector<double> expectations_;
  mutable std::vector<std::vector<double>> pair_cache_;  // -2 marks "not computed"
};

/// Build exact moments with covariances precomputed for the given pairs.
ExactStateMoments exact_moments(const StateVector& psi, const Hamiltonian& h,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pair_set);

/// One group's measurement record: empirical means of sign-corrected
/// parities for every listed member, from `shots` shared bitstring samples.
struct GroupSampleRecord {
  std::size_t group_index = 0;
  std::uint64_t shots = 0;
  std::vector<std::size_t> term_indices;
  std::vector<double> means;
  std::vector<std::uint64_t> bitstrings;  // raw samples, kept only on request

  GroupEstimates estimates() const { return {group_index, term_indices, means}; }
};

/// Samples computational-basis bitstrings from circuit|psi> and assembles the
/// per-member empirical means: each shot contributes sign x parity of the
/// member's conjugated Z support. Members may include terms adopted post hoc;
/// each must be diagonal under the circuit.
GroupSampleRecord sample_group(const StateVector& psi, const Hamiltonian& h,
                               const std::vector<std::size_t>& members,
                               const CliffordCircuit& circuit, std::size_t group_index,
                               std::uint64_t shots, Rng& rng, bool keep_bitstrings = false);

/// Equal superposition of a minimum- and a maximum-energy eigenstate of the
/// all-to-all Ising model: (|0...0> + |0^{n/2} 1^{n/2}>) / sqrt(2). n even.
StateVector ising_witness_state(int n);

/// Text statevector files: first line is the qubit count, then 2^n lines of
/// "re im", amplitudes in basis-index order.
StateVector load_state_file(const std::string& path);
void save_state_file(const StateVector& psi, const std::string& path);

/// Raw bitstring dump: one JSON header line {"n","M","group","seed"}
/// followed by M packed little-endian samples of ceil(n/8) bytes each.
void save_bitstring_dump(const GroupSampleRecord& record, int n, std::uint64_t seed,
                         const std::string& path);
GroupSampleRecord load_bitstring_dump(const std::string& path, int* n_out = nullptr,
                                      std::uint64_t* seed_out = nullptr);

struct VarianceSplit {
  double diagonal = 0;    // sum_i c_i^2 (1 - <P_i>^2)
  double covariance = 0;  // symmetrized pair part
  double total = 0;       // diagonal + covariance = Var(H)
};

/// Splits Var(H) on a state into its diagonal and covariance parts. Pairs
/// enter through the real part of <P_i P_k>, so anticommuting pairs
/// contribute only the -<P_i><P_k> piece.
VarianceSplit variance_covariance_split(const StateVector& psi, const Hamiltonian& h);

}  // namespace ogrp
