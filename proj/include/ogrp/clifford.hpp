#pragma once

#include <span>
#include <vector>

#include "ogrp/pauli.hpp"

namespace ogrp {

enum class GateKind { H, S, CNOT, CZ, X, Z };

struct Gate {
  GateKind kind;
  int q0 = 0;
  int q1 = -1;  // second qubit for CNOT (target) and CZ

  bool operator==(const Gate&) const = default;
};

const char* gate_name(GateKind kind);

/// An ordered list of Clifford gates on n qubits.
struct CliffordCircuit {
  int n = 0;
  std::vector<Gate> gates;

  void validate() const;  // throws std::invalid_argument on bad qubit indices
};

/// Heisenberg-picture image U P U^dag, sign included. Conjugation of a
/// Hermitian Pauli by a Clifford never produces an imaginary phase.
SignedPauli conjugate(const CliffordCircuit& circuit, const PauliString& p);

/// Inverse circuit: gates reversed, S replaced by Z S (all other gates in
/// the set are involutions). conjugate(inverse(c), conjugate(c, p).pauli)
/// recovers p.
CliffordCircuit inverse(const CliffordCircuit& circuit);

inline bool is_z_diagonal(const PauliString& p) { return p.is_z_diagonal(); }

struct Diagonalization {
  CliffordCircuit circuit;
  std::vector<SignedPauli> images;  // parallel to the input group
};

/// Synthesizes a Clifford circuit that maps every member of a commuting set
/// to a Z/I-only string (up to sign), by Gaussian elimination on the
/// symplectic generator matrix. Emits H, S, CNOT and CZ gates; at most
/// 2n^2 gates on n qubits. The elimination order is fixed, so the circuit
/// is a deterministic function of the input group.
Diagonalization diagonalize(std::span<const PauliString> group);

}  // namespace ogrp
