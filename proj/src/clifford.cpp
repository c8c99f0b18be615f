#include "ogrp/clifford.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace ogrp {

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
  }
  return "?";
}

void CliffordCircuit::validate() const {
  for (const auto& g : gates) {
    const bool two_qubit = g.kind == GateKind::CNOT || g.kind == GateKind::CZ;
    if (g.q0 < 0 || g.q0 >= n)
      throw std::invalid_argument("CliffordCircuit: qubit index out of range");
    if (two_qubit) {
      if (g.q1 < 0 || g.q1 >= n)
        throw std::invalid_argument("CliffordCircuit: qubit index out of range");
      if (g.q0 == g.q1)
        throw std::invalid_argument("CliffordCircuit: two-qubit gate needs distinct qubits");
    }
  }
}

namespace {

// In-place update of (p, sign) under P -> G P G^dag. Standard tableau rules;
// CZ is handled as H(q1) CNOT(q0,q1) H(q1).
void conjugate_by_gate(const Gate& g, PauliString& p, int& sign) {
  auto apply_h = [&p, &sign](int q) {
    const bool xb = p.x(q), zb = p.z(q);
    if (xb && zb) sign = -sign;
    p.set_x(q, zb);
    p.set_z(q, xb);
  };
  auto apply_cnot = [&p, &sign](int c, int t) {
    const bool xc = p.x(c), zc = p.z(c), xt = p.x(t), zt = p.z(t);
    if (xc && zt && !(xt ^ zc)) sign = -sign;
    p.set_x(t, xt ^ xc);
    p.set_z(c, zc ^ zt);
  };
  switch (g.kind) {
    case GateKind::H:
      apply_h(g.q0);
      break;
    case GateKind::S: {
      const bool xb = p.x(g.q0), zb = p.z(g.q0);
      if (xb && zb) sign = -sign;
      p.set_z(g.q0, zb ^ xb);
      break;
    }
    case GateKind::CNOT:
      apply_cnot(g.q0, g.q1);
      break;
    case GateKind::CZ:
      apply_h(g.q1);
      apply_cnot(g.q0, g.q1);
      apply_h(g.q1);
      break;
    case GateKind::X:
      if (p.z(g.q0)) sign = -sign;
      break;
    case GateKind::Z:
      if (p.x(g.q0)) sign = -sign;
      break;
  }
}

}  // namespace

SignedPauli conjugate(const CliffordCircuit& circuit, const PauliString& p) {
  if (p.num_qubits() != circuit.n)
    throw std::invalid_argument("conjugate: circuit acts on " + std::to_string(circuit.n) +
                                " qubits, Pauli has " + std::to_string(p.num_qubits()));
  circuit.validate();
  SignedPauli out{p, +1};
  for (const auto& g : circuit.gates) conjugate_by_gate(g, out.pauli, out.sign);
  return out;
}

CliffordCircuit inverse(const CliffordCircuit& circuit) {
  CliffordCircuit inv{circuit.n, {}};
  inv.gates.reserve(circuit.gates.size());
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    if (it->kind == GateKind::S) {
      inv.gates.push_back({GateKind::Z, it->q0});
      inv.gates.push_back({GateKind::S, it->q0});
    } else {
      inv.gates.push_back(*it);
    }
  }
  return inv;
}

Diagonalization diagonalize(std::span<const PauliString> group) {
  if (group.empty()) throw std::invalid_argument("diagonalize: empty group");
  const int n = group.front().num_qubits();
  for (const auto& p : group)
    if (p.num_qubits() != n) throw std::invalid_argument("diagonalize: mixed qubit counts");
  for (std::size_t a = 0; a < group.size(); ++a)
    for (std::size_t b = a + 1; b < group.size(); ++b)
      if (!commutes(group[a], group[b]))
        throw std::invalid_argument("diagonalize: group members " + std::to_string(a) + " and " +
                                    std::to_string(b) + " do not commute");

  // Working set: a GF(2)-independent generating subset, kept in input order.
  // Dependent members are products of generators, so they come out diagonal
  // automatically once the generators do.
  std::vector<SignedPauli> rows;
  {
    auto bit_at = [n](const PauliString& p, int pos) {
      return pos < n ? p.x(pos) : p.z(pos - n);
    };
    auto leading_bit = [n, &bit_at](const PauliString& p) {
      for (int pos = 0; pos < 2 * n; ++pos)
        if (bit_at(p, pos)) return pos;
      return 2 * n;
    };
    // Echelon basis over (x|z) bit vectors, sorted by pivot. Reducing a
    // candidate in ascending pivot order leaves no pivot bit set, so the
    // candidate is dependent iff it reduces to the identity.
    std::vector<std::pair<int, PauliString>> basis;
    for (const auto& p : group) {
      PauliString r = p;
      for (const auto& [pivot, vec] : basis)
        if (bit_at(r, pivot)) r = multiply(r, vec).pauli;
      if (!r.is_identity()) {
        const int pivot = leading_bit(r);
        basis.insert(std::upper_bound(basis.begin(), basis.end(), pivot,
                                      [](int v, const auto& e) { return v < e.first; }),
                     {pivot, r});
        rows.push_back({p, +1});
      }
    }
  }

  CliffordCircuit circuit{n, {}};
  auto emit = [&circuit, &rows](Gate g) {
    circuit.gates.push_back(g);
    for (auto& r : rows) conjugate_by_gate(g, r.pauli, r.sign);
  };

  // Eliminate the X block. Each pass pins one row to a single-qubit +-Z and
  // zeroes its column everywhere; commutation of the remaining rows with the
  // pinned row keeps the column clear for the rest of the run.
  while (true) {
    int q = -1;
    std::size_t r = 0;
    for (int col = 0; col < n && q < 0; ++col) {
      for (std::size_t row = 0; row < rows.size(); ++row) {
        if (rows[row].pauli.x(col)) {
          q = col;
          r = row;
          break;
        }
      }
    }
    if (q < 0) break;

    // Make row r the unique row with an X at q (row products keep signs real).
    for (std::size_t row = 0; row < rows.size(); ++row) {
      if (row != r && rows[row].pauli.x(q)) {
        const auto prod = multiply(rows[row].pauli, rows[r].pauli);
        rows[row].pauli = prod.pauli;
        rows[row].sign *= rows[r].sign * prod.real_sign();
      }
    }
    // Clear the rest of row r's X support onto qubit q.
    for (int col = 0; col < n; ++col)
      if (col != q && rows[r].pauli.x(col)) emit({GateKind::CNOT, q, col});
    // Clear row r's Z support away from qubit q.
    for (int col = 0; col < n; ++col)
      if (col != q && rows[r].pauli.z(col)) emit({GateKind::CZ, q, col});
    // Row r is now +-X_q or +-Y_q; rotate it onto +-Z_q.
    if (rows[r].pauli.z(q)) emit({GateKind::S, q});
    emit({GateKind::H, q});
  }

  for (const auto& r : rows)
    if (!r.pauli.is_z_diagonal())
      throw std::logic_error("diagonalize: elimination left a non-diagonal generator");

  Diagonalization out;
  out.circuit = std::move(circuit);
  out.images.reserve(group.size());
  for (const auto& p : group) {
    auto img = conjugate(out.circuit, p);
    if (!img.pauli.is_z_diagonal())
      throw std::logic_error("diagonalize: group member not diagonal under synthesized circuit");
    out.images.push_back(std::move(img));
  }
  return out;
}

}  // namespace ogrp
