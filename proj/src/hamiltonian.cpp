#include "ogrp/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "ogrp/rng.hpp"

namespace ogrp {

Hamiltonian::Hamiltonian(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
  if (n_ < 1) throw std::invalid_argument("Hamiltonian: qubit count must be >= 1");
  if (terms_.empty()) throw std::invalid_argument("Hamiltonian: empty term list");
  std::unordered_set<PauliString, PauliStringHash> seen;
  for (const auto& t : terms_) {
    if (t.pauli.num_qubits() != n_)
      throw std::invalid_argument("Hamiltonian: term \"" + t.pauli.to_string() +
                                  "\" has inconsistent qubit count");
    if (t.pauli.is_identity())
      throw std::invalid_argument("Hamiltonian: identity term is not allowed");
    if (t.coefficient == 0.0)
      throw std::invalid_argument("Hamiltonian: zero coefficient on term \"" +
                                  t.pauli.to_string() + "\"");
    if (!std::isfinite(t.coefficient))
      throw std::invalid_argument("Hamiltonian: non-finite coefficient");
    if (!seen.insert(t.pauli).second)
      throw std::invalid_argument("Hamiltonian: duplicate term \"" + t.pauli.to_string() + "\"");
  }
}

double Hamiltonian::squared_norm() const {
  double s = 0;
  for (const auto& t : terms_) s += t.coefficient * t.coefficient;
  return s;
}

void AbstractHamiltonian::validate() const {
  const std::size_t n = coefficients.size();
  if (n == 0) throw std::invalid_argument("AbstractHamiltonian: empty");
  if (adjacency.size() != n)
    throw std::invalid_argument("AbstractHamiltonian: adjacency size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() != n)
      throw std::invalid_argument("AbstractHamiltonian: adjacency row size mismatch");
    if (!adjacency[i][i]) throw std::invalid_argument("AbstractHamiltonian: diagonal must be true");
    for (std::size_t k = 0; k < i; ++k)
      if (adjacency[i][k] != adjacency[k][i])
        throw std::invalid_argument("AbstractHamiltonian: adjacency not symmetric");
  }
}

Hamiltonian parse_hamiltonian(const std::string& text) {
  std::vector<Term> terms;
  int n = -1;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string coeff_str, label, extra;
    if (!(ls >> coeff_str)) continue;  // blank or comment-only line
    if (!(ls >> label))
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected \"coefficient pauli_label\"");
    if (ls >> extra)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": trailing content \"" + extra + "\"");
    double c;
    try {
      std::size_t pos = 0;
      c = std::stod(coeff_str, &pos);
      if (pos != coeff_str.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": bad coefficient \"" + coeff_str + "\"");
    }
    PauliString p;
    try {
      p = parse_pauli(label);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (n == -1) n = p.num_qubits();
    if (p.num_qubits() != n)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": label \"" + label +
                                  "\" has " + std::to_string(p.num_qubits()) + " qubits, expected " +
                                  std::to_string(n));
    if (p.is_identity())
      throw std::invalid_argument("line " + std::to_string(line_no) + ": identity term is not allowed");
    if (c == 0.0)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": zero coefficient");
    terms.push_back({c, p});
  }
  if (terms.empty()) throw std::invalid_argument("empty Hamiltonian: no terms found");
  try {
    return Hamiltonian(n, std::move(terms));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("invalid Hamiltonian: ") + e.what());
  }
}

std::string write_hamiltonian(const Hamiltonian& h) {
  std::ostringstream out;
  char buf[64];
  for (const auto& t : h.terms()) {
    std::snprintf(buf, sizeof(buf), "%.17g", t.coefficient);
    out << buf << ' ' << t.pauli.to_string() << '\n';
  }
  return out.str();
}

Hamiltonian load_hamiltonian_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open Hamiltonian file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hamiltonian(buf.str());
}

void save_hamiltonian_file(const Hamiltonian& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write Hamiltonian file: " + path);
  out << write_hamiltonian(h);
}

namespace {

// Pauli string from a base-4 code with qubit 0 as the most significant digit.
// Digit map: 0 = I, 1 = X, 2 = Y, 3 = Z.
PauliString pauli_from_code(int n, std::uint64_t code) {
  PauliString p(n);
  for (int q = n - 1; q >= 0; --q) {
    const int d = static_cast<int>(code & 3);
    if (d == 1 || d == 2) p.set_x(q, true);
    if (d == 2 || d == 3) p.set_z(q, true);
    code >>= 2;
  }
  return p;
}

}  // namespace

Hamiltonian gen_random(int n, double density, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random: n must be >= 1");
  if (!(density > 0.0) || density > 1.0)
    throw std::invalid_argument("gen_random: density must be in (0, 1]");
  if (2 * n >= 63) throw std::invalid_argument("gen_random: n too large to enumerate the pool");
  const std::uint64_t pool = (std::uint64_t(1) << (2 * n)) - 1;  // non-identity strings
  const std::uint64_t count =
      static_cast<std::uint64_t>(std::llround(density * static_cast<double>(pool)));
  if (count == 0)
    throw std::invalid_argument("gen_random: density rounds to zero terms for this n");
  Rng rng(seed);

  // Floyd's algorithm: a uniform `count`-subset of [1, pool] without
  // enumerating the pool. Codes are offset by one to skip the identity.
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = pool - count; j < pool; ++j) {
    const std::uint64_t t = rng.next_below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }

  std::vector<Term> terms;
  terms.reserve(chosen.size());
  for (const std::uint64_t code : chosen) {
    double c;
    do {
      c = rng.next_in(-1.0, 1.0);
    } while (c == 0.0);
    terms.push_back({c, pauli_from_code(n, code + 1)});
  }
  return Hamiltonian(n, std::move(terms));
}

Hamiltonian gen_ising_all_to_all(int n) {
  if (n < 2) throw std::invalid_argument("gen_ising_all_to_all: n must be >= 2");
  std::vector<Term> terms;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      PauliString p(n);
      p.set_z(i, true);
      p.set_z(j, true);
      terms.push_back({-1.0, p});
    }
  return Hamiltonian(n, std::move(terms));
}

Hamiltonian gen_hubbard_spinless_2xn(int n, double t, double V) {
  if (n < 2) throw std::invalid_argument("gen_hubbard_spinless_2xn: n must be >= 2");
  const int sites = 2 * n;

  // Row-major snake over the 2 x n lattice: row 0 left to right, row 1 right
  // to left, so Jordan-Wigner strings between vertical neighbours stay short.
  auto site_index = [n](int row, int col) { return row == 0 ? col : 2 * n - 1 - col; };

  // Unique nearest-neighbour edges of the torus. Wrap-around duplicates
  // (the 2-row direction, and columns when n == 2) collapse to single edges.
  std::set<std::pair<int, int>> edges;
  auto add_edge = [&edges](int a, int b) {
    if (a > b) std::swap(a, b);
    if (a != b) edges.insert({a, b});
  };
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < 2; ++row) add_edge(site_index(row, col), site_index(row, (col + 1) % n));
    add_edge(site_index(0, col), site_index(1, col));
  }

  // Accumulate coefficients keyed by Pauli; insertion order is kept.
  std::vector<PauliString> order;
  std::map<PauliString, double> acc;
  auto add_term = [&](const PauliString& p, double c) {
    auto [it, inserted] = acc.insert({p, 0.0});
    if (inserted) order.push_back(p);
    it->second += c;
  };

  for (const auto& [i, j] : edges) {
    if (t != 0.0) {
      // c^dag_i c_j + h.c.  ->  (X_i Z...Z X_j + Y_i Z...Z Y_j) / 2
      PauliString xx(sites), yy(sites);
      for (int q = i + 1; q < j; ++q) {
        xx.set_z(q, true);
        yy.set_z(q, true);
      }
      xx.set_x(i, true);
      xx.set_x(j, true);
      yy.set_x(i, true);
      yy.set_z(i, true);
      yy.set_x(j, true);
      yy.set_z(j, true);
      add_term(xx, -t / 2.0);
      add_term(yy, -t / 2.0);
    }
    if (V != 0.0) {
      // n_i n_j = (1 - Z_i)(1 - Z_j)/4, constant dropped.
      PauliString zi(sites), zj(sites), zz(sites);
      zi.set_z(i, true);
      zj.set_z(j, true);
      zz.set_z(i, true);
      zz.set_z(j, true);
      add_term(zi, -V / 4.0);
      add_term(zj, -V / 4.0);
      add_term(zz, V / 4.0);
    }
  }

  std::vector<Term> terms;
  for (const auto& p : order) {
    const double c = acc.at(p);
    if (std::abs(c) > 1e-14) terms.push_back({c, p});
  }
  return Hamiltonian(sites, std::move(terms));
}

AbstractHamiltonian to_abstract(const Hamiltonian& h) {
  const std::size_t n = h.term_count();
  AbstractHamiltonian out;
  out.coefficients.reserve(n);
  for (const auto& t : h.terms()) out.coefficients.push_back(t.coefficient);
  out.adjacency.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    out.adjacency[i][i] = true;
    for (std::size_t k = i + 1; k < n; ++k) {
      const bool c = commutes(h.pauli(i), h.pauli(k));
      out.adjacency[i][k] = c;
      out.adjacency[k][i] = c;
    }
  }
  return out;
}

}  // namespace ogrp
