#include "ogrp/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace ogrp {

namespace {

void check_qubits(int n) {
  if (n < 1) throw std::invalid_argument("StateVector: qubit count must be >= 1");
  if (n > kMaxSimQubits)
    throw std::invalid_argument("StateVector: " + std::to_string(n) + " qubits exceeds the cap of " +
                                std::to_string(kMaxSimQubits));
}

}  // namespace

StateVector::StateVector(int n) : n_(n) {
  check_qubits(n);
  amps_.assign(std::size_t(1) << n, {0, 0});
  amps_[0] = {1, 0};
}

StateVector::StateVector(int n, std::vector<std::complex<double>> amplitudes)
    : n_(n), amps_(std::move(amplitudes)) {
  check_qubits(n);
  if (amps_.size() != (std::size_t(1) << n))
    throw std::invalid_argument("StateVector: amplitude count does not match qubit count");
  check_normalized();
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::check_normalized(double tol) const {
  if (std::abs(norm() - 1.0) > tol)
    throw std::invalid_argument("StateVector: not normalized (norm = " + std::to_string(norm()) +
                                ")");
}

StateVector product_state(int n, const std::vector<BlochAngles>& angles) {
  check_qubits(n);
  if (angles.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("product_state: need one angle pair per qubit");
  std::vector<std::complex<double>> amps(std::size_t(1) << n, {1, 0});
  for (int q = 0; q < n; ++q) {
    const std::complex<double> a0 = std::cos(angles[q].theta / 2.0);
    const std::complex<double> a1 =
        std::polar(std::sin(angles[q].theta / 2.0), angles[q].phi);
    const std::uint64_t mask = std::uint64_t(1) << (n - 1 - q);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) amps[idx] *= (idx & mask) ? a1 : a0;
  }
  return StateVector(n, std::move(amps));
}

StateVector random_product_state(int n, Rng& rng) {
  std::vector<BlochAngles> angles(static_cast<std::size_t>(n));
  for (auto& a : angles) {
    a.theta = std::acos(1.0 - 2.0 * rng.next_double());  // uniform in cos(theta)
    a.phi = rng.next_in(0.0, 2.0 * std::numbers::pi);
  }
  return product_state(n, angles);
}

double expectation(const StateVector& psi, const PauliString& p) {
  if (p.num_qubits() != psi.num_qubits())
    throw std::invalid_argument("expectation: dimension mismatch");
  const std::uint64_t mx = p.x_mask_index_space();
  const std::uint64_t mz = p.z_mask_index_space();
  const int y_count = std::popcount(mx & mz);
  // P|b> = i^y (-1)^{popcount(b & mz)} |b ^ mx>
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> base = ipow[y_count & 3];
  std::complex<double> acc = 0;
  const auto& amps = psi.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const double sign = std::popcount(b & mz) & 1 ? -1.0 : 1.0;
    acc += std::conj(amps[b ^ mx]) * (base * sign) * amps[b];
  }
  if (std::abs(acc.imag()) > 1e-9)
    throw std::logic_error("expectation: non-real value for a Hermitian Pauli");
  return acc.real();
}

StateVector apply_circuit(const StateVector& psi, const CliffordCircuit& circuit) {
  if (circuit.n != psi.num_qubits())
    throw std::invalid_argument("apply_circuit: dimension mismatch");
  circuit.validate();
  std::vector<std::complex<double>> amps = psi.amplitudes();
  const int n = circuit.n;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (const auto& g : circuit.gates) {
    const std::uint64_t m0 = std::uint64_t(1) << (n - 1 - g.q0);
    switch (g.kind) {
      case GateKind::H:
        for (std::size_t b = 0; b < amps.size(); ++b) {
          if (b & m0) continue;
          const auto a0 = amps[b], a1 = amps[b | m0];
          amps[b] = (a0 + a1) * inv_sqrt2;
          amps[b | m0] = (a0 - a1) * inv_sqrt2;
        }
        break;
      case GateKind::S:
        for (std::size_t b = 0; b < amps.size(); ++b)
          if (b & m0) amps[b] *= std::complex<double>(0, 1);
        break;
      case GateKind::CNOT: {
        const std::uint64_t m1 = std::uint64_t(1) << (n - 1 - g.q1);
        for (std::size_t b = 0; b < amps.size(); ++b)
          if ((b & m0) && !(b & m1)) std::swap(amps[b], amps[b | m1]);
        break;
      }
      case GateKind::CZ: {
        const std::uint64_t m1 = std::uint64_t(1) << (n - 1 - g.q1);
        for (std::size_t b = 0; b < amps.size(); ++b)
          if ((b & m0) && (b & m1)) amps[b] = -amps[b];
        break;
      }
      case GateKind::X:
        for (std::size_t b = 0; b < amps.size(); ++b)
          if (!(b & m0)) std::swap(amps[b], amps[b | m0]);
        break;
      case GateKind::Z:
        for (std::size_t b = 0; b < amps.size(); ++b)
          if (b & m0) amps[b] = -amps[b];
        break;
    }
  }
  return StateVector(n, std::move(amps));
}

std::vector<std::complex<double>> apply_hamiltonian(const StateVector& psi, const Hamiltonian& h) {
  if (h.num_qubits() != psi.num_qubits())
    throw std::invalid_argument("apply_hamiltonian: dimension mismatch");
  std::vector<std::complex<double>> out(psi.dim(), {0, 0});
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& t : h.terms()) {
    const std::uint64_t mx = t.pauli.x_mask_index_space();
    const std::uint64_t mz = t.pauli.z_mask_index_space();
    const std::complex<double> base = ipow[std::popcount(mx & mz) & 3] * t.coefficient;
    for (std::size_t b = 0; b < out.size(); ++b) {
      const double sign = std::popcount(b & mz) & 1 ? -1.0 : 1.0;
      out[b ^ mx] += base * sign * psi.amp(b);
    }
  }
  return out;
}

ExactStateMoments::ExactStateMoments(const StateVector& psi, const Hamiltonian& h)
    : h_(&h), psi_(psi) {
  if (h.num_qubits() != psi.num_qubits())
    throw std::invalid_argument("ExactStateMoments: dimension mismatch");
  expectations_.reserve(h.term_count());
  for (std::size_t i = 0; i < h.term_count(); ++i)
    expectations_.push_back(expectation(psi_, h.pauli(i)));
  pair_cache_.assign(h.term_count(), std::vector<double>(h.term_count(), -2.0));
}

double ExactStateMoments::variance(std::size_t i) const {
  const double e = expectations_.at(i);
  return std::max(0.0, 1.0 - e * e);  // clip fp noise at eigenstates
}

double ExactStateMoments::covariance(std::size_t i, std::size_t k) const {
  if (i == k) return variance(i);
  if (pair_cache_[i][k] > -1.5) return pair_cache_[i][k];
  const auto& pi = h_->pauli(i);
  const auto& pk = h_->pauli(k);
  if (!commutes(pi, pk))
    throw std::invalid_argument("ExactStateMoments: covariance requested for non-commuting pair (" +
                                std::to_string(i) + ", " + std::to_string(k) + ")");
  const auto prod = multiply(pi, pk);
  const double joint = prod.real_sign() * expectation(psi_, prod.pauli);
  const double cov = joint - expectations_[i] * expectations_[k];
  pair_cache_[i][k] = cov;
  pair_cache_[k][i] = cov;
  return cov;
}

double ExactStateMoments::energy() const {
  double e = 0;
  for (std::size_t i = 0; i < expectations_.size(); ++i)
    e += h_->coefficient(i) * expectations_[i];
  return e;
}

ExactStateMoments exact_moments(const StateVector& psi, const Hamiltonian& h,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pair_set) {
  ExactStateMoments m(psi, h);
  for (const auto& [i, k] : pair_set) m.covariance(i, k);
  return m;
}

GroupSampleRecord sample_group(const StateVector& psi, const Hamiltonian& h,
                               const std::vector<std::size_t>& members,
                               const CliffordCircuit& circuit, std::size_t group_index,
                               std::uint64_t shots, Rng& rng, bool keep_bitstrings) {
  if (shots < 1) throw std::invalid_argument("sample_group: need at least one shot");
  if (members.empty()) throw std::invalid_argument("sample_group: empty member list");

  // Per-member (sign, Z-support mask) in the rotated frame.
  std::vector<double> signs;
  std::vector<std::uint64_t> masks;
  for (const std::size_t t : members) {
    const auto img = conjugate(circuit, h.pauli(t));
    if (!img.pauli.is_z_diagonal())
      throw std::invalid_argument("sample_group: member " + std::to_string(t) +
                                  " is not diagonal under the group circuit");
    signs.push_back(img.sign);
    masks.push_back(img.pauli.z_mask_index_space());
  }

  const StateVector rotated = apply_circuit(psi, circuit);
  std::vector<double> probs(rotated.dim());
  for (std::size_t b = 0; b < probs.size(); ++b) probs[b] = std::norm(rotated.amp(b));

  // Outcome counts: inverse-CDF per shot, or one multinomial pass when the
  // budget is much larger than the outcome space.
  std::vector<std::uint64_t> counts(probs.size(), 0);
  GroupSampleRecord rec;
  rec.group_index = group_index;
  rec.shots = shots;
  rec.term_indices = members;
  if (shots >= probs.size() * 16) {
    // Multinomial by chained conditional binomials: one draw per outcome
    // instead of one per shot.
    double remaining_prob = 1.0;
    std::uint64_t remaining = shots;
    for (std::size_t b = 0; b + 1 < probs.size() && remaining > 0; ++b) {
      const double p = remaining_prob > 0 ? std::clamp(probs[b] / remaining_prob, 0.0, 1.0) : 0.0;
      std::binomial_distribution<std::uint64_t> binom(remaining, p);
      const std::uint64_t c = binom(rng.engine());
      counts[b] = c;
      remaining -= c;
      remaining_prob -= probs[b];
    }
    counts[probs.size() - 1] += remaining;
    if (keep_bitstrings) {
      for (std::size_t b = 0; b < counts.size(); ++b)
        rec.bitstrings.insert(rec.bitstrings.end(), counts[b], b);
    }
  } else {
    std::vector<double> cdf(probs.size());
    double acc = 0;
    for (std::size_t b = 0; b < probs.size(); ++b) {
      acc += probs[b];
      cdf[b] = acc;
    }
    cdf.back() = 1.0;
    for (std::uint64_t s = 0; s < shots; ++s) {
      const double u = rng.next_double();
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      const std::uint64_t b = static_cast<std::uint64_t>(it - cdf.begin());
      ++counts[b];
      if (keep_bitstrings) rec.bitstrings.push_back(b);
    }
  }

  rec.means.assign(members.size(), 0.0);
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] == 0) continue;
    for (std::size_t a = 0; a < members.size(); ++a) {
      const double parity = std::popcount(b & masks[a]) & 1 ? -1.0 : 1.0;
      rec.means[a] += signs[a] * parity * static_cast<double>(counts[b]);
    }
  }
  for (double& mean : rec.means) mean /= static_cast<double>(shots);
  return rec;
}

StateVector ising_witness_state(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("ising_witness_state: n must be even and >= 2");
  check_qubits(n);
  std::vector<std::complex<double>> amps(std::size_t(1) << n, {0, 0});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Minimum-energy representative: all spins aligned, |0...0>.
  amps[0] = inv_sqrt2;
  // Maximum-energy representative: the balanced string 0^{n/2} 1^{n/2},
  // the lexicographically smallest one.
  amps[(std::uint64_t(1) << (n / 2)) - 1] = inv_sqrt2;
  return StateVector(n, std::move(amps));
}

StateVector load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file: " + path);
  int n = 0;
  if (!(in >> n)) throw std::invalid_argument("state file " + path + ": missing qubit count");
  check_qubits(n);
  std::vector<std::complex<double>> amps;
  amps.reserve(std::size_t(1) << n);
  double re, im;
  while (in >> re >> im) amps.push_back({re, im});
  if (amps.size() != (std::size_t(1) << n))
    throw std::invalid_argument("state file " + path + ": expected " +
                                std::to_string(std::size_t(1) << n) + " amplitudes, found " +
                                std::to_string(amps.size()));
  try {
    return StateVector(n, std::move(amps));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("state file " + path + ": " + e.what());
  }
}

void save_state_file(const StateVector& psi, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write state file: " + path);
  out << psi.num_qubits() << '\n';
  char buf[80];
  for (const auto& a : psi.amplitudes()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", a.real(), a.imag());
    out << buf;
  }
}

void save_bitstring_dump(const GroupSampleRecord& record, int n, std::uint64_t seed,
                         const std::string& path) {
  if (record.bitstrings.size() != record.shots)
    throw std::invalid_argument("save_bitstring_dump: record carries no raw bitstrings");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write bitstring dump: " + path);
  char header[160];
  std::snprintf(header, sizeof(header), "{\"n\":%d,\"M\":%llu,\"group\":%zu,\"seed\":%llu}\n", n,
                static_cast<unsigned long long>(record.shots), record.group_index,
                static_cast<unsigned long long>(seed));
  out << header;
  const int bytes = (n + 7) / 8;
  for (const std::uint64_t b : record.bitstrings)
    for (int k = 0; k < bytes; ++k) out.put(static_cast<char>((b >> (8 * k)) & 0xff));
}

GroupSampleRecord load_bitstring_dump(const std::string& path, int* n_out,
                                      std::uint64_t* seed_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open bitstring dump: " + path);
  std::string header;
  std::getline(in, header);
  int n = 0;
  unsigned long long shots = 0, seed = 0;
  std::size_t group = 0;
  if (std::sscanf(header.c_str(), "{\"n\":%d,\"M\":%llu,\"group\":%zu,\"seed\":%llu}", &n, &shots,
                  &group, &seed) != 4)
    throw std::invalid_argument("bitstring dump " + path + ": bad header \"" + header + "\"");
  GroupSampleRecord rec;
  rec.group_index = group;
  rec.shots = shots;
  const int bytes = (n + 7) / 8;
  for (unsigned long long s = 0; s < shots; ++s) {
    std::uint64_t b = 0;
    for (int k = 0; k < bytes; ++k) {
      const int ch = in.get();
      if (ch == EOF) throw std::invalid_argument("bitstring dump " + path + ": truncated");
      b |= static_cast<std::uint64_t>(ch & 0xff) << (8 * k);
    }
    rec.bitstrings.push_back(b);
  }
  if (n_out) *n_out = n;
  if (seed_out) *seed_out = seed;
  return rec;
}

VarianceSplit variance_covariance_split(const StateVector& psi, const Hamiltonian& h) {
  const std::size_t n = h.term_count();
  std::vector<double> expect(n);
  for (std::size_t i = 0; i < n; ++i) expect[i] = expectation(psi, h.pauli(i));

  VarianceSplit out;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = h.coefficient(i);
    out.diagonal += c * c * (1.0 - expect[i] * expect[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      // Re<P_i P_k> through the signed product; anticommuting pairs have a
      // purely imaginary product and contribute only -<P_i><P_k>.
      const auto prod = multiply(h.pauli(i), h.pauli(k));
      double joint = 0;
      if ((prod.phase_exponent & 1) == 0)
        joint = prod.real_sign() * expectation(psi, prod.pauli);
      out.covariance += 2.0 * h.coefficient(i) * h.coefficient(k) * (joint - expect[i] * expect[k]);
    }
  }
  out.total = out.diagonal + out.covariance;
  return out;
}

}  // namespace ogrp
