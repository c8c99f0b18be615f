#include "ogrp/serialization.hpp"

#include <fstream>
#include <stdexcept>

namespace ogrp {

using nlohmann::json;

json hamiltonian_to_json(const Hamiltonian& h) {
  json terms = json::array();
  for (const auto& t : h.terms())
    terms.push_back({{"c", t.coefficient}, {"pauli", t.pauli.to_string()}});
  return {{"n", h.num_qubits()}, {"terms", std::move(terms)}};
}

Hamiltonian hamiltonian_from_json(const json& j) {
  std::vector<Term> terms;
  for (const auto& t : j.at("terms"))
    terms.push_back({t.at("c").get<double>(), parse_pauli(t.at("pauli").get<std::string>())});
  return Hamiltonian(j.at("n").get<int>(), std::move(terms));
}

json grouping_to_json(const Grouping& g) {
  return {{"disjoint", g.disjoint}, {"groups", g.groups}};
}

Grouping grouping_from_json(const json& j) {
  Grouping g;
  g.disjoint = j.at("disjoint").get<bool>();
  g.groups = j.at("groups").get<std::vector<std::vector<std::size_t>>>();
  return g;
}

json repacked_to_json(const RepackedGrouping& r) {
  json j = grouping_to_json(r.overlapped);
  j["base"] = grouping_to_json(r.base);
  if (!r.member_signs.empty()) j["signs"] = r.member_signs;
  return j;
}

RepackedGrouping repacked_from_json(const json& j) {
  RepackedGrouping r;
  r.overlapped = grouping_from_json(j);
  r.base = grouping_from_json(j.at("base"));
  if (j.contains("signs")) r.member_signs = j.at("signs").get<std::vector<std::vector<int>>>();
  r.validate_structure();
  return r;
}

json circuit_to_json(const CliffordCircuit& c) {
  json gates = json::array();
  for (const auto& g : c.gates) {
    json q = json::array();
    q.push_back(g.q0);
    if (g.kind == GateKind::CNOT || g.kind == GateKind::CZ) q.push_back(g.q1);
    gates.push_back({{"gate", gate_name(g.kind)}, {"qubits", std::move(q)}});
  }
  return {{"n", c.n}, {"gates", std::move(gates)}};
}

CliffordCircuit circuit_from_json(const json& j) {
  CliffordCircuit c;
  c.n = j.at("n").get<int>();
  for (const auto& gj : j.at("gates")) {
    const std::string name = gj.at("gate").get<std::string>();
    const auto qubits = gj.at("qubits").get<std::vector<int>>();
    Gate g;
    if (name == "H") g.kind = GateKind::H;
    else if (name == "S") g.kind = GateKind::S;
    else if (name == "CNOT") g.kind = GateKind::CNOT;
    else if (name == "CZ") g.kind = GateKind::CZ;
    else if (name == "X") g.kind = GateKind::X;
    else if (name == "Z") g.kind = GateKind::Z;
    else throw std::invalid_argument("circuit_from_json: unknown gate \"" + name + "\"");
    const bool two_qubit = g.kind == GateKind::CNOT || g.kind == GateKind::CZ;
    if (qubits.size() != (two_qubit ? 2u : 1u))
      throw std::invalid_argument("circuit_from_json: wrong qubit count for " + name);
    g.q0 = qubits[0];
    if (two_qubit) g.q1 = qubits[1];
    c.gates.push_back(g);
  }
  c.validate();
  return c;
}

json allocation_to_json(const ShotAllocation& alloc, const std::string& method,
                        const std::string& flavor, double kkt_residual) {
  json j = {{"M_tot", alloc.total()}, {"method", method}, {"flavor", flavor}};
  if (alloc.integral) {
    j["integer"] = alloc.integer_counts();
    j["continuous"] = alloc.shots;
  } else {
    j["continuous"] = alloc.shots;
  }
  if (kkt_residual >= 0) j["kkt_residual"] = kkt_residual;
  return j;
}

ShotAllocation allocation_from_json(const json& j) {
  ShotAllocation alloc;
  if (j.contains("integer")) {
    for (const auto c : j.at("integer").get<std::vector<std::uint64_t>>())
      alloc.shots.push_back(static_cast<double>(c));
    alloc.integral = true;
  } else {
    alloc.shots = j.at("continuous").get<std::vector<double>>();
  }
  alloc.validate();
  return alloc;
}

json variance_report_to_json(const std::string& grouping_id, const ShotAllocation& alloc,
                             const std::string& flavor, const VarianceBreakdown& breakdown) {
  return {{"grouping_id", grouping_id},
          {"allocation", alloc.shots},
          {"flavor", flavor},
          {"variance", breakdown.total},
          {"diagonal_part", breakdown.diagonal},
          {"covariance_part", breakdown.covariance}};
}

json hard_family_to_json(const HardFamilyInstance& instance) {
  json labels = json::array();
  for (std::size_t i = 0; i < instance.term_count(); ++i)
    labels.push_back(instance.label_string(i));
  // Bit-pack each adjacency row into a hex string, lowest index first.
  json adjacency = json::array();
  for (const auto& row : instance.abstract.adjacency) {
    std::string hex;
    for (std::size_t base = 0; base < row.size(); base += 4) {
      int nibble = 0;
      for (std::size_t b = 0; b < 4 && base + b < row.size(); ++b)
        if (row[base + b]) nibble |= 1 << b;
      hex.push_back("0123456789abcdef"[nibble]);
    }
    adjacency.push_back(std::move(hex));
  }
  return {{"L", instance.L},
          {"labels", std::move(labels)},
          {"coefficients", instance.abstract.coefficients},
          {"adjacency", std::move(adjacency)}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open JSON file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("JSON parse error in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write JSON file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace ogrp
