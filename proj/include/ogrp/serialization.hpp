#pragma once

#include <json.hpp>
#include <string>

#include "ogrp/allocation.hpp"
#include "ogrp/clifford.hpp"
#include "ogrp/grouping.hpp"
#include "ogrp/hamiltonian.hpp"
#include "ogrp/hard_family.hpp"
#include "ogrp/repacking.hpp"

namespace ogrp {

// Hamiltonian JSON: {"n": .., "terms": [{"c": .., "pauli": ".."}]}
nlohmann::json hamiltonian_to_json(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json(const nlohmann::json& j);

// Grouping JSON: {"disjoint": bool, "groups": [[indices...]]}; indices refer
// to the Hamiltonian file's term order.
nlohmann::json grouping_to_json(const Grouping& g);
Grouping grouping_from_json(const nlohmann::json& j);

// Repacked JSON extends the grouping JSON with the base grouping and, when
// recorded, the per-membership sign table.
nlohmann::json repacked_to_json(const RepackedGrouping& r);
RepackedGrouping repacked_from_json(const nlohmann::json& j);

// Circuit JSON: {"n": .., "gates": [{"gate": "H", "qubits": [0]}, ...]}
nlohmann::json circuit_to_json(const CliffordCircuit& c);
CliffordCircuit circuit_from_json(const nlohmann::json& j);

// Allocation JSON: {"M_tot", "continuous", "integer"?, "method", "flavor",
// "kkt_residual"?}
nlohmann::json allocation_to_json(const ShotAllocation& alloc, const std::string& method,
                                  const std::string& flavor, double kkt_residual = -1.0);
ShotAllocation allocation_from_json(const nlohmann::json& j);

// Variance report JSON.
nlohmann::json variance_report_to_json(const std::string& grouping_id,
                                       const ShotAllocation& alloc, const std::string& flavor,
                                       const VarianceBreakdown& breakdown);

// Instance JSON for the hard family: {"L", "labels", "coefficients",
// "adjacency"} with the adjacency bit-packed row-wise into hex strings.
nlohmann::json hard_family_to_json(const HardFamilyInstance& instance);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace ogrp
