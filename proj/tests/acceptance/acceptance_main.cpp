// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exit status is the number of failed criteria. The CLI-driven criteria
// need OGRP_CLI to point at the built binary (ctest sets it).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ogrp/allocation.hpp"
#include "ogrp/hard_family.hpp"
#include "ogrp/parallel.hpp"
#include "ogrp/repacking.hpp"
#include "ogrp/serialization.hpp"
#include "ogrp/simulator.hpp"
#include "support/dense.hpp"

using namespace ogrp;
namespace fs = std::filesystem;
namespace ot = ogrp::testing;

namespace {

struct Failure {
  std::string reason;
};

void require(bool ok, const std::string& reason) {
  if (!ok) throw Failure{reason};
}

// ---------------------------------------------------------------------------
// CLI helpers

std::string cli_binary() {
  const char* env = std::getenv("OGRP_CLI");
  return env ? env : "";
}

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "ogrp_acceptance";
  fs::create_directories(dir);
  return dir;
}

void run_cli(const std::string& args) {
  const std::string bin = cli_binary();
  require(!bin.empty() && fs::exists(bin), "OGRP_CLI does not point at the built binary");
  const std::string cmd = bin + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  require(WEXITSTATUS(status) == 0, "command failed: " + cmd);
}

using CsvRows = std::vector<std::map<std::string, double>>;

CsvRows read_csv(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read " + path.string());
  std::string line;
  std::vector<std::string> header;
  CsvRows rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (header.empty()) {
      header = fields;
      continue;
    }
    std::map<std::string, double> row;
    for (std::size_t i = 0; i < fields.size() && i < header.size(); ++i)
      row[header[i]] = std::stod(fields[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct OriginFit {
  double slope;
  double r_squared;
};

OriginFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  double num = 0, den = 0, mean = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += x[i] * y[i];
    den += x[i] * x[i];
    mean += y[i];
  }
  const double slope = num / den;
  mean /= static_cast<double>(y.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_res += (y[i] - slope * x[i]) * (y[i] - slope * x[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  return {slope, 1.0 - ss_res / ss_tot};
}

Grouping random_disjoint_grouping(const CommutationOracle& oracle, Rng& rng) {
  std::vector<std::size_t> order(oracle.term_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next_below(i)]);
  Grouping g;
  g.disjoint = true;
  for (const std::size_t t : order) {
    bool placed = false;
    for (auto& group : g.groups) {
      bool ok = true;
      for (const auto m : group) ok = ok && oracle.commutes(t, m);
      if (ok) {
        group.push_back(t);
        placed = true;
        break;
      }
    }
    if (!placed) g.groups.push_back({t});
  }
  return g;
}

// ---------------------------------------------------------------------------
// Criteria

// 1. Ratios from the adversarial family grow linearly through the origin.
void criterion_1() {
  const auto csv = work_dir() / "theorem1.csv";
  run_cli("theorem1 --L-list 4,8,16,32 --out " + csv.string());
  const auto rows = read_csv(csv);
  require(rows.size() == 4, "expected 4 rows");
  std::vector<double> ls, ratios;
  for (const auto& row : rows) {
    require(row.at("var_repacked") <= row.at("var_merged") + 1e-9,
            "repacked variance above the merged grouping");
    ls.push_back(row.at("L"));
    ratios.push_back(row.at("ratio_si_over_repacked"));
  }
  const auto fit = fit_through_origin(ls, ratios);
  require(fit.slope > 0, "non-positive slope");
  require(fit.r_squared >= 0.95,
          "R^2 = " + std::to_string(fit.r_squared) + " below 0.95");
}

// 2. Closed forms at L = 2 in the unperturbed limit.
void criterion_2() {
  const auto inst = build_hard_family(2, 0.0);
  const CommutationOracle oracle(inst.abstract);
  const auto g = canonical_groupings(inst);
  const double var_columns = min_variance_disjoint(oracle, g.columns, 1.0);
  const double var_merged = min_variance_disjoint(oracle, g.merged, 1.0);
  const double expected = std::pow(std::sqrt(3.0) + std::sqrt(2.0), 2);
  require(std::abs(var_columns - expected) < 1e-9,
          "sorted-insertion variance " + std::to_string(var_columns));
  require(std::abs(var_merged - 9.0) < 1e-9, "merged variance " + std::to_string(var_merged));
}

// 3. Repacking never increases the shot-weighted variance under zero
//    covariance, strictly when an inserted term has positive variance.
void criterion_3() {
  Rng rng(2025);
  int instances = 0, strict_checks = 0;
  while (instances < 500) {
    const int nq = 2 + static_cast<int>(rng.next_below(5));  // 2..6 qubits
    const double pool = static_cast<double>((std::uint64_t(1) << (2 * nq)) - 1);
    const double density = std::max(0.02 + 0.08 * rng.next_double(), 3.0 / pool);
    const auto h = gen_random(nq, density, rng.next_u64());
    if (h.term_count() < 2) continue;
    const CommutationOracle oracle(h);
    const Grouping g = random_disjoint_grouping(oracle, rng);

    std::vector<double> vars(h.term_count());
    for (auto& v : vars) v = rng.next_below(5) == 0 ? 0.0 : rng.next_double();
    UserMoments moments(vars);
    for (std::size_t i = 0; i < h.term_count(); ++i)
      for (std::size_t k = i + 1; k < h.term_count(); ++k)
        if (oracle.commutes(i, k)) moments.set_covariance(i, k, 0.0);

    ShotAllocation alloc{{}, false};
    for (std::size_t j = 0; j < g.group_count(); ++j)
      alloc.shots.push_back(0.5 + 7.5 * rng.next_double());

    const auto repacked =
        rng.next_bool() ? adhoc_repack(oracle, g)
                        : complete_to_maximal(oracle, {g, Grouping{g.groups, false}, {}});

    bool strict_expected = false;
    for (std::size_t j = 0; j < repacked.group_count(); ++j)
      for (const auto t : repacked.overlapped.groups[j])
        if (!g.group_contains(j, t) && vars[t] > 0) strict_expected = true;

    const double var_g = shot_weighted_variance(oracle, g, alloc, moments).total;
    const double var_r =
        shot_weighted_variance(oracle, repacked.overlapped, alloc, moments).total;
    require(var_r <= var_g + 1e-12, "variance increased under zero covariance");
    if (strict_expected) {
      require(var_r < var_g, "no strict decrease despite a positive-variance insertion");
      ++strict_checks;
    }
    ++instances;
  }
  require(strict_checks > 100, "too few strict-decrease cases exercised");
}

// 4. One-step insertion criterion agrees in sign with the direct variance
//    difference.
void criterion_4() {
  Rng rng(777);
  int tested = 0;
  while (tested < 10000) {
    const std::size_t n = 2 + rng.next_below(4);  // up to 5 terms
    AbstractHamiltonian a;
    a.coefficients.resize(n);
    for (auto& c : a.coefficients) {
      c = rng.next_in(-2, 2);
      if (c == 0) c = 0.5;
    }
    a.adjacency.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      a.adjacency[i][i] = true;
      for (std::size_t k = i + 1; k < n; ++k) {
        const bool adj = rng.next_below(3) > 0;
        a.adjacency[i][k] = adj;
        a.adjacency[k][i] = adj;
      }
    }
    const CommutationOracle oracle(a);
    Grouping r = random_disjoint_grouping(oracle, rng);
    r.disjoint = false;
    // Occasionally pre-insert to start from a genuinely overlapped grouping.
    for (int extra = 0; extra < 2; ++extra) {
      std::vector<std::pair<std::size_t, std::size_t>> legal;
      for (std::size_t j = 0; j < r.group_count(); ++j)
        for (std::size_t i = 0; i < n; ++i) {
          if (r.group_contains(j, i)) continue;
          bool ok = true;
          for (const auto m : r.groups[j]) ok = ok && oracle.commutes(i, m);
          if (ok) legal.push_back({j, i});
        }
      if (legal.empty() || rng.next_bool()) break;
      const auto [j, i] = legal[rng.next_below(legal.size())];
      r.groups[j].push_back(i);
    }

    std::vector<std::pair<std::size_t, std::size_t>> legal;
    for (std::size_t j = 0; j < r.group_count(); ++j)
      for (std::size_t i = 0; i < n; ++i) {
        if (r.group_contains(j, i)) continue;
        bool ok = true;
        for (const auto m : r.groups[j]) ok = ok && oracle.commutes(i, m);
        if (ok) legal.push_back({j, i});
      }
    if (legal.empty()) continue;
    const auto [ell, s] = legal[rng.next_below(legal.size())];

    std::vector<double> vars(n);
    for (auto& v : vars) v = rng.next_double();
    UserMoments moments(vars);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k)
        if (oracle.commutes(i, k)) moments.set_covariance(i, k, rng.next_in(-1, 1));

    ShotAllocation alloc{{}, false};
    for (std::size_t j = 0; j < r.group_count(); ++j)
      alloc.shots.push_back(1.0 + static_cast<double>(rng.next_below(6)));

    const auto d = one_step_delta(oracle, r, ell, s, moments, alloc);
    const double margin = d.criterion_lhs - d.criterion_rhs;
    // Sign agreement, with the stated boundary tolerance.
    if (std::abs(d.delta) > 1e-10 || std::abs(margin) > 1e-10) {
      require((margin >= -1e-10) == (d.delta >= -1e-10),
              "criterion sign disagrees with the direct difference (delta " +
                  std::to_string(d.delta) + ", margin " + std::to_string(margin) + ")");
    }
    ++tested;
  }
}

// 5. The numerical weight optimizer lands on the shot-weighted closed form
//    under zero covariance.
void criterion_5() {
  Rng rng(4242);
  int tested = 0;
  while (tested < 100) {
    const int nq = 2 + static_cast<int>(rng.next_below(3));
    const auto h = gen_random(nq, 0.05 + 0.1 * rng.next_double(), rng.next_u64());
    const CommutationOracle oracle(h);
    auto g = sorted_insertion(oracle);
    g.disjoint = false;
    bool overlapped = false;
    for (std::size_t i = 0; i < h.term_count(); ++i)
      for (std::size_t j = 0; j < g.group_count(); ++j) {
        if (g.group_contains(j, i)) continue;
        bool ok = true;
        for (const auto m : g.groups[j]) ok = ok && oracle.commutes(i, m);
        if (ok && rng.next_bool()) {
          g.groups[j].push_back(i);
          overlapped = true;
        }
      }
    if (!overlapped) continue;

    std::vector<double> vars(h.term_count());
    for (auto& v : vars) v = 0.1 + 0.9 * rng.next_double();  // bounded away from zero
    UserMoments moments(vars);
    for (const auto& group : g.groups)
      for (std::size_t a = 0; a < group.size(); ++a)
        for (std::size_t b = a + 1; b < group.size(); ++b)
          moments.set_covariance(group[a], group[b], 0.0);

    ShotAllocation alloc{{}, false};
    for (std::size_t j = 0; j < g.group_count(); ++j)
      alloc.shots.push_back(0.5 + 4.0 * rng.next_double());

    const auto gamma = membership_map(g, h.term_count());
    OptimalWeightsOptions opts;
    opts.force_numerical = true;
    opts.initial.resize(h.term_count());  // uniform split, away from the optimum
    for (std::size_t i = 0; i < h.term_count(); ++i)
      opts.initial[i].assign(gamma[i].size(), 1.0 / static_cast<double>(gamma[i].size()));

    const auto numerical = optimal_weights(oracle, g, alloc, moments, opts);
    const auto closed = heuristic_weights(g, h.term_count(), alloc);
    for (std::size_t i = 0; i < h.term_count(); ++i)
      for (std::size_t a = 0; a < gamma[i].size(); ++a)
        require(std::abs(numerical.w[i][a] - closed.w[i][a]) < 1e-6,
                "optimizer missed the closed form by " +
                    std::to_string(std::abs(numerical.w[i][a] - closed.w[i][a])));
    ++tested;
  }
}

// 6. Witness-state variance split for the all-to-all Ising model.
void criterion_6() {
  const auto csv = work_dir() / "appendixA.csv";
  run_cli("appendixA --n-list 4,6,8 --out " + csv.string());
  const auto rows = read_csv(csv);
  require(rows.size() == 3, "expected 3 rows");
  for (const auto& row : rows) {
    const double n = row.at("n");
    const double expected_total = std::pow(n, 4) / 16.0;
    require(std::abs(row.at("total_variance") - expected_total) <= 1e-8 * expected_total,
            "total variance off at n = " + std::to_string(n));
    require(row.at("diagonal") <= n * (n - 1) / 2.0 + 1e-12,
            "diagonal above the squared coefficient norm");
    require(row.at("ratio") <= row.at("bound") + 1e-12, "diagonal fraction above the bound");
  }
}

// 7. Three-operator failure mode: increase iff 2 M1/M2 > c_A/c_B on a grid.
void criterion_7() {
  AbstractHamiltonian abs;
  abs.adjacency = {{true, true, true}, {true, true, false}, {true, false, true}};
  const Grouping g{{{0, 2}, {1}}, true};
  const Grouping r{{{0, 2}, {1, 0}}, false};

  int checked = 0;
  for (int a = 0; a < 20; ++a) {
    for (int b = 0; b < 20; ++b) {
      const double c_a = 0.13 + 0.19 * a;     // 0.13 .. 3.74
      const double m1 = 0.7 + 1.9 * b;        // 0.7 .. 36.8
      const double c_b = 1.0, c_c = 0.8, m2 = 10.0;
      if (std::abs(2.0 * m1 / m2 - c_a / c_b) <= 1e-10) continue;  // boundary

      abs.coefficients = {c_a, c_b, c_c};
      const CommutationOracle oracle(abs);
      UserMoments moments({1.0, 1.0, 1.0});
      moments.set_covariance(0, 1, 1.0);  // cov_AB = 1
      moments.set_covariance(0, 2, 0.0);  // cov_AC = 0
      const ShotAllocation alloc{{m1, m2}, false};

      const double var_g = shot_weighted_variance(oracle, g, alloc, moments).total;
      const double var_r = shot_weighted_variance(oracle, r, alloc, moments).total;
      const bool predicted = 2.0 * m1 / m2 > c_a / c_b;
      const bool observed = var_r > var_g;
      require(predicted == observed,
              "misclassified at cA=" + std::to_string(c_a) + " M1=" + std::to_string(m1));
      ++checked;
    }
  }
  require(checked >= 395, "grid unexpectedly small");
}

// 8. Hubbard variance/covariance split over random product states.
void criterion_8() {
  const auto csv = work_dir() / "hubbard.csv";
  run_cli("hubbard --n-list 2..5 --states 200 --seed 11 --out " + csv.string());
  const auto rows = read_csv(csv);
  require(rows.size() == 4, "expected 4 rows");
  std::vector<double> sites, mean_diag;
  for (const auto& row : rows) {
    require(std::abs(row.at("mean_covariance")) <= 3.0 * row.at("se_covariance"),
            "mean covariance beyond 3 standard errors of zero at n = " +
                std::to_string(row.at("n_cols")));
    sites.push_back(row.at("qubits"));
    mean_diag.push_back(row.at("mean_diagonal"));
  }
  for (std::size_t i = 1; i < mean_diag.size(); ++i)
    require(mean_diag[i] > mean_diag[i - 1], "mean diagonal part not increasing");
  // Linear fit quality (slope + intercept).
  const double n = static_cast<double>(sites.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    sx += sites[i];
    sy += mean_diag[i];
    sxx += sites[i] * sites[i];
    sxy += sites[i] * mean_diag[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double pred = slope * sites[i] + intercept;
    ss_res += (mean_diag[i] - pred) * (mean_diag[i] - pred);
    ss_tot += (mean_diag[i] - sy / n) * (mean_diag[i] - sy / n);
  }
  require(1.0 - ss_res / ss_tot >= 0.9, "linear fit R^2 below 0.9");
}

// 9. Sampling fidelity at n = 3 with 1e5 repetitions.
void criterion_9() {
  const auto h = gen_random(3, 0.15, 23);
  const CommutationOracle oracle(h);
  const auto g = sorted_insertion(oracle);
  std::vector<Diagonalization> diag;
  for (const auto& group : g.groups) {
    std::vector<PauliString> members;
    for (const auto t : group) members.push_back(h.pauli(t));
    diag.push_back(diagonalize(members));
  }
  const auto r = posthoc_repack(h, g, diag);

  Rng rng(90210);
  const auto psi = random_product_state(3, rng);
  const ExactStateMoments moments(psi, h);
  const double exact_energy = moments.energy();

  const auto alloc = round_allocation(alloc_l2(oracle, g, 60.0), 60);
  const auto counts = alloc.integer_counts();
  const auto weights = heuristic_weights(r.overlapped, h.term_count(), alloc);
  const double analytic =
      estimator_variance(oracle, r.overlapped, weights, alloc, moments).total;

  const std::size_t reps = 100000;
  std::vector<double> energies(reps);
  const Rng root(31337);
  parallel_for(reps, [&](std::size_t rep) {
    Rng rep_rng = root.split(rep);
    std::vector<GroupEstimates> samples;
    for (std::size_t j = 0; j < r.group_count(); ++j) {
      Rng stream = rep_rng.split(j);
      samples.push_back(
          sample_group(psi, h, r.overlapped.groups[j], diag[j].circuit, j, counts[j], stream)
              .estimates());
    }
    energies[rep] = empirical_energy(oracle, r.overlapped, weights, samples);
  });

  double sum = 0, sum_sq = 0;
  for (const double e : energies) {
    sum += e;
    sum_sq += e * e;
  }
  const double mean = sum / static_cast<double>(reps);
  const double var =
      (sum_sq - static_cast<double>(reps) * mean * mean) / static_cast<double>(reps - 1);

  const double mean_band = 5.0 * std::sqrt(analytic / static_cast<double>(reps));
  require(std::abs(mean - exact_energy) <= mean_band,
          "empirical mean off by " + std::to_string(std::abs(mean - exact_energy)) +
              " (band " + std::to_string(mean_band) + ")");
  const double var_band = 5.0 * analytic * std::sqrt(2.0 / static_cast<double>(reps - 1));
  require(std::abs(var - analytic) <= var_band,
          "empirical variance " + std::to_string(var) + " vs analytic " +
              std::to_string(analytic) + " (band " + std::to_string(var_band) + ")");
}

// 10. Clifford synthesis: exact dense images for members and post-hoc
//     additions, plus exact parity-with-sign expectations.
void criterion_10() {
  Rng rng(555);
  int sets = 0;
  while (sets < 200) {
    const int n = 2 + static_cast<int>(rng.next_below(4));  // 2..5 qubits

    // Random commuting set: conjugated Z-strings under a random circuit.
    CliffordCircuit scramble{n, {}};
    for (int k = 0; k < 3 * n + 4; ++k) {
      const auto kind = static_cast<GateKind>(rng.next_below(6));
      Gate gate{kind, static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)))};
      if (kind == GateKind::CNOT || kind == GateKind::CZ) {
        if (n < 2) continue;
        do {
          gate.q1 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        } while (gate.q1 == gate.q0);
      }
      scramble.gates.push_back(gate);
    }
    const std::size_t size = 1 + rng.next_below(static_cast<std::uint64_t>(n));
    std::vector<PauliString> group;
    for (std::size_t k = 0; k < size; ++k) {
      PauliString z(n);
      std::uint64_t mask = 1 + rng.next_below((std::uint64_t(1) << n) - 1);
      for (int q = 0; q < n; ++q)
        if ((mask >> q) & 1) z.set_z(q, true);
      const auto p = conjugate(scramble, z).pauli;
      bool dup = false;
      for (const auto& existing : group) dup = dup || existing == p;
      if (!dup) group.push_back(p);
    }

    const auto d = diagonalize(group);
    const ot::Mat u = ot::dense_circuit(d.circuit);

    auto check_dense = [&](const PauliString& p, const SignedPauli& img) {
      require(img.pauli.is_z_diagonal(), "image not Z-diagonal");
      const ot::Mat lhs = u * ot::dense_pauli(p) * u.adjoint();
      const ot::Mat rhs = static_cast<double>(img.sign) * ot::dense_pauli(img.pauli);
      require((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10, "dense conjugation mismatch");
    };
    for (std::size_t i = 0; i < group.size(); ++i) check_dense(group[i], d.images[i]);

    // Post-hoc additions: any random Pauli whose image is Z-diagonal.
    int added = 0;
    for (int trial = 0; trial < 12; ++trial) {
      PauliString p(n);
      for (int q = 0; q < n; ++q) {
        p.set_x(q, rng.next_bool());
        p.set_z(q, rng.next_bool());
      }
      if (p.is_identity()) continue;
      const auto img = conjugate(d.circuit, p);
      if (!img.pauli.is_z_diagonal()) continue;
      check_dense(p, img);
      ++added;
    }

    // Parity-with-sign expectations, exhaustive over the basis.
    Rng state_rng = rng.split(sets);
    const auto psi = random_product_state(n, state_rng);
    const auto rotated = apply_circuit(psi, d.circuit);
    for (std::size_t i = 0; i < group.size(); ++i) {
      const std::uint64_t mask = d.images[i].pauli.z_mask_index_space();
      double weighted = 0;
      for (std::size_t b = 0; b < rotated.dim(); ++b) {
        const int parity = __builtin_popcountll(b & mask) & 1 ? -1 : 1;
        weighted += d.images[i].sign * parity * std::norm(rotated.amp(b));
      }
      require(std::abs(weighted - expectation(psi, group[i])) < 1e-9,
              "parity-with-sign expectation mismatch");
    }
    ++sets;
  }
}

// 11. Out-of-reach declaration plus the desk-scale random sweep.
void criterion_11() {
  std::cout << "    note: molecular benchmarks (tens of qubits, 1e5+ terms) and the\n"
               "    12-qubit random instances are not reproduced at desk scale; the\n"
               "    mechanisms are covered by criteria 3 and 8 and the sweep below.\n";
  const auto csv = work_dir() / "random_scaling.csv";
  run_cli("random-scaling --n-list 4..8 --density 0.1 --seed 7 --out " + csv.string());
  const auto rows = read_csv(csv);
  require(rows.size() == 5, "expected 5 rows");
  for (const auto& row : rows) {
    require(row.at("ratio_posthoc") >= 1.0, "post-hoc ratio below 1");
    require(row.at("ratio_adhoc_inherit") >= 1.0, "ad-hoc ratio below 1");
    require(row.at("ratio_adhoc_opt") >= 1.0, "optimized ad-hoc ratio below 1");
    require(row.at("ratio_adhoc_opt") >= row.at("ratio_adhoc_inherit") - 1e-12,
            "optimized allocation worse than inherited");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "adversarial-family ratio grows linearly (R^2 >= 0.95, repacked <= merged)", criterion_1},
      {2, "closed-form variances at L = 2", criterion_2},
      {3, "zero-covariance monotonicity over 500 random repackings", criterion_3},
      {4, "one-step criterion sign agreement over 10000 triples", criterion_4},
      {5, "numerical weight optimizer reproduces the shot-weighted form", criterion_5},
      {6, "Ising witness variance split (n = 4, 6, 8)", criterion_6},
      {7, "three-operator failure-mode grid (20 x 20)", criterion_7},
      {8, "Hubbard variance/covariance split over product states", criterion_8},
      {9, "sampling fidelity over 1e5 repetitions at n = 3", criterion_9},
      {10, "Clifford correctness on 200 random commuting sets", criterion_10},
      {11, "out-of-reach results declared; desk-scale sweep ratios >= 1", criterion_11},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string verdict = "PASS", detail;
    try {
      c.run();
    } catch (const Failure& f) {
      verdict = "FAIL";
      detail = f.reason;
      ++failures;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string("exception: ") + e.what();
      ++failures;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::printf("%s  criterion %2d  [%6lld ms]  %s%s%s\n", verdict.c_str(), c.number,
                static_cast<long long>(ms), c.name, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
