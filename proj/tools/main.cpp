// Command-line surface for the grouping / repacking / allocation pipeline
// and the bundled desk-scale experiments. Exit codes: 0 success, 2 input
// or validation error, 3 numerical non-convergence.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ogrp/allocation.hpp"
#include "ogrp/hard_family.hpp"
#include "ogrp/parallel.hpp"
#include "ogrp/repacking.hpp"
#include "ogrp/serialization.hpp"
#include "ogrp/simulator.hpp"

using namespace ogrp;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

std::string g_invocation;

// ---------------------------------------------------------------------------
// Small shared helpers

std::vector<int> parse_int_list(const std::string& spec) {
  // "4,8,16" or "2..5" (inclusive range), or a mix: "2..4,8".
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    const auto dots = piece.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(piece.substr(0, dots));
      const int hi = std::stoi(piece.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("bad range \"" + piece + "\"");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else if (!piece.empty()) {
      out.push_back(std::stoi(piece));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list \"" + spec + "\"");
  return out;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot write CSV file: " + path);
    }
    auto& out = stream();
    out << "# ogrp csv schema=" << kSchemaVersion << "\n";
    out << "# invocation: " << g_invocation << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }

  void row(const std::vector<double>& values) {
    auto& out = stream();
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", values[i]);
      out << buf << (i + 1 < values.size() ? "," : "\n");
    }
  }

 private:
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  std::ofstream file_;
};

Grouping load_grouping_as_plain(const json& j) { return grouping_from_json(j); }

struct LoadedGrouping {
  Grouping effective;               // the grouping to estimate with
  std::optional<RepackedGrouping> repacked;

  const Grouping& allocation_base() const {
    return repacked ? repacked->base : effective;
  }
};

LoadedGrouping load_grouping_file(const std::string& path) {
  const json j = load_json_file(path);
  LoadedGrouping out;
  if (j.contains("base")) {
    out.repacked = repacked_from_json(j);
    out.effective = out.repacked->overlapped;
  } else {
    out.effective = load_grouping_as_plain(j);
  }
  return out;
}

void require_valid(const CommutationOracle& oracle, const Grouping& g, const std::string& what) {
  const auto violations = validate_grouping(oracle, g);
  if (!violations.empty()) {
    std::string msg = what + " failed validation:";
    for (const auto& v : violations) msg += "\n  " + v.describe();
    throw std::invalid_argument(msg);
  }
}

std::vector<Diagonalization> diagonalize_groups(const Hamiltonian& h, const Grouping& base) {
  std::vector<Diagonalization> out;
  out.reserve(base.group_count());
  for (const auto& group : base.groups) {
    std::vector<PauliString> members;
    members.reserve(group.size());
    for (const auto t : group) members.push_back(h.pauli(t));
    out.push_back(diagonalize(members));
  }
  return out;
}

struct MomentsChoice {
  std::unique_ptr<MomentsProvider> provider;
  std::string flavor;
};

MomentsChoice make_moments(const std::string& spec, const Hamiltonian& h) {
  MomentsChoice out;
  if (spec == "zerocov") {
    out.provider = std::make_unique<ZeroCovarianceMoments>(h.term_count());
    out.flavor = "zero-covariance";
  } else if (spec == "worstcase") {
    std::vector<double> coeffs;
    for (const auto& t : h.terms()) coeffs.push_back(t.coefficient);
    out.provider = std::make_unique<WorstCaseMoments>(std::move(coeffs));
    out.flavor = "worst-case";
  } else if (spec.rfind("state:", 0) == 0) {
    const auto psi = load_state_file(spec.substr(6));
    if (psi.num_qubits() != h.num_qubits())
      throw std::invalid_argument("state file has " + std::to_string(psi.num_qubits()) +
                                  " qubits, Hamiltonian has " + std::to_string(h.num_qubits()));
    out.provider = std::make_unique<ExactStateMoments>(psi, h);
    out.flavor = "exact-state";
  } else {
    throw std::invalid_argument("unknown moments spec \"" + spec +
                                "\" (expected zerocov, worstcase, or state:FILE)");
  }
  return out;
}

struct AllocationChoice {
  ShotAllocation alloc;
  std::string method;
  double kkt_residual = -1.0;
};

AllocationChoice make_allocation(const std::string& mode, const CommutationOracle& oracle,
                                 const LoadedGrouping& lg, const MomentsProvider& moments,
                                 double total) {
  AllocationChoice out;
  out.method = mode;
  const Grouping& base = lg.allocation_base();
  if (mode == "uniform") {
    out.alloc = ShotAllocation::uniform(lg.effective.group_count(), total);
  } else if (mode == "l1") {
    out.alloc = alloc_l1(oracle, base, total);
  } else if (mode == "l2" || mode == "inherit") {
    // "inherit" is the post-hoc workflow: keep the allocation the base
    // grouping was measured with (the zero-covariance closed form).
    out.alloc = alloc_l2(oracle, base, total);
  } else if (mode == "opt") {
    const auto result = alloc_optimize(oracle, lg.effective, moments, total);
    out.alloc = result.allocation;
    out.kkt_residual = result.kkt_residual;
  } else {
    throw std::invalid_argument("unknown allocation mode \"" + mode +
                                "\" (expected l1, l2, opt, uniform, or inherit)");
  }
  return out;
}

StateVector make_state(const std::string& spec, int n) {
  if (spec == "zero") return StateVector(n);
  if (spec.rfind("product:", 0) == 0) {
    Rng rng(std::stoull(spec.substr(8)));
    return random_product_state(n, rng);
  }
  if (spec.rfind("file:", 0) == 0) {
    auto psi = load_state_file(spec.substr(5));
    if (psi.num_qubits() != n)
      throw std::invalid_argument("state file has " + std::to_string(psi.num_qubits()) +
                                  " qubits, expected " + std::to_string(n));
    return psi;
  }
  throw std::invalid_argument("unknown state spec \"" + spec +
                              "\" (expected zero, product:SEED, or file:PATH)");
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_group(const std::string& ham_file, const std::string& out_file) {
  const auto h = load_hamiltonian_file(ham_file);
  const CommutationOracle oracle(h);
  const auto g = sorted_insertion(oracle);
  save_json_file(grouping_to_json(g), out_file);

  const auto norms = group_norms(oracle, g);
  std::cout << "terms: " << h.term_count() << "\n";
  std::cout << "groups: " << g.group_count() << "\n";
  for (std::size_t j = 0; j < g.group_count(); ++j)
    std::cout << "group " << j << ": size " << g.groups[j].size() << "  S=" << norms.squared[j]
              << "  L1=" << norms.l1[j] << "\n";
  std::cout << "wrote " << out_file << "\n";
  return 0;
}

int cmd_repack(const std::string& ham_file, const std::string& grouping_file,
               const std::string& mode, const std::string& out_file,
               const std::string& circuits_file) {
  const auto h = load_hamiltonian_file(ham_file);
  const CommutationOracle oracle(h);
  const auto base = load_grouping_as_plain(load_json_file(grouping_file));
  if (!base.disjoint)
    throw std::invalid_argument("repack expects a disjoint base grouping");
  require_valid(oracle, base, "base grouping");

  RepackedGrouping r;
  if (mode == "posthoc") {
    const auto diag = diagonalize_groups(h, base);
    r = posthoc_repack(h, base, diag);
    if (!circuits_file.empty()) {
      json circuits = json::array();
      for (const auto& d : diag) circuits.push_back(circuit_to_json(d.circuit));
      save_json_file(circuits, circuits_file);
    }
  } else if (mode == "adhoc") {
    r = adhoc_repack(oracle, base);
    if (!circuits_file.empty()) {
      // Circuits for the repacked groups; every member must come out diagonal.
      json circuits = json::array();
      for (const auto& group : r.overlapped.groups) {
        std::vector<PauliString> members;
        for (const auto t : group) members.push_back(h.pauli(t));
        circuits.push_back(circuit_to_json(diagonalize(members).circuit));
      }
      save_json_file(circuits, circuits_file);
    }
  } else {
    throw std::invalid_argument("unknown mode \"" + mode + "\" (expected posthoc or adhoc)");
  }
  save_json_file(repacked_to_json(r), out_file);

  const auto gamma = membership_map(r.overlapped, h.term_count());
  double mu_sum = 0;
  std::size_t mu_max = 0;
  for (const auto& row : gamma) {
    mu_sum += static_cast<double>(row.size());
    mu_max = std::max(mu_max, row.size());
  }
  std::size_t added = 0;
  for (std::size_t j = 0; j < r.group_count(); ++j)
    added += r.overlapped.groups[j].size() - r.base.groups[j].size();
  std::cout << "groups: " << r.group_count() << " (unchanged)\n";
  std::cout << "insertions: " << added << "\n";
  std::cout << "multiplicity: mean " << mu_sum / static_cast<double>(h.term_count()) << ", max "
            << mu_max << "\n";
  if (mode == "adhoc") std::cout << "maximal: " << (is_maximal(oracle, r.overlapped) ? "yes" : "no") << "\n";
  std::cout << "wrote " << out_file << "\n";
  return 0;
}

int cmd_variance(const std::string& ham_file, const std::string& grouping_file,
                 const std::string& alloc_mode, const std::string& moments_spec, double shots,
                 const std::string& out_file) {
  const auto h = load_hamiltonian_file(ham_file);
  const CommutationOracle oracle(h);
  const auto lg = load_grouping_file(grouping_file);
  require_valid(oracle, lg.effective, "grouping");

  const auto moments = make_moments(moments_spec, h);
  const auto choice = make_allocation(alloc_mode, oracle, lg, *moments.provider, shots);
  const auto weights = heuristic_weights(lg.effective, h.term_count(), choice.alloc);
  const auto breakdown =
      estimator_variance(oracle, lg.effective, weights, choice.alloc, *moments.provider);

  json report = variance_report_to_json(grouping_file, choice.alloc, moments.flavor, breakdown);
  report["allocation_method"] = choice.method;
  if (choice.kkt_residual >= 0) report["kkt_residual"] = choice.kkt_residual;
  if (out_file.empty())
    std::cout << report.dump(2) << "\n";
  else
    save_json_file(report, out_file);
  return 0;
}

int cmd_simulate(const std::string& ham_file, const std::string& grouping_file,
                 const std::string& state_spec, std::uint64_t shots, std::uint64_t reps,
                 std::uint64_t seed, const std::string& alloc_mode, const std::string& out_file) {
  const auto h = load_hamiltonian_file(ham_file);
  const CommutationOracle oracle(h);
  const auto lg = load_grouping_file(grouping_file);
  require_valid(oracle, lg.effective, "grouping");
  const auto psi = make_state(state_spec, h.num_qubits());

  const ExactStateMoments moments(psi, h);
  const auto choice = make_allocation(alloc_mode, oracle, lg, moments, static_cast<double>(shots));
  const auto alloc = round_allocation(choice.alloc, shots);
  const auto counts = alloc.integer_counts();
  const auto weights = heuristic_weights(lg.effective, h.term_count(), alloc);
  const double analytic =
      estimator_variance(oracle, lg.effective, weights, alloc, moments).total;
  const double exact_energy = moments.energy();

  const auto diag = diagonalize_groups(h, lg.allocation_base());

  std::vector<double> energies(reps);
  const Rng root(seed);
  parallel_for(reps, [&](std::size_t rep) {
    Rng rep_rng = root.split(rep);
    std::vector<GroupEstimates> samples;
    samples.reserve(lg.effective.group_count());
    for (std::size_t j = 0; j < lg.effective.group_count(); ++j) {
      Rng stream = rep_rng.split(j);
      samples.push_back(
          sample_group(psi, h, lg.effective.groups[j], diag[j].circuit, j, counts[j], stream)
              .estimates());
    }
    energies[rep] = empirical_energy(oracle, lg.effective, weights, samples);
  });

  CsvWriter csv(out_file, {"rep", "energy"});
  double sum = 0, sum_sq = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    csv.row({static_cast<double>(rep), energies[rep]});
    sum += energies[rep];
    sum_sq += energies[rep] * energies[rep];
  }

  const double mean = sum / static_cast<double>(reps);
  const double sample_var =
      reps > 1 ? (sum_sq - static_cast<double>(reps) * mean * mean) / static_cast<double>(reps - 1)
               : 0.0;
  std::cerr << "rng: " << Rng::name() << " seed " << seed << "\n";
  std::cerr << "exact energy: " << exact_energy << "\n";
  std::cerr << "empirical mean: " << mean << " (se " << std::sqrt(sample_var / static_cast<double>(reps))
            << ")\n";
  std::cerr << "sample variance: " << sample_var << "\n";
  std::cerr << "analytic variance: " << analytic << "\n";
  return 0;
}

int cmd_theorem1(const std::string& l_list, double shots, const std::string& out_file) {
  const auto ls = parse_int_list(l_list);
  CsvWriter csv(out_file, {"L", "terms", "groups", "var_sorted_insertion", "var_merged",
                           "var_repacked", "ratio_si_over_repacked", "ratio_si_over_merged"});
  for (const int L : ls) {
    const auto inst = build_hard_family(L);
    const auto v = hard_family_variances(inst, shots);
    csv.row({static_cast<double>(L), static_cast<double>(inst.term_count()),
             static_cast<double>(L), v.var_columns, v.var_merged, v.var_repacked,
             v.ratio_columns_over_repacked, v.ratio_columns_over_merged});
  }
  return 0;
}

int cmd_appendixA(const std::string& n_list, const std::string& out_file) {
  const auto ns = parse_int_list(n_list);
  CsvWriter csv(out_file, {"n", "total_variance", "diagonal", "ratio", "bound"});
  for (const int n : ns) {
    const auto h = gen_ising_all_to_all(n);
    const auto psi = ising_witness_state(n);
    const auto split = variance_covariance_split(psi, h);
    const double bound = 8.0 * (n - 1) / (static_cast<double>(n) * n * n);
    csv.row({static_cast<double>(n), split.total, split.diagonal, split.diagonal / split.total,
             bound});
  }
  return 0;
}

int cmd_appendixB(double c_a, double c_b, double c_c, double m1, double m2) {
  // Three jointly measurable observables A, B, C with [A,B] = [A,C] = 0,
  // grouped as {{A,C},{B}} and repacked to {{A,C},{A,B}} under the fixed
  // model var_A = cov_AB = 1, cov_AC = 0.
  AbstractHamiltonian abs;
  abs.coefficients = {c_a, c_b, c_c};
  abs.adjacency = {{true, true, true}, {true, true, false}, {true, false, true}};
  const CommutationOracle oracle(abs);

  UserMoments moments({1.0, 1.0, 1.0});
  moments.set_covariance(0, 1, 1.0);
  moments.set_covariance(0, 2, 0.0);

  const Grouping g{{{0, 2}, {1}}, true};
  const Grouping r{{{0, 2}, {1, 0}}, false};
  const ShotAllocation alloc{{m1, m2}, false};

  const double var_g = shot_weighted_variance(oracle, g, alloc, moments).total;
  const double var_r = shot_weighted_variance(oracle, r, alloc, moments).total;
  // General insertion criterion 2 c_A c_B cov_AB > (M2/M1)(c_A^2 var_A +
  // 2 c_A c_C cov_AC), here with var_A = cov_AB = 1 and cov_AC = 0. For
  // positive coefficients it reduces to the ratio form 2 M1/M2 > c_A/c_B;
  // with c_B < 0 the left side is negative and repacking always helps.
  const bool predicted_increase = 2.0 * c_a * c_b > (m2 / m1) * c_a * c_a;
  const bool observed_increase = var_r > var_g;

  json report = {{"cA", c_a},
                 {"cB", c_b},
                 {"cC", c_c},
                 {"M1", m1},
                 {"M2", m2},
                 {"var_grouping", var_g},
                 {"var_repacked", var_r},
                 {"delta", var_r - var_g},
                 {"criterion_lhs", 2.0 * m1 / m2},
                 {"criterion_rhs", c_a / c_b},
                 {"predicted_increase", predicted_increase},
                 {"observed_increase", observed_increase},
                 {"agree", predicted_increase == observed_increase}};
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_hubbard(const std::string& n_list, std::size_t states, std::uint64_t seed, double t,
                double V, const std::string& out_file) {
  const auto ns = parse_int_list(n_list);
  CsvWriter csv(out_file, {"n_cols", "qubits", "terms", "mean_diagonal", "se_diagonal",
                           "mean_covariance", "se_covariance", "mean_total"});
  const Rng root(seed);
  for (std::size_t point = 0; point < ns.size(); ++point) {
    const int n = ns[point];
    const auto h = gen_hubbard_spinless_2xn(n, t, V);
    if (h.num_qubits() > kMaxSimQubits)
      throw std::invalid_argument("hubbard: 2x" + std::to_string(n) + " needs " +
                                  std::to_string(h.num_qubits()) + " qubits, cap is " +
                                  std::to_string(kMaxSimQubits));
    std::vector<double> diag(states), cov(states), total(states);
    const Rng point_rng = root.split(point);
    parallel_for(states, [&](std::size_t s) {
      Rng stream = point_rng.split(s);
      const auto psi = random_product_state(h.num_qubits(), stream);
      const auto split = variance_covariance_split(psi, h);
      diag[s] = split.diagonal;
      cov[s] = split.covariance;
      total[s] = split.total;
    });
    auto mean_se = [](const std::vector<double>& xs) {
      double m = 0;
      for (const double x : xs) m += x;
      m /= static_cast<double>(xs.size());
      double var = 0;
      for (const double x : xs) var += (x - m) * (x - m);
      var /= static_cast<double>(xs.size() - 1);
      return std::pair<double, double>{m, std::sqrt(var / static_cast<double>(xs.size()))};
    };
    const auto [md, sd] = mean_se(diag);
    const auto [mc, sc] = mean_se(cov);
    const auto [mt, st] = mean_se(total);
    csv.row({static_cast<double>(n), static_cast<double>(h.num_qubits()),
             static_cast<double>(h.term_count()), md, sd, mc, sc, mt});
  }
  return 0;
}

int cmd_random_scaling(const std::string& n_list, double density, std::uint64_t seed,
                       const std::string& out_file) {
  const auto ns = parse_int_list(n_list);
  for (const int n : ns)
    if (n > 10)
      throw std::invalid_argument("random-scaling: n = " + std::to_string(n) +
                                  " exceeds the desk-scale cap of 10");
  CsvWriter csv(out_file,
                {"n", "terms", "groups", "var_sorted_insertion", "var_posthoc_inherit",
                 "var_adhoc_inherit", "var_adhoc_opt", "ratio_posthoc", "ratio_adhoc_inherit",
                 "ratio_adhoc_opt"});
  for (std::size_t point = 0; point < ns.size(); ++point) {
    const int n = ns[point];
    const auto h = gen_random(n, density, Rng(seed).split(point).seed());
    const CommutationOracle oracle(h);
    const auto g = sorted_insertion(oracle);
    const ZeroCovarianceMoments moments(h.term_count());
    const double total = 1.0;

    const auto inherit = alloc_l2(oracle, g, total);
    const double var_si = shot_weighted_variance(oracle, g, inherit, moments).total;

    const auto posthoc = posthoc_repack(h, g, diagonalize_groups(h, g));
    const double var_post =
        shot_weighted_variance(oracle, posthoc.overlapped, inherit, moments).total;

    const auto adhoc = adhoc_repack(oracle, g);
    const double var_adhoc =
        shot_weighted_variance(oracle, adhoc.overlapped, inherit, moments).total;
    const auto opt = alloc_optimize(oracle, adhoc.overlapped, moments, total);
    const double var_adhoc_opt = opt.variance;

    csv.row({static_cast<double>(n), static_cast<double>(h.term_count()),
             static_cast<double>(g.group_count()), var_si, var_post, var_adhoc, var_adhoc_opt,
             var_si / var_post, var_si / var_adhoc, var_si / var_adhoc_opt});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ostringstream inv;
  for (int i = 0; i < argc; ++i) inv << (i ? " " : "") << argv[i];
  g_invocation = inv.str();

  CLI::App app{"Measurement grouping, repacking, and shot allocation for Pauli Hamiltonians"};
  app.require_subcommand(1);

  // group
  std::string ham_file, grouping_file, out_file, circuits_file;
  auto* group = app.add_subcommand("group", "Sorted-insertion grouping of a Hamiltonian file");
  group->add_option("ham_file", ham_file, "Hamiltonian .ham file")->required();
  group->add_option("--out", out_file, "output grouping JSON")->required();

  // repack
  std::string mode = "adhoc";
  auto* repack = app.add_subcommand("repack", "Repack a disjoint grouping into an overlapped one");
  repack->add_option("ham_file", ham_file, "Hamiltonian .ham file")->required();
  repack->add_option("grouping_file", grouping_file, "grouping JSON")->required();
  repack->add_option("--mode", mode, "posthoc or adhoc")->required();
  repack->add_option("--out", out_file, "output repacked JSON")->required();
  repack->add_option("--circuits-out", circuits_file, "optional circuit JSON output");

  // variance
  std::string alloc_mode = "l2", moments_spec = "zerocov";
  double shots_real = 1.0;
  auto* variance = app.add_subcommand("variance", "Analytic estimator variance report");
  variance->add_option("ham_file", ham_file)->required();
  variance->add_option("grouping_file", grouping_file, "grouping or repacked JSON")->required();
  variance->add_option("--alloc", alloc_mode, "l1|l2|opt|uniform|inherit (default l2)");
  variance->add_option("--moments", moments_spec, "zerocov|worstcase|state:FILE (default zerocov)");
  variance->add_option("--shots", shots_real, "total measurement budget (default 1)");
  variance->add_option("--out", out_file, "output JSON (stdout when omitted)");

  // simulate
  std::string state_spec = "zero";
  std::uint64_t shots = 1000, reps = 100, seed = 1;
  auto* simulate = app.add_subcommand("simulate", "Sample the grouped estimator on a state");
  simulate->add_option("ham_file", ham_file)->required();
  simulate->add_option("grouping_file", grouping_file, "grouping or repacked JSON")->required();
  simulate->add_option("--state", state_spec, "zero|product:SEED|file:PATH")->required();
  simulate->add_option("--shots", shots, "total shots per repetition")->required();
  simulate->add_option("--reps", reps, "number of repetitions")->required();
  simulate->add_option("--seed", seed, "experiment seed");
  simulate->add_option("--alloc", alloc_mode, "allocation mode (default l2)");
  simulate->add_option("--out", out_file, "CSV output (stdout when omitted)");

  // theorem1
  std::string l_list = "4,8,16,32";
  auto* theorem1 = app.add_subcommand("theorem1", "Adversarial-family variance sweep");
  theorem1->add_option("--L-list", l_list, "comma list / a..b ranges (default 4,8,16,32)");
  theorem1->add_option("--shots", shots_real, "total budget (default 1)");
  theorem1->add_option("--out", out_file, "CSV output (stdout when omitted)");

  // appendixA
  std::string n_list_witness = "4,6,8";
  auto* appendix_a = app.add_subcommand("appendixA", "Ising witness variance/covariance split");
  appendix_a->add_option("--n-list", n_list_witness, "even qubit counts (default 4,6,8)");
  appendix_a->add_option("--out", out_file, "CSV output (stdout when omitted)");

  // appendixB
  double c_a = 1.0, c_b = 1.0, c_c = 1.0, m1 = 1.0, m2 = 1.0;
  auto* appendix_b = app.add_subcommand("appendixB", "Three-operator repacking failure mode");
  appendix_b->add_option("--cA", c_a)->required();
  appendix_b->add_option("--cB", c_b)->required();
  appendix_b->add_option("--M1", m1)->required();
  appendix_b->add_option("--M2", m2)->required();
  appendix_b->add_option("--cC", c_c, "third coefficient (default 1)");

  // hubbard
  std::size_t states = 200;
  double hop_t = 1.0, int_v = 1.0;
  std::string n_list_hubbard = "2..5";
  auto* hubbard = app.add_subcommand("hubbard", "Variance/covariance split over product states");
  hubbard->add_option("--n-list", n_list_hubbard, "lattice widths (default 2..5)");
  hubbard->add_option("--states", states, "product states per size (default 200)");
  hubbard->add_option("--seed", seed, "ensemble seed");
  hubbard->add_option("--t", hop_t, "hopping (default 1)");
  hubbard->add_option("--V", int_v, "interaction (default 1)");
  hubbard->add_option("--out", out_file, "CSV output (stdout when omitted)");

  // random-scaling
  double density = 0.1;
  std::string n_list_random = "4..8";
  auto* random_scaling =
      app.add_subcommand("random-scaling", "Repacking variance reduction on random Hamiltonians");
  random_scaling->add_option("--n-list", n_list_random, "qubit counts, max 10 (default 4..8)");
  random_scaling->add_option("--density", density, "fraction of all Pauli strings (default 0.1)");
  random_scaling->add_option("--seed", seed, "instance seed");
  random_scaling->add_option("--out", out_file, "CSV output (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (group->parsed()) return cmd_group(ham_file, out_file);
    if (repack->parsed()) return cmd_repack(ham_file, grouping_file, mode, out_file, circuits_file);
    if (variance->parsed())
      return cmd_variance(ham_file, grouping_file, alloc_mode, moments_spec, shots_real, out_file);
    if (simulate->parsed())
      return cmd_simulate(ham_file, grouping_file, state_spec, shots, reps, seed, alloc_mode,
                          out_file);
    if (theorem1->parsed()) return cmd_theorem1(l_list, shots_real, out_file);
    if (appendix_a->parsed()) return cmd_appendixA(n_list_witness, out_file);
    if (appendix_b->parsed()) return cmd_appendixB(c_a, c_b, c_c, m1, m2);
    if (hubbard->parsed())
      return cmd_hubbard(n_list_hubbard, states, seed, hop_t, int_v, out_file);
    if (random_scaling->parsed())
      return cmd_random_scaling(n_list_random, density, seed, out_file);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << " (residual " << e.residual << ")\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
