#include <doctest.h>

#include <cmath>
#include <vector>

#include "ogrp/estimator.hpp"
#include "ogrp/rng.hpp"

using namespace ogrp;

namespace {

// Four terms with S = (2, 8) under the natural grouping: coefficients
// (1, 1) and (2, 2).
Hamiltonian two_block_hamiltonian() {
  return parse_hamiltonian("1.0 ZI\n1.0 IZ\n2.0 XX\n2.0 YY\n");
}

UserMoments zero_cov_unit_var(std::size_t n, const Grouping& g) {
  UserMoments m(std::vector<double>(n, 1.0));
  for (const auto& group : g.groups)
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b)
        m.set_covariance(group[a], group[b], 0.0);
  return m;
}

}  // namespace

TEST_CASE("ShotAllocation validation and integer counts") {
  ShotAllocation a{{2.0, 3.0}, false};
  a.validate();
  CHECK(a.total() == 5.0);
  CHECK_THROWS_AS(a.integer_counts(), std::invalid_argument);

  ShotAllocation b{{2.0, 3.0}, true};
  CHECK(b.integer_counts() == std::vector<std::uint64_t>{2, 3});

  CHECK_THROWS_AS((ShotAllocation{{1.0, 0.0}, false}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((ShotAllocation{{1.5, 1.0}, true}).validate(), std::invalid_argument);
  CHECK(ShotAllocation::uniform(4, 2.0).shots == std::vector<double>(4, 0.5));
}

TEST_CASE("heuristic weights") {
  const auto h = two_block_hamiltonian();

  SUBCASE("disjoint grouping gives unit weights") {
    const Grouping g{{{0, 1}, {2, 3}}, true};
    const auto w = heuristic_weights(g, h.term_count(), {{1.0, 1.0}, false});
    for (const auto& row : w.w) {
      REQUIRE(row.size() == 1);
      CHECK(row[0] == 1.0);
    }
  }

  SUBCASE("shared term splits by shot counts") {
    const auto h2 = parse_hamiltonian("1.0 ZI\n1.0 IZ\n1.0 ZZ\n");
    const Grouping r{{{0, 1}, {2, 0}}, false};
    const auto w = heuristic_weights(r, h2.term_count(), {{3.0, 1.0}, false});
    REQUIRE(w.w[0].size() == 2);
    CHECK(w.w[0][0] == 0.75);
    CHECK(w.w[0][1] == 0.25);
    w.validate_unbiased();
  }

  SUBCASE("random overlapped instances satisfy the unbiasedness constraint") {
    Rng rng(2);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto hr = gen_random(4, 0.08, seed);
      const CommutationOracle o(hr);
      auto g = sorted_insertion(o);
      g.disjoint = false;
      for (std::size_t i = 0; i < hr.term_count(); ++i)
        for (std::size_t j = 0; j < g.group_count(); ++j) {
          if (g.group_contains(j, i)) continue;
          bool ok = true;
          for (const auto m : g.groups[j]) ok = ok && o.commutes(i, m);
          if (ok && rng.next_bool()) g.groups[j].push_back(i);
        }
      ShotAllocation alloc{{}, false};
      for (std::size_t j = 0; j < g.group_count(); ++j) alloc.shots.push_back(rng.next_in(0.5, 4));
      const auto w = heuristic_weights(g, hr.term_count(), alloc);
      w.validate_unbiased(1e-12);
    }
  }
}

TEST_CASE("estimator variance closed-form cases") {
  const auto h = two_block_hamiltonian();
  const CommutationOracle oracle(h);
  const Grouping g{{{0, 1}, {2, 3}}, true};
  const ShotAllocation alloc{{1.0, 1.0}, false};
  const auto w = heuristic_weights(g, h.term_count(), alloc);

  SUBCASE("S=(2,8), M=(1,1), unit variances, zero covariance -> 10") {
    const auto m = zero_cov_unit_var(h.term_count(), g);
    const auto v = estimator_variance(oracle, g, w, alloc, m);
    CHECK(v.total == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(v.covariance == 0.0);
    const auto sw = shot_weighted_variance(oracle, g, alloc, m);
    CHECK(sw.total == doctest::Approx(v.total).epsilon(1e-12));
  }

  SUBCASE("eigenstate-like moments (all zero) -> 0") {
    UserMoments m(std::vector<double>(h.term_count(), 0.0));
    for (const auto& group : g.groups)
      for (std::size_t a = 0; a < group.size(); ++a)
        for (std::size_t b = a + 1; b < group.size(); ++b)
          m.set_covariance(group[a], group[b], 0.0);
    CHECK(estimator_variance(oracle, g, w, alloc, m).total == 0.0);
  }

  SUBCASE("missing covariance for a shared pair throws") {
    UserMoments m(std::vector<double>(h.term_count(), 1.0));
    CHECK_THROWS_AS(estimator_variance(oracle, g, w, alloc, m), std::invalid_argument);
  }
}

TEST_CASE("zero-weight embedding matches the base grouping variance") {
  const auto h = parse_hamiltonian("1.0 ZI\n1.0 IZ\n0.7 ZZ\n0.4 XX\n");
  const CommutationOracle oracle(h);
  const Grouping g{{{0, 1, 2}, {3}}, true};
  const Grouping r{{{0, 1, 2}, {3, 2}}, false};  // ZZ also fits with XX

  const WorstCaseMoments moments({1.0, 1.0, 0.7, 0.4});
  const ShotAllocation alloc{{2.0, 1.0}, false};

  const auto wg = heuristic_weights(g, h.term_count(), alloc);
  const auto base = estimator_variance(oracle, g, wg, alloc, moments);

  EstimatorWeights extended = wg;
  extended.w[2] = {1.0, 0.0};  // gamma rows are sorted by group, zero on the new slot
  const auto embedded = estimator_variance(oracle, r, extended, alloc, moments);
  CHECK(embedded.total == doctest::Approx(base.total).epsilon(1e-14));
  CHECK(embedded.diagonal == doctest::Approx(base.diagonal).epsilon(1e-14));
  CHECK(embedded.covariance == doctest::Approx(base.covariance).epsilon(1e-14));
}

TEST_CASE("empirical energy") {
  const auto h = parse_hamiltonian("1.0 ZI\n0.9 ZZ\n0.8 XX\n");
  const CommutationOracle oracle(h);
  const Grouping g{{{0, 1}, {2}}, true};
  const auto w = heuristic_weights(g, h.term_count(), {{1.0, 1.0}, false});

  SUBCASE("plugging in exact expectations returns the exact energy") {
    const std::vector<GroupEstimates> samples = {{0, {0, 1}, {0.5, -0.25}}, {1, {2}, {1.0}}};
    const double e = empirical_energy(oracle, g, w, samples);
    CHECK(e == doctest::Approx(1.0 * 0.5 + 0.9 * -0.25 + 0.8 * 1.0).epsilon(1e-14));
  }
  SUBCASE("single group, single term, coefficient one: the sample mean itself") {
    const auto h1 = parse_hamiltonian("1.0 Z\n");
    const CommutationOracle o1(h1);
    const Grouping g1{{{0}}, true};
    const auto w1 = heuristic_weights(g1, 1, {{5.0}, false});
    CHECK(empirical_energy(o1, g1, w1, {{0, {0}, {0.125}}}) == doctest::Approx(0.125));
  }
  SUBCASE("group with weight but no samples throws") {
    const std::vector<GroupEstimates> missing = {{0, {0, 1}, {0.5, -0.25}}};
    CHECK_THROWS_AS(empirical_energy(oracle, g, w, missing), std::invalid_argument);
  }
}

TEST_CASE("optimal weights: zero covariance returns the heuristic rule bitwise") {
  const auto h = parse_hamiltonian("1.0 ZI\n1.0 IZ\n1.0 ZZ\n");
  const CommutationOracle oracle(h);
  const Grouping r{{{0, 1}, {2, 0}}, false};
  const ShotAllocation alloc{{3.0, 1.0}, false};
  const auto m = zero_cov_unit_var(h.term_count(), r);
  const auto opt = optimal_weights(oracle, r, alloc, m);
  const auto heur = heuristic_weights(r, h.term_count(), alloc);
  REQUIRE(opt.w.size() == heur.w.size());
  for (std::size_t i = 0; i < opt.w.size(); ++i) CHECK(opt.w[i] == heur.w[i]);

  SUBCASE("single-membership terms always carry weight one") {
    for (std::size_t i : {std::size_t(1), std::size_t(2)}) {
      REQUIRE(opt.w[i].size() == 1);
      CHECK(opt.w[i][0] == 1.0);
    }
  }
}

TEST_CASE("optimal weights vs grid oracle with one overlapped term") {
  // Term 0 carries weight t in group 0 and 1-t in group 1; everything else
  // is pinned by unbiasedness, so a grid over t is an exact oracle.
  const auto h = parse_hamiltonian("1.0 ZI\n1.0 IZ\n1.0 ZZ\n");
  const CommutationOracle oracle(h);
  const Grouping r{{{0, 1}, {2, 0}}, false};
  const ShotAllocation alloc{{2.0, 1.0}, false};

  UserMoments m({0.9, 0.8, 0.7});
  m.set_covariance(0, 1, 0.3);
  m.set_covariance(0, 2, -0.4);
  m.set_covariance(1, 2, 0.1);

  double best_t = 0, best_f = 1e300;
  for (int k = -5000; k <= 15000; ++k) {
    const double t = k * 1e-4;
    EstimatorWeights w;
    w.w = {{t, 1.0 - t}, {1.0}, {1.0}};
    const double f = estimator_variance(oracle, r, w, alloc, m).total;
    if (f < best_f) {
      best_f = f;
      best_t = t;
    }
  }

  const auto opt = optimal_weights(oracle, r, alloc, m);
  CHECK(opt.w[0][0] == doctest::Approx(best_t).epsilon(5e-4));
  const double f_opt = estimator_variance(oracle, r, opt, alloc, m).total;
  CHECK(f_opt <= best_f + 1e-10);
}

TEST_CASE("heuristic weights are first-order stationary under zero covariance") {
  Rng rng(9);
  const auto h = gen_random(3, 0.25, 4);
  const CommutationOracle oracle(h);
  auto g = sorted_insertion(oracle);
  g.disjoint = false;
  for (std::size_t i = 0; i < h.term_count(); ++i)
    for (std::size_t j = 0; j < g.group_count(); ++j) {
      if (g.group_contains(j, i)) continue;
      bool ok = true;
      for (const auto mem : g.groups[j]) ok = ok && oracle.commutes(i, mem);
      if (ok) g.groups[j].push_back(i);
    }

  std::vector<double> vars(h.term_count());
  for (auto& v : vars) v = rng.next_in(0.1, 1.0);
  UserMoments m(vars);
  for (const auto& group : g.groups)
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b)
        m.set_covariance(group[a], group[b], 0.0);

  ShotAllocation alloc{{}, false};
  for (std::size_t j = 0; j < g.group_count(); ++j) alloc.shots.push_back(rng.next_in(0.5, 3.0));

  const auto w = heuristic_weights(g, h.term_count(), alloc);
  const double f0 = estimator_variance(oracle, g, w, alloc, m).total;
  for (int trial = 0; trial < 20; ++trial) {
    auto perturbed = w;
    double norm = 0;
    std::vector<std::vector<double>> d(w.w.size());
    for (std::size_t i = 0; i < w.w.size(); ++i) {
      d[i].resize(w.w[i].size());
      double mean = 0;
      for (auto& v : d[i]) {
        v = rng.next_in(-1, 1);
        mean += v;
      }
      mean /= static_cast<double>(d[i].size());
      for (auto& v : d[i]) {
        v -= mean;  // stay on the unbiasedness constraint
        norm += v * v;
      }
    }
    norm = std::sqrt(norm);
    if (norm == 0) continue;
    const double eps = 1e-6;
    for (std::size_t i = 0; i < w.w.size(); ++i)
      for (std::size_t a = 0; a < w.w[i].size(); ++a)
        perturbed.w[i][a] += eps * d[i][a] / norm;
    const double f1 = estimator_variance(oracle, g, perturbed, alloc, m).total;
    CHECK(f1 >= f0 - 1e-12);  // convex with a stationary point here
  }
}

TEST_CASE("worst-case bound") {
  SUBCASE("one group, |c| = (1,1), M = 1 -> 4") {
    const auto h = parse_hamiltonian("1.0 ZI\n-1.0 ZZ\n");
    const CommutationOracle oracle(h);
    const Grouping g{{{0, 1}}, true};
    CHECK(worst_case_bound(oracle, g, {{1.0}, false}) == doctest::Approx(4.0));
  }
  SUBCASE("singleton groups reduce to sum c^2 / M_j") {
    const auto h = parse_hamiltonian("1.5 X\n-2.0 Z\n");
    const CommutationOracle oracle(h);
    const Grouping g{{{0}, {1}}, true};
    CHECK(worst_case_bound(oracle, g, {{2.0, 1.0}, false}) ==
          doctest::Approx(1.5 * 1.5 / 2.0 + 4.0));
  }
  SUBCASE("coincides with estimator variance under worst-case moments") {
    const auto h = gen_random(3, 0.2, 14);
    const CommutationOracle oracle(h);
    const auto g = sorted_insertion(oracle);
    const ShotAllocation alloc{std::vector<double>(g.group_count(), 2.0), false};
    std::vector<double> coeffs;
    for (const auto& t : h.terms()) coeffs.push_back(t.coefficient);
    const WorstCaseMoments m(coeffs);
    const auto w = heuristic_weights(g, h.term_count(), alloc);
    CHECK(estimator_variance(oracle, g, w, alloc, m).total ==
          doctest::Approx(worst_case_bound(oracle, g, alloc)).epsilon(1e-12));
  }
}

TEST_CASE("measurement complexity") {
  CHECK(measurement_complexity({1.0}, 0.1) == doctest::Approx(100.0));
  CHECK(measurement_complexity({0.0, 0.0}, 0.5) == 0.0);
  CHECK(measurement_complexity({1.0, 4.0}, 1.0) == doctest::Approx(9.0));
  CHECK(measurement_complexity({1.0}, 0.2) < measurement_complexity({1.0}, 0.1));
  CHECK_THROWS_AS(measurement_complexity({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(measurement_complexity({-1.0}, 0.1), std::invalid_argument);
}

TEST_CASE("moments provider invariants") {
  const ZeroCovarianceMoments z(3);
  CHECK(z.variance(0) == 1.0);
  CHECK(z.covariance(0, 1) == 0.0);
  CHECK(z.covariance(2, 2) == 1.0);

  const WorstCaseMoments wc({1.0, -2.0, 3.0});
  CHECK(wc.covariance(0, 1) == -1.0);
  CHECK(wc.covariance(0, 2) == 1.0);
  CHECK(wc.covariance(1, 2) == -1.0);
  CHECK(wc.covariance(1, 0) == wc.covariance(0, 1));

  CHECK_THROWS_AS(UserMoments({1.5}), std::invalid_argument);
  CHECK_THROWS_AS(UserMoments({-0.1}), std::invalid_argument);
  UserMoments um({0.5, 0.25});
  um.set_covariance(0, 1, 0.1);
  CHECK(um.covariance(1, 0) == 0.1);
}
