#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ogrp {

/// Source of per-term variances sigma^2_{P_i} and pairwise covariances
/// sigma_{P_i P_k} for jointly measurable pairs. Implementations: exact
/// moments from a state (simulator module), the state-independent models
/// below, or user-supplied values.
class MomentsProvider {
 public:
  enum class Flavor { ExactState, ZeroCovariance, WorstCase, UserSupplied };

  virtual ~MomentsProvider() = default;
  virtual double variance(std::size_t i) const = 0;
  virtual double covariance(std::size_t i, std::size_t k) const = 0;
  virtual Flavor flavor() const = 0;
  virtual std::size_t term_count() const = 0;
};

const char* flavor_name(MomentsProvider::Flavor flavor);

/// State-independent model: every term has variance 1, all covariances vanish.
class ZeroCovarianceMoments final : public MomentsProvider {
 public:
  explicit ZeroCovarianceMoments(std::size_t term_count) : n_(term_count) {}
  double variance(std::size_t) const override { return 1.0; }
  double covariance(std::size_t i, std::size_t k) const override { return i == k ? 1.0 : 0.0; }
  Flavor flavor() const override { return Flavor::ZeroCovariance; }
  std::size_t term_count() const override { return n_; }

 private:
  std::size_t n_;
};

/// Worst-case model: variance 1 and covariances aligned with the coefficient
/// signs, so every covariance term adds constructively. On a disjoint
/// grouping this reproduces the (sum |c_i|)^2 / M_j bound.
class WorstCaseMoments final : public MomentsProvider {
 public:
  explicit WorstCaseMoments(std::vector<double> coefficients)
      : coefficients_(std::move(coefficients)) {}
  double variance(std::size_t) const override { return 1.0; }
  double covariance(std::size_t i, std::size_t k) const override {
    if (i == k) return 1.0;
    return coefficients_.at(i) * coefficients_.at(k) >= 0 ? 1.0 : -1.0;
  }
  Flavor flavor() const override { return Flavor::WorstCase; }
  std::size_t term_count() const override { return coefficients_.size(); }

 private:
  std::vector<double> coefficients_;
};

/// Explicit variances and covariances. Covariances may be given sparsely; a
/// query for a pair that was never provided throws, since silently assuming
/// zero would hide missing data.
class UserMoments final : public MomentsProvider {
 public:
  explicit UserMoments(std::vector<double> variances);
  UserMoments(std::vector<double> variances, std::vector<std::vector<double>> covariance_matrix);

  void set_covariance(std::size_t i, std::size_t k, double value);

  double variance(std::size_t i) const override { return variances_.at(i); }
  double covariance(std::size_t i, std::size_t k) const override;
  Flavor flavor() const override { return Flavor::UserSupplied; }
  std::size_t term_count() const override { return variances_.size(); }

 private:
  std::vector<double> variances_;
  std::map<std::pair<std::size_t, std::size_t>, double> covariances_;
};

}  // namespace ogrp
