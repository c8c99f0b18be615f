#include "ogrp/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace ogrp {

const char* flavor_name(MomentsProvider::Flavor flavor) {
  switch (flavor) {
    case MomentsProvider::Flavor::ExactState: return "exact-state";
    case MomentsProvider::Flavor::ZeroCovariance: return "zero-covariance";
    case MomentsProvider::Flavor::WorstCase: return "worst-case";
    case MomentsProvider::Flavor::UserSupplied: return "user-supplied";
  }
  return "?";
}

namespace {
void check_variance(double v) {
  if (!(v >= 0.0) || v > 1.0 || !std::isfinite(v))
    throw std::invalid_argument("UserMoments: variance must lie in [0, 1]");
}
}  // namespace

UserMoments::UserMoments(std::vector<double> variances) : variances_(std::move(variances)) {
  for (const double v : variances_) check_variance(v);
}

UserMoments::UserMoments(std::vector<double> variances,
                         std::vector<std::vector<double>> covariance_matrix)
    : UserMoments(std::move(variances)) {
  const std::size_t n = variances_.size();
  if (covariance_matrix.size() != n)
    throw std::invalid_argument("UserMoments: covariance matrix size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (covariance_matrix[i].size() != n)
      throw std::invalid_argument("UserMoments: covariance matrix row size mismatch");
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(covariance_matrix[i][k] - covariance_matrix[k][i]) > 1e-12)
        throw std::invalid_argument("UserMoments: covariance matrix not symmetric");
      if (i < k) set_covariance(i, k, covariance_matrix[i][k]);
    }
    if (std::abs(covariance_matrix[i][i] - variances_[i]) > 1e-12)
      throw std::invalid_argument("UserMoments: diagonal must equal the variances");
  }
}

void UserMoments::set_covariance(std::size_t i, std::size_t k, double value) {
  if (i >= variances_.size() || k >= variances_.size())
    throw std::invalid_argument("UserMoments: index out of range");
  if (i == k) {
    if (std::abs(value - variances_[i]) > 1e-12)
      throw std::invalid_argument("UserMoments: cov(i,i) must equal var(i)");
    return;
  }
  covariances_[{std::min(i, k), std::max(i, k)}] = value;
}

double UserMoments::covariance(std::size_t i, std::size_t k) const {
  if (i == k) return variances_.at(i);
  const auto it = covariances_.find({std::min(i, k), std::max(i, k)});
  if (it == covariances_.end())
    throw std::invalid_argument("UserMoments: missing covariance for pair (" + std::to_string(i) +
                                ", " + std::to_string(k) + ")");
  return it->second;
}

}  // namespace ogrp
