#include "wsr/kde.hpp"

#include <algorithm>
#include <cmath>

#include "wsr/weightfns.hpp"

namespace wsr {

namespace {

// Linear interpolation between order statistics (R's default quantile type).
double sorted_quantile(std::span<const double> sorted, double prob) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(double sd, double iqr, std::size_t m) {
  if (m < 2) {
    throw Error(ErrorCode::TooFewMembers,
                "default bandwidth needs at least two members");
  }
  double spread = std::min(sd, iqr / 1.34);
  if (!(iqr > 0.0)) {
    spread = sd;
  }
  if (!(spread > 0.0)) {
    throw Error(ErrorCode::DegenerateSample,
                "all members are identical; supply an explicit bandwidth");
  }
  return 0.9 * spread * std::pow(static_cast<double>(m), -0.2);
}

double default_bandwidth(std::span<const double> members) {
  const std::size_t m = members.size();
  if (m < 2) {
    throw Error(ErrorCode::TooFewMembers,
                "default bandwidth needs at least two members");
  }
  double mean = 0.0;
  for (double x : members) {
    mean += x;
  }
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double x : members) {
    ss += (x - mean) * (x - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));

  std::vector<double> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  return silverman_bandwidth(sd, iqr, m);
}

KdeModel::KdeModel(std::span<const double> centers,
                   std::span<const double> weights, double bandwidth)
    : centers_(centers.begin(), centers.end()),
      weights_(weights.begin(), weights.end()),
      bandwidth_(bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorCode::NonPositiveScale, "bandwidth must be positive and finite");
  }
  if (centers_.empty() || centers_.size() != weights_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "kernel centres and weights must be non-empty and equal length");
  }
}

KdeModel KdeModel::fit(const EnsembleForecast &fc,
                       std::optional<double> bandwidth) {
  const double bw = bandwidth ? *bandwidth : default_bandwidth(fc.members());
  return KdeModel(fc.members(), fc.weights(), bw);
}

double KdeModel::density(double z) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    acc += weights_[i] * std_normal_pdf((z - centers_[i]) / bandwidth_);
  }
  return acc / bandwidth_;
}

double KdeModel::cdf(double z) const {
  if (std::isinf(z)) {
    return z > 0 ? 1.0 : 0.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    acc += weights_[i] * std_normal_cdf((z - centers_[i]) / bandwidth_);
  }
  return std::min(acc, 1.0);
}

double KdeModel::survival(double z) const {
  if (std::isinf(z)) {
    return z > 0 ? 0.0 : 1.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    acc += weights_[i] * std_normal_cdf((centers_[i] - z) / bandwidth_);
  }
  return std::min(acc, 1.0);
}

}  // namespace wsr
