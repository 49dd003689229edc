#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wsr/core.hpp"

namespace wsr {

/// 0.9 * min(sd, iqr / 1.34) * m^(-1/5). Falls back to sd when iqr is 0;
/// throws DegenerateSample when both are 0.
double silverman_bandwidth(double sd, double iqr, std::size_t m);

/// Silverman's rule on the raw sample: sd with the (m - 1) denominator,
/// IQR from linearly interpolated quantiles.
double default_bandwidth(std::span<const double> members);

/// Gaussian mixture centred on the ensemble members, weighted by the
/// normalized member weights.
class KdeModel {
 public:
  KdeModel(std::span<const double> centers, std::span<const double> weights,
           double bandwidth);

  /// Uses default_bandwidth(members) when `bandwidth` is empty.
  static KdeModel fit(const EnsembleForecast &fc,
                      std::optional<double> bandwidth = std::nullopt);

  double bandwidth() const noexcept { return bandwidth_; }
  double density(double z) const;
  double cdf(double z) const;
  /// 1 - cdf(z), evaluated without cancellation in the upper tail.
  double survival(double z) const;

 private:
  std::vector<double> centers_;
  std::vector<double> weights_;
  double bandwidth_;
};

}  // namespace wsr
