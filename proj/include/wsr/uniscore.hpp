#pragma once

#include <optional>
#include <span>

#include "wsr/core.hpp"
#include "wsr/weightfns.hpp"

namespace wsr {

// Weighted CRPS kernels. `weights` must be normalized to sum 1.
//
//   sum_i w_i |x_i - y| - 1/2 sum_{i,j} w_i w_j |x_i - x_j|
//
// crps_naive is the O(m^2) double sum; crps_sorted is the O(m log m)
// prefix-sum evaluation used in production.
double crps_naive(double obs, std::span<const double> members,
                  std::span<const double> weights);
double crps_sorted(double obs, std::span<const double> members,
                   std::span<const double> weights);

ScoreValue crps_sample(double obs, const EnsembleForecast &fc);

/// -log of the Gaussian KDE density at `obs`. Densities below the smallest
/// normal double are clamped so the score stays finite.
ScoreValue logs_sample(double obs, const EnsembleForecast &fc,
                       std::optional<double> bandwidth = std::nullopt);

/// CRPS of the chained data v(x_i), v(y). For custom chains, a decrease
/// over the sorted pooled sample sets kDecreasingChain on the result.
ScoreValue twcrps_sample(double obs, const EnsembleForecast &fc,
                         const ChainFn &chain);

/// w(y) = 0 gives exactly 0; w(y) > 0 with no forecast weight mass gives
/// UndefinedWeightMass.
ScoreValue owcrps_sample(double obs, const EnsembleForecast &fc,
                         const WeightFn &weight);

struct ClogsOptions {
  std::optional<double> bandwidth;
  bool censored = true;
};

/// Conditional (censored = false) or censored likelihood score for the
/// indicator weight 1{a < z < b}.
ScoreValue clogs_sample(double obs, const EnsembleForecast &fc,
                        const BoundsSpec &bounds, ClogsOptions options = {});

}  // namespace wsr
