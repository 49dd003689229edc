#include "wsr/uniscore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "wsr/kde.hpp"

namespace wsr {

namespace {

constexpr double kMinDensity = std::numeric_limits<double>::min();

double expected_abs_error(double obs, std::span<const double> members,
                          std::span<const double> weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    acc += weights[i] * std::abs(members[i] - obs);
  }
  return acc;
}

// sum_{i,j} w_i w_j |x_i - x_j| written over the gaps of the sorted sample:
// each gap x_(k+1) - x_(k) is crossed by every pair split at k, i.e. with
// weight 2 * W_k * (1 - W_k), W_k the cumulative weight of the first k.
double mean_pair_distance_sorted(std::span<const double> members,
                                 std::span<const double> weights) {
  const std::size_t m = members.size();
  if (m < 2) {
    return 0.0;
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return members[l] < members[r];
  });
  // Suffix sums avoid the 1 - W_k cancellation in the upper tail.
  std::vector<double> above(m, 0.0);
  for (std::size_t k = m - 1; k > 0; --k) {
    above[k - 1] = above[k] + weights[order[k]];
  }
  double below = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    below += weights[order[k]];
    const double gap = members[order[k + 1]] - members[order[k]];
    acc += gap * below * above[k];
  }
  return 2.0 * acc;
}

double clamp_density(double f) { return std::max(f, kMinDensity); }

// Sorts (x, v(x)) pairs by x and reports whether v decreases anywhere.
bool chain_decreases(std::span<const double> x, std::span<const double> v) {
  std::vector<std::pair<double, double>> pairs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    pairs[i] = {x[i], v[i]};
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].second < pairs[i - 1].second) {
      return true;
    }
  }
  return false;
}

}  // namespace

double crps_naive(double obs, std::span<const double> members,
                  std::span<const double> weights) {
  double spread = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      row += weights[j] * std::abs(members[i] - members[j]);
    }
    spread += weights[i] * row;
  }
  return expected_abs_error(obs, members, weights) - 0.5 * spread;
}

double crps_sorted(double obs, std::span<const double> members,
                   std::span<const double> weights) {
  return expected_abs_error(obs, members, weights) -
         0.5 * mean_pair_distance_sorted(members, weights);
}

ScoreValue crps_sample(double obs, const EnsembleForecast &fc) {
  validate_case(obs, fc);
  // The exact value is >= 0; rounding can leave a tiny negative residue.
  return ScoreValue::defined(
      std::max(0.0, crps_sorted(obs, fc.members(), fc.weights())));
}

ScoreValue logs_sample(double obs, const EnsembleForecast &fc,
                       std::optional<double> bandwidth) {
  validate_case(obs, fc);
  const auto kde = KdeModel::fit(fc, bandwidth);
  return ScoreValue::defined(-std::log(clamp_density(kde.density(obs))));
}

ScoreValue twcrps_sample(double obs, const EnsembleForecast &fc,
                         const ChainFn &chain) {
  validate_case(obs, fc);
  const auto chained = chain(fc.members());
  const double chained_obs = chain(obs);

  unsigned warnings = kNoWarning;
  if (chain.needs_monotonicity_check()) {
    std::vector<double> pooled(fc.members().begin(), fc.members().end());
    std::vector<double> pooled_v = chained;
    pooled.push_back(obs);
    pooled_v.push_back(chained_obs);
    if (chain_decreases(pooled, pooled_v)) {
      warnings |= kDecreasingChain;
    }
  }
  return ScoreValue::defined(
      std::max(0.0, crps_sorted(chained_obs, chained, fc.weights())), warnings);
}

ScoreValue owcrps_sample(double obs, const EnsembleForecast &fc,
                         const WeightFn &weight) {
  validate_case(obs, fc);
  const auto w = weight(fc.members());
  const double w_obs = weight(obs);
  if (w_obs == 0.0) {
    return ScoreValue::defined(0.0);
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mass += fc.weights()[i] * w[i];
  }
  if (!(mass > 0.0)) {
    return ScoreValue::undefined_weight_mass();
  }
  // Reweighting the members by w(x_i) / w_bar turns the outcome-weighted
  // score into w(y) times the CRPS of the reweighted ensemble.
  std::vector<double> reweighted(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    reweighted[i] = fc.weights()[i] * w[i] / mass;
  }
  const double crps = crps_sorted(obs, fc.members(), reweighted);
  return ScoreValue::defined(w_obs * std::max(0.0, crps));
}

ScoreValue clogs_sample(double obs, const EnsembleForecast &fc,
                        const BoundsSpec &bounds, ClogsOptions options) {
  validate_case(obs, fc);
  if (bounds.dim() != 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "likelihood scores take scalar bounds");
  }
  const double a = bounds.lower(0);
  const double b = bounds.upper(0);
  const auto kde = KdeModel::fit(fc, options.bandwidth);

  // Mass inside (a, b) and outside it, each from tail probabilities so that
  // neither is formed as 1 - x.
  const double outside = std::min(1.0, kde.cdf(a) + kde.survival(b));
  const double region_mass =
      std::isinf(a) ? kde.cdf(b)
                    : (std::isinf(b) ? kde.survival(a)
                                     : std::max(0.0, kde.cdf(b) - kde.cdf(a)));

  if (obs > a && obs < b) {
    const double log_density = std::log(clamp_density(kde.density(obs)));
    if (options.censored) {
      return ScoreValue::defined(-log_density);
    }
    return ScoreValue::defined(-log_density +
                               std::log(clamp_density(region_mass)));
  }
  if (!options.censored) {
    return ScoreValue::defined(0.0);
  }
  return ScoreValue::defined(-std::log(clamp_density(outside)));
}

}  // namespace wsr
