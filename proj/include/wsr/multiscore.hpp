#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wsr/core.hpp"
#include "wsr/weightfns.hpp"

namespace wsr {

/// Order p and scaling matrix h of the variogram score. Without an explicit
/// matrix every pair (i, j) gets h_ij = 1.
class VsParams {
 public:
  explicit VsParams(double p = 0.5);
  /// `h` is d x d, row-major.
  VsParams(double p, std::vector<double> h, std::size_t dim);

  double order() const noexcept { return p_; }
  bool has_scaling() const noexcept { return h_.has_value(); }
  /// h_ij for an outcome of dimension d; throws BadVsWeights on a d mismatch.
  double scaling(std::size_t i, std::size_t j, std::size_t d) const;
  void check_dim(std::size_t d) const;

 private:
  double p_;
  std::optional<std::vector<double>> h_;
  std::size_t dim_ = 0;
};

ScoreValue es_sample(std::span<const double> obs, const MultivariateEnsemble &fc);
ScoreValue vs_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                     const VsParams &params = VsParams());
ScoreValue mmds_sample(std::span<const double> obs, const MultivariateEnsemble &fc);

// Outcome-weighted forms. The weights multiply the kernel terms; w(y) = 0
// gives exactly 0 and w(y) > 0 with zero forecast mass is UndefinedWeightMass.
ScoreValue owes_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                       const MultiWeightFn &weight);
ScoreValue owvs_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                       const MultiWeightFn &weight,
                       const VsParams &params = VsParams());
ScoreValue owmmds_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                         const MultiWeightFn &weight);

// Threshold-weighted forms: the unweighted score of v(x_j) and v(y).
ScoreValue twes_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                       const MultiChainFn &chain);
ScoreValue twvs_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                       const MultiChainFn &chain,
                       const VsParams &params = VsParams());
ScoreValue twmmds_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                         const MultiChainFn &chain);

/// Applies `chain` to the observation and to every member, keeping member
/// weights.
std::pair<std::vector<double>, MultivariateEnsemble> apply_chain(
    std::span<const double> obs, const MultivariateEnsemble &fc,
    const MultiChainFn &chain);

}  // namespace wsr
