#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wsr/core.hpp"

namespace wsr {

enum class FnFamily { Interval, GaussCdf, GaussPdf, Product, Custom };

// Standard normal helpers shared by the Gaussian families and the KDE.
double std_normal_pdf(double z);
double std_normal_cdf(double z);

/// Univariate weight function w >= 0. Every evaluation checks the output
/// and throws NegativeWeight (or BadOutputShape for NaN / wrong length).
class WeightFn {
 public:
  using Scalar = std::function<double(double)>;
  using Batch = std::function<std::vector<double>(std::span<const double>)>;

  WeightFn(FnFamily family, Scalar fn);
  WeightFn(FnFamily family, Batch fn);

  double operator()(double z) const;
  std::vector<double> operator()(std::span<const double> z) const;

  FnFamily family() const noexcept { return family_; }

 private:
  FnFamily family_;
  Scalar scalar_;
  Batch batch_;
};

/// Univariate chaining function v, applied to data before unweighted scoring.
class ChainFn {
 public:
  using Scalar = std::function<double(double)>;
  using Batch = std::function<std::vector<double>(std::span<const double>)>;

  ChainFn(FnFamily family, Scalar fn);
  ChainFn(FnFamily family, Batch fn);

  double operator()(double z) const;
  std::vector<double> operator()(std::span<const double> z) const;

  FnFamily family() const noexcept { return family_; }
  /// Built-in families are non-decreasing by construction.
  bool needs_monotonicity_check() const noexcept {
    return family_ == FnFamily::Custom;
  }

 private:
  FnFamily family_;
  Scalar scalar_;
  Batch batch_;
};

/// Multivariate weight R^d -> [0, inf).
class MultiWeightFn {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  MultiWeightFn(FnFamily family, Fn fn);

  double operator()(std::span<const double> z) const;
  FnFamily family() const noexcept { return family_; }

 private:
  FnFamily family_;
  Fn fn_;
};

/// Multivariate chain R^d -> R^d. Output length is checked against d.
class MultiChainFn {
 public:
  using Fn = std::function<std::vector<double>(std::span<const double>)>;

  MultiChainFn(FnFamily family, Fn fn);

  std::vector<double> operator()(std::span<const double> z) const;
  FnFamily family() const noexcept { return family_; }

 private:
  FnFamily family_;
  Fn fn_;
};

// w(z) = 1{a < z < b}, strict at both ends.
WeightFn interval_weight(double a, double b);
MultiWeightFn interval_weight(const BoundsSpec &bounds);

// v(z) = min(max(z, a), b), componentwise in the multivariate case.
ChainFn interval_chain(double a, double b);
MultiChainFn interval_chain(const BoundsSpec &bounds);

WeightFn gauss_cdf_weight(double mu, double sigma);
/// v(z) = (z - mu) Phi_{mu,sigma}(z) + sigma^2 phi_{mu,sigma}(z).
ChainFn gauss_cdf_chain(double mu, double sigma);
WeightFn gauss_pdf_weight(double mu, double sigma);
ChainFn gauss_pdf_chain(double mu, double sigma);

/// w(z) = prod_i w_i(z_i). A single factor is applied to every coordinate;
/// otherwise the number of factors must equal d at evaluation.
MultiWeightFn product_weight(std::vector<WeightFn> factors);
/// v(z)_i = v_i(z_i), with the same broadcasting rule as product_weight.
MultiChainFn componentwise_chain(std::vector<ChainFn> factors);

// Caller-supplied functions. The batch forms receive all k inputs at once
// and must return k outputs.
WeightFn custom_weight(WeightFn::Scalar fn);
WeightFn custom_batch_weight(WeightFn::Batch fn);
MultiWeightFn custom_multi_weight(MultiWeightFn::Fn fn);
ChainFn custom_chain(ChainFn::Scalar fn);
ChainFn custom_batch_chain(ChainFn::Batch fn);
MultiChainFn custom_multi_chain(MultiChainFn::Fn fn);

/// True if v is non-decreasing along `sorted_grid` (ascending).
bool is_non_decreasing_on(const ChainFn &chain,
                          std::span<const double> sorted_grid);

}  // namespace wsr
