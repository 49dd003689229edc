#include "wsr/weightfns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace wsr {

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

namespace {

double checked_weight(double w) {
  if (std::isnan(w)) {
    throw Error(ErrorCode::BadOutputShape, "weight function returned NaN");
  }
  if (w < 0.0) {
    throw Error(ErrorCode::NegativeWeight, "weight function returned a negative weight");
  }
  return w;
}

double checked_chain(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::BadOutputShape,
                "chaining function returned a non-finite value");
  }
  return v;
}

void check_length(std::size_t got, std::size_t expected, const char *what) {
  if (got != expected) {
    throw Error(ErrorCode::BadOutputShape,
                std::string(what) + " returned " + std::to_string(got) +
                    " values for " + std::to_string(expected) + " inputs");
  }
}

void check_scale(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::NonPositiveScale, "scale parameter sigma must be positive");
  }
}

void check_location(double mu) {
  if (!std::isfinite(mu)) {
    throw Error(ErrorCode::NonFiniteInput, "location parameter mu must be finite");
  }
}

template <typename Factor>
const Factor &factor_for(const std::vector<Factor> &factors, std::size_t i,
                         std::size_t d) {
  if (factors.size() == 1) {
    return factors.front();
  }
  if (factors.size() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(factors.size()) +
                    " componentwise functions supplied for dimension " +
                    std::to_string(d));
  }
  return factors[i];
}

}  // namespace

WeightFn::WeightFn(FnFamily family, Scalar fn)
    : family_(family), scalar_(std::move(fn)) {}

WeightFn::WeightFn(FnFamily family, Batch fn)
    : family_(family), batch_(std::move(fn)) {}

double WeightFn::operator()(double z) const {
  if (scalar_) {
    return checked_weight(scalar_(z));
  }
  const double in[1] = {z};
  const auto out = batch_(std::span<const double>(in));
  check_length(out.size(), 1, "weight function");
  return checked_weight(out.front());
}

std::vector<double> WeightFn::operator()(std::span<const double> z) const {
  std::vector<double> out;
  if (scalar_) {
    out.resize(z.size());
    std::transform(z.begin(), z.end(), out.begin(), scalar_);
  } else {
    out = batch_(z);
    check_length(out.size(), z.size(), "weight function");
  }
  for (double w : out) {
    checked_weight(w);
  }
  return out;
}

ChainFn::ChainFn(FnFamily family, Scalar fn)
    : family_(family), scalar_(std::move(fn)) {}

ChainFn::ChainFn(FnFamily family, Batch fn)
    : family_(family), batch_(std::move(fn)) {}

double ChainFn::operator()(double z) const {
  if (scalar_) {
    return checked_chain(scalar_(z));
  }
  const double in[1] = {z};
  const auto out = batch_(std::span<const double>(in));
  check_length(out.size(), 1, "chaining function");
  return checked_chain(out.front());
}

std::vector<double> ChainFn::operator()(std::span<const double> z) const {
  std::vector<double> out;
  if (scalar_) {
    out.resize(z.size());
    std::transform(z.begin(), z.end(), out.begin(), scalar_);
  } else {
    out = batch_(z);
    check_length(out.size(), z.size(), "chaining function");
  }
  for (double v : out) {
    checked_chain(v);
  }
  return out;
}

MultiWeightFn::MultiWeightFn(FnFamily family, Fn fn)
    : family_(family), fn_(std::move(fn)) {}

double MultiWeightFn::operator()(std::span<const double> z) const {
  return checked_weight(fn_(z));
}

MultiChainFn::MultiChainFn(FnFamily family, Fn fn)
    : family_(family), fn_(std::move(fn)) {}

std::vector<double> MultiChainFn::operator()(std::span<const double> z) const {
  auto out = fn_(z);
  check_length(out.size(), z.size(), "chaining function");
  for (double v : out) {
    checked_chain(v);
  }
  return out;
}

WeightFn interval_weight(double a, double b) {
  const BoundsSpec bounds(a, b);
  return WeightFn(FnFamily::Interval, WeightFn::Scalar([a, b](double z) {
                    return (z > a && z < b) ? 1.0 : 0.0;
                  }));
}

MultiWeightFn interval_weight(const BoundsSpec &bounds) {
  return MultiWeightFn(FnFamily::Interval, [bounds](std::span<const double> z) {
    if (bounds.dim() != 1 && bounds.dim() != z.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "bounds dimension does not match the outcome dimension");
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!(z[i] > bounds.lower(i) && z[i] < bounds.upper(i))) {
        return 0.0;
      }
    }
    return 1.0;
  });
}

ChainFn interval_chain(double a, double b) {
  const BoundsSpec bounds(a, b);
  return ChainFn(FnFamily::Interval, ChainFn::Scalar([a, b](double z) {
                   return std::min(std::max(z, a), b);
                 }));
}

MultiChainFn interval_chain(const BoundsSpec &bounds) {
  return MultiChainFn(FnFamily::Interval, [bounds](std::span<const double> z) {
    if (bounds.dim() != 1 && bounds.dim() != z.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "bounds dimension does not match the outcome dimension");
    }
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      out[i] = std::min(std::max(z[i], bounds.lower(i)), bounds.upper(i));
    }
    return out;
  });
}

WeightFn gauss_cdf_weight(double mu, double sigma) {
  check_location(mu);
  check_scale(sigma);
  return WeightFn(FnFamily::GaussCdf, WeightFn::Scalar([mu, sigma](double z) {
                    return std_normal_cdf((z - mu) / sigma);
                  }));
}

ChainFn gauss_cdf_chain(double mu, double sigma) {
  check_location(mu);
  check_scale(sigma);
  return ChainFn(FnFamily::GaussCdf, ChainFn::Scalar([mu, sigma](double z) {
                   const double s = (z - mu) / sigma;
                   // sigma^2 * phi_{mu,sigma}(z) == sigma * phi(s)
                   return (z - mu) * std_normal_cdf(s) + sigma * std_normal_pdf(s);
                 }));
}

WeightFn gauss_pdf_weight(double mu, double sigma) {
  check_location(mu);
  check_scale(sigma);
  return WeightFn(FnFamily::GaussPdf, WeightFn::Scalar([mu, sigma](double z) {
                    return std_normal_pdf((z - mu) / sigma) / sigma;
                  }));
}

ChainFn gauss_pdf_chain(double mu, double sigma) {
  check_location(mu);
  check_scale(sigma);
  return ChainFn(FnFamily::GaussPdf, ChainFn::Scalar([mu, sigma](double z) {
                   return std_normal_cdf((z - mu) / sigma);
                 }));
}

MultiWeightFn product_weight(std::vector<WeightFn> factors) {
  if (factors.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "no weight factors supplied");
  }
  return MultiWeightFn(FnFamily::Product,
                       [factors = std::move(factors)](std::span<const double> z) {
                         double w = 1.0;
                         for (std::size_t i = 0; i < z.size(); ++i) {
                           w *= factor_for(factors, i, z.size())(z[i]);
                         }
                         return w;
                       });
}

MultiChainFn componentwise_chain(std::vector<ChainFn> factors) {
  if (factors.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "no chaining factors supplied");
  }
  return MultiChainFn(FnFamily::Product,
                      [factors = std::move(factors)](std::span<const double> z) {
                        std::vector<double> out(z.size());
                        for (std::size_t i = 0; i < z.size(); ++i) {
                          out[i] = factor_for(factors, i, z.size())(z[i]);
                        }
                        return out;
                      });
}

WeightFn custom_weight(WeightFn::Scalar fn) {
  return WeightFn(FnFamily::Custom, std::move(fn));
}

WeightFn custom_batch_weight(WeightFn::Batch fn) {
  return WeightFn(FnFamily::Custom, std::move(fn));
}

MultiWeightFn custom_multi_weight(MultiWeightFn::Fn fn) {
  return MultiWeightFn(FnFamily::Custom, std::move(fn));
}

ChainFn custom_chain(ChainFn::Scalar fn) {
  return ChainFn(FnFamily::Custom, std::move(fn));
}

ChainFn custom_batch_chain(ChainFn::Batch fn) {
  return ChainFn(FnFamily::Custom, std::move(fn));
}

MultiChainFn custom_multi_chain(MultiChainFn::Fn fn) {
  return MultiChainFn(FnFamily::Custom, std::move(fn));
}

bool is_non_decreasing_on(const ChainFn &chain,
                          std::span<const double> sorted_grid) {
  const auto values = chain(sorted_grid);
  return std::is_sorted(values.begin(), values.end());
}

}  // namespace wsr
