#include "wsr/multiscore.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace wsr {

namespace {

double squared_distance(std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double diff = u[k] - v[k];
    acc += diff * diff;
  }
  return acc;
}

// All kernels read column-major data: member j occupies [j*d, (j+1)*d).
struct SampleView {
  std::span<const double> data;
  std::size_t dim;
  std::span<const double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> member(std::size_t j) const {
    return data.subspan(j * dim, dim);
  }
};

SampleView view_of(const MultivariateEnsemble &fc) {
  return {fc.data(), fc.dim(), fc.weights()};
}

double energy_kernel(std::span<const double> obs, const SampleView &s) {
  double to_obs = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto xi = s.member(i);
    to_obs += s.weights[i] * std::sqrt(squared_distance(xi, obs));
    double row = 0.0;
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      row += s.weights[j] * std::sqrt(squared_distance(xi, s.member(j)));
    }
    pairs += s.weights[i] * row;
  }
  // The i < j sum counts each unordered pair once: 1/2 * 2 * pairs.
  return std::max(0.0, to_obs - pairs);
}

double variogram_kernel(std::span<const double> obs, const SampleView &s,
                        const VsParams &params) {
  const std::size_t d = s.dim;
  const double p = params.order();
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double h_ij = params.scaling(i, j, d);
      const double h_ji = params.scaling(j, i, d);
      if (h_ij == 0.0 && h_ji == 0.0) {
        continue;
      }
      double forecast = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        const auto xk = s.member(k);
        forecast += s.weights[k] * std::pow(std::abs(xk[i] - xk[j]), p);
      }
      const double diff = forecast - std::pow(std::abs(obs[i] - obs[j]), p);
      acc += (h_ij + h_ji) * diff * diff;
    }
  }
  return acc;
}

double mmd_kernel(std::span<const double> obs, const SampleView &s) {
  double to_obs = 0.0;
  double off_diagonal = 0.0;
  double diagonal = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto xi = s.member(i);
    to_obs += s.weights[i] * std::exp(-0.5 * squared_distance(xi, obs));
    diagonal += s.weights[i] * s.weights[i];
    double row = 0.0;
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      row += s.weights[j] * std::exp(-0.5 * squared_distance(xi, s.member(j)));
    }
    off_diagonal += s.weights[i] * row;
  }
  return 0.5 * (diagonal + 2.0 * off_diagonal) - to_obs;
}

// Outcome weighting as a reweighted ensemble: w_bar = sum_i wh_i w(x_i) and
// u_i = wh_i w(x_i) / w_bar.
struct Reweighted {
  double obs_weight = 0.0;
  double mass = 0.0;
  std::vector<double> weights;
};

Reweighted reweight(std::span<const double> obs, const MultivariateEnsemble &fc,
                    const MultiWeightFn &weight) {
  Reweighted out;
  out.obs_weight = weight(obs);
  if (out.obs_weight == 0.0) {
    return out;
  }
  out.weights.resize(fc.size());
  for (std::size_t j = 0; j < fc.size(); ++j) {
    out.weights[j] = fc.weights()[j] * weight(fc.member(j));
    out.mass += out.weights[j];
  }
  if (out.mass > 0.0) {
    for (double &u : out.weights) {
      u /= out.mass;
    }
  }
  return out;
}

template <typename Kernel>
ScoreValue outcome_weighted(std::span<const double> obs,
                            const MultivariateEnsemble &fc,
                            const MultiWeightFn &weight, Kernel kernel) {
  validate_case(obs, fc);
  const auto rw = reweight(obs, fc, weight);
  if (rw.obs_weight == 0.0) {
    return ScoreValue::defined(0.0);
  }
  if (!(rw.mass > 0.0)) {
    return ScoreValue::undefined_weight_mass();
  }
  const SampleView s{fc.data(), fc.dim(), rw.weights};
  return ScoreValue::defined(rw.obs_weight * kernel(obs, s));
}

std::vector<double> chain_members(const MultivariateEnsemble &fc,
                                  const MultiChainFn &chain) {
  std::vector<double> out;
  out.reserve(fc.data().size());
  for (std::size_t j = 0; j < fc.size(); ++j) {
    const auto v = chain(fc.member(j));
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

template <typename Kernel>
ScoreValue threshold_weighted(std::span<const double> obs,
                              const MultivariateEnsemble &fc,
                              const MultiChainFn &chain, Kernel kernel) {
  validate_case(obs, fc);
  const auto chained_obs = chain(obs);
  const auto chained = chain_members(fc, chain);
  const SampleView s{chained, fc.dim(), fc.weights()};
  return ScoreValue::defined(kernel(chained_obs, s));
}

}  // namespace

VsParams::VsParams(double p) : p_(p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::BadOrder, "variogram order p must be positive");
  }
}

VsParams::VsParams(double p, std::vector<double> h, std::size_t dim)
    : VsParams(p) {
  if (dim == 0 || h.size() != dim * dim) {
    throw Error(ErrorCode::BadVsWeights,
                "variogram scaling matrix must be d x d");
  }
  for (double v : h) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::BadVsWeights,
                  "variogram scaling entries must be finite and nonnegative");
    }
  }
  h_ = std::move(h);
  dim_ = dim;
}

void VsParams::check_dim(std::size_t d) const {
  if (h_ && dim_ != d) {
    throw Error(ErrorCode::BadVsWeights,
                "variogram scaling matrix is " + std::to_string(dim_) + " x " +
                    std::to_string(dim_) + " but the outcome has dimension " +
                    std::to_string(d));
  }
}

double VsParams::scaling(std::size_t i, std::size_t j, std::size_t d) const {
  check_dim(d);
  return h_ ? (*h_)[i * d + j] : 1.0;
}

ScoreValue es_sample(std::span<const double> obs, const MultivariateEnsemble &fc) {
  validate_case(obs, fc);
  return ScoreValue::defined(energy_kernel(obs, view_of(fc)));
}

ScoreValue vs_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                     const VsParams &params) {
  validate_case(obs, fc);
  params.check_dim(fc.dim());
  return ScoreValue::defined(variogram_kernel(obs, view_of(fc), params));
}

ScoreValue mmds_sample(std::span<const double> obs, const MultivariateEnsemble &fc) {
  validate_case(obs, fc);
  return ScoreValue::defined(mmd_kernel(obs, view_of(fc)));
}

ScoreValue owes_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                       const MultiWeightFn &weight) {
  return outcome_weighted(obs, fc, weight, energy_kernel);
}

ScoreValue owvs_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                       const MultiWeightFn &weight, const VsParams &params) {
  params.check_dim(fc.dim());
  return outcome_weighted(obs, fc, weight,
                          [&params](std::span<const double> y, const SampleView &s) {
                            return variogram_kernel(y, s, params);
                          });
}

ScoreValue owmmds_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                         const MultiWeightFn &weight) {
  return outcome_weighted(obs, fc, weight, mmd_kernel);
}

ScoreValue twes_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                       const MultiChainFn &chain) {
  return threshold_weighted(obs, fc, chain, energy_kernel);
}

ScoreValue twvs_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                       const MultiChainFn &chain, const VsParams &params) {
  params.check_dim(fc.dim());
  return threshold_weighted(obs, fc, chain,
                            [&params](std::span<const double> y, const SampleView &s) {
                              return variogram_kernel(y, s, params);
                            });
}

ScoreValue twmmds_sample(std::span<const double> obs, const MultivariateEnsemble &fc,
                         const MultiChainFn &chain) {
  return threshold_weighted(obs, fc, chain, mmd_kernel);
}

std::pair<std::vector<double>, MultivariateEnsemble> apply_chain(
    std::span<const double> obs, const MultivariateEnsemble &fc,
    const MultiChainFn &chain) {
  validate_case(obs, fc);
  return {chain(obs), fc.with_data(chain_members(fc, chain))};
}

}  // namespace wsr
