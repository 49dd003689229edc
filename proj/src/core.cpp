#include "wsr/core.hpp"

#include <cmath>
#include <numeric>

namespace wsr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::BadMemberWeights: return "BadMemberWeights";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::BadOutputShape: return "BadOutputShape";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::TooFewMembers: return "TooFewMembers";
    case ErrorCode::BadVsWeights: return "BadVsWeights";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::AllUndefined: return "AllUndefined";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyArchive: return "EmptyArchive";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(ScoreStatus status) {
  switch (status) {
    case ScoreStatus::Defined: return "defined";
    case ScoreStatus::UndefinedWeightMass: return "undefined_weight_mass";
    case ScoreStatus::InvalidInput: return "invalid_input";
  }
  return "unknown";
}

ScoreValue ScoreValue::defined(double v, unsigned warnings) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteInput, "score evaluated to a non-finite value");
  }
  return {v, ScoreStatus::Defined, warnings};
}

ScoreValue ScoreValue::undefined_weight_mass(unsigned warnings) {
  return {std::numeric_limits<double>::quiet_NaN(),
          ScoreStatus::UndefinedWeightMass, warnings};
}

ScoreValue ScoreValue::invalid_input() {
  return {std::numeric_limits<double>::quiet_NaN(), ScoreStatus::InvalidInput,
          kNoWarning};
}

std::vector<double> normalize_member_weights(std::span<const double> weights) {
  if (weights.empty()) {
    throw Error(ErrorCode::BadMemberWeights, "member weights are empty");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::BadMemberWeights,
                  "member weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::BadMemberWeights, "member weights sum to zero");
  }
  std::vector<double> out(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out[i] = weights[i] / total;
  }
  return out;
}

namespace {

void require_finite(std::span<const double> values, const char *what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteInput,
                  std::string(what) + " contains a non-finite value");
    }
  }
}

std::vector<double> uniform_weights(std::size_t m) {
  // Same arithmetic as normalizing a vector of ones.
  return std::vector<double>(m, 1.0 / static_cast<double>(m));
}

std::vector<double> checked_weights(std::span<const double> member_weights,
                                    std::size_t m) {
  if (member_weights.size() != m) {
    throw Error(ErrorCode::BadMemberWeights,
                "expected " + std::to_string(m) + " member weights, got " +
                    std::to_string(member_weights.size()));
  }
  return normalize_member_weights(member_weights);
}

}  // namespace

EnsembleForecast::EnsembleForecast(std::vector<double> members)
    : members_(std::move(members)) {
  if (members_.empty()) {
    throw Error(ErrorCode::TooFewMembers, "ensemble has no members");
  }
  require_finite(members_, "ensemble");
  weights_ = uniform_weights(members_.size());
}

EnsembleForecast::EnsembleForecast(std::vector<double> members,
                                   std::span<const double> member_weights)
    : members_(std::move(members)), explicit_weights_(true) {
  if (members_.empty()) {
    throw Error(ErrorCode::TooFewMembers, "ensemble has no members");
  }
  require_finite(members_, "ensemble");
  weights_ = checked_weights(member_weights, members_.size());
}

MultivariateEnsemble::MultivariateEnsemble(std::size_t dim,
                                           std::vector<double> column_major)
    : dim_(dim), data_(std::move(column_major)) {
  if (dim_ == 0 || data_.size() % dim_ != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "ensemble data size is not a multiple of the dimension");
  }
  if (data_.empty()) {
    throw Error(ErrorCode::TooFewMembers, "ensemble has no members");
  }
  require_finite(data_, "ensemble");
  weights_ = uniform_weights(size());
}

MultivariateEnsemble::MultivariateEnsemble(std::size_t dim,
                                           std::vector<double> column_major,
                                           std::span<const double> member_weights)
    : MultivariateEnsemble(dim, std::move(column_major)) {
  weights_ = checked_weights(member_weights, size());
  explicit_weights_ = true;
}

MultivariateEnsemble MultivariateEnsemble::with_data(
    std::vector<double> column_major) const {
  if (column_major.size() != data_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "replacement data does not match the ensemble shape");
  }
  MultivariateEnsemble out(dim_, std::move(column_major));
  out.weights_ = weights_;
  out.explicit_weights_ = explicit_weights_;
  return out;
}

MultivariateEnsemble MultivariateEnsemble::from_rows(
    const std::vector<std::vector<double>> &rows,
    std::optional<std::span<const double>> member_weights) {
  if (rows.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "ensemble has no dimensions");
  }
  const std::size_t d = rows.size();
  const std::size_t m = rows.front().size();
  for (const auto &row : rows) {
    if (row.size() != m) {
      throw Error(ErrorCode::DimensionMismatch,
                  "ensemble rows have differing member counts");
    }
  }
  std::vector<double> data(d * m);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      data[j * d + i] = rows[i][j];
    }
  }
  if (member_weights) {
    return {d, std::move(data), *member_weights};
  }
  return {d, std::move(data)};
}

BoundsSpec::BoundsSpec()
    : lower_{-std::numeric_limits<double>::infinity()},
      upper_{std::numeric_limits<double>::infinity()} {}

BoundsSpec::BoundsSpec(double a, double b) : lower_{a}, upper_{b} {
  validate();
}

BoundsSpec::BoundsSpec(std::vector<double> a, std::vector<double> b)
    : lower_(std::move(a)), upper_(std::move(b)) {
  if (lower_.empty() || upper_.empty()) {
    throw Error(ErrorCode::InvalidBounds, "bounds must not be empty");
  }
  if (lower_.size() != upper_.size()) {
    if (lower_.size() == 1) {
      lower_.assign(upper_.size(), lower_.front());
    } else if (upper_.size() == 1) {
      upper_.assign(lower_.size(), upper_.front());
    } else {
      throw Error(ErrorCode::DimensionMismatch,
                  "lower and upper bounds have different lengths");
    }
  }
  validate();
}

void BoundsSpec::validate() const {
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i])) {
      throw Error(ErrorCode::InvalidBounds, "bounds must not be NaN");
    }
    if (!(lower_[i] < upper_[i])) {
      throw Error(ErrorCode::InvalidBounds,
                  "lower bound a must be smaller than upper bound b");
    }
  }
}

bool BoundsSpec::is_unbounded() const noexcept {
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isinf(lower_[i]) || lower_[i] > 0 || !std::isinf(upper_[i]) ||
        upper_[i] < 0) {
      return false;
    }
  }
  return true;
}

BoundsSpec BoundsSpec::broadcast(std::size_t d) const {
  if (dim() == d) {
    return *this;
  }
  if (dim() != 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "bounds of dimension " + std::to_string(dim()) +
                    " cannot be applied to dimension " + std::to_string(d));
  }
  return BoundsSpec(std::vector<double>(d, lower_.front()),
                    std::vector<double>(d, upper_.front()));
}

void validate_case(double obs, const EnsembleForecast &fc) {
  if (!std::isfinite(obs)) {
    throw Error(ErrorCode::NonFiniteInput, "observation is not finite");
  }
  if (fc.size() == 0) {
    throw Error(ErrorCode::TooFewMembers, "ensemble has no members");
  }
  require_finite(fc.members(), "ensemble");
}

void validate_case(std::span<const double> obs, const MultivariateEnsemble &fc) {
  if (obs.size() != fc.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "observation has dimension " + std::to_string(obs.size()) +
                    " but the ensemble has dimension " +
                    std::to_string(fc.dim()));
  }
  require_finite(obs, "observation");
  require_finite(fc.data(), "ensemble");
}

}  // namespace wsr
