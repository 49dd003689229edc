#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsr {

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteInput,
  BadMemberWeights,
  InvalidBounds,
  NonPositiveScale,
  NegativeWeight,
  BadOutputShape,
  DegenerateSample,
  TooFewMembers,
  BadVsWeights,
  BadOrder,
  AllUndefined,
  ParseError,
  EmptyArchive,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class ScoreStatus : std::uint8_t {
  Defined,
  UndefinedWeightMass,
  InvalidInput,
};

std::string_view to_string(ScoreStatus status);

// Bit flags attached to a score. They never alter the value.
enum Warning : unsigned {
  kNoWarning = 0u,
  kDecreasingChain = 1u << 0,
};

/// One score for one forecast case. `status == Defined` iff `value` is finite.
struct ScoreValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  ScoreStatus status = ScoreStatus::InvalidInput;
  unsigned warnings = kNoWarning;

  static ScoreValue defined(double v, unsigned warnings = kNoWarning);
  static ScoreValue undefined_weight_mass(unsigned warnings = kNoWarning);
  static ScoreValue invalid_input();

  bool is_defined() const noexcept { return status == ScoreStatus::Defined; }
};

/// Divides by the sum. Throws BadMemberWeights on negative, non-finite or
/// zero-sum input.
std::vector<double> normalize_member_weights(std::span<const double> weights);

/// An m-member univariate predictive sample. Member weights are normalized
/// once here; omitting them is the same as passing uniform weights.
class EnsembleForecast {
 public:
  explicit EnsembleForecast(std::vector<double> members);
  EnsembleForecast(std::vector<double> members,
                   std::span<const double> member_weights);

  std::size_t size() const noexcept { return members_.size(); }
  std::span<const double> members() const noexcept { return members_; }
  std::span<const double> weights() const noexcept { return weights_; }
  bool has_member_weights() const noexcept { return explicit_weights_; }

 private:
  std::vector<double> members_;
  std::vector<double> weights_;
  bool explicit_weights_ = false;
};

/// A d x m sample of forecast vectors, stored column-major so that
/// member(j) is the contiguous vector x_j.
class MultivariateEnsemble {
 public:
  MultivariateEnsemble(std::size_t dim, std::vector<double> column_major);
  MultivariateEnsemble(std::size_t dim, std::vector<double> column_major,
                       std::span<const double> member_weights);

  /// Builds from d rows, each holding the m member values of one dimension.
  static MultivariateEnsemble from_rows(
      const std::vector<std::vector<double>> &rows,
      std::optional<std::span<const double>> member_weights = std::nullopt);

  /// Same shape and member weights (bit for bit), different values.
  MultivariateEnsemble with_data(std::vector<double> column_major) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size() / dim_; }
  std::span<const double> member(std::size_t j) const {
    return std::span<const double>(data_).subspan(j * dim_, dim_);
  }
  double at(std::size_t component, std::size_t j) const {
    return data_[j * dim_ + component];
  }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> weights() const noexcept { return weights_; }
  bool has_member_weights() const noexcept { return explicit_weights_; }

 private:
  std::size_t dim_;
  std::vector<double> data_;
  std::vector<double> weights_;
  bool explicit_weights_ = false;
};

/// Lower/upper bounds of the region of interest, per dimension. A bounds
/// object of dimension 1 broadcasts to any d.
class BoundsSpec {
 public:
  BoundsSpec();
  BoundsSpec(double a, double b);
  BoundsSpec(std::vector<double> a, std::vector<double> b);

  static BoundsSpec unbounded() { return {}; }

  std::size_t dim() const noexcept { return lower_.size(); }
  double lower(std::size_t i) const { return lower_[dim() == 1 ? 0 : i]; }
  double upper(std::size_t i) const { return upper_[dim() == 1 ? 0 : i]; }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }

  /// True if every lower bound is -inf and every upper bound +inf.
  bool is_unbounded() const noexcept;
  /// Throws DimensionMismatch unless dim() is 1 or d.
  BoundsSpec broadcast(std::size_t d) const;

 private:
  void validate() const;

  std::vector<double> lower_;
  std::vector<double> upper_;
};

void validate_case(double obs, const EnsembleForecast &fc);
void validate_case(std::span<const double> obs, const MultivariateEnsemble &fc);

}  // namespace wsr
