#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsr/core.hpp"

namespace wsr {

struct UnivariateCase {
  double obs;
  EnsembleForecast fc;
};

struct MultivariateCase {
  std::vector<double> obs;
  MultivariateEnsemble fc;
};

/// Per-case scores of an archive with their summary. Only Defined entries
/// enter the mean; everything else is counted in n_undefined.
struct ScoreTable {
  std::vector<std::string> case_ids;
  std::vector<ScoreValue> scores;
  std::size_t n_defined = 0;
  std::size_t n_undefined = 0;
  std::size_t n_warned = 0;
  double mean_defined = 0.0;
};

/// Case ids default to 1..n. mean_defined is NaN when nothing is Defined.
ScoreTable tabulate(std::span<const ScoreValue> scores,
                    std::vector<std::string> case_ids = {});

/// As tabulate, but throws AllUndefined if no score is Defined.
ScoreTable summarize(std::span<const ScoreValue> scores,
                     std::vector<std::string> case_ids = {});

enum class CurveScore { TwCrps, OwCrps };
enum class Side { Above, Below };

std::string_view to_string(CurveScore kind);
std::string_view to_string(Side side);

/// Mean weighted score as a function of the threshold t of the indicator
/// weight (above: a = t, b = inf; below: a = -inf, b = t). Thresholds where
/// no case is Defined carry a NaN mean.
struct ThresholdCurve {
  std::vector<double> thresholds;
  std::vector<double> mean_scores;
  std::vector<std::size_t> n_undefined;
  CurveScore score_kind = CurveScore::TwCrps;
  Side side = Side::Above;

  /// `threshold,mean_score,n_undefined`, one row per threshold. Values use
  /// `digits` significant digits (17 round-trips exactly).
  std::string to_csv(int digits = 17) const;
};

/// Parses `start:stop:step` into an increasing inclusive grid. Throws
/// InvalidConfig on a malformed grid or step <= 0.
std::vector<double> parse_grid(std::string_view text);

ThresholdCurve threshold_curve(std::span<const UnivariateCase> archive,
                               CurveScore kind, std::span<const double> grid,
                               Side side, unsigned threads = 0);

/// Prints `value` with `digits` significant digits; non-finite as "nan".
std::string format_number(double value, int digits = 17);

}  // namespace wsr
