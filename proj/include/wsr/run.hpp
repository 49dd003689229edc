#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsr/diagnostics.hpp"
#include "wsr/multiscore.hpp"
#include "wsr/uniscore.hpp"

namespace wsr {

enum class ScoreKind {
  Crps, Logs, TwCrps, OwCrps, Cols, Cels,
  Es, Vs, Mmds, OwEs, OwVs, OwMmds, TwEs, TwVs, TwMmds,
};

enum class WeightFamily { Interval, GaussCdf, GaussPdf };
enum class OutputFormat { Csv, Json };

ScoreKind parse_score_kind(std::string_view name);
std::string_view to_string(ScoreKind kind);
WeightFamily parse_weight_family(std::string_view name);
std::string_view to_string(WeightFamily family);

bool is_multivariate(ScoreKind kind);
bool is_outcome_weighted(ScoreKind kind);
bool is_threshold_weighted(ScoreKind kind);
bool uses_variogram(ScoreKind kind);
bool uses_kde(ScoreKind kind);

/// Parses a bound or parameter token; accepts `inf`, `-inf`, `+inf`.
double parse_real(std::string_view token);
/// Comma-separated list of parse_real tokens.
std::vector<double> parse_real_list(std::string_view text);

/// Everything a batch run needs. Unset optionals mean "not given"; validate()
/// rejects options that do not apply to the chosen kind.
struct RunConfig {
  ScoreKind kind = ScoreKind::Crps;
  std::optional<WeightFamily> family;
  std::optional<std::vector<double>> a;
  std::optional<std::vector<double>> b;
  std::optional<std::vector<double>> mu;
  std::optional<std::vector<double>> sigma;
  std::optional<double> bandwidth;
  std::optional<double> p;
  std::optional<std::vector<double>> vs_weights;  // d x d, row-major
  OutputFormat format = OutputFormat::Csv;
  int digits = 17;
  bool strict = false;
  unsigned threads = 0;

  WeightFamily weight_family() const {
    return family.value_or(WeightFamily::Interval);
  }
  /// Throws InvalidConfig (or InvalidBounds for a >= b).
  void validate() const;
};

ScoreValue score_case(const RunConfig &config, const UnivariateCase &c);
ScoreValue score_case(const RunConfig &config, const MultivariateCase &c);

/// Scores every case in input order. Per-case errors propagate, prefixed
/// with the case number.
ScoreTable run_score(const RunConfig &config, std::span<const UnivariateCase> cases);
ScoreTable run_score(const RunConfig &config, std::span<const MultivariateCase> cases);

ThresholdCurve run_curve(const RunConfig &config,
                         std::span<const UnivariateCase> cases,
                         std::span<const double> grid, Side side);

/// CSV: `case_id,score,status` rows followed by `#` summary lines.
/// JSON: one document with config, cases and summary.
std::string format_table(const ScoreTable &table, const RunConfig &config);

}  // namespace wsr
