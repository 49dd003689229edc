#include "wsr/diagnostics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "wsr/detail/parallel.hpp"
#include "wsr/uniscore.hpp"
#include "wsr/weightfns.hpp"

namespace wsr {

ScoreTable tabulate(std::span<const ScoreValue> scores,
                    std::vector<std::string> case_ids) {
  if (!case_ids.empty() && case_ids.size() != scores.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one case id per score is required");
  }
  ScoreTable table;
  table.scores.assign(scores.begin(), scores.end());
  if (case_ids.empty()) {
    case_ids.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      case_ids.push_back(std::to_string(i + 1));
    }
  }
  table.case_ids = std::move(case_ids);

  double sum = 0.0;
  for (const auto &s : scores) {
    if (s.is_defined()) {
      sum += s.value;
      ++table.n_defined;
    } else {
      ++table.n_undefined;
    }
    if (s.warnings != kNoWarning) {
      ++table.n_warned;
    }
  }
  table.mean_defined = table.n_defined > 0
                          ? sum / static_cast<double>(table.n_defined)
                          : std::numeric_limits<double>::quiet_NaN();
  return table;
}

ScoreTable summarize(std::span<const ScoreValue> scores,
                     std::vector<std::string> case_ids) {
  auto table = tabulate(scores, std::move(case_ids));
  if (table.n_defined == 0) {
    throw Error(ErrorCode::AllUndefined, "no defined scores to average");
  }
  return table;
}

std::string_view to_string(CurveScore kind) {
  return kind == CurveScore::TwCrps ? "twcrps" : "owcrps";
}

std::string_view to_string(Side side) {
  return side == Side::Above ? "above" : "below";
}

std::string format_number(double value, int digits) {
  if (!std::isfinite(value)) {
    if (std::isnan(value)) {
      return "nan";
    }
    return value > 0 ? "inf" : "-inf";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

std::string ThresholdCurve::to_csv(int digits) const {
  std::string out = "threshold,mean_score,n_undefined\n";
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    out += format_number(thresholds[k], digits);
    out += ',';
    out += format_number(mean_scores[k], digits);
    out += ',';
    out += std::to_string(n_undefined[k]);
    out += '\n';
  }
  return out;
}

namespace {

double parse_grid_number(std::string_view token) {
  double value = 0.0;
  const auto *first = token.data();
  const auto *last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidConfig,
                "grid entry '" + std::string(token) + "' is not a finite number");
  }
  return value;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos ||
      text.find(':', second + 1) != std::string_view::npos) {
    throw Error(ErrorCode::InvalidConfig,
                "grid must have the form start:stop:step, got '" +
                    std::string(text) + "'");
  }
  const double start = parse_grid_number(text.substr(0, first));
  const double stop = parse_grid_number(text.substr(first + 1, second - first - 1));
  const double step = parse_grid_number(text.substr(second + 1));
  if (!(step > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "grid step must be positive");
  }
  if (stop < start) {
    throw Error(ErrorCode::InvalidConfig, "grid stop must not be below start");
  }
  // Tolerate rounding so that e.g. -3:3:0.1 ends exactly at 3.
  const double span = (stop - start) / step;
  const auto steps = static_cast<std::size_t>(std::floor(span + 1e-9));
  if (steps > 10'000'000) {
    throw Error(ErrorCode::InvalidConfig, "grid has too many points");
  }
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    grid[k] = start + static_cast<double>(k) * step;
  }
  return grid;
}

ThresholdCurve threshold_curve(std::span<const UnivariateCase> archive,
                               CurveScore kind, std::span<const double> grid,
                               Side side, unsigned threads) {
  if (archive.empty()) {
    throw Error(ErrorCode::EmptyArchive, "archive has no cases");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw Error(ErrorCode::InvalidConfig, "thresholds must be strictly increasing");
    }
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = archive.size();
  const std::size_t k_count = grid.size();
  std::vector<ScoreValue> scores(n * k_count);

  detail::parallel_for(
      n * k_count,
      [&](std::size_t idx) {
        const std::size_t k = idx / n;
        const std::size_t i = idx % n;
        const double a = side == Side::Above ? grid[k] : -inf;
        const double b = side == Side::Above ? inf : grid[k];
        const auto &c = archive[i];
        try {
          scores[idx] = kind == CurveScore::TwCrps
                            ? twcrps_sample(c.obs, c.fc, interval_chain(a, b))
                            : owcrps_sample(c.obs, c.fc, interval_weight(a, b));
        } catch (const Error &) {
          scores[idx] = ScoreValue::invalid_input();
        }
      },
      threads);

  ThresholdCurve curve;
  curve.score_kind = kind;
  curve.side = side;
  curve.thresholds.assign(grid.begin(), grid.end());
  curve.mean_scores.resize(k_count);
  curve.n_undefined.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    double sum = 0.0;
    std::size_t defined = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto &s = scores[k * n + i];
      if (s.is_defined()) {
        sum += s.value;
        ++defined;
      }
    }
    curve.n_undefined[k] = n - defined;
    curve.mean_scores[k] = defined > 0 ? sum / static_cast<double>(defined)
                                       : std::numeric_limits<double>::quiet_NaN();
  }
  return curve;
}

}  // namespace wsr
