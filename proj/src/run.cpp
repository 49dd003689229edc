#include "wsr/run.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <utility>

#include "json.hpp"
#include "wsr/detail/parallel.hpp"

namespace wsr {

namespace {

struct KindName {
  ScoreKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 15> kKindNames{{
    {ScoreKind::Crps, "crps"},     {ScoreKind::Logs, "logs"},
    {ScoreKind::TwCrps, "twcrps"}, {ScoreKind::OwCrps, "owcrps"},
    {ScoreKind::Cols, "cols"},     {ScoreKind::Cels, "cels"},
    {ScoreKind::Es, "es"},         {ScoreKind::Vs, "vs"},
    {ScoreKind::Mmds, "mmds"},     {ScoreKind::OwEs, "owes"},
    {ScoreKind::OwVs, "owvs"},     {ScoreKind::OwMmds, "owmmds"},
    {ScoreKind::TwEs, "twes"},     {ScoreKind::TwVs, "twvs"},
    {ScoreKind::TwMmds, "twmmds"},
}};

constexpr double kInf = std::numeric_limits<double>::infinity();

Error config_error(const std::string &msg) {
  return Error(ErrorCode::InvalidConfig, msg);
}

double single(const std::optional<std::vector<double>> &values, double fallback,
              const char *name) {
  if (!values) {
    return fallback;
  }
  if (values->size() != 1) {
    throw config_error(std::string("--") + name +
                       " takes a single value for univariate scores");
  }
  return values->front();
}

std::vector<double> list_or(const std::optional<std::vector<double>> &values,
                            double fallback) {
  return values ? *values : std::vector<double>{fallback};
}

WeightFn univariate_weight(const RunConfig &cfg) {
  switch (cfg.weight_family()) {
    case WeightFamily::Interval:
      return interval_weight(single(cfg.a, -kInf, "a"), single(cfg.b, kInf, "b"));
    case WeightFamily::GaussCdf:
      return gauss_cdf_weight(single(cfg.mu, 0.0, "mu"), single(cfg.sigma, 1.0, "sigma"));
    case WeightFamily::GaussPdf:
      return gauss_pdf_weight(single(cfg.mu, 0.0, "mu"), single(cfg.sigma, 1.0, "sigma"));
  }
  throw config_error("unknown weight family");
}

ChainFn univariate_chain(const RunConfig &cfg) {
  switch (cfg.weight_family()) {
    case WeightFamily::Interval:
      return interval_chain(single(cfg.a, -kInf, "a"), single(cfg.b, kInf, "b"));
    case WeightFamily::GaussCdf:
      return gauss_cdf_chain(single(cfg.mu, 0.0, "mu"), single(cfg.sigma, 1.0, "sigma"));
    case WeightFamily::GaussPdf:
      return gauss_pdf_chain(single(cfg.mu, 0.0, "mu"), single(cfg.sigma, 1.0, "sigma"));
  }
  throw config_error("unknown weight family");
}

// Per-dimension Gaussian parameters; a single value broadcasts.
template <typename Make>
auto gaussian_factors(const RunConfig &cfg, Make make) {
  const auto mu = list_or(cfg.mu, 0.0);
  const auto sigma = list_or(cfg.sigma, 1.0);
  if (mu.size() != sigma.size() && mu.size() != 1 && sigma.size() != 1) {
    throw config_error("--mu and --sigma have different lengths");
  }
  const std::size_t d = std::max(mu.size(), sigma.size());
  std::vector<decltype(make(0.0, 1.0))> factors;
  for (std::size_t i = 0; i < d; ++i) {
    factors.push_back(make(mu[mu.size() == 1 ? 0 : i], sigma[sigma.size() == 1 ? 0 : i]));
  }
  return factors;
}

MultiWeightFn multivariate_weight(const RunConfig &cfg) {
  switch (cfg.weight_family()) {
    case WeightFamily::Interval:
      return interval_weight(BoundsSpec(list_or(cfg.a, -kInf), list_or(cfg.b, kInf)));
    case WeightFamily::GaussCdf:
      return product_weight(gaussian_factors(cfg, gauss_cdf_weight));
    case WeightFamily::GaussPdf:
      return product_weight(gaussian_factors(cfg, gauss_pdf_weight));
  }
  throw config_error("unknown weight family");
}

MultiChainFn multivariate_chain(const RunConfig &cfg) {
  switch (cfg.weight_family()) {
    case WeightFamily::Interval:
      return interval_chain(BoundsSpec(list_or(cfg.a, -kInf), list_or(cfg.b, kInf)));
    case WeightFamily::GaussCdf:
      return componentwise_chain(gaussian_factors(cfg, gauss_cdf_chain));
    case WeightFamily::GaussPdf:
      return componentwise_chain(gaussian_factors(cfg, gauss_pdf_chain));
  }
  throw config_error("unknown weight family");
}

VsParams vs_params(const RunConfig &cfg, std::size_t d) {
  const double p = cfg.p.value_or(0.5);
  if (!cfg.vs_weights) {
    return VsParams(p);
  }
  if (cfg.vs_weights->size() != d * d) {
    throw Error(ErrorCode::BadVsWeights,
                "--vs-weights has " + std::to_string(cfg.vs_weights->size()) +
                    " entries, expected " + std::to_string(d * d));
  }
  return VsParams(p, *cfg.vs_weights, d);
}

template <typename Case>
ScoreTable score_all(const RunConfig &config, std::span<const Case> cases) {
  config.validate();
  if (cases.empty()) {
    throw Error(ErrorCode::EmptyArchive, "archive has no cases");
  }
  std::vector<ScoreValue> scores(cases.size());
  std::vector<std::exception_ptr> failures(cases.size());
  detail::parallel_for(
      cases.size(),
      [&](std::size_t i) {
        try {
          scores[i] = score_case(config, cases[i]);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      },
      config.threads);
  // Report the first failing case in input order, independent of schedule.
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) {
      continue;
    }
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error &e) {
      throw Error(e.code(), "case " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return tabulate(scores);
}

}  // namespace

ScoreKind parse_score_kind(std::string_view name) {
  for (const auto &k : kKindNames) {
    if (k.name == name) {
      return k.kind;
    }
  }
  throw config_error("unknown score kind '" + std::string(name) + "'");
}

std::string_view to_string(ScoreKind kind) {
  for (const auto &k : kKindNames) {
    if (k.kind == kind) {
      return k.name;
    }
  }
  return "unknown";
}

WeightFamily parse_weight_family(std::string_view name) {
  if (name == "interval") return WeightFamily::Interval;
  if (name == "gauss-cdf") return WeightFamily::GaussCdf;
  if (name == "gauss-pdf") return WeightFamily::GaussPdf;
  throw config_error("unknown weight family '" + std::string(name) + "'");
}

std::string_view to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::Interval: return "interval";
    case WeightFamily::GaussCdf: return "gauss-cdf";
    case WeightFamily::GaussPdf: return "gauss-pdf";
  }
  return "unknown";
}

bool is_multivariate(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::Es: case ScoreKind::Vs: case ScoreKind::Mmds:
    case ScoreKind::OwEs: case ScoreKind::OwVs: case ScoreKind::OwMmds:
    case ScoreKind::TwEs: case ScoreKind::TwVs: case ScoreKind::TwMmds:
      return true;
    default:
      return false;
  }
}

bool is_outcome_weighted(ScoreKind kind) {
  return kind == ScoreKind::OwCrps || kind == ScoreKind::OwEs ||
         kind == ScoreKind::OwVs || kind == ScoreKind::OwMmds;
}

bool is_threshold_weighted(ScoreKind kind) {
  return kind == ScoreKind::TwCrps || kind == ScoreKind::TwEs ||
         kind == ScoreKind::TwVs || kind == ScoreKind::TwMmds;
}

bool uses_variogram(ScoreKind kind) {
  return kind == ScoreKind::Vs || kind == ScoreKind::OwVs || kind == ScoreKind::TwVs;
}

bool uses_kde(ScoreKind kind) {
  return kind == ScoreKind::Logs || kind == ScoreKind::Cols || kind == ScoreKind::Cels;
}

double parse_real(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  if (token == "inf" || token == "+inf" || token == "Inf" || token == "+Inf") {
    return kInf;
  }
  if (token == "-inf" || token == "-Inf") {
    return -kInf;
  }
  if (!token.empty() && token.front() == '+') {
    token.remove_prefix(1);
  }
  double value = 0.0;
  const auto *last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), last, value);
  if (token.empty() || ec != std::errc() || ptr != last || std::isnan(value)) {
    throw config_error("'" + std::string(token) + "' is not a number");
  }
  return value;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    out.push_back(parse_real(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

void RunConfig::validate() const {
  const bool weighted = is_outcome_weighted(kind) || is_threshold_weighted(kind) ||
                        kind == ScoreKind::Cols || kind == ScoreKind::Cels;
  const std::string name(to_string(kind));
  if (family && !weighted) {
    throw config_error("--weight-family does not apply to " + name);
  }
  if ((a || b) && !weighted) {
    throw config_error("--a/--b do not apply to " + name);
  }
  if ((mu || sigma) && !weighted) {
    throw config_error("--mu/--sigma do not apply to " + name);
  }
  if ((kind == ScoreKind::Cols || kind == ScoreKind::Cels) &&
      weight_family() != WeightFamily::Interval) {
    throw config_error(name + " supports only the interval weight family");
  }
  if (weighted && weight_family() == WeightFamily::Interval && (mu || sigma)) {
    throw config_error("--mu/--sigma apply only to the Gaussian weight families");
  }
  if (weighted && weight_family() != WeightFamily::Interval && (a || b)) {
    throw config_error("--a/--b apply only to the interval weight family");
  }
  if (bandwidth && !uses_kde(kind)) {
    throw config_error("--bw applies only to logs, cols and cels");
  }
  if (bandwidth && !(*bandwidth > 0.0 && std::isfinite(*bandwidth))) {
    throw config_error("--bw must be positive");
  }
  if ((p || vs_weights) && !uses_variogram(kind)) {
    throw config_error("--p/--vs-weights apply only to variogram scores");
  }
  if (p && !(*p > 0.0 && std::isfinite(*p))) {
    throw Error(ErrorCode::BadOrder, "--p must be positive");
  }
  if (digits < 1 || digits > 17) {
    throw config_error("--digits must be between 1 and 17");
  }
  if (!is_multivariate(kind)) {
    for (const auto *v : {&a, &b, &mu, &sigma}) {
      if (*v && (*v)->size() != 1) {
        throw config_error(name + " takes scalar weight parameters");
      }
    }
  }
  if (weighted && weight_family() == WeightFamily::Interval) {
    // Throws InvalidBounds when some a_i >= b_i.
    BoundsSpec(list_or(a, -kInf), list_or(b, kInf));
  }
  if (weighted && weight_family() != WeightFamily::Interval) {
    for (double s : list_or(sigma, 1.0)) {
      if (!(s > 0.0) || !std::isfinite(s)) {
        throw Error(ErrorCode::NonPositiveScale, "--sigma must be positive");
      }
    }
    for (double m : list_or(mu, 0.0)) {
      if (!std::isfinite(m)) {
        throw config_error("--mu must be finite");
      }
    }
  }
}

ScoreValue score_case(const RunConfig &config, const UnivariateCase &c) {
  switch (config.kind) {
    case ScoreKind::Crps:
      return crps_sample(c.obs, c.fc);
    case ScoreKind::Logs:
      return logs_sample(c.obs, c.fc, config.bandwidth);
    case ScoreKind::TwCrps:
      return twcrps_sample(c.obs, c.fc, univariate_chain(config));
    case ScoreKind::OwCrps:
      return owcrps_sample(c.obs, c.fc, univariate_weight(config));
    case ScoreKind::Cols:
    case ScoreKind::Cels:
      return clogs_sample(c.obs, c.fc,
                          BoundsSpec(single(config.a, -kInf, "a"), single(config.b, kInf, "b")),
                          {config.bandwidth, config.kind == ScoreKind::Cels});
    default:
      throw config_error(std::string(to_string(config.kind)) +
                         " needs a multivariate archive");
  }
}

ScoreValue score_case(const RunConfig &config, const MultivariateCase &c) {
  switch (config.kind) {
    case ScoreKind::Es:
      return es_sample(c.obs, c.fc);
    case ScoreKind::Vs:
      return vs_sample(c.obs, c.fc, vs_params(config, c.fc.dim()));
    case ScoreKind::Mmds:
      return mmds_sample(c.obs, c.fc);
    case ScoreKind::OwEs:
      return owes_sample(c.obs, c.fc, multivariate_weight(config));
    case ScoreKind::OwVs:
      return owvs_sample(c.obs, c.fc, multivariate_weight(config),
                         vs_params(config, c.fc.dim()));
    case ScoreKind::OwMmds:
      return owmmds_sample(c.obs, c.fc, multivariate_weight(config));
    case ScoreKind::TwEs:
      return twes_sample(c.obs, c.fc, multivariate_chain(config));
    case ScoreKind::TwVs:
      return twvs_sample(c.obs, c.fc, multivariate_chain(config),
                         vs_params(config, c.fc.dim()));
    case ScoreKind::TwMmds:
      return twmmds_sample(c.obs, c.fc, multivariate_chain(config));
    default:
      throw config_error(std::string(to_string(config.kind)) +
                         " needs a univariate archive");
  }
}

ScoreTable run_score(const RunConfig &config, std::span<const UnivariateCase> cases) {
  return score_all(config, cases);
}

ScoreTable run_score(const RunConfig &config, std::span<const MultivariateCase> cases) {
  return score_all(config, cases);
}

ThresholdCurve run_curve(const RunConfig &config,
                         std::span<const UnivariateCase> cases,
                         std::span<const double> grid, Side side) {
  if (config.kind != ScoreKind::TwCrps && config.kind != ScoreKind::OwCrps) {
    throw config_error("curve supports only twcrps and owcrps");
  }
  if (config.family && *config.family != WeightFamily::Interval) {
    throw config_error("curve uses the interval weight family only");
  }
  if (config.a || config.b || config.mu || config.sigma) {
    throw config_error("curve sets the bounds from --grid and --side");
  }
  config.validate();
  if (grid.empty()) {
    throw config_error("grid is empty");
  }
  return threshold_curve(cases,
                         config.kind == ScoreKind::TwCrps ? CurveScore::TwCrps
                                                          : CurveScore::OwCrps,
                         grid, side, config.threads);
}

namespace {

nlohmann::json json_number(double v, int digits) {
  if (!std::isfinite(v)) {
    return nullptr;
  }
  if (digits >= 17) {
    return v;
  }
  return std::stod(format_number(v, digits));
}

nlohmann::json json_list(const std::optional<std::vector<double>> &values) {
  if (!values) {
    return nullptr;
  }
  auto arr = nlohmann::json::array();
  for (double v : *values) {
    arr.push_back(std::isfinite(v) ? nlohmann::json(v)
                                   : nlohmann::json(format_number(v)));
  }
  return arr;
}

std::string bandwidth_note(const RunConfig &config) {
  return config.bandwidth ? format_number(*config.bandwidth) : "silverman";
}

}  // namespace

std::string format_table(const ScoreTable &table, const RunConfig &config) {
  const int digits = config.digits;
  if (config.format == OutputFormat::Json) {
    nlohmann::json doc;
    doc["kind"] = std::string(to_string(config.kind));
    nlohmann::json cfg;
    if (is_outcome_weighted(config.kind) || is_threshold_weighted(config.kind) ||
        config.kind == ScoreKind::Cols || config.kind == ScoreKind::Cels) {
      cfg["weight_family"] = std::string(to_string(config.weight_family()));
      cfg["a"] = json_list(config.a);
      cfg["b"] = json_list(config.b);
      cfg["mu"] = json_list(config.mu);
      cfg["sigma"] = json_list(config.sigma);
    }
    if (uses_kde(config.kind)) {
      cfg["bw"] = bandwidth_note(config);
    }
    if (uses_variogram(config.kind)) {
      cfg["p"] = config.p.value_or(0.5);
      cfg["vs_weights"] = json_list(config.vs_weights);
    }
    doc["config"] = cfg.is_null() ? nlohmann::json::object() : cfg;
    auto cases = nlohmann::json::array();
    for (std::size_t i = 0; i < table.scores.size(); ++i) {
      const auto &s = table.scores[i];
      nlohmann::json row;
      row["case_id"] = table.case_ids[i];
      row["score"] = json_number(s.value, digits);
      row["status"] = std::string(to_string(s.status));
      if (s.warnings & kDecreasingChain) {
        row["warnings"] = {"decreasing_chain"};
      }
      cases.push_back(row);
    }
    doc["cases"] = cases;
    doc["summary"] = {
        {"n", table.scores.size()},
        {"n_defined", table.n_defined},
        {"n_undefined", table.n_undefined},
        {"n_warned", table.n_warned},
        {"mean_defined", json_number(table.mean_defined, digits)},
    };
    return doc.dump(2) + "\n";
  }

  std::string out = "case_id,score,status\n";
  for (std::size_t i = 0; i < table.scores.size(); ++i) {
    const auto &s = table.scores[i];
    out += table.case_ids[i];
    out += ',';
    out += format_number(s.value, digits);
    out += ',';
    out += to_string(s.status);
    out += '\n';
  }
  out += "# kind=" + std::string(to_string(config.kind));
  if (uses_kde(config.kind)) {
    out += " bw=" + bandwidth_note(config);
  }
  out += '\n';
  for (std::size_t i = 0; i < table.scores.size(); ++i) {
    if (table.scores[i].warnings & kDecreasingChain) {
      out += "# warning case=" + table.case_ids[i] + " decreasing_chain\n";
    }
  }
  out += "# n=" + std::to_string(table.scores.size()) +
         " n_defined=" + std::to_string(table.n_defined) +
         " n_undefined=" + std::to_string(table.n_undefined) +
         " n_warned=" + std::to_string(table.n_warned) + '\n';
  out += "# mean_defined=" + format_number(table.mean_defined, digits) + '\n';
  return out;
}

}  // namespace wsr
