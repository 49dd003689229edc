// wsr: batch scoring of ensemble forecast archives.
//
//   wsr score --kind twcrps --input cases.csv --a 0
//   wsr curve --kind owcrps --input cases.csv --grid -3:3:0.5 --side above
//
// Exit codes: 0 success, 1 I/O, 2 validation/config, 3 undefined scores
// under --strict.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wsr/archive.hpp"
#include "wsr/run.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitStrict = 3;

struct CliOptions {
  std::string kind = "crps";
  std::string input;
  std::string out;
  std::string format = "csv";
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::optional<std::string> mu;
  std::optional<std::string> sigma;
  std::optional<std::string> family;
  std::optional<double> bw;
  std::optional<double> p;
  std::optional<std::string> vs_weights;
  std::optional<std::string> member_weights;
  int digits = 17;
  bool strict = false;
  unsigned threads = 0;
  std::string grid;
  std::string side = "above";
};

void add_common(CLI::App &cmd, CliOptions &o) {
  cmd.add_option("--kind", o.kind, "Score kind (crps, logs, twcrps, owcrps, cols, "
                                   "cels, es, vs, mmds, owes, owvs, owmmds, twes, "
                                   "twvs, twmmds)");
  cmd.add_option("--input", o.input, "Archive: CSV (y,x1..xm) or JSONL (y, dat)")
      ->required();
  cmd.add_option("--out", o.out, "Output path (default stdout)");
  cmd.add_option("--format", o.format, "csv or json");
  cmd.add_option("--a", o.a, "Lower bound(s), comma separated; -inf allowed");
  cmd.add_option("--b", o.b, "Upper bound(s), comma separated; inf allowed");
  cmd.add_option("--mu", o.mu, "Gaussian weight location(s)");
  cmd.add_option("--sigma", o.sigma, "Gaussian weight scale(s)");
  cmd.add_option("--weight-family", o.family, "interval, gauss-cdf or gauss-pdf");
  cmd.add_option("--bw", o.bw, "KDE bandwidth for logs/cols/cels");
  cmd.add_option("--p", o.p, "Variogram order");
  cmd.add_option("--vs-weights", o.vs_weights, "CSV file with the d x d VS scaling matrix");
  cmd.add_option("--member-weights", o.member_weights,
                 "CSV file with one row of member weights, or one row per case");
  cmd.add_option("--digits", o.digits, "Significant digits in the output (1-17)");
  cmd.add_flag("--strict", o.strict, "Exit 3 if any score is undefined");
  cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

std::optional<std::vector<double>> list_option(const std::optional<std::string> &s) {
  if (!s) {
    return std::nullopt;
  }
  return wsr::parse_real_list(*s);
}

wsr::RunConfig make_config(const CliOptions &o) {
  wsr::RunConfig cfg;
  cfg.kind = wsr::parse_score_kind(o.kind);
  if (o.family) {
    cfg.family = wsr::parse_weight_family(*o.family);
  }
  cfg.a = list_option(o.a);
  cfg.b = list_option(o.b);
  cfg.mu = list_option(o.mu);
  cfg.sigma = list_option(o.sigma);
  cfg.bandwidth = o.bw;
  cfg.p = o.p;
  if (o.vs_weights) {
    std::vector<double> flat;
    for (const auto &row : wsr::read_numeric_csv(std::filesystem::path(*o.vs_weights))) {
      flat.insert(flat.end(), row.begin(), row.end());
    }
    cfg.vs_weights = std::move(flat);
  }
  if (o.format == "csv") {
    cfg.format = wsr::OutputFormat::Csv;
  } else if (o.format == "json") {
    cfg.format = wsr::OutputFormat::Json;
  } else {
    throw wsr::Error(wsr::ErrorCode::InvalidConfig, "--format must be csv or json");
  }
  cfg.digits = o.digits;
  cfg.strict = o.strict;
  cfg.threads = o.threads;
  return cfg;
}

std::optional<std::vector<std::vector<double>>> member_weights(const CliOptions &o) {
  if (!o.member_weights) {
    return std::nullopt;
  }
  return wsr::read_numeric_csv(std::filesystem::path(*o.member_weights));
}

void emit(const std::string &text, const std::string &out) {
  if (out.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) {
      throw wsr::Error(wsr::ErrorCode::IoError, "cannot write to stdout");
    }
    return;
  }
  std::ofstream file(out, std::ios::binary);
  file << text;
  if (!file) {
    throw wsr::Error(wsr::ErrorCode::IoError, "cannot write '" + out + "'");
  }
}

int run_score_command(const CliOptions &o) {
  const auto cfg = make_config(o);
  cfg.validate();
  const auto weights = member_weights(o);
  wsr::ScoreTable table;
  if (wsr::is_multivariate(cfg.kind)) {
    const auto cases = wsr::read_multivariate_jsonl(std::filesystem::path(o.input), weights);
    table = wsr::run_score(cfg, std::span<const wsr::MultivariateCase>(cases));
  } else {
    const auto cases = wsr::read_univariate_csv(std::filesystem::path(o.input), weights);
    table = wsr::run_score(cfg, std::span<const wsr::UnivariateCase>(cases));
  }
  emit(wsr::format_table(table, cfg), o.out);
  if (table.n_undefined > 0) {
    std::cerr << "wsr: " << table.n_undefined << " of " << table.scores.size()
              << " scores are undefined\n";
    if (cfg.strict) {
      return kExitStrict;
    }
  }
  return 0;
}

int run_curve_command(const CliOptions &o) {
  const auto cfg = make_config(o);
  if (cfg.format != wsr::OutputFormat::Csv) {
    throw wsr::Error(wsr::ErrorCode::InvalidConfig, "curve writes CSV only");
  }
  wsr::Side side;
  if (o.side == "above") {
    side = wsr::Side::Above;
  } else if (o.side == "below") {
    side = wsr::Side::Below;
  } else {
    throw wsr::Error(wsr::ErrorCode::InvalidConfig, "--side must be above or below");
  }
  const auto grid = wsr::parse_grid(o.grid);
  // Validate the configuration before touching the input file.
  if (cfg.kind != wsr::ScoreKind::TwCrps && cfg.kind != wsr::ScoreKind::OwCrps) {
    throw wsr::Error(wsr::ErrorCode::InvalidConfig, "curve supports only twcrps and owcrps");
  }
  const auto cases =
      wsr::read_univariate_csv(std::filesystem::path(o.input), member_weights(o));
  const auto curve =
      wsr::run_curve(cfg, std::span<const wsr::UnivariateCase>(cases), grid, side);
  emit(curve.to_csv(cfg.digits), o.out);
  std::size_t undefined = 0;
  for (auto n : curve.n_undefined) {
    undefined += n;
  }
  if (undefined > 0 && cfg.strict) {
    std::cerr << "wsr: undefined scores at " << undefined << " (case, threshold) pairs\n";
    return kExitStrict;
  }
  return 0;
}

// CLI11 reads a value such as "-inf" or "-3:3:0.5" as a cluster of short
// flags, so numeric options are rewritten to the --opt=value form first.
std::vector<std::string> join_negative_values(int argc, char **argv) {
  static const std::set<std::string> kValued = {"--a", "--b", "--mu", "--sigma",
                                                "--grid"};
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (kValued.count(arg) && i + 1 < argc && argv[i + 1][0] == '-') {
      arg += '=';
      arg += argv[++i];
    }
    args.push_back(std::move(arg));
  }
  return args;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Weighted proper scoring rules for ensemble forecasts"};
  app.require_subcommand(1);

  CliOptions score_opts;
  auto *score = app.add_subcommand("score", "Score every case of an archive");
  add_common(*score, score_opts);

  CliOptions curve_opts;
  curve_opts.kind = "twcrps";
  auto *curve = app.add_subcommand("curve", "Mean weighted CRPS as a function of the threshold");
  add_common(*curve, curve_opts);
  curve->add_option("--grid", curve_opts.grid, "Thresholds as start:stop:step")->required();
  curve->add_option("--side", curve_opts.side, "above (a = t) or below (b = t)");

  auto args = join_negative_values(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (score->parsed()) {
      return run_score_command(score_opts);
    }
    return run_curve_command(curve_opts);
  } catch (const wsr::Error &e) {
    std::cerr << "wsr: " << wsr::to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == wsr::ErrorCode::IoError ? kExitIo : kExitInvalid;
  } catch (const std::exception &e) {
    std::cerr << "wsr: " << e.what() << '\n';
    return kExitInvalid;
  }
}
