#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "wsr/archive.hpp"
#include "wsr/diagnostics.hpp"
#include "wsr/run.hpp"

using namespace wsr;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<UnivariateCase> synthetic(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<UnivariateCase> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(25);
    for (auto &v : x) v = z(rng);
    out.push_back({z(rng), EnsembleForecast(std::move(x))});
  }
  return out;
}

template <typename Fn>
ErrorCode code_of(Fn fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected wsr::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("tabulate counts and averages defined scores") {
  std::vector<ScoreValue> s{ScoreValue::defined(1.0), ScoreValue::undefined_weight_mass(),
                            ScoreValue::defined(3.0, kDecreasingChain)};
  auto t = tabulate(s);
  CHECK(t.case_ids == std::vector<std::string>{"1", "2", "3"});
  CHECK(t.n_defined == 2);
  CHECK(t.n_undefined == 1);
  CHECK(t.n_warned == 1);
  CHECK(t.mean_defined == 2.0);

  std::vector<ScoreValue> none{ScoreValue::undefined_weight_mass()};
  CHECK(std::isnan(tabulate(none).mean_defined));
  CHECK(code_of([&] { summarize(none); }) == ErrorCode::AllUndefined);
}

TEST_CASE("grid parsing") {
  auto g = parse_grid("-3:3:0.5");
  REQUIRE(g.size() == 13);
  CHECK(g.front() == -3.0);
  CHECK(g.back() == doctest::Approx(3.0));
  CHECK(parse_grid("0:0:1").size() == 1);
  CHECK(code_of([] { parse_grid("0:1:0"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_grid("1:0:0.1"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_grid("1:2"); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("threshold curve is non-increasing for twcrps") {
  auto cases = synthetic(200, 31);
  auto grid = parse_grid("-3:3:0.5");
  auto curve = threshold_curve(cases, CurveScore::TwCrps, grid, Side::Above, 2);
  REQUIRE(curve.mean_scores.size() == 13);
  for (std::size_t k = 1; k < grid.size(); ++k)
    CHECK(curve.mean_scores[k] <= curve.mean_scores[k - 1] + 1e-12);
  for (auto n : curve.n_undefined) CHECK(n == 0);
}

TEST_CASE("threshold curve beyond the data") {
  auto cases = synthetic(50, 32);
  std::vector<double> grid{0.0, 50.0};
  auto tw = threshold_curve(cases, CurveScore::TwCrps, grid, Side::Above);
  CHECK(tw.mean_scores[1] <= tw.mean_scores[0]);
  CHECK(tw.mean_scores[1] == 0.0);
  auto ow = threshold_curve(cases, CurveScore::OwCrps, grid, Side::Above);
  CHECK(ow.n_undefined[1] == 0);  // w(y)=0 for every case, so every score is 0
  CHECK(ow.mean_scores[1] == 0.0);
}

TEST_CASE("curve output is deterministic across thread counts") {
  auto cases = synthetic(120, 33);
  auto grid = parse_grid("-2:2:0.25");
  auto a = threshold_curve(cases, CurveScore::OwCrps, grid, Side::Below, 1);
  auto b = threshold_curve(cases, CurveScore::OwCrps, grid, Side::Below, 8);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_csv().rfind("threshold,mean_score,n_undefined\n", 0) == 0);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(0.1, 3) == "0.1");
  CHECK(format_number(std::nan("")) == "nan");
}

}

TEST_SUITE("archive") {

TEST_CASE("univariate csv") {
  std::istringstream in("y,x1,x2,x3\n2,1,2,3\n\n+0.5,1e0,-2,3\n");
  auto cases = read_univariate_csv(in);
  REQUIRE(cases.size() == 2);
  CHECK(cases[1].obs == 0.5);
  CHECK(cases[1].fc.members()[1] == -2.0);
}

TEST_CASE("univariate csv errors name the line") {
  std::istringstream ragged("y,x1,x2\n1,2,3\n1,2\n");
  try {
    read_univariate_csv(ragged);
    FAIL("expected ParseError");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()) == "line 3: expected 3 fields, got 2");
  }
  std::istringstream bad_number("y,x1\n1,abc\n");
  CHECK(code_of([&] { read_univariate_csv(bad_number); }) == ErrorCode::ParseError);
  std::istringstream header_only("y,x1\n");
  CHECK(code_of([&] { read_univariate_csv(header_only); }) == ErrorCode::EmptyArchive);
  std::istringstream empty("");
  CHECK(code_of([&] { read_univariate_csv(empty); }) == ErrorCode::EmptyArchive);
  std::istringstream no_y("obs,x1\n1,2\n");
  CHECK(code_of([&] { read_univariate_csv(no_y); }) == ErrorCode::ParseError);
  std::istringstream nan_obs("y,x1\nnan,2\n");
  CHECK(code_of([&] { read_univariate_csv(nan_obs); }) != ErrorCode::IoError);
}

TEST_CASE("member weights broadcast or per case") {
  std::istringstream in1("y,x1,x2\n0,0,1\n0,0,1\n");
  auto one = read_univariate_csv(in1, std::vector<std::vector<double>>{{1.0, 3.0}});
  CHECK(one[1].fc.weights()[1] == doctest::Approx(0.75));
  std::istringstream in2("y,x1,x2\n0,0,1\n0,0,1\n");
  auto per = read_univariate_csv(in2, std::vector<std::vector<double>>{{1, 1}, {3, 1}});
  CHECK(per[0].fc.weights()[0] == doctest::Approx(0.5));
  CHECK(per[1].fc.weights()[0] == doctest::Approx(0.75));
  std::istringstream in3("y,x1,x2\n0,0,1\n0,0,1\n0,0,1\n");
  CHECK(code_of([&] {
          read_univariate_csv(in3, std::vector<std::vector<double>>{{1, 1}, {3, 1}});
        }) == ErrorCode::BadMemberWeights);
}

TEST_CASE("multivariate jsonl") {
  std::istringstream in(R"({"y":[1,2],"dat":[[0,1,2],[3,4,5]]})"
                        "\n"
                        R"({"y":[0,0],"dat":[[0,1],[0,1]]})");
  auto cases = read_multivariate_jsonl(in);
  REQUIRE(cases.size() == 2);
  CHECK(cases[0].fc.dim() == 2);
  CHECK(cases[0].fc.size() == 3);
  CHECK(cases[0].fc.at(1, 2) == 5.0);

  std::istringstream mismatch(R"({"y":[1,2,3],"dat":[[0,1],[3,4]]})");
  CHECK(code_of([&] { read_multivariate_jsonl(mismatch); }) == ErrorCode::DimensionMismatch);
  std::istringstream broken("{\"y\": [1,\n");
  CHECK(code_of([&] { read_multivariate_jsonl(broken); }) == ErrorCode::ParseError);
  std::istringstream empty("\n");
  CHECK(code_of([&] { read_multivariate_jsonl(empty); }) == ErrorCode::EmptyArchive);
}

TEST_CASE("missing file is an io error") {
  CHECK(code_of([] { read_univariate_csv(std::filesystem::path("/no/such/file.csv")); }) ==
        ErrorCode::IoError);
}

}

TEST_SUITE("run") {

TEST_CASE("score kinds round trip") {
  for (const char *name : {"crps", "logs", "twcrps", "owcrps", "cols", "cels", "es", "vs",
                           "mmds", "owes", "owvs", "owmmds", "twes", "twvs", "twmmds"}) {
    CHECK(to_string(parse_score_kind(name)) == name);
  }
  CHECK(code_of([] { parse_score_kind("brier"); }) == ErrorCode::InvalidConfig);
  CHECK(is_multivariate(ScoreKind::TwMmds));
  CHECK_FALSE(is_multivariate(ScoreKind::Cels));
}

TEST_CASE("real parsing") {
  CHECK(parse_real("-inf") == -kInf);
  CHECK(parse_real("inf") == kInf);
  CHECK(parse_real("+2.5") == 2.5);
  CHECK(parse_real_list("0,-inf,3") == std::vector<double>{0.0, -kInf, 3.0});
  CHECK_THROWS_AS(parse_real("x"), Error);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.kind = ScoreKind::Crps;
  CHECK_NOTHROW(c.validate());
  c.a = std::vector<double>{0.0};
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidConfig);

  RunConfig tw;
  tw.kind = ScoreKind::TwCrps;
  tw.a = std::vector<double>{1.0};
  tw.b = std::vector<double>{0.0};
  CHECK(code_of([&] { tw.validate(); }) == ErrorCode::InvalidBounds);

  RunConfig g;
  g.kind = ScoreKind::OwCrps;
  g.family = WeightFamily::GaussPdf;
  g.sigma = std::vector<double>{0.0};
  CHECK_THROWS_AS(g.validate(), Error);

  RunConfig cl;
  cl.kind = ScoreKind::Cels;
  cl.family = WeightFamily::GaussCdf;
  CHECK(code_of([&] { cl.validate(); }) == ErrorCode::InvalidConfig);

  RunConfig d;
  d.digits = 0;
  CHECK(code_of([&] { d.validate(); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("run_score matches direct calls") {
  auto cases = synthetic(30, 41);
  RunConfig c;
  c.kind = ScoreKind::TwCrps;
  c.a = std::vector<double>{0.3};
  auto t = run_score(c, cases);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    CHECK(t.scores[i].value ==
          twcrps_sample(cases[i].obs, cases[i].fc, interval_chain(0.3, kInf)).value);
  }
  const auto csv = format_table(t, c);
  CHECK(csv.rfind("case_id,score,status\n1,", 0) == 0);
  CHECK(csv.find("# kind=twcrps") != std::string::npos);
  c.format = OutputFormat::Json;
  CHECK(format_table(t, c).find("\"kind\": \"twcrps\"") != std::string::npos);
}

TEST_CASE("run_curve rejects unsupported configurations") {
  auto cases = synthetic(5, 42);
  std::vector<double> grid{0.0};
  RunConfig c;
  c.kind = ScoreKind::Crps;
  CHECK_THROWS_AS(run_curve(c, cases, grid, Side::Above), Error);
  c.kind = ScoreKind::TwCrps;
  c.a = std::vector<double>{0.0};
  CHECK_THROWS_AS(run_curve(c, cases, grid, Side::Above), Error);
}

}
