#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "wsr/core.hpp"

using namespace wsr;

namespace {

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

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_SUITE("core") {

TEST_CASE("uniform weights are 1/m") {
  EnsembleForecast fc({3.0, 1.0, 2.0});
  REQUIRE(fc.size() == 3);
  CHECK_FALSE(fc.has_member_weights());
  for (double w : fc.weights()) CHECK(w == 1.0 / 3.0);
  CHECK(fc.members()[0] == 3.0);
}

TEST_CASE("member weights are normalized once") {
  std::vector<double> w{1.0, 3.0};
  EnsembleForecast fc({0.0, 1.0}, w);
  CHECK(fc.has_member_weights());
  CHECK(fc.weights()[0] == doctest::Approx(0.25));
  CHECK(fc.weights()[1] == doctest::Approx(0.75));
}

TEST_CASE("bad member weights") {
  std::vector<double> zero{0.0, 0.0};
  std::vector<double> neg{1.0, -1.0};
  std::vector<double> short_w{1.0};
  std::vector<double> nan_w{1.0, kNan};
  CHECK(code_of([&] { EnsembleForecast({1.0, 2.0}, zero); }) == ErrorCode::BadMemberWeights);
  CHECK(code_of([&] { EnsembleForecast({1.0, 2.0}, neg); }) == ErrorCode::BadMemberWeights);
  CHECK(code_of([&] { EnsembleForecast({1.0, 2.0}, short_w); }) != ErrorCode::IoError);
  CHECK(code_of([&] { EnsembleForecast({1.0, 2.0}, nan_w); }) == ErrorCode::BadMemberWeights);
}

TEST_CASE("ensemble rejects empty and non-finite members") {
  CHECK(code_of([] { EnsembleForecast(std::vector<double>{}); }) == ErrorCode::TooFewMembers);
  CHECK(code_of([] { EnsembleForecast({1.0, kNan}); }) == ErrorCode::NonFiniteInput);
  CHECK(code_of([] { EnsembleForecast({1.0, kInf}); }) == ErrorCode::NonFiniteInput);
}

TEST_CASE("validate_case rejects a non-finite observation") {
  EnsembleForecast fc({1.0, 2.0});
  CHECK_NOTHROW(validate_case(0.5, fc));
  CHECK(code_of([&] { validate_case(kNan, fc); }) == ErrorCode::NonFiniteInput);
  CHECK(code_of([&] { validate_case(kInf, fc); }) == ErrorCode::NonFiniteInput);
}

TEST_CASE("multivariate layout and dimension checks") {
  auto fc = MultivariateEnsemble::from_rows({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
  CHECK(fc.dim() == 2);
  CHECK(fc.size() == 3);
  CHECK(fc.at(0, 2) == 3.0);
  CHECK(fc.at(1, 0) == 4.0);
  CHECK(fc.member(1)[1] == 5.0);

  std::vector<double> y3{0.0, 0.0, 0.0};
  CHECK(code_of([&] { validate_case(y3, fc); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { MultivariateEnsemble::from_rows({{1.0, 2.0}, {1.0}}); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("with_data keeps weights bit for bit") {
  std::vector<double> w{0.1, 0.7, 0.2};
  MultivariateEnsemble fc(1, {1.0, 2.0, 3.0}, w);
  auto moved = fc.with_data({5.0, 6.0, 7.0});
  for (std::size_t j = 0; j < 3; ++j) CHECK(moved.weights()[j] == fc.weights()[j]);
  CHECK(moved.at(0, 1) == 6.0);
}

TEST_CASE("bounds validation and broadcasting") {
  CHECK(BoundsSpec().is_unbounded());
  CHECK_NOTHROW(BoundsSpec(-kInf, 0.0));
  CHECK(code_of([] { BoundsSpec(1.0, 1.0); }) == ErrorCode::InvalidBounds);
  CHECK(code_of([] { BoundsSpec(2.0, 1.0); }) == ErrorCode::InvalidBounds);
  CHECK(code_of([] { BoundsSpec(kNan, 1.0); }) == ErrorCode::InvalidBounds);

  BoundsSpec b(std::vector<double>{0.0}, std::vector<double>{1.0, 2.0});
  CHECK(b.dim() == 2);
  CHECK(b.lower(1) == 0.0);
  CHECK(b.upper(1) == 2.0);
  auto wide = BoundsSpec(0.0, 1.0).broadcast(3);
  CHECK(wide.dim() == 3);
  CHECK(wide.upper(2) == 1.0);
}

TEST_CASE("score value constructors") {
  auto v = ScoreValue::defined(1.5);
  CHECK(v.is_defined());
  CHECK(v.value == 1.5);
  CHECK_FALSE(ScoreValue::undefined_weight_mass().is_defined());
  CHECK(std::isnan(ScoreValue::invalid_input().value));
  CHECK(to_string(ScoreStatus::UndefinedWeightMass) == "undefined_weight_mass");
}

}
