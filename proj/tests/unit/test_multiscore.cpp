#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "../oracles.hpp"
#include "doctest.h"
#include "wsr/multiscore.hpp"
#include "wsr/uniscore.hpp"

using namespace wsr;
using oracle::Members;
using oracle::Vec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sample {
  Vec y;
  Members x;
  Vec raw;
};

Sample draw(std::mt19937_64 &rng, std::size_t d, std::size_t m) {
  std::normal_distribution<double> n(0.2, 1.0);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Sample s{Vec(d), Members(m, Vec(d)), Vec(m)};
  for (auto &v : s.y) v = n(rng);
  for (auto &mem : s.x)
    for (auto &v : mem) v = n(rng);
  for (auto &w : s.raw) w = u(rng);
  return s;
}

MultivariateEnsemble ensemble(const Sample &s) {
  return MultivariateEnsemble(s.y.size(), oracle::column_major(s.x), s.raw);
}

bool positive_orthant(const Vec &z) {
  for (double c : z)
    if (!(c > 0.0)) return false;
  return true;
}

}  // namespace

TEST_SUITE("multiscore") {

TEST_CASE("hand values") {
  MultivariateEnsemble fc(2, {0.0, 0.0, 1.0, 1.0});
  Vec origin{0.0, 0.0};
  CHECK(es_sample(origin, fc).value == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
  Vec y{0.0, 2.0};
  CHECK(vs_sample(y, fc).value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(mmds_sample(origin, fc).value ==
        doctest::Approx(-(1.0 + std::exp(-1.0)) / 4.0).epsilon(1e-14));
}

TEST_CASE("outcome weighted energy score hand case") {
  Members x{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
  MultivariateEnsemble fc(2, oracle::column_major(x));
  Vec y{2.0, 2.0};
  auto w = interval_weight(BoundsSpec(0.0, kInf));
  const double ref = oracle::owes(y, x, oracle::uniform_weights(3), positive_orthant);
  CHECK(ref == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
  CHECK(owes_sample(y, fc, w).value == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("unweighted scores match the oracle") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    auto s = draw(rng, 1 + t % 4, 1 + t % 13);
    auto fc = ensemble(s);
    auto w = oracle::normalized(s.raw);
    CHECK(es_sample(s.y, fc).value == doctest::Approx(oracle::es(s.y, s.x, w)).epsilon(1e-11));
    CHECK(vs_sample(s.y, fc).value ==
          doctest::Approx(oracle::vs(s.y, s.x, w, 0.5)).epsilon(1e-11));
    CHECK(vs_sample(s.y, fc, VsParams(1.5)).value ==
          doctest::Approx(oracle::vs(s.y, s.x, w, 1.5)).epsilon(1e-11));
    CHECK(mmds_sample(s.y, fc).value ==
          doctest::Approx(oracle::mmds(s.y, s.x, w)).epsilon(1e-11));
  }
}

TEST_CASE("variogram scaling matrix") {
  std::mt19937_64 rng(22);
  auto s = draw(rng, 3, 8);
  auto fc = ensemble(s);
  Vec h{0.0, 1.0, 2.0, 0.5, 0.0, 3.0, 1.0, 0.25, 0.0};
  VsParams params(0.5, h, 3);
  const double ref = oracle::vs(s.y, s.x, oracle::normalized(s.raw), 0.5,
                                [&](std::size_t i, std::size_t j) { return h[i * 3 + j]; });
  CHECK(vs_sample(s.y, fc, params).value == doctest::Approx(ref).epsilon(1e-12));
  Vec y2{0.0, 0.0};
  MultivariateEnsemble fc2(2, {0.0, 0.0});
  CHECK_THROWS_AS(vs_sample(y2, fc2, params), Error);
  CHECK_THROWS_AS(VsParams(0.0), Error);
  CHECK_THROWS_AS(VsParams(0.5, {1.0, -1.0, 1.0, 1.0}, 2), Error);
}

TEST_CASE("outcome weighted scores match the oracle") {
  std::mt19937_64 rng(23);
  const double mu = 0.0, sigma = 1.3;
  auto weight = product_weight({gauss_cdf_weight(mu, sigma)});
  auto wt = [&](const Vec &z) {
    double p = 1.0;
    for (double c : z) p *= oracle::phi_cdf((c - mu) / sigma);
    return p;
  };
  for (int t = 0; t < 30; ++t) {
    auto s = draw(rng, 1 + t % 3, 2 + t % 9);
    auto fc = ensemble(s);
    auto w = oracle::normalized(s.raw);
    CHECK(owes_sample(s.y, fc, weight).value ==
          doctest::Approx(oracle::owes(s.y, s.x, w, wt)).epsilon(1e-10));
    CHECK(owmmds_sample(s.y, fc, weight).value ==
          doctest::Approx(oracle::owmmds(s.y, s.x, w, wt)).epsilon(1e-10));
    CHECK(owvs_sample(s.y, fc, weight).value ==
          doctest::Approx(oracle::owvs(s.y, s.x, w, 0.5, wt)).epsilon(1e-10));
  }
}

TEST_CASE("threshold weighted scores transform then score") {
  std::mt19937_64 rng(24);
  auto chain = interval_chain(BoundsSpec(-kInf, 0.0));
  auto v = [](double z) { return std::min(z, 0.0); };
  for (int t = 0; t < 30; ++t) {
    auto s = draw(rng, 2 + t % 2, 3 + t % 7);
    auto fc = ensemble(s);
    auto w = oracle::normalized(s.raw);
    auto ty = oracle::transform(s.y, v);
    auto tx = oracle::transform(s.x, v);
    CHECK(twes_sample(s.y, fc, chain).value ==
          doctest::Approx(oracle::es(ty, tx, w)).epsilon(1e-11));
    CHECK(twvs_sample(s.y, fc, chain).value ==
          doctest::Approx(oracle::vs(ty, tx, w, 0.5)).epsilon(1e-11));
    CHECK(twmmds_sample(s.y, fc, chain).value ==
          doctest::Approx(oracle::mmds(ty, tx, w)).epsilon(1e-11));
  }
}

TEST_CASE("apply_chain keeps member weights") {
  Vec raw{1.0, 2.0};
  MultivariateEnsemble fc(2, {1.0, -1.0, -2.0, 3.0}, raw);
  Vec y{5.0, -5.0};
  auto [cy, cfc] = apply_chain(y, fc, interval_chain(BoundsSpec(-kInf, 0.0)));
  CHECK(cy == Vec{0.0, -5.0});
  CHECK(cfc.at(0, 0) == 0.0);
  CHECK(cfc.at(1, 1) == 0.0);
  CHECK(cfc.at(0, 1) == -2.0);
  CHECK(cfc.weights()[1] == fc.weights()[1]);
}

TEST_CASE("energy score in one dimension is the crps") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 100; ++t) {
    auto s = draw(rng, 1, 1 + t % 40);
    auto fc = ensemble(s);
    Vec x;
    for (auto &m : s.x) x.push_back(m[0]);
    EnsembleForecast ufc(x, s.raw);
    CHECK(std::abs(es_sample(s.y, fc).value - crps_sample(s.y[0], ufc).value) <= 1e-12);
  }
}

TEST_CASE("outcome weighting with no mass in the region") {
  MultivariateEnsemble fc(2, {-1.0, -1.0, -2.0, 0.5});
  auto w = interval_weight(BoundsSpec(0.0, kInf));
  Vec outside{-1.0, 2.0}, inside{1.0, 1.0};
  for (auto score : {owes_sample(outside, fc, w), owmmds_sample(outside, fc, w),
                     owvs_sample(outside, fc, w)}) {
    CHECK(score.is_defined());
    CHECK(score.value == 0.0);
  }
  CHECK(owes_sample(inside, fc, w).status == ScoreStatus::UndefinedWeightMass);
}

}
