#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wsr/diagnostics.hpp"
#include "wsr/kde.hpp"
#include "wsr/multiscore.hpp"
#include "wsr/uniscore.hpp"
#include "wsr/weightfns.hpp"

namespace py = pybind11;

namespace {

using Vec = std::vector<double>;
using Rows = std::vector<std::vector<double>>;
constexpr double kInf = std::numeric_limits<double>::infinity();

wsr::EnsembleForecast ensemble(Vec members, const std::optional<Vec> &weights) {
  return weights ? wsr::EnsembleForecast(std::move(members), *weights)
                 : wsr::EnsembleForecast(std::move(members));
}

// Members arrive as an m x d nested list (one row per member), which is
// exactly the member-major layout MultivariateEnsemble stores.
wsr::MultivariateEnsemble multi_ensemble(const Rows &members, const std::optional<Vec> &weights) {
  if (members.empty() || members.front().empty()) {
    throw wsr::Error(wsr::ErrorCode::TooFewMembers, "forecast needs at least one member");
  }
  const std::size_t d = members.front().size();
  Vec flat;
  flat.reserve(members.size() * d);
  for (const auto &row : members) {
    if (row.size() != d) {
      throw wsr::Error(wsr::ErrorCode::DimensionMismatch, "members differ in dimension");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return weights ? wsr::MultivariateEnsemble(d, std::move(flat), *weights)
                 : wsr::MultivariateEnsemble(d, std::move(flat));
}

double value_of(const wsr::ScoreValue &s) { return s.value; }

wsr::ChainFn chain_for(const std::string &family, double a, double b, double mu, double sigma) {
  if (family == "interval") return wsr::interval_chain(a, b);
  if (family == "gauss-cdf") return wsr::gauss_cdf_chain(mu, sigma);
  if (family == "gauss-pdf") return wsr::gauss_pdf_chain(mu, sigma);
  throw wsr::Error(wsr::ErrorCode::InvalidConfig, "unknown weight family '" + family + "'");
}

wsr::WeightFn weight_for(const std::string &family, double a, double b, double mu,
                         double sigma) {
  if (family == "interval") return wsr::interval_weight(a, b);
  if (family == "gauss-cdf") return wsr::gauss_cdf_weight(mu, sigma);
  if (family == "gauss-pdf") return wsr::gauss_pdf_weight(mu, sigma);
  throw wsr::Error(wsr::ErrorCode::InvalidConfig, "unknown weight family '" + family + "'");
}

wsr::BoundsSpec bounds(const Vec &a, const Vec &b) { return wsr::BoundsSpec(a, b); }

}  // namespace

PYBIND11_MODULE(_wsr, m) {
  m.doc() = "Weighted proper scoring rules for ensemble forecasts";

  static py::exception<wsr::Error> error(m, "WsrError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const wsr::Error &e) {
      py::set_error(error, (std::string(wsr::to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  const auto none = py::none();

  m.def("crps", [](double y, Vec x, std::optional<Vec> w) {
    return value_of(wsr::crps_sample(y, ensemble(std::move(x), w)));
  }, py::arg("obs"), py::arg("members"), py::arg("weights") = none);

  m.def("logs", [](double y, Vec x, std::optional<double> bw, std::optional<Vec> w) {
    return value_of(wsr::logs_sample(y, ensemble(std::move(x), w), bw));
  }, py::arg("obs"), py::arg("members"), py::arg("bw") = none, py::arg("weights") = none);

  m.def("twcrps", [](double y, Vec x, double a, double b, const std::string &family,
                     double mu, double sigma, std::optional<Vec> w) {
    return value_of(wsr::twcrps_sample(y, ensemble(std::move(x), w),
                                       chain_for(family, a, b, mu, sigma)));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = -kInf, py::arg("b") = kInf,
     py::arg("family") = "interval", py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
     py::arg("weights") = none);

  m.def("owcrps", [](double y, Vec x, double a, double b, const std::string &family,
                     double mu, double sigma, std::optional<Vec> w) {
    return value_of(wsr::owcrps_sample(y, ensemble(std::move(x), w),
                                       weight_for(family, a, b, mu, sigma)));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = -kInf, py::arg("b") = kInf,
     py::arg("family") = "interval", py::arg("mu") = 0.0, py::arg("sigma") = 1.0,
     py::arg("weights") = none,
     "NaN when the forecast puts no weight mass where the outcome has weight.");

  m.def("clogs", [](double y, Vec x, double a, double b, std::optional<double> bw,
                    bool censored, std::optional<Vec> w) {
    return value_of(wsr::clogs_sample(y, ensemble(std::move(x), w), wsr::BoundsSpec(a, b),
                                      {bw, censored}));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = -kInf, py::arg("b") = kInf,
     py::arg("bw") = none, py::arg("censored") = true, py::arg("weights") = none);

  m.def("es", [](const Vec &y, const Rows &x, std::optional<Vec> w) {
    return value_of(wsr::es_sample(y, multi_ensemble(x, w)));
  }, py::arg("obs"), py::arg("members"), py::arg("weights") = none);

  m.def("vs", [](const Vec &y, const Rows &x, double p, std::optional<Vec> w) {
    return value_of(wsr::vs_sample(y, multi_ensemble(x, w), wsr::VsParams(p)));
  }, py::arg("obs"), py::arg("members"), py::arg("p") = 0.5, py::arg("weights") = none);

  m.def("mmds", [](const Vec &y, const Rows &x, std::optional<Vec> w) {
    return value_of(wsr::mmds_sample(y, multi_ensemble(x, w)));
  }, py::arg("obs"), py::arg("members"), py::arg("weights") = none);

  const Vec lo{-kInf}, hi{kInf};

  m.def("twes", [](const Vec &y, const Rows &x, const Vec &a, const Vec &b,
                   std::optional<Vec> w) {
    return value_of(wsr::twes_sample(y, multi_ensemble(x, w), wsr::interval_chain(bounds(a, b))));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = lo, py::arg("b") = hi,
     py::arg("weights") = none);

  m.def("twvs", [](const Vec &y, const Rows &x, const Vec &a, const Vec &b, double p,
                   std::optional<Vec> w) {
    return value_of(wsr::twvs_sample(y, multi_ensemble(x, w),
                                     wsr::interval_chain(bounds(a, b)), wsr::VsParams(p)));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = lo, py::arg("b") = hi,
     py::arg("p") = 0.5, py::arg("weights") = none);

  m.def("twmmds", [](const Vec &y, const Rows &x, const Vec &a, const Vec &b,
                     std::optional<Vec> w) {
    return value_of(
        wsr::twmmds_sample(y, multi_ensemble(x, w), wsr::interval_chain(bounds(a, b))));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = lo, py::arg("b") = hi,
     py::arg("weights") = none);

  m.def("owes", [](const Vec &y, const Rows &x, const Vec &a, const Vec &b,
                   std::optional<Vec> w) {
    return value_of(wsr::owes_sample(y, multi_ensemble(x, w), wsr::interval_weight(bounds(a, b))));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = lo, py::arg("b") = hi,
     py::arg("weights") = none);

  m.def("owvs", [](const Vec &y, const Rows &x, const Vec &a, const Vec &b, double p,
                   std::optional<Vec> w) {
    return value_of(wsr::owvs_sample(y, multi_ensemble(x, w),
                                     wsr::interval_weight(bounds(a, b)), wsr::VsParams(p)));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = lo, py::arg("b") = hi,
     py::arg("p") = 0.5, py::arg("weights") = none);

  m.def("owmmds", [](const Vec &y, const Rows &x, const Vec &a, const Vec &b,
                     std::optional<Vec> w) {
    return value_of(
        wsr::owmmds_sample(y, multi_ensemble(x, w), wsr::interval_weight(bounds(a, b))));
  }, py::arg("obs"), py::arg("members"), py::arg("a") = lo, py::arg("b") = hi,
     py::arg("weights") = none);

  m.def("silverman_bandwidth", [](const Vec &x) { return wsr::default_bandwidth(x); },
        py::arg("members"));

  m.def("threshold_curve", [](const Vec &obs, const Rows &members, const Vec &grid,
                              const std::string &kind, const std::string &side,
                              unsigned threads) {
    if (obs.size() != members.size()) {
      throw wsr::Error(wsr::ErrorCode::DimensionMismatch,
                       "need one member row per observation");
    }
    std::vector<wsr::UnivariateCase> cases;
    cases.reserve(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
      cases.push_back({obs[i], wsr::EnsembleForecast(members[i])});
      wsr::validate_case(cases.back().obs, cases.back().fc);
    }
    wsr::CurveScore k;
    if (kind == "twcrps") k = wsr::CurveScore::TwCrps;
    else if (kind == "owcrps") k = wsr::CurveScore::OwCrps;
    else throw wsr::Error(wsr::ErrorCode::InvalidConfig, "kind must be twcrps or owcrps");
    wsr::Side s;
    if (side == "above") s = wsr::Side::Above;
    else if (side == "below") s = wsr::Side::Below;
    else throw wsr::Error(wsr::ErrorCode::InvalidConfig, "side must be above or below");
    const auto curve = wsr::threshold_curve(cases, k, grid, s, threads);
    py::dict out;
    out["threshold"] = curve.thresholds;
    out["mean_score"] = curve.mean_scores;
    out["n_undefined"] = curve.n_undefined;
    return out;
  }, py::arg("obs"), py::arg("members"), py::arg("grid"), py::arg("kind") = "twcrps",
     py::arg("side") = "above", py::arg("threads") = 0u);
}
