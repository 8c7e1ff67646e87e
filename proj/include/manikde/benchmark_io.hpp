#pragma once

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "manikde/benchmark.hpp"

namespace manikde {

// Model config document: {family, a, b, w, beta, lambda, D, seed}. The
// seed key is accepted and ignored here (sampling seeds travel separately);
// b applies to the torus family only.
inline AnyModel model_from_json(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "circle") {
    CurveModel m;
    if (j.contains("a")) m.a = j["a"].get<double>();
    if (j.contains("w")) m.w = j["w"].get<int>();
    if (j.contains("beta")) m.beta = j["beta"].get<int>();
    if (j.contains("lambda")) m.lambda = j["lambda"].get<double>();
    if (j.contains("D")) m.D = j["D"].get<int>();
    m.validate();
    return m;
  }
  if (family == "torus") {
    TorusModel m;
    if (j.contains("a")) m.a = j["a"].get<double>();
    if (j.contains("b")) m.b = j["b"].get<double>();
    if (j.contains("w")) m.w = j["w"].get<int>();
    if (j.contains("beta")) m.beta = j["beta"].get<int>();
    if (j.contains("lambda")) m.lambda = j["lambda"].get<double>();
    if (j.contains("D")) m.D = j["D"].get<int>();
    m.validate();
    return m;
  }
  throw std::invalid_argument("model_from_json: family must be 'circle' or 'torus'");
}

inline nlohmann::json model_to_json(const AnyModel& model) {
  nlohmann::json j;
  if (const CurveModel* c = std::get_if<CurveModel>(&model)) {
    j["family"] = "circle";
    j["a"] = c->a;
    j["w"] = c->w;
    j["beta"] = c->beta;
    j["lambda"] = c->lambda;
    j["D"] = c->D;
  } else {
    const TorusModel& t = std::get<TorusModel>(model);
    j["family"] = "torus";
    j["a"] = t.a;
    j["b"] = t.b;
    j["w"] = t.w;
    j["beta"] = t.beta;
    j["lambda"] = t.lambda;
    j["D"] = t.D;
  }
  return j;
}

inline Variant variant_from_string(const std::string& s) {
  if (s == "fixed") return Variant::fixed;
  if (s == "lepski") return Variant::lepski;
  if (s == "adaptive_dim") return Variant::adaptive_dim;
  if (s == "geodesic_1d") return Variant::geodesic_1d;
  throw std::invalid_argument("unknown variant '" + s + "'");
}

inline std::string variant_to_string(Variant v) {
  switch (v) {
    case Variant::fixed: return "fixed";
    case Variant::lepski: return "lepski";
    case Variant::adaptive_dim: return "adaptive_dim";
    case Variant::geodesic_1d: return "geodesic_1d";
  }
  return "fixed";
}

inline BenchmarkConfig benchmark_config_from_json(const nlohmann::json& j) {
  BenchmarkConfig config{model_from_json(j.at("model"))};
  config.variant = variant_from_string(j.value("variant", std::string("fixed")));
  config.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  config.N_reps = j.value("N_reps", std::size_t{1});
  config.ell = j.value("ell", 3);
  const std::string stat = j.value("stat", std::string("mean_sq"));
  if (stat == "mean_sq") {
    config.stat = RiskStat::mean_sq;
  } else if (stat == "median_sq") {
    config.stat = RiskStat::median_sq;
  } else {
    throw std::invalid_argument("stat must be 'mean_sq' or 'median_sq'");
  }
  config.base_seed = j.value("base_seed", std::uint64_t{0});
  config.Theta = j.value("Theta", 0.0);
  config.p = j.value("p", 2.0);
  const std::string mode = j.value("psi_mode", std::string("numeric"));
  if (mode == "numeric") {
    config.psi_mode = PsiMode::numeric;
  } else if (mode == "theoretical") {
    config.psi_mode = PsiMode::theoretical;
  } else {
    throw std::invalid_argument("psi_mode must be 'numeric' or 'theoretical'");
  }
  config.f_min = j.value("f_min", 1.0);
  config.bootstrap_resamples = j.value("bootstrap_resamples", std::size_t{1000});
  config.validate();
  return config;
}

inline nlohmann::json report_to_json(const BenchmarkConfig& config,
                                     const BenchmarkReport& report) {
  nlohmann::json j;
  j["config"]["model"] = model_to_json(config.model);
  j["config"]["variant"] = variant_to_string(config.variant);
  j["config"]["n_grid"] = config.n_grid;
  j["config"]["N_reps"] = config.N_reps;
  j["config"]["ell"] = config.ell;
  j["config"]["stat"] = config.stat == RiskStat::mean_sq ? "mean_sq" : "median_sq";
  j["config"]["base_seed"] = config.base_seed;
  j["config"]["Theta"] = config.theta_or_default();
  j["config"]["p"] = config.p;
  j["config"]["psi_mode"] =
      config.psi_mode == PsiMode::numeric ? "numeric" : "theoretical";
  j["risks"] = report.risks;
  j["slope"] = report.slope;
  j["intercept"] = report.intercept;
  j["r_squared"] = report.r_squared;
  j["slope_ci"] = {report.slope_ci_lo, report.slope_ci_hi};
  j["theoretical_slope"] = report.theoretical_slope;
  j["wall_seconds"] = report.wall_seconds;
  j["warnings"] = report.warnings;
  return j;
}

inline void write_report_csv(const BenchmarkReport& report, std::ostream& os) {
  os << "n,risk\n";
  char buf[64];
  for (std::size_t i = 0; i < report.n_grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", report.n_grid[i], report.risks[i]);
    os << buf;
  }
}

}  // namespace manikde
