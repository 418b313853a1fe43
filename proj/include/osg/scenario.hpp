#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>

#include "json.hpp"

#include "branches.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "grid.hpp"
#include "model.hpp"

namespace osg {

// A fully resolved run description: model, evaluation time, grids, and what
// to condition on. Everything downstream of config parsing consumes this,
// never raw JSON.
struct ScenarioConfig {
  ModelParams params;
  double time = 0.0;
  Grid1D x_grid;
  std::optional<Grid1D> p_grid;
  MeasurementOutcome outcome = MeasurementOutcome::unconditioned;
  std::optional<WignerKind> kind;
  std::string out;
};

// Default position window: eight spreads on both sides of the packet center
// plus the branch displacement, so both branches and their fringes fit.
inline Grid1D auto_grid(const ModelParams& p, double t) {
  const double half = 8.0 * packet_spread(p, t) + branch_displacement(p, t);
  return {p.x0 - half, p.x0 + half, 4096};
}

namespace detail {

[[noreturn]] inline void bad_config(const std::string& msg) { throw ConfigError(msg); }

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end())
      bad_config("unknown key \"" + where + item.key() + "\"");
  }
}

inline std::optional<double> optional_number(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) return std::nullopt;
  const auto& v = j.at(key);
  if (!v.is_number()) bad_config("\"" + key + "\" must be a number");
  return v.get<double>();
}

inline double require_number(const nlohmann::json& j, const std::string& key) {
  const auto v = optional_number(j, key);
  if (!v) bad_config("missing required key \"" + key + "\"");
  return *v;
}

// Every physical input accepts an absolute SI form and a scaled convenience
// form. When both appear they must agree (to 1e-9 relative), and the SI
// value is the one kept, so convenience fields can never silently shift a
// run that also pins the absolute number.
inline std::optional<double> merge_forms(std::optional<double> si, std::optional<double> scaled,
                                         double scale, const std::string& si_key,
                                         const std::string& scaled_key) {
  if (si && scaled) {
    const double converted = *scaled * scale;
    const double denom = std::max({std::abs(*si), std::abs(converted), 1e-300});
    if (std::abs(*si - converted) > 1e-9 * denom)
      bad_config("\"" + si_key + "\" and \"" + scaled_key + "\" disagree");
    return si;
  }
  if (si) return si;
  if (scaled) return *scaled * scale;
  return std::nullopt;
}

inline std::size_t require_points(const nlohmann::json& j, const std::string& where) {
  if (!j.contains("points")) bad_config("missing required key \"" + where + "points\"");
  const auto& v = j.at("points");
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    bad_config("\"" + where + "points\" must be a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

inline Grid1D parse_axis(const nlohmann::json& g, double scale, const char* si_min,
                         const char* scaled_min, const char* si_max, const char* scaled_max,
                         const std::string& name) {
  reject_unknown(g, {si_min, scaled_min, si_max, scaled_max, "points"}, name + ".");
  const auto lo = merge_forms(optional_number(g, si_min), optional_number(g, scaled_min), scale,
                              si_min, scaled_min);
  const auto hi = merge_forms(optional_number(g, si_max), optional_number(g, scaled_max), scale,
                              si_max, scaled_max);
  if (!lo || !hi) bad_config("\"" + name + "\" needs both endpoints");
  Grid1D grid{*lo, *hi, require_points(g, name + ".")};
  grid.validate(name);
  return grid;
}

inline MeasurementOutcome parse_outcome(const std::string& s) {
  if (s == "zero") return MeasurementOutcome::zero_photons;
  if (s == "one") return MeasurementOutcome::one_photon;
  if (s == "none") return MeasurementOutcome::unconditioned;
  bad_config("\"outcome\" must be one of zero | one | none");
}

inline WignerKind parse_kind(const std::string& s) {
  if (s == "reduced") return WignerKind::reduced;
  if (s == "zero") return WignerKind::conditioned_zero;
  if (s == "one") return WignerKind::conditioned_one;
  if (s == "interference") return WignerKind::interference_only;
  bad_config("\"kind\" must be one of reduced | zero | one | interference");
}

}  // namespace detail

inline ScenarioConfig load_scenario(const nlohmann::json& j) {
  if (!j.is_object()) detail::bad_config("config root must be a JSON object");
  detail::reject_unknown(j,
                         {"mass_kg", "epsilon_per_s", "lambda_m", "omega_per_s", "delta_x0_m",
                          "delta_x0_over_lambda", "x0_m", "x0_over_lambda", "transit_time_s",
                          "epsilon_T", "t_s", "t_over_T", "grid", "p_grid", "outcome", "kind",
                          "out"},
                         "");

  ScenarioConfig cfg;
  ModelParams& P = cfg.params;
  P.mass = detail::require_number(j, "mass_kg");
  P.epsilon = detail::require_number(j, "epsilon_per_s");
  P.lambda = detail::require_number(j, "lambda_m");
  P.omega = detail::optional_number(j, "omega_per_s").value_or(0.0);
  if (!(std::isfinite(P.epsilon) && P.epsilon > 0.0))
    throw InvalidParameter("epsilon", "must be positive");
  if (!(std::isfinite(P.lambda) && P.lambda > 0.0))
    throw InvalidParameter("lambda", "must be positive");

  const auto dx0 =
      detail::merge_forms(detail::optional_number(j, "delta_x0_m"),
                          detail::optional_number(j, "delta_x0_over_lambda"), P.lambda,
                          "delta_x0_m", "delta_x0_over_lambda");
  if (!dx0) detail::bad_config("missing \"delta_x0_m\" or \"delta_x0_over_lambda\"");
  P.delta_x0 = *dx0;

  P.x0 = detail::merge_forms(detail::optional_number(j, "x0_m"),
                             detail::optional_number(j, "x0_over_lambda"), P.lambda, "x0_m",
                             "x0_over_lambda")
             .value_or(0.0);

  const auto T = detail::merge_forms(detail::optional_number(j, "transit_time_s"),
                                     detail::optional_number(j, "epsilon_T"), 1.0 / P.epsilon,
                                     "transit_time_s", "epsilon_T");
  if (!T) detail::bad_config("missing \"transit_time_s\" or \"epsilon_T\"");
  P.transit_time = *T;
  validate(P);

  const auto t = detail::merge_forms(detail::optional_number(j, "t_s"),
                                     detail::optional_number(j, "t_over_T"), P.transit_time, "t_s",
                                     "t_over_T");
  if (!t) detail::bad_config("missing \"t_s\" or \"t_over_T\"");
  if (!(*t >= 0.0)) throw NegativeTime(*t);
  cfg.time = *t;

  if (j.contains("grid")) {
    cfg.x_grid = detail::parse_axis(j.at("grid"), P.lambda, "x_min_m", "x_min_over_lambda",
                                    "x_max_m", "x_max_over_lambda", "grid");
  } else {
    cfg.x_grid = auto_grid(P, cfg.time);
  }

  if (j.contains("p_grid")) {
    const double hbar_k = hbar * detail::wavenumber(P);
    cfg.p_grid = detail::parse_axis(j.at("p_grid"), hbar_k, "p_min_kg_m_per_s",
                                    "p_min_over_hbar_k", "p_max_kg_m_per_s", "p_max_over_hbar_k",
                                    "p_grid");
  }

  if (j.contains("outcome")) {
    if (!j.at("outcome").is_string()) detail::bad_config("\"outcome\" must be a string");
    cfg.outcome = detail::parse_outcome(j.at("outcome").get<std::string>());
  }
  if (j.contains("kind")) {
    if (!j.at("kind").is_string()) detail::bad_config("\"kind\" must be a string");
    cfg.kind = detail::parse_kind(j.at("kind").get<std::string>());
  }
  if (j.contains("out")) {
    if (!j.at("out").is_string()) detail::bad_config("\"out\" must be a string");
    cfg.out = j.at("out").get<std::string>();
  }
  return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    detail::bad_config(std::string("config is not valid JSON: ") + e.what());
  }
  return load_scenario(j);
}

}  // namespace osg
