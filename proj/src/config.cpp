// SPDX-License-Identifier: Apache-2.0
#include "hs_stokes/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace hs {

using nlohmann::json;

namespace {

const json& need(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::config, "missing key '" + (where.empty() ? key : where + "." + key) + "'");
  return j.at(key);
}

double num(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number()) fail(ErrorCode::config, "key '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer()) fail(ErrorCode::config, "key '" + where + "." + key + "' must be an integer");
  return v.get<int>();
}

double num_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) fail(ErrorCode::config, "key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

void check(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorCode::config, msg);
}

}  // namespace

double FieldSpec::get(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return (it == params.end() || it->second.empty()) ? fallback : it->second[0];
}

std::vector<double> FieldSpec::get_vec(const std::string& key, std::vector<double> fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

SolverConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
  }
  check(j.is_object(), "config must be a JSON object");
  SolverConfig c;
  c.dimension = integer(j, "dimension", "");
  check(c.dimension == 2 || c.dimension == 3, "dimension must be 2 or 3");

  const json& g = need(j, "grid", "");
  c.grid.box_length = num(g, "box_length", "grid");
  c.grid.n_tangential = integer(g, "n_tangential", "grid");
  c.grid.height = num(g, "height", "grid");
  c.grid.n_cells = integer(g, "n_cells", "grid");
  c.grid.grading = num(g, "grading", "grid");
  check(c.grid.box_length > 0, "grid.box_length must be positive");
  check(c.grid.n_tangential >= 4 && c.grid.n_tangential % 2 == 0, "n_tangential must be even and >= 4");
  check(c.grid.height > 0, "grid.height must be positive");
  check(c.grid.n_cells >= 2, "grid.n_cells must be >= 2");
  check(c.grid.grading >= 1, "grid.grading must be >= 1");

  const json& l = need(j, "lambda", "");
  try {
    c.lambda = SectorPoint(num(l, "modulus", "lambda"), num(l, "argument", "lambda"),
                           num(l, "epsilon", "lambda"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    fail(ErrorCode::config, std::string("lambda: ") + e.what());
  }

  const json& ct = need(j, "contour", "");
  c.contour.eta = num(ct, "eta", "contour");
  c.contour.kappa = num(ct, "kappa", "contour");
  c.contour.n_nodes = integer(ct, "n_nodes", "contour");
  check(c.contour.eta > kPi / 2 && c.contour.eta < kPi, "contour.eta must lie in (pi/2, pi)");
  check(c.contour.kappa > 0, "contour.kappa must be positive");
  check(c.contour.n_nodes == 4 || c.contour.n_nodes == 8 || c.contour.n_nodes == 16 ||
            c.contour.n_nodes == 20 || c.contour.n_nodes == 32,
        "contour.n_nodes must be one of 4, 8, 16, 20, 32");

  const json& ns = need(j, "ns", "");
  c.ns.horizon = num(ns, "horizon", "ns");
  c.ns.time_steps = integer(ns, "time_steps", "ns");
  c.ns.q = num(ns, "q", "ns");
  c.ns.rho = num(ns, "rho", "ns");
  c.ns.gamma = num(ns, "gamma", "ns");
  c.ns.max_sweeps = integer(ns, "max_sweeps", "ns");
  check(c.ns.horizon > 0, "ns.horizon must be positive");
  check(c.ns.time_steps >= 1, "ns.time_steps must be >= 1");
  check(c.ns.q >= 1, "ns.q must be >= 1");
  check(c.ns.rho > 0, "ns.rho must be positive");
  check(c.ns.gamma >= 0, "ns.gamma must be nonnegative");
  check(c.ns.max_sweeps >= 1, "ns.max_sweeps must be >= 1");
  if (ns.contains("calibrate_directions")) c.ns.calibrate_directions = integer(ns, "calibrate_directions", "ns");
  check(c.ns.calibrate_directions >= 0, "ns.calibrate_directions must be nonnegative");

  const json& tol = need(j, "tolerances", "");
  c.tolerances.quadrature = num(tol, "quadrature", "tolerances");
  c.tolerances.fixed_point = num(tol, "fixed_point", "tolerances");
  c.tolerances.residual = num_or(tol, "residual", c.tolerances.residual);
  check(c.tolerances.quadrature > 0 && c.tolerances.fixed_point > 0 && c.tolerances.residual > 0,
        "tolerances must be positive");

  if (j.contains("field")) {
    const json& f = j.at("field");
    check(f.is_object(), "field must be an object");
    if (f.contains("name")) c.field.name = f.at("name").get<std::string>();
    for (auto it = f.begin(); it != f.end(); ++it) {
      if (it.key() == "name") continue;
      if (it.value().is_number()) {
        c.field.params[it.key()] = {it.value().get<double>()};
      } else if (it.value().is_array()) {
        std::vector<double> v;
        for (const auto& e : it.value()) {
          check(e.is_number(), "field." + it.key() + " must hold numbers");
          v.push_back(e.get<double>());
        }
        c.field.params[it.key()] = v;
      } else {
        fail(ErrorCode::config, "field." + it.key() + " must be a number or array");
      }
    }
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check(s.is_object(), "sweep must be an object");
    c.sweep.n_samples = static_cast<std::size_t>(num_or(s, "n_samples", double(c.sweep.n_samples)));
    c.sweep.lambda_min = num_or(s, "lambda_min", c.sweep.lambda_min);
    c.sweep.lambda_max = num_or(s, "lambda_max", c.sweep.lambda_max);
    c.sweep.radius_min = num_or(s, "radius_min", c.sweep.radius_min);
    c.sweep.radius_max = num_or(s, "radius_max", c.sweep.radius_max);
    c.sweep.t_min = num_or(s, "t_min", c.sweep.t_min);
    c.sweep.t_max = num_or(s, "t_max", c.sweep.t_max);
    c.sweep.n_points = static_cast<int>(num_or(s, "n_points", c.sweep.n_points));
    c.sweep.trials = static_cast<int>(num_or(s, "trials", c.sweep.trials));
    c.sweep.bilinear_trials = static_cast<int>(num_or(s, "bilinear_trials", c.sweep.bilinear_trials));
    if (s.contains("angles")) {
      c.sweep.angles.clear();
      for (const auto& e : s.at("angles")) {
        check(e.is_number(), "sweep.angles must hold numbers");
        c.sweep.angles.push_back(e.get<double>());
      }
      check(!c.sweep.angles.empty(), "sweep.angles must not be empty");
    }
    if (s.contains("exponents")) {
      c.sweep.exponents.clear();
      for (const auto& e : s.at("exponents")) {
        check(e.is_array() && e.size() == 2, "sweep.exponents entries must be [q, p]");
        auto val = [](const json& x) {
          if (x.is_string() && x.get<std::string>() == "inf") return -1.0;
          return x.get<double>();
        };
        c.sweep.exponents.push_back({val(e[0]), val(e[1])});
      }
    }
    check(c.sweep.n_samples >= 1 && c.sweep.n_points >= 2 && c.sweep.trials >= 1 && c.sweep.bilinear_trials >= 1,
          "sweep sizes must be positive");
    check(c.sweep.lambda_min > 0 && c.sweep.lambda_max > c.sweep.lambda_min, "sweep lambda range invalid");
    check(c.sweep.t_min > 0 && c.sweep.t_max > c.sweep.t_min, "sweep t range invalid");
    check(c.sweep.radius_min > 0 && c.sweep.radius_max > c.sweep.radius_min, "sweep radius range invalid");
  }
  return c;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const SolverConfig& c) {
  json j;
  j["dimension"] = c.dimension;
  j["grid"] = {{"box_length", c.grid.box_length},
               {"n_tangential", c.grid.n_tangential},
               {"height", c.grid.height},
               {"n_cells", c.grid.n_cells},
               {"grading", c.grid.grading}};
  j["lambda"] = {{"modulus", c.lambda.modulus}, {"argument", c.lambda.argument}, {"epsilon", c.lambda.epsilon}};
  j["contour"] = {{"eta", c.contour.eta}, {"kappa", c.contour.kappa}, {"n_nodes", c.contour.n_nodes}};
  j["ns"] = {{"horizon", c.ns.horizon}, {"time_steps", c.ns.time_steps}, {"q", c.ns.q},
             {"rho", c.ns.rho}, {"gamma", c.ns.gamma}, {"max_sweeps", c.ns.max_sweeps},
             {"calibrate_directions", c.ns.calibrate_directions}};
  j["tolerances"] = {{"quadrature", c.tolerances.quadrature},
                     {"fixed_point", c.tolerances.fixed_point},
                     {"residual", c.tolerances.residual}};
  json f;
  f["name"] = c.field.name;
  for (const auto& [k, v] : c.field.params) f[k] = v;
  j["field"] = f;
  json ex = json::array();
  for (const auto& [q, p] : c.sweep.exponents) ex.push_back({q, p < 0 ? json("inf") : json(p)});
  j["sweep"] = {{"n_samples", c.sweep.n_samples}, {"lambda_min", c.sweep.lambda_min},
                {"lambda_max", c.sweep.lambda_max}, {"radius_min", c.sweep.radius_min},
                {"radius_max", c.sweep.radius_max}, {"t_min", c.sweep.t_min},
                {"t_max", c.sweep.t_max},           {"n_points", c.sweep.n_points},
                {"trials", c.sweep.trials},         {"bilinear_trials", c.sweep.bilinear_trials},
                {"angles", c.sweep.angles},         {"exponents", ex}};
  return j.dump(2);
}

std::uint64_t config_hash(const SolverConfig& c) {
  const std::string s = config_to_json(c);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

GridPtr grid_from_config(const SolverConfig& c) {
  return make_grid(c.dimension, c.grid.box_length, c.grid.n_tangential, c.grid.height,
                   c.grid.n_cells, c.grid.grading);
}

}  // namespace hs
