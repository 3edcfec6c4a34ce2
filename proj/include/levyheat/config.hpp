#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyheat/experiments.hpp"
#include "levyheat/green.hpp"
#include "levyheat/io.hpp"

namespace levyheat {

// ---------------------------------------------------------------------------
// Config parsing. Two encodings are accepted: JSON, or a flat key-value text
// with [section] headers. In the flat form values are numbers, comma lists,
// or bare strings.
// ---------------------------------------------------------------------------
namespace cfg {

inline json parse_scalar(const std::string& raw) {
  std::string s = raw;
  const auto l = s.find_first_not_of(" \t");
  const auto r = s.find_last_not_of(" \t\r");
  if (l == std::string::npos) return json();
  s = s.substr(l, r - l + 1);
  if (s.find(',') != std::string::npos) {
    json arr = json::array();
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) arr.push_back(parse_scalar(item));
    return arr;
  }
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos == s.size()) {
      if (v == std::floor(v) && std::abs(v) < 9e15 &&
          s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
          s.find('E') == std::string::npos)
        return static_cast<long long>(v);
      return v;
    }
  } catch (...) {
  }
  if (s == "true") return true;
  if (s == "false") return false;
  return s;
}

inline json parse_text(const std::string& text) {
  // JSON if it starts with '{'
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '{') return json::parse(text);
    break;
  }
  json out = json::object();
  std::string section;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto l = line.find_first_not_of(" \t");
    if (l == std::string::npos) continue;
    const auto r = line.find_last_not_of(" \t\r");
    line = line.substr(l, r - l + 1);
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: cannot parse line '" + line + "'");
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    json val = parse_scalar(line.substr(eq + 1));
    if (section.empty())
      out[key] = val;
    else
      out[section][key] = val;
  }
  return out;
}

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

inline std::uint64_t hash_of(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace cfg

// ---------------------------------------------------------------------------
// Block builders (throw on malformed blocks).
// ---------------------------------------------------------------------------
inline GridSpec grid_from(const json& j) {
  GridSpec g;
  g.n = j.at("n").get<int>();
  g.tau = j.at("tau").get<double>();
  g.theta = j.at("theta").get<double>();
  g.T = j.at("T").get<double>();
  return g;
}

inline LevyMeasureSpec measure_from(const json& j) {
  const std::string kind = j.value("kind", "zero");
  LevyMeasureSpec m;
  // flat configs parse one-element lists as scalars; normalize
  const auto as_array = [](const json& x) {
    return x.is_array() ? x : json::array({x});
  };
  if (kind == "zero") {
    m = LevyMeasureSpec::zero_measure();
  } else if (kind == "atomic") {
    std::vector<Atom> atoms;
    const json zs = as_array(j.at("jump_sizes"));
    const json rs = as_array(j.at("jump_rates"));
    if (zs.size() != rs.size())
      throw std::invalid_argument("noise: jump_sizes and jump_rates differ in length");
    for (std::size_t k = 0; k < zs.size(); ++k)
      atoms.push_back({zs[k].get<double>(), rs[k].get<double>()});
    m = LevyMeasureSpec::atomic(std::move(atoms));
  } else if (kind == "exponential") {
    m = LevyMeasureSpec::exponential(j.at("rate").get<double>(),
                                     j.at("scale").get<double>());
  } else {
    throw std::invalid_argument("noise: unknown measure kind '" + kind + "'");
  }
  m.small_jump_cutoff = j.value("small_jump_cutoff", 0.0);
  return m;
}

inline LevyNoiseSpec noise_from(const json& j) {
  LevyNoiseSpec s;
  s.measure = measure_from(j);
  if (j.contains("b") && j["b"].is_string() && j["b"] == "center")
    s.b = center_drift(s.measure);
  else
    s.b = j.value("b", 0.0);
  if (j.contains("truncation")) s = truncate(s, j["truncation"].get<double>());
  return s;
}

inline CoefficientSpec coeff_from(const json& j) {
  const std::string fam = j.value("family", "linear");
  const double g = j.value("gamma", 1.0);
  if (fam == "linear") return CoefficientSpec::linear(g);
  if (fam == "bounded_sin") return CoefficientSpec::bounded_sin(g);
  if (fam == "constant") return CoefficientSpec::constant(g);
  if (fam == "affine_clip")
    return CoefficientSpec::affine_clip(g, j.value("lo", -1.0), j.value("hi", 1.0),
                                        j.value("offset", 0.0));
  throw std::invalid_argument("coeff: unknown family '" + fam + "'");
}

inline InitialCondition init_from(const json& j) {
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") return InitialCondition::constant(j.value("c", 0.0));
  if (kind == "mode")
    return InitialCondition::mode(j.value("l", 1), j.value("amp_cos", 1.0),
                                  j.value("amp_sin", 0.0));
  if (kind == "grid") {
    std::vector<double> v;
    for (const auto& x : j.at("samples")) v.push_back(x.get<double>());
    return InitialCondition::grid(std::move(v));
  }
  throw std::invalid_argument("init: unknown kind '" + kind + "'");
}

inline MCConfig mc_from(const json& j) {
  MCConfig mc;
  mc.paths = j.value("paths", 2000);
  mc.base_seed = j.value("base_seed", 1ULL);
  mc.resamples = j.value("resamples", 1000);
  mc.workers = j.value("workers", 0);
  return mc;
}

// ---------------------------------------------------------------------------
// Validation: all module preconditions, checked without running anything.
// Violations are data, not exceptions.
// ---------------------------------------------------------------------------
inline std::vector<std::string> validate(const json& config) {
  std::vector<std::string> v;
  const std::string command = config.value("command", "");
  static const std::vector<std::string> commands{
      "simulate", "converge", "intermittency", "pathreg", "greenerr", "truncate"};
  if (command.empty()) {
    v.push_back("command: required (one of simulate, converge, intermittency, "
                "pathreg, greenerr, truncate)");
  } else if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    v.push_back("command: unknown command '" + command + "'");
  }

  GridSpec grid;
  bool grid_ok = false;
  if (!config.contains("grid")) {
    if (command != "greenerr") v.push_back("grid: required block missing");
  } else {
    try {
      grid = grid_from(config["grid"]);
      grid.validate();
      auto rep = stability_check(grid);
      if (!rep.pass)
        v.push_back("grid: stability: " + rep.violation);
      else
        grid_ok = true;
    } catch (const std::exception& e) {
      v.push_back(std::string("grid: ") + e.what());
    }
  }

  LevyNoiseSpec nspec;
  bool noise_ok = false;
  const bool needs_noise = command != "greenerr";
  if (!config.contains("noise")) {
    if (needs_noise) v.push_back("noise: required block missing");
  } else {
    try {
      nspec = noise_from(config["noise"]);
      noise_ok = true;
    } catch (const std::exception& e) {
      v.push_back(std::string("noise: ") + e.what());
    }
  }

  CoefficientSpec coeff;
  bool coeff_ok = false;
  const bool needs_coeff = command != "greenerr";
  if (!config.contains("coeff")) {
    if (needs_coeff) v.push_back("coeff: required block missing");
  } else {
    try {
      coeff = coeff_from(config["coeff"]);
      coeff_ok = true;
    } catch (const std::exception& e) {
      v.push_back(std::string("coeff: ") + e.what());
    }
  }

  InitialCondition u0;
  bool init_ok = false;
  if (config.contains("init")) {
    try {
      u0 = init_from(config["init"]);
      init_ok = true;
    } catch (const std::exception& e) {
      v.push_back(std::string("init: ") + e.what());
    }
  } else if (command == "simulate" || command == "intermittency") {
    v.push_back("init: required block missing");
  } else {
    init_ok = true;  // defaults apply
  }

  if (config.contains("mc")) {
    try {
      mc_from(config["mc"]).validate();
    } catch (const std::exception& e) {
      v.push_back(std::string("mc: ") + e.what());
    }
  }

  const json exp = config.value("experiment", json::object());

  if (command == "intermittency" && coeff_ok && noise_ok && init_ok) {
    if (!(coeff.lipschitz() > 0.0 && coeff.j0() > 0.0))
      v.push_back("coeff: intermittency preset requires L_sigma > 0 and J0 > 0 "
                  "(linear family)");
    if (config.contains("init") &&
        (u0.kind != InitialCondition::Kind::constant || !(u0.c > 0.0)))
      v.push_back("init: intermittency preset requires u0 = c > 0");
    const double want = center_drift(nspec.measure);
    if (std::abs(nspec.b - want) > 1e-12 * (1.0 + std::abs(want)))
      v.push_back("noise: intermittency preset requires the centered drift b = "
                  "-int_{|z|>1} z lambda(dz)");
    const double p = exp.value("p", 2.0);
    if (!(p > 1.0 && p < 3.0)) v.push_back("experiment: p must lie in (1, 3)");
  }

  if (command == "pathreg" && coeff_ok) {
    if (!coeff.bounded()) v.push_back("coeff: pathreg requires a bounded sigma family");
    const double r = exp.value("r", -0.6);
    if (!(r < -0.5)) v.push_back("experiment: pathreg requires r < -1/2");
    if (noise_ok && nspec.measure.kind == MeasureKind::zero)
      v.push_back("noise: pathreg statistics degenerate under the zero measure");
    if (coeff.sigma(0.0) == 0.0)
      v.push_back("coeff: pathreg starts from u0 = 0 and needs sigma(0) != 0");
  }

  if (command == "converge" && grid_ok) {
    try {
      const std::string axis = exp.value("axis", "space");
      if (axis != "space" && axis != "time")
        v.push_back("experiment: axis must be 'space' or 'time'");
      if (axis == "space") {
        const int n_ref = exp.value("n_ref", 128);
        for (const auto& nk : exp.value("ns", json::array({8, 16, 32, 64}))) {
          const int n = nk.get<int>();
          if (n_ref % n != 0)
            v.push_back("experiment: ladder n=" + std::to_string(n) +
                        " does not divide n_ref=" + std::to_string(n_ref));
        }
      } else {
        const double tau_ref = exp.value("tau_ref", grid.tau / 32.0);
        for (const auto& tk : exp.value("taus", json::array())) {
          const double t = tk.get<double>();
          const double ratio = t / tau_ref;
          if (std::abs(ratio - std::llround(ratio)) > 1e-9)
            v.push_back("experiment: ladder tau=" + std::to_string(t) +
                        " is not an integer multiple of tau_ref");
        }
      }
    } catch (const std::exception& e) {
      v.push_back(std::string("experiment: ") + e.what());
    }
  }

  if (command == "simulate" && noise_ok && coeff_ok) {
    if (nspec.measure.kind == MeasureKind::zero && !nspec.measure.deterministic_ok)
      v.push_back("noise: zero measure requires deterministic opt-in");
  }

  return v;
}

}  // namespace levyheat
