#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "levyheat/noise.hpp"
#include "levyheat/scheme.hpp"

namespace levyheat {

using json = nlohmann::json;

inline std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// File format: one JSON header line, then a CSV body (row = time index,
// column = space index), 17 significant digits.
inline void save_noise(const NoiseField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_noise: cannot open " + path);
  json hdr{{"type", "noise"}, {"n", f.n},       {"m", f.m},
           {"tau", f.tau},    {"seed", f.seed}, {"drift_per_cell", f.drift_per_cell}};
  out << hdr.dump() << "\n";
  for (long i = 0; i < f.m; ++i) {
    for (int j = 0; j < f.n; ++j) {
      if (j) out << ",";
      out << fmt17(f.at(i, j));
    }
    out << "\n";
  }
}

inline NoiseField load_noise(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_noise: cannot open " + path);
  std::string line;
  std::getline(in, line);
  json hdr = json::parse(line);
  NoiseField f;
  f.n = hdr.at("n").get<int>();
  f.m = hdr.at("m").get<long>();
  f.tau = hdr.at("tau").get<double>();
  f.seed = hdr.at("seed").get<std::uint64_t>();
  f.drift_per_cell = hdr.at("drift_per_cell").get<double>();
  f.increments.reserve(static_cast<std::size_t>(f.m) * f.n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) f.increments.push_back(std::stod(cell));
  }
  if (f.increments.size() != static_cast<std::size_t>(f.m) * f.n)
    throw std::runtime_error("load_noise: body size mismatch in " + path);
  return f;
}

inline void save_solution(const SolutionField& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_solution: cannot open " + path);
  json hdr{{"type", "solution"},
           {"n", s.grid.n},
           {"tau", s.grid.tau},
           {"theta", s.grid.theta},
           {"T", s.grid.T},
           {"noise_seed", s.noise_seed},
           {"coeff", s.coeff_id},
           {"u0", s.u0_id}};
  out << hdr.dump() << "\n";
  const long rows = s.grid.num_steps() + 1;
  for (long i = 0; i < rows; ++i) {
    for (int j = 0; j < s.grid.n; ++j) {
      if (j) out << ",";
      out << fmt17(s.at(i, j));
    }
    out << "\n";
  }
}

inline SolutionField load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_solution: cannot open " + path);
  std::string line;
  std::getline(in, line);
  json hdr = json::parse(line);
  SolutionField s;
  s.grid.n = hdr.at("n").get<int>();
  s.grid.tau = hdr.at("tau").get<double>();
  s.grid.theta = hdr.at("theta").get<double>();
  s.grid.T = hdr.at("T").get<double>();
  s.noise_seed = hdr.at("noise_seed").get<std::uint64_t>();
  s.coeff_id = hdr.at("coeff").get<std::string>();
  s.u0_id = hdr.at("u0").get<std::string>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) s.values.push_back(std::stod(cell));
  }
  if (s.values.size() !=
      static_cast<std::size_t>(s.grid.num_steps() + 1) * s.grid.n)
    throw std::runtime_error("load_solution: body size mismatch in " + path);
  return s;
}

}  // namespace levyheat
