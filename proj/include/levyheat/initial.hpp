#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyheat {

// Initial data families: constant, single Fourier mode, finite Fourier
// series (cos/sin coefficients), or raw grid samples.
struct InitialCondition {
  enum class Kind { constant, fourier_mode, fourier_series, grid_samples };

  Kind kind = Kind::constant;
  double c = 0.0;
  int mode_l = 1;
  double amp_cos = 0.0;
  double amp_sin = 0.0;
  std::vector<double> cos_coeff;  // index k, k = 0 is the constant term
  std::vector<double> sin_coeff;
  std::vector<double> samples;

  static InitialCondition constant(double value) {
    InitialCondition ic;
    ic.kind = Kind::constant;
    ic.c = value;
    return ic;
  }

  static InitialCondition mode(int l, double a_cos, double a_sin = 0.0) {
    if (l < 1) throw std::invalid_argument("InitialCondition::mode: l must be >= 1");
    InitialCondition ic;
    ic.kind = Kind::fourier_mode;
    ic.mode_l = l;
    ic.amp_cos = a_cos;
    ic.amp_sin = a_sin;
    return ic;
  }

  static InitialCondition series(std::vector<double> cosc, std::vector<double> sinc) {
    InitialCondition ic;
    ic.kind = Kind::fourier_series;
    ic.cos_coeff = std::move(cosc);
    ic.sin_coeff = std::move(sinc);
    return ic;
  }

  static InitialCondition grid(std::vector<double> values) {
    InitialCondition ic;
    ic.kind = Kind::grid_samples;
    ic.samples = std::move(values);
    return ic;
  }

  double value(double x) const {
    switch (kind) {
      case Kind::constant:
        return c;
      case Kind::fourier_mode:
        return amp_cos * std::cos(2.0 * M_PI * mode_l * x) +
               amp_sin * std::sin(2.0 * M_PI * mode_l * x);
      case Kind::fourier_series: {
        double s = 0.0;
        for (std::size_t k = 0; k < cos_coeff.size(); ++k)
          s += cos_coeff[k] * std::cos(2.0 * M_PI * k * x);
        for (std::size_t k = 0; k < sin_coeff.size(); ++k)
          s += sin_coeff[k] * std::sin(2.0 * M_PI * k * x);
        return s;
      }
      case Kind::grid_samples: {
        const int n = static_cast<int>(samples.size());
        int j = static_cast<int>(std::floor(n * x)) % n;
        if (j < 0) j += n;
        return samples[j];
      }
    }
    return 0.0;
  }

  std::vector<double> sample_on_grid(int n) const {
    if (kind == Kind::grid_samples && static_cast<int>(samples.size()) != n)
      throw std::invalid_argument("InitialCondition: sample count does not match grid");
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) v[j] = value(static_cast<double>(j) / n);
    return v;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::constant:
        return "constant(" + std::to_string(c) + ")";
      case Kind::fourier_mode:
        return "mode(l=" + std::to_string(mode_l) + ")";
      case Kind::fourier_series:
        return "series(" + std::to_string(cos_coeff.size()) + " terms)";
      case Kind::grid_samples:
        return "grid(" + std::to_string(samples.size()) + " samples)";
    }
    return "";
  }
};

}  // namespace levyheat
