#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "levyheat/dft.hpp"
#include "levyheat/grid.hpp"
#include "levyheat/scheme.hpp"

namespace levyheat {

// Discrete H^r norm: ( sum_j (1 - lambda_j)^r |vtilde_j|^2 / n )^{1/2}, r <= 0.
inline double discrete_sobolev_norm(const std::vector<double>& v, double r,
                                    const SpectralData& sd) {
  if (r > 0.0) throw std::invalid_argument("discrete_sobolev_norm: r must be <= 0");
  if (static_cast<int>(v.size()) != sd.n())
    throw std::invalid_argument("discrete_sobolev_norm: size mismatch");
  auto vt = dft_forward(v);
  double s = 0.0;
  for (int j = 0; j < sd.n(); ++j)
    s += std::pow(1.0 - sd.lambda[j], r) * std::norm(vt[j]);
  return std::sqrt(s / sd.n());
}

// True H^r norm of the step function y -> v(kappa_n(y)), expanded through
// continuous Fourier modes |j| <= mode_cap. Test-oracle companion to the
// discrete norm.
inline double step_function_sobolev_norm(const std::vector<double>& v, double r,
                                         int mode_cap = 200) {
  const int n = static_cast<int>(v.size());
  auto vt = dft_forward(v);
  double s = 0.0;
  for (int j = 0; j <= mode_cap; ++j) {
    cdouble alpha(1.0, 0.0);
    if (j > 0) {
      const double phi = 2.0 * M_PI * static_cast<double>(j) / n;
      alpha = (std::exp(cdouble(0.0, -phi)) - 1.0) / cdouble(0.0, -phi);
      if (j % n == 0) alpha = cdouble(0.0, 0.0);
    }
    const cdouble cj = vt[j % n] * alpha / std::sqrt(static_cast<double>(n));
    const double mult = (j == 0) ? 1.0 : 2.0;  // real v: |c_{-j}| = |c_j|
    s += mult *
         std::pow(1.0 + 4.0 * M_PI * M_PI * static_cast<double>(j) * j, r) *
         std::norm(cj);
  }
  return std::sqrt(s);
}

// [osc_r(u(t+h), u(t)) * osc_r(u(t), u(t-h))]^2 with osc_r the discrete H^r
// norm of the difference of piecewise-constant-in-time rows.
inline double oscillation_product(const SolutionField& sol, double t, double h,
                                  double r, const SpectralData& sd) {
  const GridSpec& g = sol.grid;
  if (!(h > 0.0 && h < std::min(t, 1.0)) || t + h > g.T + 1e-12)
    throw std::domain_error("oscillation_product: h out of range");
  const long ip = sol.row_of(t + h);
  const long i0 = sol.row_of(t);
  const long im = sol.row_of(t - h);
  const int n = g.n;
  std::vector<double> d1(n), d2(n);
  for (int j = 0; j < n; ++j) {
    d1[j] = sol.at(ip, j) - sol.at(i0, j);
    d2[j] = sol.at(i0, j) - sol.at(im, j);
  }
  const double o1 = discrete_sobolev_norm(d1, r, sd);
  const double o2 = discrete_sobolev_norm(d2, r, sd);
  return (o1 * o2) * (o1 * o2);
}

}  // namespace levyheat
