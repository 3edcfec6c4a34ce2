#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "levyheat/dft.hpp"
#include "levyheat/grid.hpp"
#include "levyheat/initial.hpp"

namespace levyheat {

struct GreenEvalConfig {
  double tol = 1e-12;            // absolute truncation tolerance
  double t_switch = 1.0 / (4.0 * M_PI);  // image/spectral crossover
  int image_max = 64;            // cap on image-sum terms (per side)
  long spectral_max = 4'000'000;  // cap on spectral terms

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("GreenEvalConfig: tol must be positive");
    if (image_max < 1 || spectral_max < 1)
      throw std::invalid_argument("GreenEvalConfig: caps must be >= 1");
  }
};

// Exact periodic heat kernel on [0,1]. Image sum for small t, spectral sum
// for large t; the two representations agree to ~1e-12 near the crossover.
inline double heat_green(double t, double x, double y,
                         const GreenEvalConfig& cfg = {}) {
  cfg.validate();
  if (!(t > 0.0)) throw std::domain_error("heat_green: t must be positive");
  const double d = x - y;
  if (t < cfg.t_switch) {
    const double pref = 1.0 / std::sqrt(4.0 * M_PI * t);
    double s = std::exp(-d * d / (4.0 * t));
    for (int m = 1; m <= cfg.image_max; ++m) {
      const double a = std::exp(-(d - m) * (d - m) / (4.0 * t));
      const double b = std::exp(-(d + m) * (d + m) / (4.0 * t));
      s += a + b;
      if (pref * (a + b) < cfg.tol && m >= 2) break;
    }
    return pref * s;
  }
  double s = 1.0;
  for (int m = 1; m <= cfg.image_max; ++m) {
    const double e = std::exp(-4.0 * M_PI * M_PI * m * m * t);
    s += 2.0 * e * std::cos(2.0 * M_PI * m * d);
    if (2.0 * e < cfg.tol) break;
  }
  return s;
}

namespace detail {

// floor(t/tau) with a relative guard so grid multiples do not round down.
inline long floor_step(double t, double tau) {
  return static_cast<long>(std::floor(t / tau + 1e-9));
}

// sum_l c_l^i * w_l * cos(2*pi*l*d), the common kernel of G1/G2. The weight
// w_l is 1 for G1 and R1_l for G2.
inline double discrete_green_sum(const GridSpec& grid, const SpectralData& sd,
                                 double t, double x, double y, bool with_r1) {
  if (t < 0.0) return 0.0;
  const long i = floor_step(t, grid.tau);
  const double d = grid.kappa_x(x) - grid.kappa_x(y);
  double s = 0.0;
  for (int l = 0; l < grid.n; ++l) {
    const double w = with_r1 ? sd.r1[l] : 1.0;
    s += std::pow(sd.a[l], static_cast<double>(i)) * w *
         std::cos(2.0 * M_PI * l * d);
  }
  return s;
}

}  // namespace detail

inline double discrete_green_G1(const GridSpec& grid, const SpectralData& sd,
                                double t, double x, double y) {
  return detail::discrete_green_sum(grid, sd, t, x, y, false);
}

inline double discrete_green_G2(const GridSpec& grid, const SpectralData& sd,
                                double t, double x, double y) {
  return detail::discrete_green_sum(grid, sd, t, x, y, true);
}

inline double discrete_green_G1(const GridSpec& grid, double t, double x, double y) {
  return discrete_green_G1(grid, amplification(grid), t, x, y);
}

inline double discrete_green_G2(const GridSpec& grid, double t, double x, double y) {
  return discrete_green_G2(grid, amplification(grid), t, x, y);
}

namespace detail {

// alpha_j = (e^{-2 pi i j/n} - 1)/(-2 pi i j / n); Re = sinc(phi), |.|^2 = sinc^2(phi/2)
inline double alpha_re(long j, int n) {
  if (j == 0) return 1.0;
  const double phi = 2.0 * M_PI * static_cast<double>(j) / n;
  return std::sin(phi) / phi;
}

inline double alpha_abs2(long j, int n) {
  if (j == 0) return 1.0;
  const double half = M_PI * static_cast<double>(j) / n;
  const double s = std::sin(half) / half;
  return s * s;
}

// trigamma: sum_{k>=0} (x+k)^{-2}, asymptotic form (x >= 8 here)
inline double trigamma_tail(double x) {
  const double x2 = x * x;
  return 1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x2 * x) -
         1.0 / (30.0 * x2 * x2 * x) + 1.0 / (42.0 * x2 * x2 * x2 * x);
}

// sum_{k>=0} (x+k)^{-3} = -psi''(x)/2, asymptotic form
inline double cubetail(double x) {
  const double x2 = x * x;
  return 1.0 / (2.0 * x2) + 1.0 / (2.0 * x2 * x) + 1.0 / (4.0 * x2 * x2) -
         1.0 / (12.0 * x2 * x2 * x2);
}

}  // namespace detail

// int_0^inf int_0^1 |G - G2|^2 dy dt at x = 0, evaluated mode-exactly.
//
// Expanding both kernels in e^{2 pi i j y}, the j-th coefficient difference is
// d_j(t) = e^{-4 pi^2 j^2 t} - a_l^{[t/tau]} R1_l alpha_j with l = j mod n, and
// Parseval plus the piecewise-constant time structure give per-j closed forms
// (geometric series in a_l). The constant mode cancels exactly.
inline double green_l2_error(const GridSpec& grid,
                             const GreenEvalConfig& cfg = {}) {
  cfg.validate();
  grid.validate();
  {
    auto rep = stability_check(grid);
    if (!rep.pass) throw std::invalid_argument("green_l2_error: " + rep.violation);
  }
  const SpectralData sd = amplification(grid);
  const int n = grid.n;
  const double tau = grid.tau;

  // Exact summation up to J, chosen so that e^{-c_j tau} < 1e-20 beyond it;
  // the remaining tail terms are algebraic in 1/j and summed in closed form
  // per residue class below.
  long J = 64L * n;
  {
    const long j_heat = static_cast<long>(
        std::ceil(std::sqrt(46.0 / (4.0 * M_PI * M_PI * tau))));
    J = std::max(J, j_heat);
  }
  if (J > cfg.spectral_max)
    throw std::runtime_error("green_l2_error: required terms exceed the cap");

  double total = 0.0;
  for (long j = 1; j <= J; ++j) {
    const double cj = 4.0 * M_PI * M_PI * static_cast<double>(j) * j;
    const int l = static_cast<int>(j % n);
    double term = 1.0 / (2.0 * cj);  // int e^{-2 c t} dt
    if (l != 0) {
      const double a = sd.a[l];
      const double r1 = sd.r1[l];
      const double ect = std::exp(-cj * tau);
      term -= 2.0 * r1 * detail::alpha_re(j, n) * (1.0 - ect) /
              (cj * (1.0 - a * ect));
      term += r1 * r1 * detail::alpha_abs2(j, n) * tau / (1.0 - a * a);
    }
    total += 2.0 * term;  // +-j symmetry
  }

  // tail of the exact-kernel energy: sum_{j>J} 1/(2 c_j)
  total += 2.0 * detail::trigamma_tail(static_cast<double>(J + 1)) /
           (8.0 * M_PI * M_PI);
  // for j > J the cross and discrete terms reduce to C2(l)/j^3 and K(l)/j^2
  for (int l = 1; l < n; ++l) {
    const double a = sd.a[l];
    const double r1 = sd.r1[l];
    const double K = r1 * r1 * static_cast<double>(n) * n *
                     std::sin(M_PI * l / n) * std::sin(M_PI * l / n) * tau /
                     (M_PI * M_PI * (1.0 - a * a));
    const double C2 = -r1 * n * std::sin(2.0 * M_PI * l / n) /
                      (4.0 * M_PI * M_PI * M_PI);
    // smallest j > J in the class j = l (mod n)
    long j0 = J + 1 + ((l - (J + 1) % n) + n) % n;
    const double x = static_cast<double>(j0) / n;
    total += 2.0 * K * detail::trigamma_tail(x) / (static_cast<double>(n) * n);
    total += 2.0 * C2 * detail::cubetail(x) /
             (static_cast<double>(n) * n * n);
  }
  return total;
}

// |int_0^1 (G - G1)(t,x,y) u0(kappa_n(y)) dy|^2 for t >= tau.
inline double green_initial_error(const GridSpec& grid, const InitialCondition& u0,
                                  double t, double x,
                                  const GreenEvalConfig& cfg = {}) {
  cfg.validate();
  grid.validate();
  if (t < grid.tau) throw std::domain_error("green_initial_error: t must be >= tau");
  const int n = grid.n;
  const SpectralData sd = amplification(grid);

  // hat u_l = (1/n) sum_r u0(x_r) e^{-2 pi i l r/n}
  std::vector<cdouble> uhat = dft_forward(u0.sample_on_grid(n));
  for (auto& c : uhat) c /= std::sqrt(static_cast<double>(n));

  cdouble exact(0.0, 0.0);
  // m = 0 term
  exact += uhat[0];
  for (long m = 1; m <= cfg.spectral_max; ++m) {
    const double e = std::exp(-4.0 * M_PI * M_PI * static_cast<double>(m) * m * t);
    bool done = e < cfg.tol;
    for (int sign = -1; sign <= 1; sign += 2) {
      const long mm = sign * m;
      int l = static_cast<int>(((mm % n) + n) % n);
      const double phi = 2.0 * M_PI * static_cast<double>(mm) / n;
      cdouble alpha = (mm % n == 0)
                          ? cdouble(0.0, 0.0)
                          : (std::exp(cdouble(0.0, -phi)) - 1.0) /
                                cdouble(0.0, -phi);
      exact += e * std::exp(cdouble(0.0, 2.0 * M_PI * mm * x)) * alpha * uhat[l];
    }
    if (done) break;
  }

  const long i = detail::floor_step(t, grid.tau);
  cdouble disc(0.0, 0.0);
  const double kx = grid.kappa_x(x);
  for (int l = 0; l < n; ++l)
    disc += std::pow(sd.a[l], static_cast<double>(i)) *
            std::exp(cdouble(0.0, 2.0 * M_PI * l * kx)) * uhat[l];

  return std::norm(exact - disc);
}

// int_0^inf int_0^1 |G2(s,x,y)|^p e^{-beta p s} dy ds at x = 0.
//
// G2(s,0,.) is a step function in y and piecewise constant in s, so the y
// integral is an exact cell average and the s integral is exact per step;
// once the non-constant modes have decayed the remaining tail is the
// constant-mode integral.
inline double green_p_integral(const GridSpec& grid, double p, double beta,
                               const GreenEvalConfig& cfg = {}) {
  cfg.validate();
  grid.validate();
  if (!(p >= 1.0 && p < 3.0))
    throw std::domain_error("green_p_integral: p must lie in [1, 3)");
  if (!(beta > 0.0)) throw std::domain_error("green_p_integral: beta must be positive");
  {
    auto rep = stability_check(grid);
    if (!rep.pass) throw std::invalid_argument("green_p_integral: " + rep.violation);
  }
  const SpectralData sd = amplification(grid);
  const int n = grid.n;
  const double tau = grid.tau;
  const double bp = beta * p;

  std::vector<cdouble> modes(n);
  for (int l = 0; l < n; ++l) modes[l] = sd.r1[l];

  double total = 0.0;
  long i = 0;
  for (; i <= cfg.spectral_max; ++i) {
    // cell values of G2(i*tau, 0, .) from the current mode weights
    auto vals = detail::transform(modes, +1);
    double cell_avg = 0.0;
    double dev = 0.0;  // max deviation from the constant mode
    for (int r = 0; r < n; ++r) {
      cell_avg += std::pow(std::abs(vals[r].real()), p);
      dev = std::max(dev, std::abs(vals[r].real() - 1.0));
    }
    cell_avg /= n;
    const double w = std::exp(-bp * i * tau) * (1.0 - std::exp(-bp * tau)) / bp;
    total += cell_avg * w;
    if (dev < cfg.tol && i > 0) {
      ++i;
      break;
    }
    if (std::exp(-bp * i * tau) < cfg.tol * bp) {
      ++i;
      break;
    }
    for (int l = 0; l < n; ++l) modes[l] *= sd.a[l];
  }
  total += std::exp(-bp * i * tau) / bp;  // |G2|^p -> 1 tail
  return total;
}

}  // namespace levyheat
