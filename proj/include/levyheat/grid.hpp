#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyheat {

// Uniform space-time grid on the periodic unit interval: n spatial cells of
// width 1/n, time step tau, scheme parameter theta, horizon T = m*tau.
struct GridSpec {
  int n = 8;
  double tau = 0.01;
  double theta = 1.0;
  double T = 1.0;

  double dx() const { return 1.0 / n; }

  long num_steps() const { return static_cast<long>(std::llround(T / tau)); }

  // t_i = i*tau, x_j = j/n
  double t(long i) const { return i * tau; }
  double x(int j) const { return static_cast<double>(j) / n; }

  // kappa_n(y) = [n y]/n, kappa_tau(s) = [s/tau]*tau
  double kappa_x(double y) const { return std::floor(n * y) / n; }
  double kappa_t(double s) const { return std::floor(s / tau) * tau; }
  int cell_index(double y) const {
    int j = static_cast<int>(std::floor(n * y));
    j %= n;
    if (j < 0) j += n;
    return j;
  }
  long step_index(double s) const { return static_cast<long>(std::floor(s / tau)); }

  void validate() const {
    if (n < 3) throw std::invalid_argument("GridSpec: n must be >= 3");
    if (!(tau > 0.0 && tau < 0.5))
      throw std::invalid_argument("GridSpec: tau must lie in (0, 1/2)");
    if (!(theta >= 0.0 && theta <= 1.0))
      throw std::invalid_argument("GridSpec: theta must lie in [0, 1]");
    if (!(T > 0.0)) throw std::invalid_argument("GridSpec: T must be positive");
    double steps = T / tau;
    if (std::abs(steps - std::llround(steps)) > 1e-9)
      throw std::invalid_argument("GridSpec: T must be an integer multiple of tau");
  }
};

// Default free constants of the stability assumption: r strictly inside the
// admissible band for theta < 1/2, epsilon = 0.1 for theta = 1/2.
inline double default_r_bound(double theta) {
  return 0.9 / (2.0 - 4.0 * theta);
}
constexpr double kDefaultEpsilon = 0.1;

struct StabilityReport {
  bool pass = true;
  std::string violation;  // empty when pass
};

// Stability regimes:
//   theta in [0,1/2): requires n^2*tau <= r < 1/(2-4*theta)
//   theta = 1/2:      requires n^2*tau <= 1/eps - 1/2, eps in (0,1/2)
//   theta in (1/2,1]: unconditional
inline StabilityReport stability_check(int n, double tau, double theta,
                                       double r_bound, double epsilon) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("stability_check: theta must lie in [0, 1]");
  StabilityReport rep;
  const double ntsq = static_cast<double>(n) * n * tau;
  if (theta < 0.5) {
    const double cap = 1.0 / (2.0 - 4.0 * theta);
    if (!(r_bound < cap)) {
      rep.pass = false;
      rep.violation = "r bound " + std::to_string(r_bound) +
                      " is not below 1/(2-4*theta) = " + std::to_string(cap);
      return rep;
    }
    if (!(ntsq <= r_bound)) {
      rep.pass = false;
      rep.violation = "n^2*tau = " + std::to_string(ntsq) + " exceeds r = " +
                      std::to_string(r_bound);
    }
  } else if (theta == 0.5) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
      rep.pass = false;
      rep.violation = "epsilon must lie in (0, 1/2)";
      return rep;
    }
    const double cap = 1.0 / epsilon - 0.5;
    if (!(ntsq <= cap)) {
      rep.pass = false;
      rep.violation = "n^2*tau = " + std::to_string(ntsq) +
                      " exceeds 1/eps - 1/2 = " + std::to_string(cap);
    }
  }
  return rep;
}

inline StabilityReport stability_check(const GridSpec& g) {
  return stability_check(g.n, g.tau, g.theta, default_r_bound(g.theta),
                         kDefaultEpsilon);
}

// Eigenvalues of the periodic discrete Laplacian: lambda_l = -4 n^2 sin^2(l pi / n).
inline std::vector<double> eigenvalues(int n) {
  if (n < 3) throw std::invalid_argument("eigenvalues: n must be >= 3");
  std::vector<double> lam(n);
  for (int l = 0; l < n; ++l) {
    const double s = std::sin(l * M_PI / n);
    lam[l] = -4.0 * n * static_cast<double>(n) * s * s;
  }
  lam[0] = 0.0;
  return lam;
}

// Per-mode amplification data of the theta-scheme.
//   R1_l = (1 - theta*tau*lambda_l)^{-1},  R2_l = 1 + (1-theta)*tau*lambda_l,
//   a_l = R1_l * R2_l.
struct SpectralData {
  std::vector<double> lambda;
  std::vector<double> r1;
  std::vector<double> r2;
  std::vector<double> a;

  int n() const { return static_cast<int>(lambda.size()); }

  // R3_l = (R1_l R2_l)^{-1} - 1
  double r3(int l) const { return 1.0 / a[l] - 1.0; }
};

inline SpectralData amplification(const GridSpec& grid) {
  grid.validate();
  SpectralData sd;
  sd.lambda = eigenvalues(grid.n);
  sd.r1.resize(grid.n);
  sd.r2.resize(grid.n);
  sd.a.resize(grid.n);
  for (int l = 0; l < grid.n; ++l) {
    sd.r1[l] = 1.0 / (1.0 - grid.theta * grid.tau * sd.lambda[l]);
    sd.r2[l] = 1.0 + (1.0 - grid.theta) * grid.tau * sd.lambda[l];
    sd.a[l] = sd.r1[l] * sd.r2[l];
  }
  sd.r1[0] = sd.r2[0] = sd.a[0] = 1.0;
  return sd;
}

}  // namespace levyheat
