#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyheat/dft.hpp"
#include "levyheat/grid.hpp"
#include "levyheat/initial.hpp"
#include "levyheat/noise.hpp"

namespace levyheat {

// Closed enumeration of Lipschitz coefficient families, so the Lipschitz
// constant and J0 = inf |sigma(x)/x| are exact.
struct CoefficientSpec {
  enum class Family { linear, bounded_sin, constant, affine_clip };

  Family family = Family::linear;
  double gamma = 1.0;  // linear slope / bounded amplitude / constant value
  double clip_lo = -1.0, clip_hi = 1.0, offset = 0.0;  // affine_clip: offset + gamma*clamp(u)

  static CoefficientSpec linear(double g) { return {Family::linear, g}; }
  static CoefficientSpec bounded_sin(double b) { return {Family::bounded_sin, b}; }
  static CoefficientSpec constant(double b) { return {Family::constant, b}; }
  static CoefficientSpec affine_clip(double g, double lo, double hi, double off) {
    return {Family::affine_clip, g, lo, hi, off};
  }

  double sigma(double u) const {
    switch (family) {
      case Family::linear:
        return gamma * u;
      case Family::bounded_sin:
        return gamma * std::sin(u);
      case Family::constant:
        return gamma;
      case Family::affine_clip:
        return offset + gamma * std::clamp(u, clip_lo, clip_hi);
    }
    return 0.0;
  }

  double lipschitz() const {
    switch (family) {
      case Family::linear:
      case Family::bounded_sin:
        return std::abs(gamma);
      case Family::constant:
        return 0.0;
      case Family::affine_clip:
        return std::abs(gamma);
    }
    return 0.0;
  }

  // inf_{x != 0} |sigma(x)/x|; positive only for the linear family.
  double j0() const { return family == Family::linear ? std::abs(gamma) : 0.0; }

  bool bounded() const {
    return family == Family::bounded_sin || family == Family::constant ||
           family == Family::affine_clip;
  }

  std::string describe() const {
    switch (family) {
      case Family::linear:
        return "linear(" + std::to_string(gamma) + ")";
      case Family::bounded_sin:
        return "bounded_sin(" + std::to_string(gamma) + ")";
      case Family::constant:
        return "constant(" + std::to_string(gamma) + ")";
      case Family::affine_clip:
        return "affine_clip(" + std::to_string(gamma) + ")";
    }
    return "";
  }
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long step)
      : std::runtime_error("scheme diverged at step " + std::to_string(step)),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

// Numerical solution on the full space-time grid; row i is u(t_i, .).
struct SolutionField {
  GridSpec grid;
  std::vector<double> values;  // (m+1) x n row-major
  std::uint64_t noise_seed = 0;
  std::string coeff_id;
  std::string u0_id;

  double at(long i, int j) const { return values[i * grid.n + j]; }
  double& at(long i, int j) { return values[i * grid.n + j]; }

  // piecewise-constant-in-time reading
  const double* row(long i) const { return values.data() + i * grid.n; }
  long row_of(double t) const {
    return std::min(static_cast<long>(std::floor(t / grid.tau + 1e-9)),
                    grid.num_steps());
  }
};

// Applies the periodic second difference Delta_n.
inline std::vector<double> laplacian(const std::vector<double>& u, int n) {
  std::vector<double> out(n);
  const double n2 = static_cast<double>(n) * n;
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const int jm = (j + n - 1) % n;
    out[j] = n2 * (u[jp] - 2.0 * u[j] + u[jm]);
  }
  return out;
}

// Solves (I - theta*tau*Delta_n) w = rhs by spectral division: mode l is
// multiplied by R1_l. The system is always nonsingular (1 - theta*tau*lambda >= 1).
inline std::vector<double> solve_implicit(const std::vector<double>& rhs,
                                          const GridSpec& grid,
                                          const SpectralData& sd) {
  std::vector<cdouble> v = dft_forward(rhs);
  for (int l = 0; l < grid.n; ++l) v[l] *= sd.r1[l];
  auto w = dft_inverse(v);
  std::vector<double> out(grid.n);
  for (int l = 0; l < grid.n; ++l) out[l] = w[l].real();
  return out;
}

inline std::vector<double> solve_implicit(const std::vector<double>& rhs,
                                          const GridSpec& grid) {
  return solve_implicit(rhs, grid, amplification(grid));
}

// One theta-scheme step:
// u_{i+1} = (I - theta*tau*Delta_n)^{-1} [u_i + (1-theta)*tau*Delta_n u_i
//           + n * sigma(u_i) .* noise_row].
inline std::vector<double> step(const std::vector<double>& u,
                                const double* noise_row, const GridSpec& grid,
                                const SpectralData& sd,
                                const CoefficientSpec& coeff) {
  const int n = grid.n;
  auto lap = laplacian(u, n);
  std::vector<double> rhs(n);
  for (int j = 0; j < n; ++j)
    rhs[j] = u[j] + (1.0 - grid.theta) * grid.tau * lap[j] +
             n * coeff.sigma(u[j]) * noise_row[j];
  return solve_implicit(rhs, grid, sd);
}

inline SolutionField run(const GridSpec& grid, const NoiseField& noise,
                         const CoefficientSpec& coeff,
                         const InitialCondition& u0) {
  grid.validate();
  {
    auto rep = stability_check(grid);
    if (!rep.pass) throw std::invalid_argument("run: " + rep.violation);
  }
  if (noise.n != grid.n || noise.m != grid.num_steps() ||
      std::abs(noise.tau - grid.tau) > 1e-12 * grid.tau)
    throw std::invalid_argument("run: noise field does not match grid");

  const SpectralData sd = amplification(grid);
  SolutionField sol;
  sol.grid = grid;
  sol.noise_seed = noise.seed;
  sol.coeff_id = coeff.describe();
  sol.u0_id = u0.describe();
  const long m = grid.num_steps();
  sol.values.resize(static_cast<std::size_t>(m + 1) * grid.n);

  std::vector<double> u = u0.sample_on_grid(grid.n);
  std::copy(u.begin(), u.end(), sol.values.begin());
  for (long i = 0; i < m; ++i) {
    u = step(u, &noise.increments[i * grid.n], grid, sd, coeff);
    for (double v : u)
      if (!std::isfinite(v)) throw DivergenceError(i + 1);
    std::copy(u.begin(), u.end(), sol.values.begin() + (i + 1) * grid.n);
  }
  return sol;
}

// Independent oracle: evaluates the mild form
//   u(t,x) = int G1(t,x,y) u0(kappa_n(y)) dy
//          + sum_{k < i} sum_j G2(t - t_{k+1}, x, x_j) sigma(u(t_k,x_j)) inc(k,j)
// at t = i*tau from solution rows 0..i-1.
inline double mild_evaluate(const GridSpec& grid, const NoiseField& noise,
                            const SolutionField& sol,
                            const CoefficientSpec& coeff,
                            const InitialCondition& u0, double t, double x) {
  const long i = static_cast<long>(std::llround(t / grid.tau));
  if (std::abs(t - i * grid.tau) > 1e-9 * grid.tau || i < 1)
    throw std::domain_error("mild_evaluate: t must be a positive step multiple");
  const int n = grid.n;
  const SpectralData sd = amplification(grid);
  const int xc = grid.cell_index(x);

  // deterministic part: sum_l a_l^i e_l(kappa(x)) hat u0_l
  auto u0g = u0.sample_on_grid(n);
  auto uhat = dft_forward(u0g);
  cdouble det(0.0, 0.0);
  for (int l = 0; l < n; ++l)
    det += std::pow(sd.a[l], static_cast<double>(i)) *
           std::exp(cdouble(0.0, 2.0 * M_PI * l * xc / static_cast<double>(n))) *
           uhat[l] / std::sqrt(static_cast<double>(n));

  // G2 depends on the step gap d = i-1-k and the cell offset; tabulate rows.
  std::vector<cdouble> modes(n);
  for (int l = 0; l < n; ++l) modes[l] = sd.r1[l];
  // g2[d][c] = G2(d*tau, x_c, 0)
  std::vector<std::vector<double>> g2(static_cast<std::size_t>(i));
  for (long d = 0; d < i; ++d) {
    auto vals = detail::transform(modes, +1);
    g2[d].resize(n);
    for (int c = 0; c < n; ++c) g2[d][c] = vals[c].real();
    for (int l = 0; l < n; ++l) modes[l] *= sd.a[l];
  }

  double stoch = 0.0;
  for (long k = i - 1; k >= 0; --k) {
    const long d = i - 1 - k;
    const double* urow = sol.row(k);
    const double* inc = &noise.increments[k * n];
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const int c = ((xc - j) % n + n) % n;
      acc += g2[d][c] * coeff.sigma(urow[j]) * inc[j];
    }
    stoch += acc;
  }
  return det.real() + stoch;
}

}  // namespace levyheat
