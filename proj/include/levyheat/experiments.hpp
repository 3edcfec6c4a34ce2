#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "levyheat/fit.hpp"
#include "levyheat/grid.hpp"
#include "levyheat/noise.hpp"
#include "levyheat/parallel.hpp"
#include "levyheat/scheme.hpp"
#include "levyheat/sobolev.hpp"

namespace levyheat {

struct MCConfig {
  long paths = 2000;
  std::uint64_t base_seed = 1;
  int resamples = 1000;  // bootstrap resamples
  int workers = 0;       // 0 = machine parallelism

  std::uint64_t path_seed(long idx) const { return base_seed + static_cast<std::uint64_t>(idx); }
  int effective_workers() const { return workers > 0 ? workers : default_workers(); }
  void validate() const {
    if (paths < 100) throw std::invalid_argument("MCConfig: paths must be >= 100");
    if (resamples < 1) throw std::invalid_argument("MCConfig: resamples must be >= 1");
  }
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Path-regularity experiment: Monte Carlo mean of the oscillation product at
// each h in the ladder, then a log-log fit. CI from bootstrap over paths.
// ---------------------------------------------------------------------------
struct PathExponentResult {
  OrderFit fit;
  std::vector<double> means;  // per ladder entry
};

inline PathExponentResult estimate_path_exponent(
    const GridSpec& grid, const LevyNoiseSpec& nspec, const CoefficientSpec& coeff,
    double t, const std::vector<double>& h_ladder, double r, const MCConfig& mc) {
  mc.validate();
  grid.validate();
  if (!coeff.bounded())
    throw std::invalid_argument("estimate_path_exponent: sigma must be bounded");
  if (!(r < -0.5))
    throw std::invalid_argument("estimate_path_exponent: requires r < -1/2");
  if (h_ladder.size() < 3)
    throw std::invalid_argument("estimate_path_exponent: need >= 3 ladder points");
  for (double h : h_ladder)
    if (!(h > grid.tau && h < std::min(t, 1.0) && t + h <= grid.T + 1e-12))
      throw std::invalid_argument("estimate_path_exponent: h outside (tau, min(t,1))");

  const SpectralData sd = amplification(grid);
  const InitialCondition u0 = InitialCondition::constant(0.0);
  const std::size_t H = h_ladder.size();
  std::vector<std::vector<double>> per_path(mc.paths, std::vector<double>(H, 0.0));

  parallel_for(mc.paths, mc.effective_workers(), [&](long p) {
    NoiseField nf = sample(grid, nspec, mc.path_seed(p));
    SolutionField sol = run(grid, nf, coeff, u0);
    for (std::size_t k = 0; k < H; ++k)
      per_path[p][k] = oscillation_product(sol, t, h_ladder[k], r, sd);
  });

  std::vector<double> means(H, 0.0);
  for (long p = 0; p < mc.paths; ++p)
    for (std::size_t k = 0; k < H; ++k) means[k] += per_path[p][k];
  for (auto& m : means) m /= static_cast<double>(mc.paths);

  for (std::size_t k = 0; k < H; ++k) {
    double var = 0.0;
    for (long p = 0; p < mc.paths; ++p) {
      const double d = per_path[p][k] - means[k];
      var += d * d;
    }
    if (var == 0.0)
      throw std::invalid_argument(
          "estimate_path_exponent: zero-variance statistic (degenerate noise or sigma)");
  }

  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < H; ++k) pts.emplace_back(h_ladder[k], means[k]);

  PathExponentResult res;
  res.means = means;
  res.fit.points = pts;
  {
    std::vector<double> lx, ly;
    for (auto& [s, e] : pts) {
      lx.push_back(std::log(s));
      ly.push_back(std::log(e));
    }
    auto [sl, ic] = detail::ols(lx, ly);
    res.fit.slope = sl;
    res.fit.intercept = ic;
  }

  // bootstrap over paths
  rng::Stream st(mc.base_seed, 0x706174685265ULL, 0);
  std::vector<double> slopes;
  slopes.reserve(mc.resamples);
  for (int b = 0; b < mc.resamples; ++b) {
    std::vector<double> bm(H, 0.0);
    for (long q = 0; q < mc.paths; ++q) {
      const long p = static_cast<long>(st.next_u64() % mc.paths);
      for (std::size_t k = 0; k < H; ++k) bm[k] += per_path[p][k];
    }
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < H; ++k) {
      lx.push_back(std::log(h_ladder[k]));
      ly.push_back(std::log(bm[k] / static_cast<double>(mc.paths)));
    }
    slopes.push_back(detail::ols(lx, ly).first);
  }
  auto [lo, hi] = detail::percentile_interval(slopes);
  res.fit.ci_lo = lo;
  res.fit.ci_hi = hi;
  return res;
}

// ---------------------------------------------------------------------------
// Moment-Lyapunov experiment (weak intermittency).
// ---------------------------------------------------------------------------
struct LyapunovResult {
  double lower_slope = 0.0, upper_slope = 0.0;
  double lower_se = 0.0, upper_se = 0.0;      // bootstrap standard errors
  std::vector<double> times;                  // fitting window
  std::vector<double> log_sup;                // log sup_x E|u|^p at each time
  std::vector<double> log_inf;
  std::vector<double> log_sup_se;             // bootstrap SE of log_sup entries
  double upper_intercept = 0.0;
};

inline LyapunovResult estimate_lyapunov(const GridSpec& grid,
                                        const LevyNoiseSpec& nspec,
                                        const CoefficientSpec& coeff,
                                        const InitialCondition& u0, double p,
                                        const MCConfig& mc) {
  mc.validate();
  grid.validate();
  if (!(p > 1.0 && p < 3.0))
    throw std::invalid_argument("estimate_lyapunov: p must lie in (1, 3)");
  if (!(coeff.lipschitz() > 0.0 && coeff.j0() > 0.0))
    throw std::invalid_argument("estimate_lyapunov: requires L_sigma > 0 and J0 > 0");
  if (u0.kind != InitialCondition::Kind::constant || !(u0.c > 0.0))
    throw std::invalid_argument("estimate_lyapunov: requires u0 = c > 0");
  {
    const double want = center_drift(nspec.measure);
    if (std::abs(nspec.b - want) > 1e-12 * (1.0 + std::abs(want)))
      throw std::invalid_argument("estimate_lyapunov: drift must be centered");
  }

  const long m = grid.num_steps();
  // fitting window [T/2, T], thinned to at most 32 time slices
  std::vector<long> slices;
  {
    const long lo = m / 2;
    const long count = std::min<long>(32, m - lo);
    for (long q = 1; q <= count; ++q)
      slices.push_back(lo + (q * (m - lo)) / count);
    slices.erase(std::unique(slices.begin(), slices.end()), slices.end());
  }
  const std::size_t S = slices.size();
  const int n = grid.n;

  // per-path |u(t_i, x_j)|^p at the selected slices
  std::vector<std::vector<double>> stats(mc.paths, std::vector<double>(S * n, 0.0));
  parallel_for(mc.paths, mc.effective_workers(), [&](long q) {
    NoiseField nf = sample(grid, nspec, mc.path_seed(q));
    SolutionField sol = run(grid, nf, coeff, u0);
    for (std::size_t s = 0; s < S; ++s)
      for (int j = 0; j < n; ++j)
        stats[q][s * n + j] = std::pow(std::abs(sol.at(slices[s], j)), p);
  });

  auto curve = [&](const std::vector<long>& idx, std::vector<double>& lsup,
                   std::vector<double>& linf) {
    lsup.assign(S, 0.0);
    linf.assign(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      double sup = -1.0, inf = -1.0;
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (long q : idx) acc += stats[q][s * n + j];
        acc /= static_cast<double>(idx.size());
        if (sup < 0.0 || acc > sup) sup = acc;
        if (inf < 0.0 || acc < inf) inf = acc;
      }
      lsup[s] = std::log(sup);
      linf[s] = std::log(inf);
    }
  };

  std::vector<long> all(mc.paths);
  std::iota(all.begin(), all.end(), 0L);
  LyapunovResult res;
  for (long i : slices) res.times.push_back(grid.t(i));
  curve(all, res.log_sup, res.log_inf);
  {
    auto [su, iu] = detail::ols(res.times, res.log_sup);
    res.upper_slope = su;
    res.upper_intercept = iu;
    res.lower_slope = detail::ols(res.times, res.log_inf).first;
  }

  // bootstrap over paths
  rng::Stream st(mc.base_seed, 0x6c796170ULL, 1);
  std::vector<double> bs_lower, bs_upper;
  std::vector<std::vector<double>> bs_logsup;
  for (int b = 0; b < mc.resamples; ++b) {
    std::vector<long> idx(mc.paths);
    for (long& q : idx) q = static_cast<long>(st.next_u64() % mc.paths);
    std::vector<double> lsup, linf;
    curve(idx, lsup, linf);
    bs_upper.push_back(detail::ols(res.times, lsup).first);
    bs_lower.push_back(detail::ols(res.times, linf).first);
    bs_logsup.push_back(std::move(lsup));
  }
  auto stddev = [](const std::vector<double>& v) {
    const double mu = detail::mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / (v.size() - 1));
  };
  res.lower_se = stddev(bs_lower);
  res.upper_se = stddev(bs_upper);
  res.log_sup_se.assign(S, 0.0);
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<double> col;
    col.reserve(bs_logsup.size());
    for (const auto& row : bs_logsup) col.push_back(row[s]);
    res.log_sup_se[s] = stddev(col);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Coupled-refinement strong-convergence study.
// ---------------------------------------------------------------------------
enum class SweepAxis { space, time };

struct ConvergenceResult {
  OrderFit fit;
  std::vector<std::pair<double, double>> points;  // (scale, rms error)
};

struct LadderLevel {
  int n = 0;
  double tau = 0.0;
};

inline ConvergenceResult convergence_study(
    double theta, const CoefficientSpec& coeff, const InitialCondition& u0,
    const LevyNoiseSpec& nspec, const std::vector<LadderLevel>& ladder,
    const LadderLevel& reference, double T, const std::vector<double>& probes,
    SweepAxis axis, const MCConfig& mc) {
  mc.validate();
  if (ladder.size() < 3)
    throw std::invalid_argument("convergence_study: need >= 3 ladder levels");
  if (!(moment_m_lambda(nspec.measure, 2.0) < 1e300))
    throw std::invalid_argument("convergence_study: m_lambda(2) must be finite");

  GridSpec ref_grid{reference.n, reference.tau, theta, T};
  ref_grid.validate();
  {
    auto rep = stability_check(ref_grid);
    if (!rep.pass) throw std::invalid_argument("convergence_study: reference: " + rep.violation);
  }
  struct Factors {
    int kt, kx;
    GridSpec grid;
  };
  std::vector<Factors> levels;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const auto& lv = ladder[k];
    if (reference.n % lv.n != 0)
      throw std::invalid_argument("convergence_study: ladder level " + std::to_string(k) +
                                  " spatial size does not divide the reference");
    const double ratio = lv.tau / reference.tau;
    const int kt = static_cast<int>(std::llround(ratio));
    if (std::abs(ratio - kt) > 1e-9 || kt < 1)
      throw std::invalid_argument("convergence_study: ladder level " + std::to_string(k) +
                                  " time step is not a multiple of the reference");
    GridSpec g{lv.n, lv.tau, theta, T};
    g.validate();
    auto rep = stability_check(g);
    if (!rep.pass)
      throw std::invalid_argument("convergence_study: level " + std::to_string(k) +
                                  ": " + rep.violation);
    levels.push_back({kt, reference.n / lv.n, g});
  }

  const std::size_t L = levels.size();
  const std::size_t P = probes.size();
  // per path, per level, per probe squared error
  std::vector<std::vector<double>> sq(mc.paths, std::vector<double>(L * P, 0.0));

  parallel_for(mc.paths, mc.effective_workers(), [&](long q) {
    NoiseField fine = sample(ref_grid, nspec, mc.path_seed(q), /*keep_jump_log=*/true);
    SolutionField uref = run(ref_grid, fine, coeff, u0);
    const long iref = ref_grid.num_steps();
    const double fine_total =
        std::accumulate(fine.increments.begin(), fine.increments.end(), 0.0);
    for (std::size_t k = 0; k < L; ++k) {
      NoiseField nf = coarsen(fine, levels[k].kt, levels[k].kx);
      const double coarse_total =
          std::accumulate(nf.increments.begin(), nf.increments.end(), 0.0);
      if (std::abs(coarse_total - fine_total) >
          1e-12 * (1.0 + std::abs(fine_total)))
        throw std::runtime_error("convergence_study: coarsening mass mismatch");
      nf.jump_log.clear();
      SolutionField uk = run(levels[k].grid, nf, coeff, u0);
      const long ik = levels[k].grid.num_steps();
      for (std::size_t pi = 0; pi < P; ++pi) {
        const double d = uk.at(ik, levels[k].grid.cell_index(probes[pi])) -
                         uref.at(iref, ref_grid.cell_index(probes[pi]));
        sq[q][k * P + pi] = d * d;
      }
    }
  });

  ConvergenceResult res;
  for (std::size_t k = 0; k < L; ++k) {
    double worst = 0.0;
    for (std::size_t pi = 0; pi < P; ++pi) {
      double acc = 0.0;
      for (long q = 0; q < mc.paths; ++q) acc += sq[q][k * P + pi];
      worst = std::max(worst, std::sqrt(acc / static_cast<double>(mc.paths)));
    }
    const double scale =
        axis == SweepAxis::space ? 1.0 / levels[k].grid.n : levels[k].grid.tau;
    res.points.emplace_back(scale, worst);
  }
  res.fit = fit_power_law(res.points, mc.resamples, mc.base_seed);
  return res;
}

// ---------------------------------------------------------------------------
// Truncation-coupling study: one jump stream per path, filtered at every N.
// ---------------------------------------------------------------------------
struct TruncationPoint {
  double N = 0.0;
  double mean_discrepancy = 0.0;
  double exact_fraction = 0.0;  // paths with no jump above N
};

inline std::vector<TruncationPoint> truncation_study(
    const GridSpec& grid, const LevyNoiseSpec& nspec,
    const std::vector<double>& N_ladder, const CoefficientSpec& coeff,
    const InitialCondition& u0, double t, double x, const MCConfig& mc) {
  mc.validate();
  grid.validate();
  if (N_ladder.size() < 2)
    throw std::invalid_argument("truncation_study: need >= 2 truncation levels");
  for (std::size_t k = 1; k < N_ladder.size(); ++k)
    if (!(N_ladder[k] > N_ladder[k - 1]))
      throw std::invalid_argument("truncation_study: ladder must increase");

  const std::size_t L = N_ladder.size();
  const long it = grid.step_index(t);
  const int jx = grid.cell_index(x);
  std::vector<std::vector<double>> vals(mc.paths, std::vector<double>(L, 0.0));
  std::vector<double> max_jump(mc.paths, 0.0);

  parallel_for(mc.paths, mc.effective_workers(), [&](long q) {
    NoiseField nf = sample(grid, nspec, mc.path_seed(q), /*keep_jump_log=*/true);
    for (const auto& cell : nf.jump_log)
      for (const auto& jp : cell)
        max_jump[q] = std::max(max_jump[q], std::abs(jp.z));
    for (std::size_t k = 0; k < L; ++k) {
      NoiseField filtered = filter_jumps_above(nf, N_ladder[k]);
      filtered.jump_log.clear();
      SolutionField sol = run(grid, filtered, coeff, u0);
      vals[q][k] = sol.at(it, jx);
    }
  });

  std::vector<TruncationPoint> out(L);
  for (std::size_t k = 0; k < L; ++k) {
    out[k].N = N_ladder[k];
    double disc = 0.0;
    long exact = 0;
    for (long q = 0; q < mc.paths; ++q) {
      disc += std::abs(vals[q][k] - vals[q][L - 1]);
      if (max_jump[q] <= N_ladder[k]) ++exact;
    }
    out[k].mean_discrepancy = disc / static_cast<double>(mc.paths);
    out[k].exact_fraction = static_cast<double>(exact) / static_cast<double>(mc.paths);
  }
  return out;
}

}  // namespace levyheat
