#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "levyheat/grid.hpp"
#include "levyheat/rng.hpp"

namespace levyheat {

struct Atom {
  double z = 0.0;   // jump size, nonzero
  double rate = 0.0;  // lambda({z}) > 0
};

enum class MeasureKind { atomic, two_sided_exponential, zero };

// Finite-activity Levy measures. The two-sided exponential has density
// c/(2*eta) * exp(-|z|/eta); "zero" is the degenerate no-jump case and is
// only valid when the caller opts into deterministic mode.
struct LevyMeasureSpec {
  MeasureKind kind = MeasureKind::zero;
  std::vector<Atom> atoms;
  double c = 0.0;    // total rate (exponential kind)
  double eta = 0.0;  // scale (exponential kind)
  double small_jump_cutoff = 0.0;
  bool deterministic_ok = false;

  static LevyMeasureSpec atomic(std::vector<Atom> as) {
    for (const auto& a : as) {
      if (a.z == 0.0) throw std::invalid_argument("atomic measure: jump size must be nonzero");
      if (!(a.rate > 0.0)) throw std::invalid_argument("atomic measure: rate must be positive");
    }
    LevyMeasureSpec m;
    m.kind = MeasureKind::atomic;
    m.atoms = std::move(as);
    return m;
  }

  static LevyMeasureSpec exponential(double total_rate, double scale) {
    if (!(total_rate > 0.0) || !(scale > 0.0))
      throw std::invalid_argument("exponential measure: rate and scale must be positive");
    LevyMeasureSpec m;
    m.kind = MeasureKind::two_sided_exponential;
    m.c = total_rate;
    m.eta = scale;
    return m;
  }

  static LevyMeasureSpec zero_measure() {
    LevyMeasureSpec m;
    m.kind = MeasureKind::zero;
    m.deterministic_ok = true;
    return m;
  }

  // lambda(|z| >= cutoff): the rate actually sampled.
  double total_rate() const {
    switch (kind) {
      case MeasureKind::zero:
        return 0.0;
      case MeasureKind::atomic: {
        double s = 0.0;
        for (const auto& a : atoms)
          if (std::abs(a.z) >= small_jump_cutoff) s += a.rate;
        return s;
      }
      case MeasureKind::two_sided_exponential:
        return c * std::exp(-small_jump_cutoff / eta);
    }
    return 0.0;
  }

  // int_{cutoff <= |z| <= 1} z lambda(dz): the small-jump compensator mass.
  double small_jump_mean() const {
    switch (kind) {
      case MeasureKind::zero:
        return 0.0;
      case MeasureKind::atomic: {
        double s = 0.0;
        for (const auto& a : atoms)
          if (std::abs(a.z) >= small_jump_cutoff && std::abs(a.z) <= 1.0)
            s += a.rate * a.z;
        return s;
      }
      case MeasureKind::two_sided_exponential:
        return 0.0;  // odd integrand
    }
    return 0.0;
  }

  // int_{|z| > 1} z lambda(dz)
  double tail_mean() const {
    switch (kind) {
      case MeasureKind::zero:
        return 0.0;
      case MeasureKind::atomic: {
        double s = 0.0;
        for (const auto& a : atoms)
          if (std::abs(a.z) > 1.0) s += a.rate * a.z;
        return s;
      }
      case MeasureKind::two_sided_exponential:
        return 0.0;
    }
    return 0.0;
  }

  // int_{lo < z_abs <= hi, measured over both signs} z lambda(dz)
  double mean_in(double lo, double hi) const {
    switch (kind) {
      case MeasureKind::zero:
        return 0.0;
      case MeasureKind::atomic: {
        double s = 0.0;
        for (const auto& a : atoms)
          if (std::abs(a.z) > lo && std::abs(a.z) <= hi) s += a.rate * a.z;
        return s;
      }
      case MeasureKind::two_sided_exponential:
        return 0.0;
    }
    return 0.0;
  }

  LevyMeasureSpec drop_above(double cap) const {
    LevyMeasureSpec m = *this;
    if (kind == MeasureKind::atomic) {
      m.atoms.clear();
      for (const auto& a : atoms)
        if (std::abs(a.z) <= cap) m.atoms.push_back(a);
      if (m.atoms.empty()) m.deterministic_ok = true;
    }
    return m;
  }
};

// m_lambda(p) = int |z|^p lambda(dz), p in [1, 3).
inline double moment_m_lambda(const LevyMeasureSpec& measure, double p) {
  if (!(p >= 1.0 && p < 3.0))
    throw std::domain_error("moment_m_lambda: p must lie in [1, 3)");
  switch (measure.kind) {
    case MeasureKind::zero:
      return 0.0;
    case MeasureKind::atomic: {
      double s = 0.0;
      for (const auto& a : measure.atoms) s += a.rate * std::pow(std::abs(a.z), p);
      return s;
    }
    case MeasureKind::two_sided_exponential:
      // int |z|^p c/(2 eta) e^{-|z|/eta} dz = c eta^p Gamma(p+1)
      return measure.c * std::pow(measure.eta, p) * std::tgamma(p + 1.0);
  }
  return 0.0;
}

// The centered drift of Assumption 2: b = -int_{|z|>1} z lambda(dz).
inline double center_drift(const LevyMeasureSpec& measure) {
  return -measure.tail_mean();
}

struct LevyNoiseSpec {
  double b = 0.0;
  LevyMeasureSpec measure;
  std::optional<double> truncation;  // big-jump cap N > 1

  static LevyNoiseSpec centered(LevyMeasureSpec m) {
    LevyNoiseSpec s;
    s.b = center_drift(m);
    s.measure = std::move(m);
    return s;
  }
};

// Big-jump truncation per the truncated noise Lambda_N: jumps |z| > N are
// removed from the sampling measure and the effective drift becomes
// b + int_{1 < |z| <= N} z lambda(dz).
inline LevyNoiseSpec truncate(const LevyNoiseSpec& spec, double N) {
  if (!(N > 1.0)) throw std::invalid_argument("truncate: N must exceed 1");
  LevyNoiseSpec out;
  out.b = spec.b + spec.measure.mean_in(1.0, N);
  out.measure = spec.measure.drop_above(N);
  out.truncation = N;
  return out;
}

struct Jump {
  double rel_t = 0.0;  // position within the cell, in [0, 1)
  double rel_x = 0.0;
  double z = 0.0;
};

// Matrix of per-cell noise increments Lambda([t_i, t_{i+1}) x [x_j, x_{j+1})).
struct NoiseField {
  int n = 0;
  long m = 0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  double drift_per_cell = 0.0;  // (b - small_jump_mean) * tau/n
  std::vector<double> increments;          // m*n row-major, row = time index
  std::vector<std::vector<Jump>> jump_log;  // per cell, same layout; optional

  double& at(long i, int j) { return increments[i * n + j]; }
  double at(long i, int j) const { return increments[i * n + j]; }
  bool has_log() const { return !jump_log.empty(); }
};

inline NoiseField sample(const GridSpec& grid, const LevyNoiseSpec& spec,
                         std::uint64_t seed, bool keep_jump_log = false) {
  grid.validate();
  {
    auto rep = stability_check(grid);
    if (!rep.pass) throw std::invalid_argument("sample: " + rep.violation);
  }
  if (spec.measure.kind == MeasureKind::zero && !spec.measure.deterministic_ok)
    throw std::invalid_argument(
        "sample: zero measure requires explicit deterministic opt-in");

  NoiseField f;
  f.n = grid.n;
  f.m = grid.num_steps();
  f.tau = grid.tau;
  f.seed = seed;
  const double vol = grid.tau / grid.n;
  f.drift_per_cell = (spec.b - spec.measure.small_jump_mean()) * vol;
  f.increments.assign(static_cast<std::size_t>(f.m) * f.n, 0.0);
  if (keep_jump_log) f.jump_log.resize(f.increments.size());

  const double rate = spec.measure.total_rate();
  const auto& ms = spec.measure;
  double atom_total = 0.0;
  std::vector<double> atom_cum;
  if (ms.kind == MeasureKind::atomic) {
    for (const auto& a : ms.atoms)
      if (std::abs(a.z) >= ms.small_jump_cutoff) {
        atom_total += a.rate;
        atom_cum.push_back(atom_total);
      }
  }

  for (long i = 0; i < f.m; ++i) {
    for (int j = 0; j < f.n; ++j) {
      rng::Stream st(seed, static_cast<std::uint64_t>(i),
                     static_cast<std::uint64_t>(j));
      double inc = f.drift_per_cell;
      const long k = st.poisson(rate * vol);
      for (long q = 0; q < k; ++q) {
        const double rt = st.uniform();
        const double rx = st.uniform();
        double z = 0.0;
        if (ms.kind == MeasureKind::atomic) {
          const double u = st.uniform() * atom_total;
          std::size_t idx = std::lower_bound(atom_cum.begin(), atom_cum.end(), u) -
                            atom_cum.begin();
          std::size_t live = 0;
          for (const auto& a : ms.atoms) {
            if (std::abs(a.z) < ms.small_jump_cutoff) continue;
            if (live == idx) {
              z = a.z;
              break;
            }
            ++live;
          }
        } else {
          // memoryless: |z| conditioned on |z| >= cutoff is cutoff + Exp(eta)
          const double mag = ms.small_jump_cutoff + ms.eta * st.exponential();
          z = (st.uniform() < 0.5) ? mag : -mag;
        }
        if (spec.truncation && std::abs(z) > *spec.truncation) continue;
        inc += z;
        if (keep_jump_log)
          f.jump_log[static_cast<std::size_t>(i) * f.n + j].push_back({rt, rx, z});
      }
      f.at(i, j) = inc;
    }
  }
  return f;
}

// Aggregates kt x kx fine cells per coarse cell (additivity of Lambda over
// disjoint rectangles); the jump log is re-binned by absolute coordinates.
inline NoiseField coarsen(const NoiseField& fine, int kt, int kx) {
  if (!fine.has_log())
    throw std::invalid_argument("coarsen: fine field must carry a jump log");
  if (kt < 1 || kx < 1 || fine.m % kt != 0 || fine.n % kx != 0)
    throw std::invalid_argument("coarsen: factors must divide the fine grid");

  NoiseField c;
  c.n = fine.n / kx;
  c.m = fine.m / kt;
  c.tau = fine.tau * kt;
  c.seed = fine.seed;
  c.drift_per_cell = fine.drift_per_cell * kt * kx;
  c.increments.assign(static_cast<std::size_t>(c.m) * c.n, 0.0);
  c.jump_log.resize(c.increments.size());

  for (long i = 0; i < fine.m; ++i) {
    const long I = i / kt;
    for (int j = 0; j < fine.n; ++j) {
      const int J = j / kx;
      c.at(I, J) += fine.at(i, j);
      for (const auto& jp : fine.jump_log[static_cast<std::size_t>(i) * fine.n + j]) {
        Jump cj;
        cj.rel_t = (static_cast<double>(i % kt) + jp.rel_t) / kt;
        cj.rel_x = (static_cast<double>(j % kx) + jp.rel_x) / kx;
        cj.z = jp.z;
        c.jump_log[static_cast<std::size_t>(I) * c.n + J].push_back(cj);
      }
    }
  }
  return c;
}

// Couples a common jump stream across truncation levels: every jump with
// |z| > N is removed from the recorded increments. Drift is untouched, which
// matches the b-form of the truncated noise.
inline NoiseField filter_jumps_above(const NoiseField& field, double N) {
  if (!field.has_log())
    throw std::invalid_argument("filter_jumps_above: field must carry a jump log");
  NoiseField out = field;
  for (std::size_t cell = 0; cell < out.jump_log.size(); ++cell) {
    auto& log = out.jump_log[cell];
    double removed = 0.0;
    auto it = std::remove_if(log.begin(), log.end(), [&](const Jump& j) {
      if (std::abs(j.z) > N) {
        removed += j.z;
        return true;
      }
      return false;
    });
    log.erase(it, log.end());
    out.increments[cell] -= removed;
  }
  return out;
}

}  // namespace levyheat
