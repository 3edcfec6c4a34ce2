#pragma once

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "levyheat/rng.hpp"

namespace levyheat {

struct OrderFit {
  std::vector<std::pair<double, double>> points;  // (scale, error)
  double slope = 0.0;
  double intercept = 0.0;
  double ci_lo = 0.0;  // bootstrap 95% interval of the slope
  double ci_hi = 0.0;
};

namespace detail {

// least squares slope/intercept of y against x
inline std::pair<double, double> ols(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("ols: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

inline std::pair<double, double> percentile_interval(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return {v[static_cast<std::size_t>(0.025 * (n - 1))],
          v[static_cast<std::size_t>(0.975 * (n - 1))]};
}

}  // namespace detail

// log-log least squares with a bootstrap CI over point resampling.
inline OrderFit fit_power_law(const std::vector<std::pair<double, double>>& points,
                              int resamples = 1000, std::uint64_t seed = 20240901) {
  if (points.size() < 3) throw std::invalid_argument("fit_power_law: need >= 3 points");
  std::vector<double> lx, ly;
  for (const auto& [s, e] : points) {
    if (!(s > 0.0) || !(e > 0.0))
      throw std::invalid_argument("fit_power_law: coordinates must be positive");
    lx.push_back(std::log(s));
    ly.push_back(std::log(e));
  }
  OrderFit fit;
  fit.points = points;
  auto [sl, ic] = detail::ols(lx, ly);
  fit.slope = sl;
  fit.intercept = ic;

  rng::Stream st(seed, 0, 0);
  std::vector<double> slopes;
  slopes.reserve(resamples);
  const std::size_t n = points.size();
  for (int b = 0; b < resamples; ++b) {
    std::vector<double> bx, by;
    for (int tries = 0; tries < 100; ++tries) {
      bx.clear();
      by.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = st.next_u64() % n;
        bx.push_back(lx[k]);
        by.push_back(ly[k]);
      }
      bool distinct = false;
      for (std::size_t i = 1; i < n; ++i)
        if (bx[i] != bx[0]) distinct = true;
      if (distinct) break;
    }
    slopes.push_back(detail::ols(bx, by).first);
  }
  auto [lo, hi] = detail::percentile_interval(slopes);
  fit.ci_lo = lo;
  fit.ci_hi = hi;
  return fit;
}

}  // namespace levyheat
