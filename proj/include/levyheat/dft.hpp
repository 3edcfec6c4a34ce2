#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace levyheat {

using cdouble = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform; sign = -1 forward, +1 inverse.
// No normalization.
inline void fft_pow2(std::vector<cdouble>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const cdouble wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cdouble u = a[i + k];
        cdouble v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Direct O(n^2) transform for non power-of-two lengths.
inline std::vector<cdouble> dft_direct(const std::vector<cdouble>& v, int sign) {
  const std::size_t n = v.size();
  std::vector<cdouble> out(n, cdouble(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    cdouble acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = sign * 2.0 * M_PI * static_cast<double>(j) *
                         static_cast<double>(k) / static_cast<double>(n);
      acc += v[k] * cdouble(std::cos(ang), std::sin(ang));
    }
    out[j] = acc;
  }
  return out;
}

inline std::vector<cdouble> transform(std::vector<cdouble> v, int sign) {
  if (is_pow2(v.size())) {
    fft_pow2(v, sign);
    return v;
  }
  return dft_direct(v, sign);
}

}  // namespace detail

// Forward transform with the unitary normalization of the discrete Sobolev
// relation: vtilde_j = n^{-1/2} sum_r v(x_r) e^{-2 pi i j r / n}.
inline std::vector<cdouble> dft_forward(const std::vector<cdouble>& v) {
  if (v.size() < 3) throw std::invalid_argument("dft_forward: length must be >= 3");
  auto out = detail::transform(v, -1);
  const double s = 1.0 / std::sqrt(static_cast<double>(v.size()));
  for (auto& c : out) c *= s;
  return out;
}

inline std::vector<cdouble> dft_forward(const std::vector<double>& v) {
  std::vector<cdouble> cv(v.begin(), v.end());
  return dft_forward(cv);
}

// Inverse of dft_forward: v_k = n^{-1/2} sum_j vtilde_j e^{+2 pi i j k / n}.
inline std::vector<cdouble> dft_inverse(const std::vector<cdouble>& vt) {
  if (vt.size() < 3) throw std::invalid_argument("dft_inverse: length must be >= 3");
  auto out = detail::transform(vt, +1);
  const double s = 1.0 / std::sqrt(static_cast<double>(vt.size()));
  for (auto& c : out) c *= s;
  return out;
}

}  // namespace levyheat
