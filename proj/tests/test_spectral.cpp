#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "levyheat/dft.hpp"
#include "levyheat/grid.hpp"
#include "levyheat/rng.hpp"

using namespace levyheat;

TEST_CASE("grid validation and index maps") {
  GridSpec g{8, 0.01, 1.0, 1.0};
  CHECK_NOTHROW(g.validate());
  CHECK(g.num_steps() == 100);
  CHECK(g.dx() == doctest::Approx(0.125));
  CHECK(g.kappa_x(0.130) == doctest::Approx(0.125));
  CHECK(g.kappa_t(0.0251) == doctest::Approx(0.02));
  CHECK(g.cell_index(0.999) == 7);
  CHECK(g.cell_index(-0.01) == 7);  // periodic wrap
  CHECK(g.step_index(0.0349) == 3);

  CHECK_THROWS_AS((GridSpec{2, 0.01, 1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{8, 0.6, 1.0, 1.2}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{8, 0.01, 1.5, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{8, 0.01, 1.0, 1.005}).validate(), std::invalid_argument);
}

TEST_CASE("laplacian eigenvalues: pinned examples") {
  auto l4 = eigenvalues(4);
  CHECK(l4[0] == 0.0);
  CHECK(l4[2] == doctest::Approx(-64.0).epsilon(1e-14));
  CHECK(l4[1] == doctest::Approx(-32.0).epsilon(1e-14));
  auto l3 = eigenvalues(3);
  CHECK(l3[1] == doctest::Approx(-27.0).epsilon(1e-14));
  CHECK_THROWS_AS(eigenvalues(2), std::invalid_argument);
}

TEST_CASE("eigenvalue symmetry lambda_{n-l} = lambda_l") {
  for (int n : {3, 4, 7, 16, 33, 64}) {
    auto lam = eigenvalues(n);
    for (int l = 1; l < n; ++l)
      CHECK(lam[l] == doctest::Approx(lam[n - l]).epsilon(1e-12));
  }
}

TEST_CASE("discrete Laplacian has e_l as eigenvectors") {
  for (int n : {3, 5, 8, 17, 64}) {
    auto lam = eigenvalues(n);
    const double n2 = static_cast<double>(n) * n;
    for (int l = 0; l < n; ++l) {
      // f_l(x_j) = cos(2 pi l j / n); second difference must scale it by lambda_l
      for (int j = 0; j < n; ++j) {
        auto f = [&](int k) {
          return std::cos(2.0 * M_PI * l * ((k % n + n) % n) / static_cast<double>(n));
        };
        const double lap = n2 * (f(j + 1) - 2.0 * f(j) + f(j - 1));
        CHECK(lap == doctest::Approx(lam[l] * f(j)).epsilon(1e-10).scale(n2));
      }
    }
  }
}

TEST_CASE("amplification factors: pinned example and identities") {
  GridSpec g{4, 0.01, 0.5, 1.0};
  auto sd = amplification(g);
  // lambda_2 = -64, theta = 1/2: a = (1 - 0.32) / (1 + 0.32)
  CHECK(sd.a[2] == doctest::Approx((1.0 - 0.32) / (1.0 + 0.32)).epsilon(1e-14));
  CHECK(sd.r1[0] == 1.0);
  CHECK(sd.a[0] == 1.0);

  GridSpec ge{4, 0.01, 0.0, 1.0};
  auto sde = amplification(ge);
  for (int l = 0; l < 4; ++l) {
    CHECK(sde.r1[l] == doctest::Approx(1.0));  // explicit scheme: no solve
    CHECK(sde.a[l] == doctest::Approx(1.0 + g.tau * sde.lambda[l]).epsilon(1e-14));
  }

  GridSpec gi{4, 0.01, 1.0, 1.0};
  auto sdi = amplification(gi);
  for (int l = 0; l < 4; ++l) {
    CHECK(sdi.r2[l] == doctest::Approx(1.0));  // fully implicit: rhs untouched
    CHECK(sdi.a[l] == doctest::Approx(1.0 / (1.0 - g.tau * sdi.lambda[l])).epsilon(1e-14));
  }

  // R3 = 1/a - 1
  CHECK(sd.r3(2) == doctest::Approx(1.0 / sd.a[2] - 1.0).epsilon(1e-14));
}

TEST_CASE("stability band per theta") {
  // theta = 0: n^2 tau <= r < 1/2
  CHECK(stability_check(8, 0.005, 0.0, 0.45, 0.1).pass);       // 0.32 <= 0.45
  CHECK_FALSE(stability_check(8, 0.008, 0.0, 0.45, 0.1).pass);  // 0.512 > 0.45
  CHECK_FALSE(stability_check(8, 0.005, 0.0, 0.6, 0.1).pass);   // r >= 1/2 invalid
  // theta = 1/4: cap is 1/(2-1) = 1
  CHECK(stability_check(8, 0.01, 0.25, 0.9, 0.1).pass);  // 0.64 <= 0.9
  // theta = 1/2: n^2 tau <= 1/eps - 1/2
  CHECK(stability_check(16, 0.03, 0.5, 0.0, 0.1).pass);        // 7.68 <= 9.5
  CHECK_FALSE(stability_check(32, 0.01, 0.5, 0.0, 0.1).pass);  // 10.24 > 9.5
  CHECK_FALSE(stability_check(16, 0.03, 0.5, 0.0, 0.7).pass);  // eps out of range
  // theta > 1/2: unconditional
  CHECK(stability_check(1024, 0.4, 0.75, 0.0, 0.0).pass);
  CHECK(stability_check(1024, 0.4, 1.0, 0.0, 0.0).pass);

  // |a_l| < 1 for l != 0 whenever the check passes
  for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (int n : {4, 8, 16}) {
      const double tau = 0.4 / (static_cast<double>(n) * n);
      if (!stability_check(n, tau, theta, default_r_bound(theta), kDefaultEpsilon).pass)
        continue;
      auto sd = amplification(GridSpec{n, tau, theta, 100 * tau});
      for (int l = 1; l < n; ++l) CHECK(std::abs(sd.a[l]) < 1.0);
    }
  }
}

TEST_CASE("dft: unitary round trip and Parseval") {
  rng::Stream st(42, 0, 0);
  for (int n : {3, 4, 5, 8, 12, 16, 31, 64}) {
    std::vector<double> v(n);
    for (auto& x : v) x = 2.0 * st.uniform() - 1.0;
    auto vt = dft_forward(v);
    auto back = dft_inverse(vt);
    double l2v = 0.0, l2t = 0.0;
    for (int j = 0; j < n; ++j) {
      CHECK(back[j].real() == doctest::Approx(v[j]).epsilon(1e-10));
      CHECK(back[j].imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
      l2v += v[j] * v[j];
      l2t += std::norm(vt[j]);
    }
    CHECK(l2t == doctest::Approx(l2v).epsilon(1e-12));
  }
  CHECK_THROWS_AS(dft_forward(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("dft: pinned examples") {
  // constant vector: all mass in mode 0, vtilde_0 = sqrt(n) * c
  std::vector<double> c(8, 3.0);
  auto ct = dft_forward(c);
  CHECK(ct[0].real() == doctest::Approx(3.0 * std::sqrt(8.0)).epsilon(1e-13));
  for (int j = 1; j < 8; ++j) CHECK(std::abs(ct[j]) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));

  // single cosine mode l=2 on n=8: vtilde_2 = vtilde_6 = sqrt(n)/2
  std::vector<double> v(8);
  for (int j = 0; j < 8; ++j) v[j] = std::cos(2.0 * M_PI * 2 * j / 8.0);
  auto vt = dft_forward(v);
  CHECK(vt[2].real() == doctest::Approx(std::sqrt(8.0) / 2.0).epsilon(1e-12));
  CHECK(vt[6].real() == doctest::Approx(std::sqrt(8.0) / 2.0).epsilon(1e-12));
  CHECK(std::abs(vt[1]) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  // power-of-two fast path agrees with the direct transform
  rng::Stream st(7, 1, 2);
  std::vector<cdouble> w(16);
  for (auto& x : w) x = cdouble(st.uniform(), st.uniform());
  auto fast = detail::transform(w, -1);
  auto slow = detail::dft_direct(w, -1);
  for (int j = 0; j < 16; ++j)
    CHECK(std::abs(fast[j] - slow[j]) < 1e-11);
}

TEST_CASE("counter-based rng: determinism and stream independence") {
  rng::Stream a(123, 5, 9), b(123, 5, 9), c(123, 5, 10);
  for (int k = 0; k < 100; ++k) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
  }
  // different (hi, lo) keys give a different stream
  rng::Stream a2(123, 5, 9);
  bool differs = false;
  for (int k = 0; k < 10; ++k)
    if (a2.next_u64() != c.next_u64()) differs = true;
  CHECK(differs);

  // uniform lies strictly inside (0, 1)
  rng::Stream u(9, 0, 0);
  for (int k = 0; k < 10000; ++k) {
    const double x = u.uniform();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("rng poisson mean/variance sanity") {
  rng::Stream st(2718, 0, 0);
  const double mean = 3.5;
  const long N = 200000;
  double s = 0.0, s2 = 0.0;
  for (long k = 0; k < N; ++k) {
    const double v = static_cast<double>(st.poisson(mean));
    s += v;
    s2 += v * v;
  }
  const double mu = s / N;
  const double var = s2 / N - mu * mu;
  const double se = std::sqrt(mean / N);
  CHECK(std::abs(mu - mean) < 4.0 * se);
  CHECK(std::abs(var - mean) < 0.05 * mean);

  // recursive split regime (mean >= 30)
  double big = 0.0;
  const long M = 20000;
  for (long k = 0; k < M; ++k) big += static_cast<double>(st.poisson(75.0));
  CHECK(std::abs(big / M - 75.0) < 4.0 * std::sqrt(75.0 / M));
}
