#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "levyheat/green.hpp"
#include "levyheat/scheme.hpp"

using namespace levyheat;

TEST_CASE("coefficient families: values and constants") {
  auto lin = CoefficientSpec::linear(2.5);
  CHECK(lin.sigma(3.0) == doctest::Approx(7.5));
  CHECK(lin.lipschitz() == doctest::Approx(2.5));
  CHECK(lin.j0() == doctest::Approx(2.5));
  CHECK_FALSE(lin.bounded());

  auto bs = CoefficientSpec::bounded_sin(1.2);
  CHECK(bs.sigma(M_PI / 2.0) == doctest::Approx(1.2));
  CHECK(bs.lipschitz() == doctest::Approx(1.2));
  CHECK(bs.j0() == 0.0);
  CHECK(bs.bounded());

  auto cst = CoefficientSpec::constant(0.7);
  CHECK(cst.sigma(123.0) == doctest::Approx(0.7));
  CHECK(cst.lipschitz() == 0.0);

  auto ac = CoefficientSpec::affine_clip(2.0, -1.0, 1.0, 0.5);
  CHECK(ac.sigma(0.25) == doctest::Approx(1.0));
  CHECK(ac.sigma(10.0) == doctest::Approx(2.5));  // clipped at 1
  CHECK(ac.bounded());
}

TEST_CASE("solve_implicit: identity at theta=0 and eigen action") {
  GridSpec g0{8, 0.004, 0.0, 1.0};
  auto sd0 = amplification(g0);
  std::vector<double> v{1.0, -2.0, 0.5, 3.0, 0.0, 1.5, -1.0, 2.0};
  auto w0 = solve_implicit(v, g0, sd0);
  for (int j = 0; j < 8; ++j) CHECK(w0[j] == doctest::Approx(v[j]).epsilon(1e-12));

  GridSpec g1{8, 0.004, 1.0, 1.0};
  auto sd1 = amplification(g1);
  // eigenvector: cos mode l=2 is scaled by R1_2
  std::vector<double> f(8);
  for (int j = 0; j < 8; ++j) f[j] = std::cos(2.0 * M_PI * 2 * j / 8.0);
  auto wf = solve_implicit(f, g1, sd1);
  for (int j = 0; j < 8; ++j)
    CHECK(wf[j] == doctest::Approx(sd1.r1[2] * f[j]).epsilon(1e-12).scale(1.0));

  // residual: (I - theta tau Dn) w = v to 1e-10
  auto w = solve_implicit(v, g1, sd1);
  auto lw = laplacian(w, 8);
  for (int j = 0; j < 8; ++j)
    CHECK(w[j] - g1.theta * g1.tau * lw[j] == doctest::Approx(v[j]).epsilon(1e-10).scale(10.0));
}

TEST_CASE("step: zero noise preserves constants and decays modes") {
  for (double theta : {0.0, 0.5, 1.0}) {
    const int n = 8;
    GridSpec g{n, 0.4 / (n * n), theta, 1.0};
    auto sd = amplification(g);
    auto coeff = CoefficientSpec::linear(1.0);
    std::vector<double> zero_row(n, 0.0);

    std::vector<double> c(n, 4.2);
    auto c1 = step(c, zero_row.data(), g, sd, coeff);
    for (int j = 0; j < n; ++j) CHECK(c1[j] == doctest::Approx(4.2).epsilon(1e-13));

    std::vector<double> f(n);
    for (int j = 0; j < n; ++j) f[j] = std::cos(2.0 * M_PI * 3 * j / static_cast<double>(n));
    auto f1 = step(f, zero_row.data(), g, sd, coeff);
    for (int j = 0; j < n; ++j)
      CHECK(f1[j] == doctest::Approx(sd.a[3] * f[j]).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("step: pure noise injection at theta=0") {
  const int n = 8;
  GridSpec g{n, 0.004, 0.0, 1.0};
  auto sd = amplification(g);
  auto coeff = CoefficientSpec::constant(1.0);  // sigma = 1
  std::vector<double> u(n, 0.0);
  std::vector<double> row(n);
  for (int j = 0; j < n; ++j) row[j] = 0.1 * (j + 1);
  auto u1 = step(u, row.data(), g, sd, coeff);
  for (int j = 0; j < n; ++j)
    CHECK(u1[j] == doctest::Approx(n * row[j]).epsilon(1e-12));
}

TEST_CASE("run: noiseless dynamics equal the G1 convolution") {
  for (double theta : {0.0, 0.5, 1.0}) {
    const int n = 8;
    GridSpec g{n, 0.4 / (n * n), theta, 64 * 0.4 / (n * n)};
    auto sd = amplification(g);
    LevyNoiseSpec det;
    det.measure = LevyMeasureSpec::zero_measure();
    det.b = 0.0;
    auto nf = sample(g, det, 1);
    auto u0 = InitialCondition::mode(2, 0.7, 0.3);
    auto sol = run(g, nf, CoefficientSpec::linear(1.0), u0);
    const long m = g.num_steps();
    // exact: mode carried by a_2^i
    for (long i : {1L, 7L, m}) {
      for (int j = 0; j < n; ++j) {
        const double want = std::pow(sd.a[2], static_cast<double>(i)) *
                            u0.value(g.x(j));
        CHECK(sol.at(i, j) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
      }
    }
    // equivalently, sum_y G1(t, x, y) u0(y) / n
    const long i = m / 2;
    for (int j = 0; j < n; ++j) {
      double conv = 0.0;
      for (int k = 0; k < n; ++k)
        conv += discrete_green_G1(g, sd, i * g.tau, g.x(j), g.x(k)) * u0.value(g.x(k));
      conv /= n;
      CHECK(sol.at(i, j) == doctest::Approx(conv).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("run: linearity in the noise for constant sigma") {
  const int n = 8;
  GridSpec g{n, 0.004, 1.0, 0.1};
  auto spec = LevyNoiseSpec::centered(LevyMeasureSpec::atomic({{1.0, 4.0}, {-2.0, 1.0}}));
  auto nf = sample(g, spec, 77);
  auto coeff = CoefficientSpec::constant(1.0);
  auto u0 = InitialCondition::constant(0.0);
  auto sol1 = run(g, nf, coeff, u0);
  NoiseField doubled = nf;
  for (auto& v : doubled.increments) v *= 2.0;
  auto sol2 = run(g, doubled, coeff, u0);
  const long m = g.num_steps();
  for (int j = 0; j < n; ++j)
    CHECK(sol2.at(m, j) == doctest::Approx(2.0 * sol1.at(m, j)).epsilon(1e-11).scale(1.0));
}

TEST_CASE("run: spatial shift equivariance") {
  const int n = 8;
  GridSpec g{n, 0.004, 1.0, 0.1};
  auto spec = LevyNoiseSpec::centered(LevyMeasureSpec::atomic({{1.0, 5.0}}));
  auto nf = sample(g, spec, 13);
  auto coeff = CoefficientSpec::linear(0.8);
  std::vector<double> u0v{1.0, 0.2, -0.5, 0.9, 0.0, 0.3, -0.1, 0.6};
  auto sol = run(g, nf, coeff, InitialCondition::grid(u0v));

  // shift noise and initial data by s cells: solution shifts by s cells
  const int s = 3;
  NoiseField shifted = nf;
  std::vector<double> u0s(n);
  for (long i = 0; i < nf.m; ++i)
    for (int j = 0; j < n; ++j) shifted.at(i, (j + s) % n) = nf.at(i, j);
  for (int j = 0; j < n; ++j) u0s[(j + s) % n] = u0v[j];
  auto sols = run(g, shifted, coeff, InitialCondition::grid(u0s));
  const long m = g.num_steps();
  for (int j = 0; j < n; ++j)
    CHECK(sols.at(m, (j + s) % n) == doctest::Approx(sol.at(m, j)).epsilon(1e-11).scale(1.0));
}

TEST_CASE("run rejects mismatched noise and unstable grids") {
  GridSpec g{8, 0.004, 1.0, 0.1};
  auto spec = LevyNoiseSpec::centered(LevyMeasureSpec::atomic({{1.0, 1.0}}));
  auto nf = sample(g, spec, 5);
  GridSpec g2{8, 0.004, 1.0, 0.2};
  CHECK_THROWS_AS(run(g2, nf, CoefficientSpec::linear(1.0), InitialCondition::constant(0.0)),
                  std::invalid_argument);
  GridSpec bad{16, 0.01, 0.0, 0.1};  // n^2 tau = 2.56 >> band
  CHECK_THROWS_AS(sample(bad, spec, 5), std::invalid_argument);
}

TEST_CASE("mild form agrees with the recursion") {
  // deterministic identity per path: u(t_i, x_j) from the scheme equals the
  // discrete mild convolution built from G1/G2.
  for (double theta : {0.0, 0.5, 1.0}) {
    for (int n : {4, 8}) {
      const double tau = 0.4 / (n * n);
      GridSpec g{n, tau, theta, 24 * tau};
      if (!stability_check(g).pass) continue;
      auto spec = LevyNoiseSpec::centered(
          LevyMeasureSpec::atomic({{1.0, 3.0}, {-0.4, 6.0}}));
      auto nf = sample(g, spec, 1000 + n);
      auto coeff = CoefficientSpec::linear(1.0);
      auto u0 = InitialCondition::mode(1, 1.0, 0.5);
      auto sol = run(g, nf, coeff, u0);
      for (long i : {1L, 5L, 24L}) {
        for (int j = 0; j < n; ++j) {
          const double mild = mild_evaluate(g, nf, sol, coeff, u0, i * tau, g.x(j));
          CHECK(mild == doctest::Approx(sol.at(i, j)).epsilon(1e-9).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("divergence raises a structured error") {
  // theta = 0 with a violated step bound blows up; bypass the sampler guard
  // by constructing the noise on a stable grid and running on an unstable one
  // is rejected, so instead drive blow-up through a huge linear coefficient.
  const int n = 8;
  GridSpec g{n, 0.4 / (n * n), 0.0, 64 * 0.4 / (n * n)};
  auto spec = LevyNoiseSpec::centered(LevyMeasureSpec::atomic({{60.0, 50.0}}));
  auto nf = sample(g, spec, 3);
  // gamma large enough that sigma(u) * n * inc repeatedly squares the state
  auto coeff = CoefficientSpec::linear(1e150);
  bool threw = false;
  try {
    auto sol = run(g, nf, coeff, InitialCondition::constant(1.0));
    (void)sol;
  } catch (const DivergenceError& e) {
    threw = true;
    CHECK(e.step() >= 1);
  }
  CHECK(threw);
}
