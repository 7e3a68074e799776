#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "shmod/kernels.hpp"
#include "shmod/norms.hpp"
#include "shmod/rng.hpp"
#include "shmod/spectral.hpp"
#include "shmod/stochastic.hpp"

using namespace shmod;
using spectral::Complex;
using Catch::Approx;

namespace {
kernels::KernelParams params(double eps, double nu) {
  return kernels::KernelParams(eps, nu, 0.5, 1.0, 1.0 / (eps * eps));
}

std::vector<double> exact_window(double l, int n_half) {
  std::vector<double> pts;
  for (int i = -n_half; i <= n_half; ++i)
    pts.push_back(static_cast<double>(i) * l / n_half);
  return pts;
}
}  // namespace

TEST_CASE("noise streams replay bit-exactly and separate by replica") {
  stochastic::NoiseStream a(123, 7), b(123, 7), c(123, 8), d(124, 7);
  bool all_equal = true, differs_c = false, differs_d = false;
  for (int i = 0; i < 1000; ++i) {
    const auto za = a.next_complex_normal();
    const auto zb = b.next_complex_normal();
    const auto zc = c.next_complex_normal();
    const auto zd = d.next_complex_normal();
    all_equal = all_equal && za == zb;
    differs_c = differs_c || za != zc;
    differs_d = differs_d || za != zd;
  }
  REQUIRE(all_equal);
  REQUIRE(differs_c);
  REQUIRE(differs_d);
}

TEST_CASE("complex Gaussian draws have the contracted moments") {
  stochastic::NoiseStream s(2025, 0);
  const std::size_t n = 1'000'000;
  Complex mean(0, 0), second(0, 0);
  double abs2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z = s.next_complex_normal();
    mean += z;
    second += z * z;
    abs2 += std::norm(z);
  }
  mean /= static_cast<double>(n);
  second /= static_cast<double>(n);
  abs2 /= static_cast<double>(n);
  REQUIRE(std::abs(mean) < 0.005);   // CLT bound 3/sqrt(n) with margin
  REQUIRE(abs2 == Approx(1.0).margin(0.01));
  REQUIRE(std::abs(second) < 0.01);  // circular symmetry
}

TEST_CASE("joint_transition closed forms") {
  SECTION("independently evaluated scalars at (1, 4, h=0.5, sigma2=1)") {
    const auto s = stochastic::joint_transition(1.0, 4.0, 0.5, 1.0);
    REQUIRE(s.var_sh == Approx(0.31606027941427884).epsilon(1e-12));
    REQUIRE(s.var_amp == Approx(0.12271054513890823).epsilon(1e-12));
    REQUIRE(s.cov == Approx(0.18358300027522024).epsilon(1e-12));
    REQUIRE(s.decay_sh == Approx(std::exp(-0.5)).epsilon(1e-14));
    REQUIRE(s.decay_amp == Approx(std::exp(-2.0)).epsilon(1e-14));
  }

  SECTION("equal rates couple perfectly") {
    const auto s = stochastic::joint_transition(2.5, 2.5, 0.3, 0.7);
    REQUIRE(s.var_sh == Approx(s.var_amp).epsilon(1e-14));
    REQUIRE(s.cov == Approx(s.var_sh).epsilon(1e-14));
    REQUIRE(s.chol_l22 == Approx(0.0).margin(1e-9));
  }

  SECTION("h -> 0 limit is sigma^2 h") {
    for (double lam : {-3.0, 0.0, 5.0}) {
      const auto s = stochastic::joint_transition(lam, 2.0 * lam, 1e-9, 0.4);
      REQUIRE(s.var_sh == Approx(0.4e-9).epsilon(1e-7));
      REQUIRE(s.var_amp == Approx(0.4e-9).epsilon(1e-7));
      REQUIRE(s.cov == Approx(0.4e-9).epsilon(1e-7));
    }
  }

  SECTION("matches the closed forms to 1e-12 relative on a rate grid") {
    for (double l1 : {-1.0, -1e-7, 0.0, 0.3, 4.0, 40.0}) {
      for (double l2 : {-0.5, 0.0, 1e-8, 2.0, 25.0}) {
        const double h = 0.37, s2 = 1.3;
        const auto s = stochastic::joint_transition(l1, l2, h, s2);
        auto closed = [&](double lam) {
          return lam == 0.0 ? s2 * h
                            : s2 * -std::expm1(-2.0 * lam * h) / (2.0 * lam);
        };
        const double sum = l1 + l2;
        const double cov_closed =
            sum == 0.0 ? s2 * h : s2 * -std::expm1(-sum * h) / sum;
        REQUIRE(s.var_sh == Approx(closed(l1)).epsilon(1e-12));
        REQUIRE(s.var_amp == Approx(closed(l2)).epsilon(1e-12));
        REQUIRE(s.cov == Approx(cov_closed).epsilon(1e-12));
        REQUIRE(s.var_sh * s.var_amp >= s.cov * s.cov * (1.0 - 1e-12));
        REQUIRE(s.var_sh > 0.0);
        REQUIRE(s.var_amp > 0.0);
      }
    }
  }

  SECTION("h must be positive") {
    REQUIRE_THROWS(stochastic::joint_transition(1.0, 1.0, 0.0, 1.0));
  }
}

TEST_CASE("advance: deterministic limit, K=0 coupling, support cut") {
  const auto p = params(0.1, 0.0);
  auto grid = spectral::make_grid(64, 0.5);  // K in [-16, 15.5], support edge -10

  SECTION("zero noise gives pure exponential decay") {
    auto path = stochastic::make_coupled_path(grid);
    for (auto& v : path.sh_state) v = Complex(1.0, -0.5);
    for (auto& v : path.amp_state) v = Complex(0.25, 2.0);
    stochastic::NoiseStream s(1, 0);
    const double h = 0.3;
    stochastic::advance(path, h, p, s, 0.0);
    for (std::size_t j = 0; j < grid.modes.size(); ++j) {
      const double K = grid.modes[j];
      if (K >= -10.0) {
        const double d = std::exp(-stochastic::band_rate(K, p) * h);
        REQUIRE(std::abs(path.sh_state[j] - d * Complex(1.0, -0.5)) <=
                1e-12 * std::max(1.0, std::abs(d)));
      } else {
        REQUIRE(path.sh_state[j] == Complex(1.0, -0.5));  // outside band support
      }
      const double da = std::exp(-stochastic::amplitude_rate(K, p) * h);
      REQUIRE(std::abs(path.amp_state[j] - da * Complex(0.25, 2.0)) <=
              1e-12 * std::max(1e-30, std::abs(da * Complex(0.25, 2.0))));
    }
    REQUIRE(path.t_slow == Approx(h));
  }

  SECTION("at K = 0 with nu = 0 both states receive identical Brownian kicks") {
    auto path = stochastic::make_coupled_path(grid);
    stochastic::NoiseStream s(7, 3);
    for (int step = 0; step < 5; ++step) stochastic::advance(path, 0.2, p, s);
    const std::size_t j0 = 32;  // K = 0
    REQUIRE(grid.modes[j0] == 0.0);
    REQUIRE(path.sh_state[j0] == path.amp_state[j0]);
    REQUIRE(std::abs(path.sh_state[j0]) > 0.0);
  }

  SECTION("identical seeds replay identical trajectories") {
    auto p1 = stochastic::make_coupled_path(grid);
    auto p2 = stochastic::make_coupled_path(grid);
    stochastic::NoiseStream s1(99, 4), s2(99, 4);
    for (int step = 0; step < 3; ++step) {
      stochastic::advance(p1, 0.25, p, s1);
      stochastic::advance(p2, 0.25, p, s2);
    }
    REQUIRE(p1.sh_state == p2.sh_state);
    REQUIRE(p1.amp_state == p2.amp_state);
  }
}

TEST_CASE("single-mode transition law against a Monte-Carlo oracle") {
  // one joint step: empirical variances and cross-covariance of the mode
  // increments match the closed forms within 3 standard errors
  const double l_sh = 0.950625, l_amp = 1.0, h = 0.7, s2 = 0.8;
  const auto step = stochastic::joint_transition(l_sh, l_amp, h, s2);
  const std::size_t n = 100'000;
  stochastic::NoiseStream s(31415, 0);
  double v_sh = 0, v_amp = 0;
  Complex cov(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z1 = s.next_complex_normal();
    const Complex z2 = s.next_complex_normal();
    const Complex xi_sh = step.chol_l11 * z1;
    const Complex xi_amp = step.chol_l21 * z1 + step.chol_l22 * z2;
    v_sh += std::norm(xi_sh);
    v_amp += std::norm(xi_amp);
    cov += xi_sh * std::conj(xi_amp);
  }
  v_sh /= static_cast<double>(n);
  v_amp /= static_cast<double>(n);
  cov /= static_cast<double>(n);
  // |xi|^2 is exponentially distributed, so se(var-hat) = var / sqrt(n)
  const double rt_n = std::sqrt(static_cast<double>(n));
  REQUIRE(std::abs(v_sh - step.var_sh) <= 3.0 * step.var_sh / rt_n);
  REQUIRE(std::abs(v_amp - step.var_amp) <= 3.0 * step.var_amp / rt_n);
  REQUIRE(std::abs(cov - Complex(step.cov, 0.0)) <=
          3.0 * 2.0 * std::sqrt(step.var_sh * step.var_amp) / rt_n);
}

TEST_CASE("multi-step marginal and coupling law are step-size free") {
  // advance a probe mode to T in 7 uneven steps; the terminal law matches
  // the one-shot closed form (exact integrator, no step bias)
  const auto p = params(0.1, 1.0);
  auto grid = spectral::make_grid(2, 1.5);  // modes {-1.5, 0}
  const double T = 1.1;
  const std::vector<double> hs{0.05, 0.3, 0.15, 0.2, 0.1, 0.25, 0.05};
  const std::size_t n = 20'000;
  const std::size_t probe = 0;  // K = -1.5
  const double K = grid.modes[probe];
  double v_sh = 0, v_amp = 0;
  Complex cov(0, 0);
  for (std::size_t r = 0; r < n; ++r) {
    auto path = stochastic::make_coupled_path(grid);
    stochastic::NoiseStream s(777, r);
    for (double h : hs) stochastic::advance(path, h, p, s);
    v_sh += std::norm(path.sh_state[probe]);
    v_amp += std::norm(path.amp_state[probe]);
    cov += path.sh_state[probe] * std::conj(path.amp_state[probe]);
  }
  v_sh /= static_cast<double>(n);
  v_amp /= static_cast<double>(n);
  cov /= static_cast<double>(n);

  const double s2 = grid.delta_k / (2.0 * std::numbers::pi);
  const double lb = stochastic::band_rate(K, p);
  const double la = stochastic::amplitude_rate(K, p);
  const double var_sh = s2 * (1.0 - std::exp(-2.0 * lb * T)) / (2.0 * lb);
  const double var_amp = s2 * (1.0 - std::exp(-2.0 * la * T)) / (2.0 * la);
  const double cov_t = s2 * (1.0 - std::exp(-(lb + la) * T)) / (lb + la);
  const double rt_n = std::sqrt(static_cast<double>(n));
  REQUIRE(std::abs(v_sh - var_sh) <= 3.0 * var_sh / rt_n);
  REQUIRE(std::abs(v_amp - var_amp) <= 3.0 * var_amp / rt_n);
  REQUIRE(std::abs(cov - Complex(cov_t, 0.0)) <=
          3.0 * 2.0 * std::sqrt(var_sh * var_amp) / rt_n);
}

TEST_CASE("error_snapshot") {
  const double eps = 0.1;
  auto grid = spectral::make_grid(32, 0.5);
  const auto fast = exact_window(8.0, 80);

  SECTION("equal states cancel") {
    auto path = stochastic::make_coupled_path(grid);
    stochastic::NoiseStream s(5, 0);
    for (auto& v : path.sh_state) v = s.next_complex_normal();
    path.amp_state = path.sh_state;
    const auto f = stochastic::error_snapshot(path, eps, fast);
    for (std::size_t i = 0; i < f.points.size(); ++i) REQUIRE(f.real_at(i) == 0.0);
  }

  SECTION("single band mode gives the one-mode modulated wave") {
    auto path = stochastic::make_coupled_path(grid);
    const std::size_t j = 20;  // K = 2.0
    const Complex c(0.7, -0.3);
    path.sh_state[j] = c;
    const auto f = stochastic::error_snapshot(path, eps, fast);
    const double K = grid.modes[j];
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      const double x = f.points[i];
      const Complex expect = c * std::polar(1.0, (1.0 + K * eps) * x);
      REQUIRE(f.real_at(i) == Approx(2.0 * expect.real()).margin(1e-12));
    }
  }

  SECTION("snapshot norm equals the synthesis + modulation route") {
    auto path = stochastic::make_coupled_path(grid);
    stochastic::NoiseStream s(11, 2);
    for (int step = 0; step < 4; ++step)
      stochastic::advance(path, 0.25, params(eps, 1.0), s);
    const auto snap = stochastic::error_snapshot(path, eps, fast);

    std::vector<Complex> diff(path.sh_state.size());
    for (std::size_t j = 0; j < diff.size(); ++j)
      diff[j] = path.sh_state[j] - path.amp_state[j];
    std::vector<double> slow(fast.size());
    for (std::size_t i = 0; i < fast.size(); ++i) slow[i] = eps * fast[i];
    const auto amp =
        spectral::synthesize(spectral::ComplexModeState{grid, diff, false}, slow);
    const auto rebuilt = spectral::modulate_reconstruct(amp, eps);

    const double na = norms::c0_gamma(snap, 0.2);
    const double nb = norms::c0_gamma(rebuilt, 0.2);
    REQUIRE(na == Approx(nb).epsilon(1e-11));
  }
}

TEST_CASE("stationary Gaussian sampler") {
  const auto p = params(0.1, 0.0);
  auto grid = spectral::make_grid(64, 0.25);
  auto q = [&](double k) { return kernels::covariance_symbol(k, p); };

  SECTION("zero symbol gives the zero field") {
    stochastic::NoiseStream s(3, 0);
    const auto st = stochastic::sample_stationary_gaussian(
        [](double) { return 0.0; }, grid, s);
    for (const auto& c : st.coeffs) REQUIRE(c == Complex(0, 0));
  }

  SECTION("negative symbol is rejected") {
    stochastic::NoiseStream s(3, 0);
    REQUIRE_THROWS(stochastic::sample_stationary_gaussian(
        [](double k) { return k < 0 ? -1.0 : 1.0; }, grid, s));
  }

  SECTION("pointwise variance and lag-1 covariance match the symbol") {
    const double w = grid.delta_k / (2.0 * std::numbers::pi);
    double target0 = 0.0;
    Complex target1(0, 0);
    for (double K : grid.modes) {
      target0 += q(K) * w;
      target1 += q(K) * w * std::polar(1.0, K * 1.0);
    }
    const std::size_t n = 10'000;
    double var0 = 0.0, var0_sq = 0.0;
    Complex lag1(0, 0);
    double lag1_sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      stochastic::NoiseStream s(909, r);
      const auto st = stochastic::sample_stationary_gaussian(q, grid, s);
      Complex a0(0, 0), a1(0, 0);
      for (std::size_t j = 0; j < st.coeffs.size(); ++j) {
        a0 += st.coeffs[j];
        a1 += st.coeffs[j] * std::polar(1.0, grid.modes[j] * 1.0);
      }
      var0 += std::norm(a0);
      var0_sq += std::norm(a0) * std::norm(a0);
      lag1 += a1 * std::conj(a0);
      lag1_sq += std::norm(a1 * std::conj(a0));
    }
    var0 /= static_cast<double>(n);
    var0_sq /= static_cast<double>(n);
    lag1 /= static_cast<double>(n);
    lag1_sq /= static_cast<double>(n);
    const double se0 =
        std::sqrt(std::max(var0_sq - var0 * var0, 0.0) / static_cast<double>(n));
    const double se1 =
        std::sqrt(std::max(lag1_sq - std::norm(lag1), 0.0) / static_cast<double>(n));
    REQUIRE(std::abs(var0 - target0) <= 3.0 * se0);
    REQUIRE(std::abs(lag1 - target1) <= 3.0 * (se1 + 1e-12));
  }
}

TEST_CASE("variance_oracle") {
  SECTION("vanishes as t -> 0 and grows monotonically") {
    const double tiny = stochastic::variance_oracle(1e-6);
    REQUIRE(tiny > 0.0);
    REQUIRE(tiny < 1e-3);
    REQUIRE(stochastic::variance_oracle(0.5) < stochastic::variance_oracle(1.0));
    REQUIRE(stochastic::variance_oracle(1.0) < stochastic::variance_oracle(2.0));
  }

  SECTION("value at t = 1 against an independent high-precision evaluation") {
    REQUIRE(stochastic::variance_oracle(1.0, 1e-8) ==
            Approx(0.35258622104750661).epsilon(1e-6));
  }

  SECTION("double-resolution trapezoid oracle reproduces it within 1e-5") {
    auto trap = [](int n_w, int n_k) {
      const double t = 1.0;
      const double w_end = std::pow(t, 0.25);
      double total = 0.0;
      auto inner = [&](double s) {
        if (s == 0.0) return 0.0;
        const double k_end = std::sqrt(1.0 + std::sqrt(360.0 / s));
        double acc = 0.0;
        for (int i = 0; i <= n_k; ++i) {
          const double k = k_end * i / n_k;
          const double a = 1.0 - k * k;
          const double v = std::exp(-2.0 * s * a * a);
          acc += (i == 0 || i == n_k) ? 0.5 * v : v;
        }
        return 2.0 * acc * k_end / n_k;
      };
      for (int i = 0; i <= n_w; ++i) {
        const double w = w_end * i / n_w;
        const double g = inner(w * w * w * w) * 4.0 * w * w * w;
        total += (i == 0 || i == n_w) ? 0.5 * g : g;
      }
      return total * w_end / n_w / (2.0 * std::numbers::pi);
    };
    const double coarse = trap(1000, 2000);
    const double fine = trap(2000, 4000);
    const double oracle = stochastic::variance_oracle(1.0, 1e-8);
    REQUIRE(std::abs(fine - coarse) < 1e-5);
    REQUIRE(oracle == Approx(fine).margin(1e-5));
  }
}
