#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "shmod/kernels.hpp"

using namespace shmod;
using Catch::Approx;

namespace {
kernels::KernelParams params(double eps, double nu, double delta = 0.5,
                             double T = 1.0) {
  return kernels::KernelParams(eps, nu, delta, T, 1.0 / (eps * eps));
}
}  // namespace

TEST_CASE("KernelParams validates ranges") {
  REQUIRE_NOTHROW(params(0.1, 1.0));
  REQUIRE_THROWS_WITH(params(1.5, 0.0),
                      Catch::Matchers::ContainsSubstring("epsilon"));
  REQUIRE_THROWS_WITH(params(0.1, 1.5), Catch::Matchers::ContainsSubstring("nu"));
  REQUIRE_THROWS_WITH(params(0.1, 0.0, 1.0),
                      Catch::Matchers::ContainsSubstring("delta"));
  REQUIRE_THROWS(kernels::KernelParams(0.1, 0.0, 0.5, 0.0, 100.0));
  REQUIRE_THROWS(kernels::KernelParams(0.1, 0.0, 0.5, 1.0, 0.0));
}

TEST_CASE("sh_symbol") {
  const auto p0 = params(0.1, 0.0);
  SECTION("exponent vanishes at the band centre k = 1 when eps nu term is off") {
    for (double t : {0.0, 0.5, 3.0}) REQUIRE(kernels::sh_symbol(t, 1.0, p0) == 1.0);
    REQUIRE(kernels::sh_symbol(2.0, -1.0, p0) == 1.0);
  }
  SECTION("t = 0 gives 1 for any k") {
    for (double k : {-3.0, 0.0, 0.7}) REQUIRE(kernels::sh_symbol(0.0, k, p0) == 1.0);
  }
  SECTION("independently evaluated scalar value") {
    const auto p = params(0.1, 1.0);
    REQUIRE(kernels::sh_symbol(1.0, 0.0, p) ==
            Approx(0.37157669102204569).epsilon(1e-14));
  }
  SECTION("negative time is rejected") {
    REQUIRE_THROWS(kernels::sh_symbol(-1.0, 0.0, p0));
  }
}

TEST_CASE("band_symbol") {
  const auto p = params(0.1, 0.0);
  SECTION("zero outside the support K >= -1/eps") {
    REQUIRE(kernels::band_symbol(1.0, -10.001, p) == 0.0);
    REQUIRE(kernels::band_symbol(0.0, -10.001, p) == 0.0);
    REQUIRE(kernels::band_symbol(1.0, -10.0, p) > 0.0);
  }
  SECTION("tau = 0 gives 1 on the support") {
    REQUIRE(kernels::band_symbol(0.0, 0.0, p) == 1.0);
    REQUIRE(kernels::band_symbol(0.0, 4.2, p) == 1.0);
  }
  SECTION("independently evaluated scalar value: (2 + 0.1)^2 * 1 = 4.41") {
    REQUIRE(kernels::band_symbol(1.0, 1.0, p) ==
            Approx(0.012155178329914937).epsilon(1e-14));
  }
}

TEST_CASE("amplitude_symbol") {
  REQUIRE(kernels::amplitude_symbol(0.0, 3.0, 0.7) == 1.0);
  REQUIRE(kernels::amplitude_symbol(1.0, 0.0, 0.0) == 1.0);
  REQUIRE(kernels::amplitude_symbol(0.5, 1.0, 1.0) ==
          Approx(0.22313016014842983).epsilon(1e-14));
}

TEST_CASE("error_kernel pointwise identities") {
  SECTION("vanishes identically at K = 0") {
    for (double nu : {-1.0, 0.0, 1.0}) {
      const auto p = params(0.1, nu);
      for (double tau : {0.0, 0.3, 1.0, 7.5})
        REQUIRE(kernels::error_kernel(tau, 0.0, p) == 0.0);
    }
  }
  SECTION("tau = 0 gives 0 on the band support and -1 left of it") {
    const auto p = params(0.2, 1.0);
    for (double K : {-5.0, -1.0, 0.0, 2.5, 40.0})
      REQUIRE(kernels::error_kernel(0.0, K, p) == 0.0);
    for (double K : {-5.001, -8.0, -100.0})
      REQUIRE(kernels::error_kernel(0.0, K, p) == -1.0);
  }
  SECTION("independently evaluated scalar value") {
    const auto p = params(0.1, 0.0);
    REQUIRE(kernels::error_kernel(1.0, 1.0, p) ==
            Approx(-0.0061604605588192431).epsilon(1e-12));
  }
  SECTION("equals band minus amplitude everywhere") {
    const auto p = params(0.1, 0.5);
    for (double tau : {0.1, 1.0})
      for (double K : {-20.0, -10.0, -9.9, -2.0, 0.5, 3.0, 11.0})
        REQUIRE(kernels::error_kernel(tau, K, p) ==
                Approx(kernels::band_symbol(tau, K, p) -
                       kernels::amplitude_symbol(tau, K, p.nu))
                    .margin(1e-300));
  }
}

TEST_CASE("kernel_pieces supports and values") {
  const auto p = params(0.1, 0.3);  // delta/eps = 5, 1/eps = 10

  SECTION("all pieces vanish at K = 0") {
    const auto f = kernels::kernel_pieces(1.3, 0.0, p);
    REQUIRE(f.f_a == 0.0);
    REQUIRE(f.f_b == 0.0);
    REQUIRE(f.f_c == 0.0);
    REQUIRE(f.f_d == 0.0);
  }
  SECTION("inside the band at tau = 0 the difference cancels") {
    const auto f = kernels::kernel_pieces(0.0, 2.5, p);
    REQUIRE(f.f_a == 0.0);
    REQUIRE(f.f_b == 0.0);
    REQUIRE(f.f_c == 0.0);
    REQUIRE(f.f_d == 0.0);
  }
  SECTION("outside the band at tau = 0: indicator values survive") {
    const auto f = kernels::kernel_pieces(0.0, 10.0, p);  // K = 2 delta/eps
    REQUIRE(f.f_a == 1.0);
    REQUIRE(f.f_b == 0.0);
    REQUIRE(f.f_c == 0.0);
    REQUIRE(f.f_d == -2.0);
  }
  SECTION("middle-band support belongs to f_b") {
    const auto f = kernels::kernel_pieces(0.2, -7.0, p);
    REQUIRE(f.f_b == Approx(kernels::band_symbol(0.2, -7.0, p)));
    REQUIRE(f.f_a == 0.0);
    REQUIRE(f.f_c == 0.0);
    REQUIRE(f.f_d == 0.0);
  }
}

TEST_CASE("pointwise domination of the kernel by its pieces") {
  const auto p = params(0.1, 1.0);
  for (double tau = 0.0; tau <= 2.0; tau += 0.08) {
    for (double K = -30.0; K <= 30.0; K += 0.37) {
      const double f = std::abs(kernels::error_kernel(tau, K, p));
      const auto at = kernels::kernel_pieces(tau, K, p);
      const auto mirrored = kernels::kernel_pieces(tau, -K, p);
      const double bound = std::abs(at.f_a) + std::abs(at.f_b) +
                           std::abs(at.f_c) + std::abs(at.f_d) +
                           std::abs(mirrored.f_d);
      REQUIRE(f <= bound * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("mean-value bound on f_c over its support") {
  // |f_c| <= e^{tau nu} eps tau |K|^3 (4 + |K| eps) e^{-tau (1-delta/2)^2 4 K^2}
  for (double nu : {-1.0, 0.0, 1.0}) {
    const auto p = params(0.1, nu);
    for (double tau = 0.0; tau <= 2.0; tau += 0.05) {
      for (double K = -4.95; K <= 4.95; K += 0.15) {
        const double fc = std::abs(kernels::kernel_pieces(tau, K, p).f_c);
        const double shape = (1.0 - p.delta / 2.0) * (1.0 - p.delta / 2.0);
        const double bound = std::exp(tau * nu) * p.epsilon * tau *
                             std::pow(std::abs(K), 3) *
                             (4.0 + std::abs(K) * p.epsilon) *
                             std::exp(-tau * shape * 4.0 * K * K);
        REQUIRE(fc <= bound * (1.0 + 1e-12) + 1e-300);
      }
    }
  }
}

TEST_CASE("ic_error_kernel") {
  SECTION("vanishes at T = 0 and at ell = 0") {
    const auto p = params(0.1, 1.0);
    for (double ell : {-20.0, -3.0, 0.0, 7.0})
      REQUIRE(kernels::ic_error_kernel(0.0, ell, p) == 0.0);
    for (double T : {0.0, 0.5, 2.0})
      REQUIRE(kernels::ic_error_kernel(T, 0.0, p) == 0.0);
  }
  SECTION("independently evaluated scalar value") {
    const auto p = params(0.1, 0.0);
    REQUIRE(kernels::ic_error_kernel(1.0, 1.0, p) ==
            Approx(-0.0061604605588192431).epsilon(1e-12));
  }
  SECTION("equals error_kernel on the band support, exactly") {
    const auto p = params(0.2, 0.7);
    for (double T : {0.1, 1.0, 3.0})
      for (double ell : {-4.999, -3.0, -0.5, 0.0, 1.0, 12.0})
        REQUIRE(kernels::ic_error_kernel(T, ell, p) ==
                kernels::error_kernel(T, ell, p));
  }
  SECTION("differs from error_kernel only by the cutoff term left of -1/eps") {
    const auto p = params(0.2, 0.7);
    const double ell = -6.0;
    REQUIRE(kernels::ic_error_kernel(1.0, ell, p) !=
            kernels::error_kernel(1.0, ell, p));
    REQUIRE(kernels::ic_error_kernel(1.0, ell, p) - kernels::error_kernel(1.0, ell, p) ==
            Approx(kernels::detail::band_core(1.0, ell, p)).epsilon(1e-13));
  }
}

TEST_CASE("covariance_symbol") {
  const auto p = params(0.1, 0.0);  // t_eps eps^2 = 1

  SECTION("removable singularity at k = 0 equals t_eps eps^2") {
    REQUIRE(kernels::covariance_symbol(0.0, p) == Approx(1.0));
    const auto p2 = kernels::KernelParams(0.2, 0.0, 0.5, 1.0, 75.0);
    REQUIRE(kernels::covariance_symbol(0.0, p2) == Approx(3.0));
  }
  SECTION("Taylor branch joins the exact branch smoothly") {
    const double k = std::sqrt(1e-6 / 8.0) * 0.999;
    const double taylor = kernels::covariance_symbol(k, p);
    const double exact = -std::expm1(-8.0 * k * k) / (8.0 * k * k);
    REQUIRE(taylor == Approx(exact).epsilon(1e-13));
  }
  SECTION("k^{-2} tail bound") {
    REQUIRE(kernels::covariance_symbol(10.0, p) <= 0.00125);
    REQUIRE(kernels::covariance_symbol(10.0, p) ==
            Approx(1.0 / 800.0).epsilon(1e-10));
  }
  SECTION("independently evaluated scalar value") {
    REQUIRE(kernels::covariance_symbol(1.0, p) ==
            Approx(0.12495806717151219).epsilon(1e-14));
  }
  SECTION("q(k) <= min(t_eps eps^2, 1/(8 k^2)) on a log lattice") {
    for (int i = 0; i < 2000; ++i) {
      const double k = std::pow(10.0, -6.0 + 12.0 * i / 1999.0);
      const double q = kernels::covariance_symbol(k, p);
      REQUIRE(q <= 1.0);
      REQUIRE(q <= 1.0 / (8.0 * k * k));
    }
  }
}

TEST_CASE("error_kernel collapses pointwise as eps -> 0") {
  const double tau = 1.0, K = 1.0;
  double prev = 1e9;
  for (double eps : {0.2, 0.1, 0.05}) {
    const auto p = params(eps, 1.0);
    const double f = std::abs(kernels::error_kernel(tau, K, p));
    REQUIRE(f < prev);
    prev = f;
  }
  REQUIRE(prev < 0.05);
}
