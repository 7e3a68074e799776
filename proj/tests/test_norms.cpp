#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "shmod/norms.hpp"
#include "shmod/rng.hpp"
#include "shmod/spectral.hpp"

using namespace shmod;
using spectral::Complex;
using Catch::Approx;

namespace {

spectral::PhysicalSamples field_on(double l_max, int n_half,
                                   double (*f)(double)) {
  spectral::PhysicalSamples s;
  for (int i = -n_half; i <= n_half; ++i) {
    const double x = static_cast<double>(i) * l_max / n_half;
    s.points.push_back(x);
    s.values.emplace_back(f(x), 0.0);
  }
  s.real_valued = true;
  return s;
}

// piecewise-linear random field: iid node values in [-1, 1]
spectral::PhysicalSamples random_field(double l_max, int n_half,
                                       stochastic::NoiseStream& rng) {
  spectral::PhysicalSamples s;
  for (int i = -n_half; i <= n_half; ++i) {
    const double x = static_cast<double>(i) * l_max / n_half;
    s.points.push_back(x);
    const auto z = rng.next_complex_normal();
    s.values.emplace_back(std::tanh(z.real()), 0.0);
  }
  s.real_valued = true;
  return s;
}

spectral::PhysicalSamples rescaled(const spectral::PhysicalSamples& u, double eps) {
  // v(x) = u(eps x), sampled where the values are known exactly
  spectral::PhysicalSamples v;
  v.real_valued = u.real_valued;
  for (std::size_t i = 0; i < u.points.size(); ++i) {
    v.points.push_back(u.points[i] / eps);
    v.values.push_back(u.values[i]);
  }
  return v;
}

}  // namespace

TEST_CASE("WeightParams validates the exponent range") {
  REQUIRE_NOTHROW(norms::WeightParams(0.1));
  REQUIRE_THROWS_WITH(norms::WeightParams(0.7),
                      Catch::Matchers::ContainsSubstring("gamma out of range"));
  REQUIRE_THROWS(norms::WeightParams(0.0));
  REQUIRE_THROWS(norms::WeightParams(0.5));
}

TEST_CASE("c0_gamma on elementary fields") {
  const double gamma = 0.2;

  SECTION("zero field") {
    auto z = field_on(4.0, 40, [](double) { return 0.0; });
    REQUIRE(norms::c0_gamma(z, gamma) == 0.0);
  }
  SECTION("constant field attains the weight maximum at the origin") {
    auto c = field_on(4.0, 40, [](double) { return -3.0; });
    REQUIRE(norms::c0_gamma(c, gamma) == Approx(3.0));
  }
  SECTION("field matching the inverse weight gives exactly 1") {
    auto u = field_on(6.0, 48, [](double x) { return std::pow(1.0 + x * x, 0.1); });
    REQUIRE(norms::c0_gamma(u, gamma) == Approx(1.0).epsilon(1e-12));
  }
  SECTION("empty and complex fields are rejected") {
    spectral::PhysicalSamples empty;
    empty.real_valued = true;
    REQUIRE_THROWS(norms::c0_gamma(empty, gamma));
    spectral::PhysicalSamples cx{{0.0}, {Complex(0, 1)}, false};
    REQUIRE_THROWS(norms::c0_gamma(cx, gamma));
  }
}

TEST_CASE("curly_c0_gamma window norm") {
  SECTION("zero and constant fields") {
    auto z = field_on(4.0, 64, [](double) { return 0.0; });
    REQUIRE(norms::curly_c0_gamma(z, 0.3) == 0.0);
    auto c = field_on(4.0, 64, [](double) { return 1.0; });
    REQUIRE(norms::curly_c0_gamma(c, 0.3) == Approx(1.0));
  }

  SECTION("bump supported in [2,3] with peak 8, gamma = 1: best window is L = 3") {
    auto u = field_on(4.0, 400, [](double x) {
      if (x < 2.0 || x > 3.0) return 0.0;
      return 8.0 * (1.0 - std::abs(2.0 * (x - 2.5)));
    });
    // exhaustive hand oracle over L in {1,2,3,4}: max(0, 0, 8/3, 8/4) = 8/3
    REQUIRE(norms::curly_c0_gamma(u, 1.0) == Approx(8.0 / 3.0).epsilon(1e-9));
  }

  SECTION("window smaller than [-1,1] is rejected") {
    auto tiny = field_on(0.5, 8, [](double) { return 1.0; });
    REQUIRE_THROWS(norms::curly_c0_gamma(tiny, 0.3));
  }
}

TEST_CASE("space-time norm is the max over slices") {
  auto zero = field_on(4.0, 16, [](double) { return 0.0; });
  auto five = field_on(4.0, 16, [](double) { return 5.0; });

  norms::SpaceTimeSamples st;
  st.times = {0.0, 0.5, 1.0};
  st.fields = {zero, five, zero};
  REQUIRE(norms::c0_gamma_spacetime(st, 0.2) == Approx(5.0));

  norms::SpaceTimeSamples all_zero;
  all_zero.times = {0.0, 1.0};
  all_zero.fields = {zero, zero};
  REQUIRE(norms::c0_gamma_spacetime(all_zero, 0.2) == 0.0);

  norms::SpaceTimeSamples constant;
  constant.times = {0.0, 0.25, 0.75};
  constant.fields = {five, five, five};
  REQUIRE(norms::c0_gamma_spacetime(constant, 0.2) ==
          Approx(norms::c0_gamma(five, 0.2)));

  norms::SpaceTimeSamples bad;
  bad.times = {0.0, 0.0};
  bad.fields = {zero, zero};
  REQUIRE_THROWS(norms::c0_gamma_spacetime(bad, 0.2));
}

TEST_CASE("norm equivalence holds with the explicit constants") {
  // 2^{-gamma/2} curly <= c0 <= 2^{gamma} curly on random fields
  for (double gamma : {0.05, 0.1, 0.3}) {
    stochastic::NoiseStream rng(2024, static_cast<std::uint64_t>(gamma * 1000));
    for (int trial = 0; trial < 1000; ++trial) {
      const auto u = random_field(8.0, 64, rng);
      const double c0 = norms::c0_gamma(u, gamma);
      const double curly = norms::curly_c0_gamma(u, gamma);
      REQUIRE(c0 >= std::pow(2.0, -gamma / 2.0) * curly * (1.0 - 1e-12));
      REQUIRE(c0 <= std::pow(2.0, gamma) * curly * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("curly norm is almost invariant under x -> eps x") {
  // With 1/eps integer and the resampled field covering [-L/eps, L/eps],
  // eps^gamma curly(u) <= curly(u(eps .)) <= 2^gamma curly(u) holds exactly.
  const double gamma = 0.2;
  stochastic::NoiseStream rng(555, 1);
  for (double eps : {0.5, 0.25, 0.125}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto u = random_field(8.0, 64, rng);
      const auto v = rescaled(u, eps);
      const double cu = norms::curly_c0_gamma(u, gamma);
      const double cv = norms::curly_c0_gamma(v, gamma);
      REQUIRE(cv >= std::pow(eps, gamma) * cu * (1.0 - 1e-12));
      REQUIRE(cv <= std::pow(2.0, gamma) * cu * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("c0_gamma is monotone decreasing in gamma") {
  stochastic::NoiseStream rng(99, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_field(8.0, 64, rng);
    const double a = norms::c0_gamma(u, 0.05);
    const double b = norms::c0_gamma(u, 0.2);
    const double c = norms::c0_gamma(u, 0.45);
    REQUIRE(b <= a * (1.0 + 1e-12));
    REQUIRE(c <= b * (1.0 + 1e-12));
  }
}
