#pragma once
// Discrete spectral representation of periodic fields on the slow spatial
// scale: wavenumber grids, per-mode complex states, synthesis to physical
// sample points, Fourier-multiplier application, and reconstruction of the
// fast-scale modulated field 2 Re(A(eps x) e^{ix}).
//
// Convention used everywhere in this project: a field is the plain mode sum
//   u(X) = sum_j coeff_j exp(i K_j X),   K_j = j * delta_k,
// i.e. continuum Fourier integrals are discretised as Riemann sums with
// weight delta_k / (2 pi) folded into the coefficients.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace shmod::spectral {

using Complex = std::complex<double>;

// Symmetric grid of slow-scale wavenumbers K_j = j * delta_k for
// j = -n_modes/2 .. n_modes/2 - 1.  Fields built on it are periodic with
// period 2 pi / delta_k.
struct WavenumberGrid {
  double delta_k = 0.0;
  int n_modes = 0;
  std::vector<double> modes;

  double period() const { return 2.0 * std::numbers::pi / delta_k; }
};

inline WavenumberGrid make_grid(int n_modes, double delta_k) {
  if (n_modes < 2 || n_modes % 2 != 0)
    throw std::invalid_argument("make_grid: n_modes must be even and >= 2");
  if (!(delta_k > 0.0) || !std::isfinite(delta_k))
    throw std::invalid_argument("make_grid: delta_k must be positive");
  WavenumberGrid g;
  g.delta_k = delta_k;
  g.n_modes = n_modes;
  g.modes.resize(static_cast<std::size_t>(n_modes));
  for (int j = 0; j < n_modes; ++j)
    g.modes[static_cast<std::size_t>(j)] = (j - n_modes / 2) * delta_k;
  return g;
}

// Per-mode complex amplitudes of a spectral field at one time instant.
// When real_field is set the coefficients must satisfy conjugate symmetry
// coeff(-K) = conj(coeff(K)) so the synthesised field is real.
struct ComplexModeState {
  WavenumberGrid grid;
  std::vector<Complex> coeffs;
  bool real_field = false;
};

inline double max_conjugate_asymmetry(const WavenumberGrid& g,
                                      const std::vector<Complex>& c) {
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  const int half = g.n_modes / 2;
  double worst = 0.0;
  // j and -j both on the grid for |j| < n/2; the j = -n/2 endpoint is
  // unpaired under the one-sided grid convention.
  for (int j = 1; j < half; ++j) {
    const Complex a = c[static_cast<std::size_t>(half + j)];
    const Complex b = c[static_cast<std::size_t>(half - j)];
    worst = std::max(worst, std::abs(b - std::conj(a)));
  }
  worst = std::max(worst, std::abs(c[static_cast<std::size_t>(half)].imag()));
  return worst / scale;
}

inline ComplexModeState make_state(WavenumberGrid grid,
                                   std::vector<Complex> coeffs,
                                   bool real_field = false) {
  if (coeffs.size() != static_cast<std::size_t>(grid.n_modes))
    throw std::invalid_argument("make_state: coeffs length must equal n_modes");
  if (real_field && max_conjugate_asymmetry(grid, coeffs) > 1e-12)
    throw std::invalid_argument(
        "make_state: real-flagged state violates conjugate symmetry");
  return ComplexModeState{std::move(grid), std::move(coeffs), real_field};
}

// Sampled field on a strictly increasing set of physical positions.
struct PhysicalSamples {
  std::vector<double> points;
  std::vector<Complex> values;
  bool real_valued = false;

  double real_at(std::size_t i) const { return values[i].real(); }
};

inline void validate_samples(const PhysicalSamples& s) {
  if (s.points.size() != s.values.size())
    throw std::invalid_argument("PhysicalSamples: points/values size mismatch");
  for (std::size_t i = 0; i + 1 < s.points.size(); ++i)
    if (!(s.points[i] < s.points[i + 1]))
      throw std::invalid_argument(
          "PhysicalSamples: points must be strictly increasing");
  for (const auto& v : s.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("PhysicalSamples: non-finite value");
}

namespace detail {

// Radix-2 in-place transform with sign +1 (unnormalised inverse DFT).
inline void fft_pow2(std::vector<Complex>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

inline bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// True when points are one uniform period of the grid, so the mode sum
// collapses to a plain DFT.
inline bool matches_period_grid(const WavenumberGrid& g,
                                const std::vector<double>& pts) {
  const std::size_t n = static_cast<std::size_t>(g.n_modes);
  if (pts.size() != n || !is_pow2(n)) return false;
  const double h = g.period() / static_cast<double>(g.n_modes);
  for (std::size_t m = 1; m < n; ++m) {
    const double expect = pts[0] + h * static_cast<double>(m);
    if (std::abs(pts[m] - expect) > 1e-9 * g.period()) return false;
  }
  return true;
}

inline std::vector<Complex> synthesize_direct(const ComplexModeState& s,
                                              const std::vector<double>& pts) {
  std::vector<Complex> out(pts.size(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < s.coeffs.size(); ++j)
      acc += s.coeffs[j] * std::polar(1.0, s.grid.modes[j] * pts[i]);
    out[i] = acc;
  }
  return out;
}

inline std::vector<Complex> synthesize_fft(const ComplexModeState& s,
                                           const std::vector<double>& pts) {
  const int n = s.grid.n_modes;
  const double x0 = pts[0];
  std::vector<Complex> b(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  for (int j = 0; j < n; ++j) {
    const int jj = j - n / 2;
    const int q = (jj % n + n) % n;
    b[static_cast<std::size_t>(q)] =
        s.coeffs[static_cast<std::size_t>(j)] *
        std::polar(1.0, s.grid.modes[static_cast<std::size_t>(j)] * x0);
  }
  fft_pow2(b);
  return b;
}

}  // namespace detail

// Evaluates u(x_i) = sum_j coeff_j exp(i K_j x_i).  Arbitrary point sets use
// direct summation; one uniform period of the grid takes the transform path.
// Real-flagged states must come out real to 1e-10 relative; the imaginary
// residue is then dropped.
inline PhysicalSamples synthesize(const ComplexModeState& state,
                                  const std::vector<double>& points) {
  if (points.empty())
    throw std::invalid_argument("synthesize: empty point set");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i] < points[i + 1]))
      throw std::invalid_argument("synthesize: points must be strictly increasing");

  PhysicalSamples out;
  out.points = points;
  out.values = detail::matches_period_grid(state.grid, points)
                   ? detail::synthesize_fft(state, points)
                   : detail::synthesize_direct(state, points);

  if (state.real_field) {
    double scale = 0.0, imag = 0.0;
    for (const auto& v : out.values) {
      scale = std::max(scale, std::abs(v));
      imag = std::max(imag, std::abs(v.imag()));
    }
    if (imag > 1e-10 * std::max(scale, 1e-300))
      throw std::runtime_error("synthesize: real-flagged state produced imaginary residue");
    for (auto& v : out.values) v = Complex(v.real(), 0.0);
    out.real_valued = true;
  }
  return out;
}

// coeff'(K) = m(K) coeff(K).  Rejects non-finite multiplier values, naming
// the offending mode.
template <class M>
ComplexModeState apply_multiplier(const ComplexModeState& state, M&& m) {
  ComplexModeState out;
  out.grid = state.grid;
  out.coeffs.resize(state.coeffs.size());
  for (std::size_t j = 0; j < state.coeffs.size(); ++j) {
    const Complex mv = Complex(m(state.grid.modes[j]));
    if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
      throw std::runtime_error("apply_multiplier: non-finite multiplier at K = " +
                               std::to_string(state.grid.modes[j]));
    out.coeffs[j] = mv * state.coeffs[j];
  }
  out.real_field =
      state.real_field && max_conjugate_asymmetry(out.grid, out.coeffs) <= 1e-12;
  return out;
}

// Fast-scale reconstruction u(x) = 2 Re(A(X) e^{ix}) with x = X / eps.
// The fast points are derived from the slow ones; they are never configured
// independently.
inline PhysicalSamples modulate_reconstruct(const PhysicalSamples& amplitude,
                                            double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("modulate_reconstruct: epsilon must be positive");
  validate_samples(amplitude);
  PhysicalSamples out;
  out.points.resize(amplitude.points.size());
  out.values.resize(amplitude.values.size());
  out.real_valued = true;
  for (std::size_t i = 0; i < amplitude.points.size(); ++i) {
    const double x = amplitude.points[i] / epsilon;
    out.points[i] = x;
    const Complex v = amplitude.values[i] * std::polar(1.0, x);
    out.values[i] = Complex(2.0 * v.real(), 0.0);
  }
  return out;
}

}  // namespace shmod::spectral
