#pragma once
// Coupled exact Ornstein-Uhlenbeck propagation of the Swift-Hohenberg band
// process and the amplitude process under shared noise, stationary Gaussian
// initial-condition sampling, and the variance oracle for the fast-scale
// stochastic convolution.
//
// Each Fourier mode of a stochastic convolution is an OU process, so time
// stepping samples the exact joint Gaussian transition; the only
// discretisation errors are mode truncation and snapshot-grid sampling.
// Per-mode noise intensity sigma^2 = delta_k / (2 pi) encodes spatial white
// noise under the project Fourier convention.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "shmod/kernels.hpp"
#include "shmod/quadrature.hpp"
#include "shmod/rng.hpp"
#include "shmod/spectral.hpp"

namespace shmod::stochastic {

using Complex = std::complex<double>;

// Exact one-step transition of the coupled pair
//   d phi_sh  = -lambda_sh  phi_sh  dtau + sigma dB
//   d phi_amp = -lambda_amp phi_amp dtau + sigma dB    (same B)
struct OUJointStep {
  double decay_sh = 1.0, decay_amp = 1.0;  // e^{-lambda h}
  double var_sh = 0.0, var_amp = 0.0, cov = 0.0;
  double chol_l11 = 0.0, chol_l21 = 0.0, chol_l22 = 0.0;
  int clamped = 0;  // conditional variance clamped at 0 after round-off
};

namespace detail {
// (1 - e^{-x}) / x, series near 0; valid for negative x as well.
inline double phi1(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}
}  // namespace detail

inline OUJointStep joint_transition(double lambda_sh, double lambda_amp,
                                    double h, double noise_intensity) {
  if (!(h > 0.0)) throw std::invalid_argument("joint_transition: h must be positive");
  OUJointStep s;
  s.decay_sh = std::exp(-lambda_sh * h);
  s.decay_amp = std::exp(-lambda_amp * h);
  const double s2 = noise_intensity;
  s.var_sh = s2 * h * detail::phi1(2.0 * lambda_sh * h);
  s.var_amp = s2 * h * detail::phi1(2.0 * lambda_amp * h);
  s.cov = s2 * h * detail::phi1((lambda_sh + lambda_amp) * h);
  if (s.var_sh > 0.0) {
    s.chol_l11 = std::sqrt(s.var_sh);
    s.chol_l21 = s.cov / s.chol_l11;
    double d = s.var_amp - s.chol_l21 * s.chol_l21;
    if (d < 0.0) {
      d = 0.0;
      ++s.clamped;
    }
    s.chol_l22 = std::sqrt(d);
  } else {
    s.chol_l11 = 0.0;
    s.chol_l21 = 0.0;
    s.chol_l22 = std::sqrt(std::max(s.var_amp, 0.0));
  }
  return s;
}

// Joint per-mode states of the band process (discretised eps^{1/2} W under
// the rescaled operator) and the amplitude process, driven by shared noise.
// Both start at zero.
struct CoupledPath {
  spectral::WavenumberGrid grid;
  std::vector<Complex> sh_state, amp_state;
  double t_slow = 0.0;
};

inline CoupledPath make_coupled_path(const spectral::WavenumberGrid& grid) {
  CoupledPath p;
  p.grid = grid;
  p.sh_state.assign(static_cast<std::size_t>(grid.n_modes), Complex(0.0, 0.0));
  p.amp_state.assign(static_cast<std::size_t>(grid.n_modes), Complex(0.0, 0.0));
  return p;
}

inline double band_rate(double K, const kernels::KernelParams& p) {
  const double a = (2.0 + K * p.epsilon) * K;
  return a * a - p.nu;
}
inline double amplitude_rate(double K, const kernels::KernelParams& p) {
  return 4.0 * K * K - p.nu;
}

// One exact joint step of size h.  Modes left of the band support
// (K < -1/eps) evolve only the amplitude component; draw order per mode is
// fixed so trajectories replay bit-exactly.
inline void advance(CoupledPath& path, double h, const kernels::KernelParams& p,
                    NoiseStream& stream, double noise_scale = 1.0) {
  if (!(h > 0.0)) throw std::invalid_argument("advance: h must be positive");
  const double sigma2 = noise_scale * path.grid.delta_k / (2.0 * std::numbers::pi);
  const double support_edge = -1.0 / p.epsilon;
  for (std::size_t j = 0; j < path.grid.modes.size(); ++j) {
    const double K = path.grid.modes[j];
    const auto step =
        joint_transition(band_rate(K, p), amplitude_rate(K, p), h, sigma2);
    const Complex z1 = stream.next_complex_normal();
    const Complex z2 = stream.next_complex_normal();
    const Complex xi_sh = step.chol_l11 * z1;
    const Complex xi_amp = step.chol_l21 * z1 + step.chol_l22 * z2;
    if (K >= support_edge)
      path.sh_state[j] = step.decay_sh * path.sh_state[j] + xi_sh;
    path.amp_state[j] = step.decay_amp * path.amp_state[j] + xi_amp;
  }
  path.t_slow += h;
}

// Real fast-scale field 2 Re( sum_j c_j e^{i (1 + eps K_j) x} ) built from
// slow-scale mode coefficients.
inline spectral::PhysicalSamples reconstruct_modulated(
    const spectral::WavenumberGrid& grid, const std::vector<Complex>& coeffs,
    double epsilon, const std::vector<double>& fast_points) {
  spectral::PhysicalSamples out;
  out.points = fast_points;
  out.values.resize(fast_points.size());
  out.real_valued = true;
  for (std::size_t i = 0; i < fast_points.size(); ++i) {
    const double x = fast_points[i];
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      acc += coeffs[j] * std::polar(1.0, (1.0 + epsilon * grid.modes[j]) * x);
    out.values[i] = Complex(2.0 * acc.real(), 0.0);
  }
  return out;
}

// Snapshot of the coupling defect: 2 Re( (sh - amp)(eps x) e^{ix} ).
inline spectral::PhysicalSamples error_snapshot(
    const CoupledPath& path, double epsilon,
    const std::vector<double>& fast_points) {
  std::vector<Complex> diff(path.sh_state.size());
  for (std::size_t j = 0; j < diff.size(); ++j)
    diff[j] = path.sh_state[j] - path.amp_state[j];
  return reconstruct_modulated(path.grid, diff, epsilon, fast_points);
}

// Draw A ~ N(0, Q) with Fourier symbol q:
// coeff(K_j) = sqrt(q(K_j) delta_k / (2 pi)) z_j.
template <class Q>
spectral::ComplexModeState sample_stationary_gaussian(
    Q&& q, const spectral::WavenumberGrid& grid, NoiseStream& stream) {
  std::vector<Complex> coeffs(static_cast<std::size_t>(grid.n_modes));
  const double w = grid.delta_k / (2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double qv = q(grid.modes[j]);
    if (!(qv >= 0.0))
      throw std::invalid_argument("sample_stationary_gaussian: q must be >= 0");
    coeffs[j] = std::sqrt(qv * w) * stream.next_complex_normal();
  }
  return spectral::ComplexModeState{grid, std::move(coeffs), false};
}

// Pointwise variance of the fast-scale stochastic convolution:
//   (1 / 2 pi) int_0^t int_R e^{-2 s (1-k^2)^2} dk ds.
// The s -> 0 edge (inner integral grows like s^{-1/4}) is absorbed by the
// substitution s = w^4; panels refine until the relative tolerance is met.
inline double variance_oracle(double t, double rel_tol = 1e-6) {
  if (!(t > 0.0)) throw std::invalid_argument("variance_oracle: t must be positive");
  const auto& gl = quad::gl_rule(16);
  auto inner = [&](double s, int k_panels) {
    const double k_end = std::sqrt(1.0 + std::sqrt(350.0 / s));
    std::vector<double> edges{0.0, 1.0};
    for (int j = 1; j <= k_panels; ++j)
      edges.push_back(1.0 + (k_end - 1.0) * static_cast<double>(j) / k_panels);
    return 2.0 * quad::composite(gl, edges, [&](double k) {
             const double a = 1.0 - k * k;
             return kernels::detail::guarded_exp(-2.0 * s * a * a);
           });
  };
  double prev = 0.0;
  for (int level = 0; level < 8; ++level) {
    const int w_panels = 8 << level;
    const int k_panels = 8 << level;
    std::vector<double> w_edges(static_cast<std::size_t>(w_panels) + 1);
    const double w_end = std::pow(t, 0.25);
    for (int j = 0; j <= w_panels; ++j)
      w_edges[static_cast<std::size_t>(j)] =
          w_end * static_cast<double>(j) / w_panels;
    const double value = quad::composite(gl, w_edges, [&](double w) {
      const double s = w * w * w * w;
      return inner(s, k_panels) * 4.0 * w * w * w;
    });
    if (level > 0 && std::abs(value - prev) <= rel_tol * std::abs(value))
      return value / (2.0 * std::numbers::pi);
    prev = value;
  }
  throw std::runtime_error("variance_oracle: tolerance not met");
}

}  // namespace shmod::stochastic
