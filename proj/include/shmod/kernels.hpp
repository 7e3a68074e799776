#pragma once
// Closed-form Fourier symbols and kernels:
//   sh_symbol          e^{-t (1-k^2)^2 + t eps^2 nu}, the fast-scale semigroup
//   band_symbol        e^{-tau (2+K eps)^2 K^2 + tau nu} on K >= -1/eps, else 0
//   amplitude_symbol   e^{-4 tau K^2 + tau nu}
//   error_kernel       band_symbol - amplitude_symbol (the coupling defect)
//   kernel_pieces      the four-piece bookkeeping split of the error kernel
//   ic_error_kernel    same defect without the support cutoff (initial data)
//   covariance_symbol  q(k) = (1 - e^{-8 k^2 t_eps eps^2}) / (8 k^2)
//
// Exponentials are guarded: once the exponent is past the double underflow
// range the symbol is exactly 0.

#include <cmath>
#include <stdexcept>

namespace shmod::kernels {

// Scalar parameter bundle shared by all kernel formulas.
struct KernelParams {
  double epsilon;  // scale separation, in (0,1)
  double nu;       // distance from threshold, |nu| <= 1
  double delta;    // band-split parameter, in (0,1)
  double T_slow;   // slow-time horizon, > 0
  double t_eps;    // attractivity time, > 0, O(eps^-2)

  KernelParams(double eps, double nu_, double delta_, double T, double te)
      : epsilon(eps), nu(nu_), delta(delta_), T_slow(T), t_eps(te) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw std::invalid_argument("KernelParams: epsilon out of range (0, 1)");
    if (!(std::abs(nu) <= 1.0))
      throw std::invalid_argument("KernelParams: |nu| must be <= 1");
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("KernelParams: delta out of range (0, 1)");
    if (!(T_slow > 0.0))
      throw std::invalid_argument("KernelParams: T_slow must be positive");
    if (!(t_eps > 0.0))
      throw std::invalid_argument("KernelParams: t_eps must be positive");
  }
};

namespace detail {
inline double guarded_exp(double arg) {
  return arg < -745.0 ? 0.0 : std::exp(arg);
}
inline void require_nonneg_time(double t, const char* who) {
  if (!(t >= 0.0)) throw std::invalid_argument(std::string(who) + ": negative time");
}
// e^{-tau (2 + K eps)^2 K^2 + tau nu} with no support restriction.
inline double band_core(double tau, double K, const KernelParams& p) {
  const double a = (2.0 + K * p.epsilon) * K;
  return guarded_exp(-tau * a * a + tau * p.nu);
}
}  // namespace detail

inline double sh_symbol(double t, double k, const KernelParams& p) {
  detail::require_nonneg_time(t, "sh_symbol");
  const double a = 1.0 - k * k;
  return detail::guarded_exp(-t * a * a + t * p.epsilon * p.epsilon * p.nu);
}

inline double band_symbol(double tau, double K, const KernelParams& p) {
  detail::require_nonneg_time(tau, "band_symbol");
  if (K < -1.0 / p.epsilon) return 0.0;
  return detail::band_core(tau, K, p);
}

inline double amplitude_symbol(double tau, double K, double nu) {
  detail::require_nonneg_time(tau, "amplitude_symbol");
  return detail::guarded_exp(-4.0 * tau * K * K + tau * nu);
}

// f(tau, K) = band_symbol - amplitude_symbol; left of the band support this
// reduces to -e^{tau nu} e^{-4 tau K^2}.
inline double error_kernel(double tau, double K, const KernelParams& p) {
  detail::require_nonneg_time(tau, "error_kernel");
  const double amp = amplitude_symbol(tau, K, p.nu);
  if (K < -1.0 / p.epsilon) return -amp;
  return detail::band_core(tau, K, p) - amp;
}

// Four-piece split of the error kernel used by the bound checks.  The pieces
// track |f| only up to the reflected tail (f_d at -K), so f_a+f_b+f_c+f_d is
// not an exact decomposition of f.
struct KernelPieces {
  double f_a, f_b, f_c, f_d;
};

inline KernelPieces kernel_pieces(double tau, double K, const KernelParams& p) {
  detail::require_nonneg_time(tau, "kernel_pieces");
  const double edge_band = p.delta / p.epsilon;
  const double edge_supp = 1.0 / p.epsilon;
  KernelPieces out{0.0, 0.0, 0.0, 0.0};
  if (K > edge_band) {
    out.f_a = detail::band_core(tau, K, p);
    out.f_d = -2.0 * amplitude_symbol(tau, K, p.nu);
  } else if (K > -edge_band) {
    out.f_c = detail::band_core(tau, K, p) - amplitude_symbol(tau, K, p.nu);
  } else if (K > -edge_supp) {
    out.f_b = detail::band_core(tau, K, p);
  }
  return out;
}

// Kernel of the initial-condition defect: the same defect as error_kernel,
// with no support cutoff.  Equal to error_kernel on (-1/eps, inf).
inline double ic_error_kernel(double T, double ell, const KernelParams& p) {
  detail::require_nonneg_time(T, "ic_error_kernel");
  return detail::band_core(T, ell, p) - amplitude_symbol(T, ell, p.nu);
}

// q(k) = (1 - e^{-8 k^2 t_eps eps^2}) / (8 k^2); the removable singularity at
// k = 0 is filled by a 3-term Taylor expansion to avoid cancellation.
inline double covariance_symbol(double k, const KernelParams& p) {
  const double a = p.t_eps * p.epsilon * p.epsilon;
  const double x = 8.0 * k * k * a;
  if (x < 1e-6) return a * (1.0 - x / 2.0 + x * x / 6.0);
  return -std::expm1(-x) / (8.0 * k * k);
}

}  // namespace shmod::kernels
