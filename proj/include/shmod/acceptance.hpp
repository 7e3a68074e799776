#pragma once
// The acceptance suite: twelve exponent- and identity-based checks run at
// fixed configurations and a fixed seed.  Each criterion returns a verdict
// with a one-line detail; the runner prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "shmod/experiments.hpp"
#include "shmod/kernel_norms.hpp"
#include "shmod/kernels.hpp"
#include "shmod/norms.hpp"
#include "shmod/rng.hpp"
#include "shmod/runners.hpp"

namespace shmod::acceptance {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr std::uint64_t kSeed = 20250810ull;

namespace detail {

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

inline kernels::KernelParams sweep_params(double eps) {
  return kernels::KernelParams(eps, 1.0, 0.5, 1.0, 1.0 / (eps * eps));
}

inline quadbounds::QuadResolution fine_resolution() {
  quadbounds::QuadResolution r;
  r.tau_panels = 120;
  r.k_subdiv = 10;
  r.gl_order = 12;
  r.target_rel = 0.005;
  r.max_refinements = 3;
  return r;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace detail

// 1. log-log slope of ||f||^2_{L2(H^gamma)} over eps in {0.2,0.1,0.05,0.025}
//    with gamma=0.01, delta=0.5, nu=1, T=1 lies in [0.85, 1.05]
inline CriterionResult l2_kernel_norm_scaling() {
  CriterionResult res;
  res.name = "l2-kernel-norm-scaling";
  std::vector<std::pair<double, double>> pairs;
  bool converged = true;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const auto p = detail::sweep_params(eps);
    const auto rep = quadbounds::l2_hgamma_sq(
        [&](double t, double k) { return kernels::error_kernel(t, k, p); }, 0.01,
        1.0, p, detail::fine_resolution());
    converged = converged && rep.est_rel_error <= 0.02;
    pairs.emplace_back(eps, rep.value);
  }
  const auto fit = quadbounds::fit_scaling(pairs);
  res.pass = converged && fit.slope >= 0.85 && fit.slope <= 1.05;
  res.detail = "slope=" + detail::num(fit.slope) + " window=[0.85,1.05]" +
               (converged ? "" : " quadrature-not-converged");
  return res;
}

// 2. same sweep: slope of ||f||^2_{K_gamma} in [0.70, 1.10]
inline CriterionResult kgamma_kernel_norm_scaling() {
  CriterionResult res;
  res.name = "kgamma-kernel-norm-scaling";
  std::vector<std::pair<double, double>> pairs;
  bool converged = true;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const auto p = detail::sweep_params(eps);
    const auto rep = quadbounds::kgamma_sq(
        [&](double t, double k) { return kernels::error_kernel(t, k, p); }, 0.01,
        1.0, p, cli::report_resolution());
    converged = converged && rep.converged;
    pairs.emplace_back(eps, rep.value);
  }
  const auto fit = quadbounds::fit_scaling(pairs);
  res.pass = converged && fit.slope >= 0.70 && fit.slope <= 1.10;
  res.detail = "slope=" + detail::num(fit.slope) + " window=[0.70,1.10]" +
               (converged ? "" : " quadrature-not-converged");
  return res;
}

// 3. slope of the S-supremum part of ||f||^2_{Linf_Q} is >= 0.45
inline CriterionResult linfq_first_sup_scaling() {
  CriterionResult res;
  res.name = "linfq-first-sup-scaling";
  std::vector<std::pair<double, double>> pairs;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const auto p = detail::sweep_params(eps);
    const auto rep = quadbounds::linf_q_sq(
        [&](double t, double k) { return kernels::error_kernel(t, k, p); },
        [&](double k) { return kernels::covariance_symbol(k, p); }, 0.01, 1.0, p,
        cli::report_resolution());
    pairs.emplace_back(eps, rep.first_sup);
  }
  const auto fit = quadbounds::fit_scaling(pairs);
  res.pass = fit.slope >= 0.45;
  res.detail = "slope=" + detail::num(fit.slope) + " threshold=0.45";
  return res;
}

// 4. exact pointwise kernel identities
inline CriterionResult kernel_pointwise_identities() {
  CriterionResult res;
  res.name = "kernel-pointwise-identities";
  int checked = 0, violations = 0;
  for (double eps : {0.2, 0.1}) {
    for (double nu : {-1.0, 0.0, 1.0}) {
      const auto p = kernels::KernelParams(eps, nu, 0.5, 1.0, 1.0 / (eps * eps));
      const double edge = -1.0 / eps;
      for (double tau : {0.0, 1e-3, 0.1, 1.0, 5.0}) {
        ++checked;
        if (kernels::error_kernel(tau, 0.0, p) != 0.0) ++violations;
      }
      for (double K : {edge, edge + 0.5, -1.0, 0.0, 2.0, 30.0}) {
        ++checked;
        if (kernels::error_kernel(0.0, K, p) != 0.0) ++violations;
        ++checked;
        if (kernels::ic_error_kernel(0.0, K, p) != 0.0) ++violations;
      }
      for (double K : {edge - 1e-9, edge - 2.0, -50.0}) {
        ++checked;
        if (kernels::error_kernel(0.0, K, p) != -1.0) ++violations;
      }
      for (double tau : {1e-3, 0.3, 1.0})
        for (double K = edge + 1e-6; K <= 40.0; K += 0.7) {
          ++checked;
          if (kernels::ic_error_kernel(tau, K, p) !=
              kernels::error_kernel(tau, K, p))
            ++violations;
        }
    }
  }
  res.pass = violations == 0;
  res.detail = std::to_string(checked) + " exact checks, " +
               std::to_string(violations) + " violations";
  return res;
}

// 5. variance identity of the fast-scale stochastic convolution at t = 1
inline CriterionResult variance_identity() {
  CriterionResult res;
  res.name = "variance-identity";
  experiments::ExperimentConfig cfg;
  cfg.epsilon_sweep = {0.1};
  cfg.n_modes = 256;
  cfg.root_seed = kSeed;
  const auto v = experiments::run_variance_check(cfg, 1.0, 4096);
  res.pass = v.ok;
  res.detail = "empirical=" + detail::num(v.empirical) + " oracle=" +
               detail::num(v.oracle) + " corr=" + detail::num(v.truncation_correction) +
               " z=" + detail::num(v.z) + " (|z|<=3)";
  return res;
}

// 6. per-mode agreement of the two evolution routes for a modulated
//    Gaussian-bump initial condition, relative 1e-10 at T in {0.1, 1}
inline CriterionResult ic_rescaling_identity() {
  CriterionResult res;
  res.name = "ic-rescaling-identity";
  const double eps = 0.1;
  const auto p = kernels::KernelParams(eps, 1.0, 0.5, 1.0, 1.0 / (eps * eps));
  experiments::ExperimentConfig cfg;
  const auto grid = cfg.grid_for(eps);
  const auto bump = experiments::detail::gaussian_bump_coeffs(grid);
  double worst = 0.0;
  int compared = 0;
  for (double T : {0.1, 1.0}) {
    // field scale for the dust floor: modes below 1e-14 of the largest mode
    // are beneath double-precision resolution of the field itself
    std::vector<double> r1(bump.size()), r2(bump.size());
    double scale = 0.0;
    for (std::size_t j = 0; j < bump.size(); ++j) {
      const double K = grid.modes[j];
      r1[j] = kernels::sh_symbol(T / (eps * eps), 1.0 + eps * K, p) * bump[j].real();
      r2[j] = (kernels::amplitude_symbol(T, K, p.nu) +
               kernels::ic_error_kernel(T, K, p)) *
              bump[j].real();
      scale = std::max({scale, std::abs(r1[j]), std::abs(r2[j])});
    }
    for (std::size_t j = 0; j < bump.size(); ++j) {
      const double mag = std::max(std::abs(r1[j]), std::abs(r2[j]));
      if (mag < 1e-14 * scale) continue;
      ++compared;
      worst = std::max(worst, std::abs(r1[j] - r2[j]) / mag);
    }
  }
  res.pass = worst <= 1e-10;
  res.detail = "worst rel diff=" + detail::num(worst) + " over " +
               std::to_string(compared) + " modes (tol 1e-10)";
  return res;
}

// 7. norm equivalence with the explicit constants, zero violations
inline CriterionResult norm_equivalence() {
  CriterionResult res;
  res.name = "norm-equivalence";
  int violations = 0, total = 0;
  for (double gamma : {0.05, 0.1, 0.3}) {
    stochastic::NoiseStream rng(kSeed, static_cast<std::uint64_t>(gamma * 1e4));
    for (int trial = 0; trial < 1000; ++trial) {
      spectral::PhysicalSamples u;
      const int n_half = 64;
      for (int i = -n_half; i <= n_half; ++i) {
        u.points.push_back(static_cast<double>(i) * 8.0 / n_half);
        u.values.emplace_back(std::tanh(rng.next_complex_normal().real()), 0.0);
      }
      u.real_valued = true;
      const double c0 = norms::c0_gamma(u, gamma);
      const double curly = norms::curly_c0_gamma(u, gamma);
      ++total;
      if (!(c0 >= std::pow(2.0, -gamma / 2.0) * curly * (1.0 - 1e-12) &&
            c0 <= std::pow(2.0, gamma) * curly * (1.0 + 1e-12)))
        ++violations;
    }
  }
  res.pass = violations == 0;
  res.detail = std::to_string(total) + " random fields x {0.05,0.1,0.3}, " +
               std::to_string(violations) + " violations";
  return res;
}

// 8. coupled convolution error across eps in {0.2,0.1,0.05}: medians strictly
//    decrease with slope >= 0.35, and the measured/quadrature ratio varies by
//    less than a factor 3
inline CriterionResult convolution_error_consistency() {
  CriterionResult res;
  res.name = "convolution-error-consistency";
  experiments::ExperimentConfig cfg;
  cfg.epsilon_sweep = {0.2, 0.1, 0.05};
  cfg.gamma = 0.05;
  cfg.n_replicas = 64;
  cfg.n_modes = 256;
  cfg.n_snapshots = 32;
  cfg.L_max = 8.0;
  cfg.root_seed = kSeed;
  const auto r = experiments::run_convolution_error(cfg);
  bool decreasing = true;
  double ratio_lo = r.rows.front().ratio, ratio_hi = ratio_lo;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (i + 1 < r.rows.size())
      decreasing = decreasing && r.rows[i].median_error > r.rows[i + 1].median_error;
    ratio_lo = std::min(ratio_lo, r.rows[i].ratio);
    ratio_hi = std::max(ratio_hi, r.rows[i].ratio);
  }
  const double spread = ratio_hi / ratio_lo;
  res.pass = decreasing && r.fit.slope >= 0.35 && spread < 3.0;
  res.detail = std::string("decreasing=") + (decreasing ? "yes" : "no") +
               " slope=" + detail::num(r.fit.slope) +
               " (>=0.35) ratio-spread=" + detail::num(spread) + " (<3)";
  return res;
}

// 9. full approximation: total error minus the deterministic defect decreases
//    with fitted slope >= 0.15
inline CriterionResult full_approximation_scaling() {
  CriterionResult res;
  res.name = "full-approximation-scaling";
  experiments::ExperimentConfig cfg;
  cfg.epsilon_sweep = {0.2, 0.1, 0.05};
  cfg.gamma = 0.05;
  cfg.n_replicas = 64;
  cfg.n_modes = 256;
  cfg.n_snapshots = 32;
  cfg.L_max = 8.0;
  cfg.root_seed = kSeed;
  const auto r =
      experiments::run_full_approximation(cfg, experiments::InitialConditionSpec{});
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < r.rows.size(); ++i)
    decreasing = decreasing && (r.rows[i].total_error - r.rows[i].e_det) >
                                   (r.rows[i + 1].total_error - r.rows[i + 1].e_det);
  res.pass = decreasing && r.fit.slope >= 0.15;
  res.detail = std::string("decreasing=") + (decreasing ? "yes" : "no") +
               " slope=" + detail::num(r.fit.slope) + " (>=0.15)";
  return res;
}

// 10. q(k) <= min(t_eps eps^2, 1/(8k^2)) exactly on a 1e4-point log lattice,
//     and the stationary sampler matches q within 3 SE at 5 probe lags
inline CriterionResult q_bound_and_sampler() {
  CriterionResult res;
  res.name = "q-bound-and-sampler";
  const double eps = 0.1;
  const auto p = kernels::KernelParams(eps, 0.0, 0.5, 1.0, 1.0 / (eps * eps));
  const double a = p.t_eps * eps * eps;
  int bound_violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double k = std::pow(10.0, -4.0 + 8.0 * i / 9999.0);
    const double q = kernels::covariance_symbol(k, p);
    if (!(q <= a && q <= 1.0 / (8.0 * k * k))) ++bound_violations;
  }

  experiments::ExperimentConfig cfg;
  const auto grid = cfg.grid_for(eps);
  auto q = [&](double k) { return kernels::covariance_symbol(k, p); };
  const double w = grid.delta_k / (2.0 * std::numbers::pi);
  const std::vector<double> lags{0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::complex<double>> target(lags.size(), {0.0, 0.0});
  for (double K : grid.modes)
    for (std::size_t li = 0; li < lags.size(); ++li)
      target[li] += q(K) * w * std::polar(1.0, K * lags[li]);

  const std::size_t n = 10'000;
  std::vector<std::complex<double>> acc(lags.size(), {0.0, 0.0});
  std::vector<double> acc_sq(lags.size(), 0.0);
  for (std::size_t rep = 0; rep < n; ++rep) {
    stochastic::NoiseStream s(kSeed ^ 0x9a4e2ULL, rep);
    const auto st = stochastic::sample_stationary_gaussian(q, grid, s);
    std::complex<double> a0(0, 0);
    std::vector<std::complex<double>> al(lags.size(), {0.0, 0.0});
    for (std::size_t j = 0; j < st.coeffs.size(); ++j) {
      a0 += st.coeffs[j];
      for (std::size_t li = 1; li < lags.size(); ++li)
        al[li] += st.coeffs[j] * std::polar(1.0, grid.modes[j] * lags[li]);
    }
    al[0] = a0;
    for (std::size_t li = 0; li < lags.size(); ++li) {
      const auto prod = al[li] * std::conj(a0);
      acc[li] += prod;
      acc_sq[li] += std::norm(prod);
    }
  }
  double worst_z = 0.0;
  for (std::size_t li = 0; li < lags.size(); ++li) {
    const auto mean = acc[li] / static_cast<double>(n);
    const double se = std::sqrt(
        std::max(acc_sq[li] / static_cast<double>(n) - std::norm(mean), 0.0) /
        static_cast<double>(n));
    worst_z = std::max(worst_z, std::abs(mean - target[li]) / (se + 1e-300));
  }
  res.pass = bound_violations == 0 && worst_z <= 3.0;
  res.detail = "bound violations=" + std::to_string(bound_violations) +
               "/10000, sampler worst |z|=" + detail::num(worst_z) + " (<=3)";
  return res;
}

// 11. window sup growth: fitted exponent <= gamma + 0.05 and the
//     sup/sqrt(log L) sequence varies by < 25% over the top three windows
inline CriterionResult l_probe_window_growth() {
  CriterionResult res;
  res.name = "l-probe-window-growth";
  experiments::ExperimentConfig cfg;
  cfg.epsilon_sweep = {0.1};
  cfg.gamma = 0.1;  // threshold parameter of the criterion
  cfg.n_modes = 256;
  cfg.root_seed = kSeed;
  const auto r = experiments::run_l_probe(cfg, {4.0, 8.0, 16.0, 32.0}, 512);
  res.pass = r.fit.slope <= cfg.gamma + 0.05 && r.top3_ratio_spread < 0.25;
  res.detail = "slope=" + detail::num(r.fit.slope) + " (<=" +
               detail::num(cfg.gamma + 0.05) +
               ") spread=" + detail::num(r.top3_ratio_spread) + " (<0.25)";
  return res;
}

// 12. every experiment subcommand re-run with identical config and seed
//     produces byte-identical CSV output
inline CriterionResult csv_determinism() {
  CriterionResult res;
  res.name = "csv-determinism";
  experiments::ExperimentConfig cfg;
  cfg.epsilon_sweep = {0.2, 0.1, 0.05};
  cfg.n_replicas = 4;
  cfg.n_modes = 64;
  cfg.n_snapshots = 8;
  cfg.L_max = 4.0;
  cfg.root_seed = kSeed;
  const auto base = std::filesystem::temp_directory_path() / "shmod-determinism";
  std::error_code ec;
  std::filesystem::remove_all(base, ec);
  int mismatches = 0;
  std::string mismatch_names;
  for (const auto& name : cli::experiment_subcommands()) {
    const auto dir_a = base / (name + "-a");
    const auto dir_b = base / (name + "-b");
    std::filesystem::create_directories(dir_a);
    std::filesystem::create_directories(dir_b);
    cli::run_experiment_subcommand(name, cfg, dir_a);
    cli::run_experiment_subcommand(name, cfg, dir_b);
    const auto csv_a = detail::read_file(dir_a / (name + ".csv"));
    const auto csv_b = detail::read_file(dir_b / (name + ".csv"));
    if (csv_a.empty() || csv_a != csv_b) {
      ++mismatches;
      mismatch_names += " " + name;
    }
  }
  std::filesystem::remove_all(base, ec);
  res.pass = mismatches == 0;
  res.detail = std::to_string(cli::experiment_subcommands().size()) +
               " subcommands re-run twice; mismatches=" +
               std::to_string(mismatches) + mismatch_names;
  return res;
}

inline std::vector<CriterionResult> run_all() {
  using Fn = std::function<CriterionResult()>;
  const std::vector<Fn> criteria{l2_kernel_norm_scaling,
                                 kgamma_kernel_norm_scaling,
                                 linfq_first_sup_scaling,
                                 kernel_pointwise_identities,
                                 variance_identity,
                                 ic_rescaling_identity,
                                 norm_equivalence,
                                 convolution_error_consistency,
                                 full_approximation_scaling,
                                 q_bound_and_sampler,
                                 l_probe_window_growth,
                                 csv_determinism};
  std::vector<CriterionResult> out;
  out.reserve(criteria.size());
  for (const auto& fn : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = fn();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace shmod::acceptance
