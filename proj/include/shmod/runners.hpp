#pragma once
// CSV/SVG-emitting runners for the experiment subcommands.  Every CSV starts
// with a provenance block (artifact version, experiment description, config
// hash, seed); fits and verdicts appear as trailing comment lines.

#include <filesystem>
#include <string>
#include <vector>

#include "shmod/csv.hpp"
#include "shmod/experiments.hpp"
#include "shmod/kernel_norms.hpp"
#include "shmod/svg.hpp"

namespace shmod::cli {

inline quadbounds::QuadResolution report_resolution() {
  quadbounds::QuadResolution r;
  r.tau_panels = 48;
  r.k_subdiv = 5;
  r.target_rel = 0.02;
  r.max_refinements = 3;
  return r;
}

inline int run_kernel_norms(const experiments::ExperimentConfig& cfg,
                            const std::filesystem::path& dir) {
  io::CsvWriter csv(dir / "kernel-norms.csv");
  csv.provenance("epsilon-scaling of the kernel-norm functionals", cfg.hash(),
                 cfg.root_seed);
  csv.columns({"epsilon", "l2_hgamma_sq", "l2_est_rel_err", "l2_converged",
               "kgamma_sq", "kgamma_first_sup", "kgamma_second_sup",
               "kgamma_est_rel_err", "kgamma_converged", "linfq_sq",
               "linfq_first_sup", "linfq_second_sup", "linfq_est_rel_err",
               "linfq_converged"});
  std::vector<std::pair<double, double>> l2p, kgp, lqp;
  io::ChartSeries s_l2{"l2_hgamma_sq", {}}, s_kg{"kgamma_sq", {}},
      s_lq{"linfq_first_sup", {}};
  const auto res = report_resolution();
  for (double eps : cfg.epsilon_sweep) {
    const auto p = cfg.params_for(eps);
    auto f = [&](double tau, double k) { return kernels::error_kernel(tau, k, p); };
    auto q = [&](double k) { return kernels::covariance_symbol(k, p); };
    const auto l2 = quadbounds::l2_hgamma_sq(f, cfg.gamma, cfg.T_slow, p, res);
    const auto kg = quadbounds::kgamma_sq(f, cfg.gamma, cfg.T_slow, p, res);
    const auto lq = quadbounds::linf_q_sq(f, q, std::min(cfg.gamma, 0.2499),
                                          cfg.T_slow, p, res);
    csv.row({io::CsvWriter::num(eps), io::CsvWriter::num(l2.value),
             io::CsvWriter::num(l2.est_rel_error), l2.converged ? "1" : "0",
             io::CsvWriter::num(kg.value), io::CsvWriter::num(kg.first_sup),
             io::CsvWriter::num(kg.second_sup),
             io::CsvWriter::num(kg.est_rel_error), kg.converged ? "1" : "0",
             io::CsvWriter::num(lq.value), io::CsvWriter::num(lq.first_sup),
             io::CsvWriter::num(lq.second_sup),
             io::CsvWriter::num(lq.est_rel_error), lq.converged ? "1" : "0"});
    l2p.emplace_back(eps, l2.value);
    kgp.emplace_back(eps, kg.value);
    lqp.emplace_back(eps, lq.first_sup);
    s_l2.points.emplace_back(eps, l2.value);
    s_kg.points.emplace_back(eps, kg.value);
    s_lq.points.emplace_back(eps, lq.first_sup);
  }
  if (l2p.size() >= 3) {
    csv.comment("fit l2_hgamma_sq: slope=" +
                io::CsvWriter::num(quadbounds::fit_scaling(l2p).slope));
    csv.comment("fit kgamma_sq: slope=" +
                io::CsvWriter::num(quadbounds::fit_scaling(kgp).slope));
    csv.comment("fit linfq_first_sup: slope=" +
                io::CsvWriter::num(quadbounds::fit_scaling(lqp).slope));
  }
  io::write_loglog_chart(dir / "kernel-norms.svg", "kernel norms vs epsilon",
                         "epsilon", "norm value", {s_l2, s_kg, s_lq});
  return 0;
}

inline int run_convolution_error_cmd(const experiments::ExperimentConfig& cfg,
                                     const std::filesystem::path& dir) {
  const auto res = experiments::run_convolution_error(cfg);
  io::CsvWriter csv(dir / "convolution-error.csv");
  csv.provenance("coupled stochastic-convolution approximation error",
                 res.config_hash, res.root_seed);
  csv.columns({"epsilon", "median_error", "mean_error", "q90_error",
               "exceedance_fraction", "exceedance_bound", "l2_hgamma_sq", "kgamma_sq",
               "ratio"});
  io::ChartSeries med{"median error", {}}, pred{"L^g sqrt(l2+kg)", {}};
  for (const auto& r : res.rows) {
    csv.row({io::CsvWriter::num(r.epsilon), io::CsvWriter::num(r.median_error),
             io::CsvWriter::num(r.mean_error), io::CsvWriter::num(r.q90_error),
             io::CsvWriter::num(r.exceedance_fraction),
             io::CsvWriter::num(r.exceedance_bound),
             io::CsvWriter::num(r.l2_hgamma_sq), io::CsvWriter::num(r.kgamma_sq),
             io::CsvWriter::num(r.ratio)});
    med.points.emplace_back(r.epsilon, r.median_error);
    pred.points.emplace_back(
        r.epsilon, std::pow(cfg.L_max, cfg.gamma) *
                       std::sqrt(r.l2_hgamma_sq + r.kgamma_sq));
  }
  csv.comment("fit median_error: slope=" + io::CsvWriter::num(res.fit.slope) +
              " r2=" + io::CsvWriter::num(res.fit.r_squared));
  io::write_loglog_chart(dir / "convolution-error.svg",
                         "convolution approximation error vs epsilon", "epsilon",
                         "error", {med, pred});
  return 0;
}

inline int run_full_approximation_cmd(const experiments::ExperimentConfig& cfg,
                                      const std::filesystem::path& dir) {
  const auto res =
      experiments::run_full_approximation(cfg, experiments::InitialConditionSpec{});
  io::CsvWriter csv(dir / "full-approximation.csv");
  csv.provenance("full linear approximation with Gaussian initial data",
                 res.config_hash, res.root_seed);
  csv.columns({"epsilon", "e_det", "stoch_median", "e_term_bound", "total_error",
               "total_minus_e_det"});
  io::ChartSeries tot{"total - e_det", {}}, det{"e_det", {}};
  for (const auto& r : res.rows) {
    csv.row({io::CsvWriter::num(r.epsilon), io::CsvWriter::num(r.e_det),
             io::CsvWriter::num(r.stoch_median),
             io::CsvWriter::num(r.e_term_bound), io::CsvWriter::num(r.total_error),
             io::CsvWriter::num(r.total_error - r.e_det)});
    tot.points.emplace_back(r.epsilon, r.total_error - r.e_det);
    det.points.emplace_back(r.epsilon, r.e_det);
  }
  csv.comment("fit total_minus_e_det: slope=" + io::CsvWriter::num(res.fit.slope) +
              " r2=" + io::CsvWriter::num(res.fit.r_squared));
  io::write_loglog_chart(dir / "full-approximation.svg",
                         "full approximation error vs epsilon", "epsilon", "error",
                         {tot, det});
  return 0;
}

inline int run_attractivity_cmd(const experiments::ExperimentConfig& cfg,
                                const std::filesystem::path& dir) {
  const auto res = experiments::run_attractivity(cfg);
  io::CsvWriter csv(dir / "attractivity.csv");
  csv.provenance("attractivity: deterministic defect and amplitude covariance law",
                 res.config_hash, res.root_seed);
  csv.comment("covariance check replicas: " + std::to_string(res.cov_replicas));
  csv.columns({"epsilon", "e_det", "cov_max_abs_z", "cov_ok", "q0_empirical",
               "q0_target"});
  io::ChartSeries det{"e_det", {}};
  bool all_ok = true;
  for (const auto& r : res.rows) {
    csv.row({io::CsvWriter::num(r.epsilon), io::CsvWriter::num(r.e_det),
             io::CsvWriter::num(r.cov_max_abs_z), r.cov_ok ? "1" : "0",
             io::CsvWriter::num(r.q0_empirical), io::CsvWriter::num(r.q0_target)});
    det.points.emplace_back(r.epsilon, r.e_det);
    all_ok = all_ok && r.cov_ok;
  }
  csv.comment(std::string("covariance law within 3 SE at all probes: ") +
              (all_ok ? "yes" : "no"));
  io::write_loglog_chart(dir / "attractivity.svg",
                         "deterministic defect vs epsilon", "epsilon", "e_det",
                         {det});
  return 0;
}

inline int run_l_probe_cmd(const experiments::ExperimentConfig& cfg,
                           const std::filesystem::path& dir) {
  const std::vector<double> windows{4.0, 8.0, 16.0, 32.0};
  const auto res = experiments::run_l_probe(cfg, windows, cfg.n_replicas);
  io::CsvWriter csv(dir / "l-probe.csv");
  csv.provenance("window growth of the defect sup-norm", res.config_hash,
                 res.root_seed);
  csv.columns({"window", "mean_sup_sq", "rms_sup", "sup_over_sqrt_log"});
  io::ChartSeries rms{"rms sup", {}};
  for (const auto& r : res.rows) {
    csv.row({io::CsvWriter::num(r.window), io::CsvWriter::num(r.mean_sup_sq),
             io::CsvWriter::num(r.rms_sup),
             io::CsvWriter::num(r.sup_over_sqrt_log)});
    rms.points.emplace_back(r.window, r.rms_sup);
  }
  csv.comment("fit rms_sup vs window: slope=" + io::CsvWriter::num(res.fit.slope));
  csv.comment("sup/sqrt(log) spread over top three windows: " +
              io::CsvWriter::num(res.top3_ratio_spread));
  io::write_loglog_chart(dir / "l-probe.svg", "window sup growth", "window L",
                         "rms sup", {rms});
  return 0;
}

inline int run_semigroup_probe_cmd(const experiments::ExperimentConfig& cfg,
                                   const std::filesystem::path& dir) {
  const std::vector<double> ts{0.0, 0.1, 1.0, 10.0, 100.0};
  const auto res = experiments::run_semigroup_probe(cfg, ts);
  io::CsvWriter csv(dir / "semigroup-probe.csv");
  csv.provenance("weighted-norm semigroup bound probe", res.config_hash,
                 res.root_seed);
  csv.columns({"t", "max_ratio"});
  io::ChartSeries ratio{"max ratio", {}};
  for (const auto& r : res.rows) {
    csv.row({io::CsvWriter::num(r.t), io::CsvWriter::num(r.max_ratio)});
    ratio.points.emplace_back(r.t, r.max_ratio);
  }
  csv.comment(std::string("growth flag (ratio rose >20% between the two largest t): ") +
              (res.growth_flag ? "yes" : "no"));
  io::write_loglog_chart(dir / "semigroup-probe.svg", "semigroup bound probe", "t",
                         "ratio", {ratio});
  return 0;
}

inline int run_variance_check_cmd(const experiments::ExperimentConfig& cfg,
                                  const std::filesystem::path& dir) {
  const auto res = experiments::run_variance_check(cfg);
  io::CsvWriter csv(dir / "variance-check.csv");
  csv.provenance(
      "pointwise variance identity of the fast-scale stochastic convolution",
      res.config_hash, res.root_seed);
  csv.comment("driftless run (nu pinned to 0 to match the oracle symbol)");
  csv.columns({"t_fast", "epsilon", "replicas", "empirical_var", "oracle",
               "truncation_correction", "se", "z", "ok"});
  csv.row({io::CsvWriter::num(res.t_fast), io::CsvWriter::num(res.epsilon),
           io::CsvWriter::num(res.replicas), io::CsvWriter::num(res.empirical),
           io::CsvWriter::num(res.oracle),
           io::CsvWriter::num(res.truncation_correction), io::CsvWriter::num(res.se),
           io::CsvWriter::num(res.z), res.ok ? "1" : "0"});
  return res.ok ? 0 : 2;
}

inline int run_experiment_subcommand(const std::string& name,
                                     const experiments::ExperimentConfig& cfg,
                                     const std::filesystem::path& dir) {
  if (name == "kernel-norms") return run_kernel_norms(cfg, dir);
  if (name == "convolution-error") return run_convolution_error_cmd(cfg, dir);
  if (name == "full-approximation") return run_full_approximation_cmd(cfg, dir);
  if (name == "attractivity") return run_attractivity_cmd(cfg, dir);
  if (name == "l-probe") return run_l_probe_cmd(cfg, dir);
  if (name == "semigroup-probe") return run_semigroup_probe_cmd(cfg, dir);
  if (name == "variance-check") return run_variance_check_cmd(cfg, dir);
  return 64;
}

inline const std::vector<std::string>& experiment_subcommands() {
  static const std::vector<std::string> names{
      "kernel-norms",  "convolution-error", "full-approximation", "attractivity",
      "l-probe",       "semigroup-probe",   "variance-check"};
  return names;
}

}  // namespace shmod::cli
