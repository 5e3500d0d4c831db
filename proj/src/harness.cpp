#include "genbounds/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "genbounds/fractal.hpp"
#include "genbounds/pacbayes.hpp"

namespace genbounds {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double estimate_path_dimension(const PointSet& path) {
  if (bounding_extent(path) == 0.0) return 0.0;
  try {
    return estimate_box_dimension(default_covering_curve(path)).gamma_hat;
  } catch (const std::runtime_error&) {
    return kNaN;
  }
}

double choose_gamma(const BoundsConfig& bounds, double alpha, double gamma_hat, std::size_t dim) {
  switch (bounds.gamma_source) {
    case GammaSource::kAlpha:
      // the range of a d-dimensional path cannot exceed dimension d
      return std::min(alpha, static_cast<double>(dim));
    case GammaSource::kEstimated:
      if (!std::isfinite(gamma_hat)) throw std::runtime_error("gamma source 'estimated': path too short to resolve");
      return std::min(gamma_hat, static_cast<double>(dim) + 0.5);
    case GammaSource::kOverride:
      return bounds.gamma_override;
  }
  return alpha;
}

std::string theorem_id(int t) { return std::to_string(t); }

// lhs normalized by lambda reads gap <= a / lambda + b lambda.
double pick_lambda(const BoundsConfig& bounds, std::size_t n, double a, double b, std::vector<std::string>& caveats) {
  switch (bounds.lambda_rule) {
    case LambdaRule::kSqrtN: return std::sqrt(static_cast<double>(n));
    case LambdaRule::kFixed: return bounds.lambda_value;
    case LambdaRule::kOptimize:
      if (a > 0.0 && b > 0.0) {
        caveats.push_back("lambda-optimized-on-path");
        return optimal_lambda(a, b);
      }
      caveats.push_back("lambda-fallback-sqrt-n");
      return std::sqrt(static_cast<double>(n));
  }
  return 1.0;
}

}  // namespace

double target_rate(const std::string& theorem, double zeta) {
  if (theorem == "2" || theorem == "3") return 1.0 - 2.0 * zeta;
  if (theorem == "4") return 1.0 - 4.0 * zeta;
  return 1.0 - zeta;
}

RunEvaluation evaluate_run(const LearningProblem& problem, const std::optional<DissipativityCertificate>& certificate,
                           const BoundsConfig& bounds, const Dataset& dataset, const CoupledTrajectory& traj,
                           double alpha, RandomStream& draws) {
  RunEvaluation out;
  RunDiagnostics& diag = out.diag;
  diag.geometric_gap = geometric_gap(traj);
  diag.worst_case_gap = worst_case_gap(traj, problem, dataset);
  diag.integral_gap = integral_gap(traj);
  diag.g_nabla = g_nabla(traj, problem, dataset);
  diag.gamma_hat = estimate_path_dimension(traj.y);
  diag.gamma = choose_gamma(bounds, alpha, diag.gamma_hat, problem.dim());
  diag.smoothing = bounds.smoothing ? *bounds.smoothing : median_step_displacement(traj);
  if (!(diag.smoothing > 0.0)) throw std::runtime_error("smoothing scale is zero (path does not move)");

  BoundInputs in = inputs_from_problem(problem, dataset.size(), traj.horizon());
  in.zeta = bounds.zeta;
  in.gamma = diag.gamma;
  in.gamma_source = to_string(bounds.gamma_source);
  in.smoothing = diag.smoothing;
  in.beta = bounds.beta;
  in.lambda = std::sqrt(static_cast<double>(in.n));
  if (certificate) {
    in.dissipativity_m = certificate->m;
    in.dissipativity_k = certificate->k;
  }
  const double n = static_cast<double>(in.n);
  const double sigma2 = in.sigma * in.sigma;

  for (int t : bounds.theorems) {
    const std::string id = theorem_id(t);
    try {
      switch (t) {
        case 2:
          out.reports.push_back(rhs_thm2(diag.geometric_gap, in, diag.worst_case_gap));
          break;
        case 3: {
          const double growth = expm1_factor(in.smoothness, in.horizon);
          Terms terms = lemma16_terms(in, bounds.variant);
          for (auto& [name, v] : terms) v *= growth;
          out.reports.push_back(make_report("3", diag.geometric_gap, std::move(terms), in,
                                            {"asymptotic-N", "grid-sup", "variant-" + to_string(bounds.variant)},
                                            {{"growth", growth}}));
          break;
        }
        case 4: {
          BoundReport r = rhs_thm4(in, bounds.variant, diag.worst_case_gap);
          r.caveats.push_back("variant-" + to_string(bounds.variant));
          out.reports.push_back(std::move(r));
          break;
        }
        case 16:
          out.reports.push_back(make_report("16", diag.g_nabla, lemma16_terms(in, bounds.variant), in,
                                            {"asymptotic-N", "grid-sup", "variant-" + to_string(bounds.variant)}));
          break;
        case 13:
          if (!certificate) {
            out.skipped.emplace_back(id, "no co-dissipativity certificate");
            break;
          }
          out.reports.push_back(make_report("13", diag.geometric_gap * diag.geometric_gap, thm13_terms(in), in,
                                            {"asymptotic-N", "grid-sup", "squared-gap", "empirical-certificate"},
                                            {{"m", certificate->m}, {"K", certificate->k}}));
          break;
        case 5: {
          std::vector<std::string> caveats;
          const double a = diag.integral_gap / (in.smoothing * in.smoothing) + std::log(1.0 / in.zeta);
          BoundInputs local = in;
          local.lambda = pick_lambda(bounds, in.n, a, 0.5 * sigma2 / n, caveats);
          BoundReport r = eval_thm5(traj, problem, dataset, local, bounds.mc_draws, draws);
          r.caveats.insert(r.caveats.end(), caveats.begin(), caveats.end());
          out.reports.push_back(std::move(r));
          break;
        }
        case 6: {
          std::vector<std::string> caveats;
          const double b = in.beta;
          const double a6 = (2.0 * b - 1.0) / (b - 1.0) * std::log(2.0 / in.zeta) +
                            b / (2.0 * in.smoothing * in.smoothing) * diag.geometric_gap * diag.geometric_gap;
          BoundInputs local = in;
          local.lambda = pick_lambda(bounds, in.n, (b - 1.0) / b * a6, b / (b - 1.0) * sigma2 / (2.0 * n), caveats);
          for (std::size_t i = 0; i < bounds.thm6_draws; ++i) {
            BoundReport r = eval_thm6(traj, problem, dataset, local, draws);
            r.caveats.insert(r.caveats.end(), caveats.begin(), caveats.end());
            out.reports.push_back(std::move(r));
          }
          break;
        }
        default:
          throw std::invalid_argument("unknown theorem " + id);
      }
    } catch (const std::domain_error& e) {
      // formula not defined at this n (covering schedule guard)
      out.skipped.emplace_back(id, e.what());
    }
  }
  return out;
}

Experiment::Experiment(ExperimentConfig cfg)
    : cfg_(std::move(cfg)),
      problem_([this] {
        RandomStream rng = RandomStream(cfg_.experiment.master_seed).split(0);
        return make_problem(cfg_.problem, rng);
      }()) {
  const auto& ts = cfg_.bounds.theorems;
  if (std::find(ts.begin(), ts.end(), 13) != ts.end()) {
    RandomStream rng = RandomStream(cfg_.experiment.master_seed).split(2);
    certificate_ = estimate_dissipativity(problem_, rng, cfg_.bounds.dissipativity);
  }
}

RandomStream Experiment::replicate_stream(std::size_t r) const {
  return RandomStream(cfg_.experiment.master_seed).split(1).split(r);
}

Dataset Experiment::dataset(std::size_t n, std::size_t r) const {
  if (cfg_.experiment.full_support) {
    if (n % problem_.atom_count() != 0)
      throw std::invalid_argument("full-support dataset needs n divisible by the atom count");
    return full_support_dataset(problem_, n / problem_.atom_count());
  }
  RandomStream rng = replicate_stream(r).split(0);
  return sample_dataset(problem_, n, rng);
}

SdeConfig Experiment::dynamics(double alpha, std::size_t r) const {
  SdeConfig sde = cfg_.dynamics;
  sde.alpha = alpha;
  sde.noise_seed = replicate_stream(r).split(1).seed();
  return sde;
}

ReplicateResult Experiment::run_replicate(std::size_t n, double alpha, std::size_t r) const {
  ReplicateResult res;
  res.index = r;
  try {
    const Dataset data = dataset(n, r);
    const CoupledTrajectory traj = integrate_coupled(problem_, data, dynamics(alpha, r));
    RandomStream draws = replicate_stream(r).split(2);
    res.eval = evaluate_run(problem_, certificate_, cfg_.bounds, data, traj, alpha, draws);
    res.ok = true;
  } catch (const std::exception& e) {
    res.ok = false;
    res.error = e.what();
  }
  return res;
}

std::vector<ReplicateResult> Experiment::run_replicates(std::size_t n, double alpha, int workers) const {
  const std::size_t count = cfg_.experiment.replicates;
  std::vector<ReplicateResult> results(count);
  if (workers <= 1) {
    for (std::size_t r = 0; r < count; ++r) results[r] = run_replicate(n, alpha, r);
    return results;
  }
  // run_replicate never throws, so nothing escapes the parallel region
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::size_t r = 0; r < count; ++r) results[r] = run_replicate(n, alpha, r);
  return results;
}

CoverageReport aggregate_coverage(const std::vector<ReplicateResult>& results, std::size_t n, double alpha,
                                  const BoundsConfig& bounds) {
  CoverageReport rep;
  rep.n = n;
  rep.alpha = alpha;
  rep.zeta = bounds.zeta;
  rep.replicates = results.size();
  if (results.empty()) rep.flags.push_back("no replicates");

  struct Acc {
    TheoremCoverage cov;
    double lhs = 0.0;
    double rhs = 0.0;
    std::vector<std::pair<std::string, double>> terms;
  };
  std::vector<Acc> acc;
  for (int t : bounds.theorems) {
    Acc a;
    a.cov.theorem = theorem_id(t);
    a.cov.target = target_rate(a.cov.theorem, bounds.zeta);
    acc.push_back(std::move(a));
  }
  const auto find = [&](const std::string& id) -> Acc& {
    for (auto& a : acc)
      if (a.cov.theorem == id) return a;
    throw std::logic_error("aggregate_coverage: report for disabled theorem " + id);
  };

  std::vector<double> gaps, dims;
  for (const auto& r : results) {
    if (!r.ok) {
      ++rep.failed;
      rep.errors.push_back({r.index, r.error});
      continue;
    }
    ++rep.completed;
    gaps.push_back(r.eval.diag.geometric_gap);
    if (std::isfinite(r.eval.diag.gamma_hat)) dims.push_back(r.eval.diag.gamma_hat);
    for (const auto& [id, reason] : r.eval.skipped) ++find(id).cov.skipped;
    for (const auto& b : r.eval.reports) {
      Acc& a = find(b.theorem);
      ++a.cov.trials;
      if (b.holds) ++a.cov.holds;
      a.lhs += b.lhs;
      a.rhs += b.rhs;
      if (b.rhs > 0.0) a.cov.max_ratio = std::max(a.cov.max_ratio, b.lhs / b.rhs);
      if (a.terms.empty())
        for (const auto& [name, v] : b.terms) a.terms.emplace_back(name, 0.0);
      for (std::size_t i = 0; i < b.terms.size() && i < a.terms.size(); ++i) a.terms[i].second += b.terms[i].second;
    }
  }
  rep.median_geometric_gap = gaps.empty() ? kNaN : stats::median(gaps);
  rep.median_gamma_hat = dims.empty() ? kNaN : stats::median(dims);

  for (auto& a : acc) {
    TheoremCoverage& c = a.cov;
    if (c.trials > 0) {
      const double k = static_cast<double>(c.trials);
      c.hold_rate = static_cast<double>(c.holds) / k;
      c.mean_lhs = a.lhs / k;
      c.mean_rhs = a.rhs / k;
      for (auto& [name, v] : a.terms) c.mean_terms.emplace_back(name, v / k);
    }
    std::tie(c.ci_low, c.ci_high) = stats::clopper_pearson(c.holds, c.trials, 0.95);
    c.p_value = stats::binomial_lower_tail(c.holds, c.trials, c.target);
    c.passes = c.p_value > 0.01;
    rep.theorems.push_back(std::move(c));
  }
  return rep;
}

CoverageRun run_coverage(const ExperimentConfig& cfg) {
  CoverageRun run;
  run.master_seed = cfg.experiment.master_seed;
  const Experiment exp(cfg);
  for (std::size_t n : cfg.experiment.n_values)
    for (double alpha : cfg.experiment.alpha_values) {
      const auto results = exp.run_replicates(n, alpha, cfg.experiment.workers);
      run.cells.push_back(aggregate_coverage(results, n, alpha, cfg.bounds));
      run.requested += results.size();
      run.failed += run.cells.back().failed;
    }
  return run;
}

SweepParam sweep_param_from_string(const std::string& s) {
  if (s == "n") return SweepParam::kN;
  if (s == "alpha") return SweepParam::kAlpha;
  if (s == "T") return SweepParam::kHorizon;
  if (s == "s") return SweepParam::kSmoothing;
  throw std::invalid_argument("sweep parameter must be one of n, alpha, T, s (got '" + s + "')");
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kN: return "n";
    case SweepParam::kAlpha: return "alpha";
    case SweepParam::kHorizon: return "T";
    case SweepParam::kSmoothing: return "s";
  }
  return "?";
}

namespace {

void push_summary(std::vector<double>& row, std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  if (values.empty()) {
    row.push_back(kNaN);
    row.push_back(kNaN);
    return;
  }
  row.push_back(stats::median(values));
  row.push_back(stats::interquartile_range(values));
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, SweepParam param, const std::vector<double>& values) {
  if (values.size() < 3) throw std::invalid_argument("run_sweep: need at least three values");
  SweepResult out;
  out.param = param;

  std::vector<std::string>& header = out.table.header;
  header = {to_string(param), "completed", "failed"};
  for (const char* q : {"geometric_gap", "worst_case_gap", "gamma_hat"}) {
    header.push_back(std::string(q) + "_median");
    header.push_back(std::string(q) + "_iqr");
  }
  for (int t : cfg.bounds.theorems) {
    header.push_back("rhs_thm" + theorem_id(t) + "_median");
    header.push_back("rhs_thm" + theorem_id(t) + "_iqr");
  }

  std::vector<double> log_n, log_gap;
  for (double v : values) {
    ExperimentConfig local = cfg;
    std::size_t n = cfg.experiment.n_values.front();
    double alpha = cfg.experiment.alpha_values.front();
    switch (param) {
      case SweepParam::kN:
        if (!(v >= 1.0) || v != std::floor(v)) throw std::invalid_argument("run_sweep: n values must be positive integers");
        n = static_cast<std::size_t>(v);
        break;
      case SweepParam::kAlpha: alpha = v; break;
      case SweepParam::kHorizon: local.dynamics.horizon_t = v; break;
      case SweepParam::kSmoothing: local.bounds.smoothing = v; break;
    }
    const Experiment exp(local);
    const auto results = exp.run_replicates(n, alpha, cfg.experiment.workers);

    std::vector<double> gaps, worst, dims;
    std::map<std::string, std::vector<double>> rhs;
    std::size_t completed = 0;
    for (const auto& r : results) {
      out.requested++;
      if (!r.ok) {
        out.failed++;
        out.errors.push_back({r.index, r.error});
        continue;
      }
      ++completed;
      gaps.push_back(r.eval.diag.geometric_gap);
      worst.push_back(r.eval.diag.worst_case_gap);
      dims.push_back(r.eval.diag.gamma_hat);
      std::vector<std::string> seen;
      for (const auto& b : r.eval.reports) {
        // theorem 6 repeats per draw with an identical rhs; take the first
        if (std::find(seen.begin(), seen.end(), b.theorem) != seen.end()) continue;
        seen.push_back(b.theorem);
        rhs[b.theorem].push_back(b.rhs);
      }
    }
    std::vector<double> row = {v, static_cast<double>(completed), static_cast<double>(results.size() - completed)};
    push_summary(row, gaps);
    push_summary(row, worst);
    push_summary(row, dims);
    for (int t : cfg.bounds.theorems) push_summary(row, rhs[theorem_id(t)]);
    if (param == SweepParam::kN && !gaps.empty()) {
      const double med = row[3];
      if (med > 0.0) {
        log_n.push_back(std::log(v));
        log_gap.push_back(std::log(med));
      }
    }
    out.table.rows.push_back(std::move(row));
  }
  if (param == SweepParam::kN && log_n.size() >= 2) out.slope = stats::least_squares(log_n, log_gap);
  return out;
}

std::vector<LemmaCase> validate_lemmas(std::size_t cases, std::uint64_t seed, double beta, int threads) {
  std::vector<LemmaCase> rows;
  const RandomStream root(seed);
  QuadratureOptions opt;
  opt.threads = threads;
  for (std::size_t c = 0; c < cases; ++c) {
    RandomStream rng = root.split(c);
    ProblemConfig pc;
    pc.dim = 1;
    pc.atom_count = 4 + rng.index(13);
    pc.data_bound = rng.uniform_open(0.5, 4.0);
    pc.label_noise = rng.uniform_open(0.0, 0.4);
    RandomStream prng = rng.split(0);
    const LearningProblem problem = make_problem(pc, prng);
    RandomStream drng = rng.split(1);
    const Dataset data = sample_dataset(problem, 8 + rng.index(57), drng);

    SdeConfig sde;
    sde.alpha = rng.uniform_open(1.2, 2.0);
    sde.step_h = 1e-3;
    sde.horizon_t = static_cast<double>(20 + rng.index(80)) * sde.step_h;
    sde.noise_scale = rng.uniform_open(0.2, 1.0);
    sde.init.kind = InitSpec::Kind::kGaussian;
    sde.init.radius = 1.0;
    sde.noise_seed = rng.split(2).seed();
    sde.allow_large_step = true;
    const CoupledTrajectory traj = integrate_coupled(problem, data, sde);

    const double s = median_step_displacement(traj) * rng.uniform_open(0.5, 2.0);
    const SmoothedOccupation post = posterior_occupation(traj, s);
    const SmoothedOccupation prior = prior_occupation(traj, s);
    rows.push_back({c, "kl", s, 1.0, kl_oracle(post, prior, opt), kl_upper_bound(traj, s)});
    rows.push_back({c, "renyi", s, beta, renyi_oracle(post, prior, beta, opt), renyi_upper_bound(traj, s, beta)});
  }
  return rows;
}

}  // namespace genbounds
