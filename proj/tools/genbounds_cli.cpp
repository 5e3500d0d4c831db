// genbounds: simulate coupled heavy-tailed dynamics and evaluate
// generalization bounds on them.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genbounds/config.hpp"
#include "genbounds/fractal.hpp"
#include "genbounds/harness.hpp"
#include "genbounds/report_io.hpp"
#include "genbounds/svg.hpp"
#include "genbounds/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace genbounds;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitReplicates = 3;

ExperimentConfig load(const std::string& path) {
  ExperimentConfig cfg = load_config(path);
  apply_seed_override(cfg);
  return cfg;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

std::vector<int> parse_theorems(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("bad theorem id '" + item + "'");
    }
  }
  return out;
}

int failure_exit(std::size_t failed, std::size_t requested, double threshold) {
  if (failed == 0) return kExitOk;
  std::fprintf(stderr, "%zu of %zu replicates failed\n", failed, requested);
  return static_cast<double>(failed) > threshold * static_cast<double>(requested) ? kExitReplicates : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled heavy-tailed SDE simulator and generalization-bound evaluator"};
  app.require_subcommand(1);

  std::string config_path, out, traj_path, run_dir, theorems = "2,3,4,5,6", in_path, param, path_choice = "Y";
  std::size_t replicate = 0, levels = 14, cases = 50;
  std::optional<std::size_t> replicates;
  std::optional<int> workers;
  std::vector<double> values;
  bool loglog = false;
  std::string title;
  std::uint64_t seed = 1;
  double beta = 2.0;

  auto* simulate = app.add_subcommand("simulate", "integrate one coupled run and save it");
  simulate->add_option("--config", config_path)->required();
  simulate->add_option("--out", out, "output directory")->required();
  simulate->add_option("--replicate", replicate);

  auto* dim = app.add_subcommand("dim", "box-counting dimension of a saved trajectory");
  dim->add_option("--traj", traj_path, "trajectory CSV")->required();
  dim->add_option("--out", out, "estimate JSON")->required();
  dim->add_option("--path", path_choice, "W or Y")->check(CLI::IsMember({"W", "Y"}));
  dim->add_option("--levels", levels);

  auto* bounds = app.add_subcommand("bounds", "evaluate bounds on a saved run");
  bounds->add_option("--run", run_dir)->required();
  bounds->add_option("--theorems", theorems);
  bounds->add_option("--out", out)->required();

  auto* coverage = app.add_subcommand("coverage", "Monte-Carlo coverage of the bounds");
  coverage->add_option("--config", config_path)->required();
  coverage->add_option("--replicates", replicates);
  coverage->add_option("--workers", workers);
  coverage->add_option("--out", out, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--param", param)->required()->check(CLI::IsMember({"n", "alpha", "T", "s"}));
  sweep->add_option("--values", values)->required()->delimiter(',');
  sweep->add_option("--replicates", replicates);
  sweep->add_option("--workers", workers);
  sweep->add_option("--out", out, "output directory")->required();

  auto* plot = app.add_subcommand("plot", "plot CSV columns against the first column");
  plot->add_option("--in", in_path)->required();
  plot->add_option("--out", out)->required();
  plot->add_flag("--loglog", loglog);
  plot->add_option("--title", title);

  auto* lemmas = app.add_subcommand("validate-lemmas", "check divergence upper bounds against quadrature");
  lemmas->add_option("--cases", cases);
  lemmas->add_option("--seed", seed);
  lemmas->add_option("--beta", beta);
  lemmas->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) {
      const ExperimentConfig cfg = load(config_path);
      const Experiment exp(cfg);
      const SavedRun run = simulate_and_save(exp, cfg.experiment.n_values.front(), cfg.experiment.alpha_values.front(),
                                             replicate, out);
      std::fprintf(stderr, "wrote %zu steps to %s\n", run.trajectory.steps(), out.c_str());
      return kExitOk;
    }

    if (*dim) {
      const CoupledTrajectory traj = read_trajectory_csv(traj_path);
      const PointSet& pts = path_choice == "W" ? traj.w : traj.y;
      const DimensionEstimate est = estimate_box_dimension(default_covering_curve(pts, levels));
      ojson curve = ojson::array();
      for (std::size_t i = 0; i < est.curve.deltas.size(); ++i)
        curve.push_back({{"delta", est.curve.deltas[i]}, {"count", est.curve.counts[i]}});
      const ojson doc = {{"gamma_hat", est.gamma_hat},
                         {"window", {est.window_first, est.window_last}},
                         {"r2", est.r_squared},
                         {"path", path_choice},
                         {"curve", curve}};
      write_text(out, doc.dump(2) + "\n");
      std::printf("gamma_hat %.6g (levels %zu..%zu, r2 %.4f)\n", est.gamma_hat, est.window_first, est.window_last,
                  est.r_squared);
      return kExitOk;
    }

    if (*bounds) {
      SavedRun run = load_run(run_dir);
      BoundsConfig bc = run.config.bounds;
      bc.theorems = parse_theorems(theorems);
      for (int t : bc.theorems)
        if (t != 2 && t != 3 && t != 4 && t != 5 && t != 6 && t != 13 && t != 16)
          throw ConfigError("unsupported theorem " + std::to_string(t));
      std::optional<DissipativityCertificate> cert;
      if (std::find(bc.theorems.begin(), bc.theorems.end(), 13) != bc.theorems.end()) {
        RandomStream rng = RandomStream(run.config.experiment.master_seed).split(2);
        cert = estimate_dissipativity(run.problem, rng, bc.dissipativity);
      }
      RandomStream draws(run.draw_seed);
      const RunEvaluation ev = evaluate_run(run.problem, cert, bc, run.dataset, run.trajectory, run.alpha, draws);
      ojson reports = ojson::array();
      for (const auto& r : ev.reports) reports.push_back(to_json(r));
      ojson skipped = ojson::array();
      for (const auto& [id, why] : ev.skipped) skipped.push_back({{"theorem", id}, {"reason", why}});
      const ojson doc = {{"reports", reports},
                         {"skipped", skipped},
                         {"diagnostics",
                          {{"geometric_gap", ev.diag.geometric_gap},
                           {"worst_case_gap", ev.diag.worst_case_gap},
                           {"integral_gap", ev.diag.integral_gap},
                           {"g_nabla", ev.diag.g_nabla},
                           {"gamma_hat", ev.diag.gamma_hat},
                           {"gamma", ev.diag.gamma},
                           {"smoothing", ev.diag.smoothing}}}};
      write_text(out, doc.dump(2) + "\n");
      for (const auto& r : ev.reports)
        std::printf("thm %-3s lhs %-12.6g rhs %-12.6g %s\n", r.theorem.c_str(), r.lhs, r.rhs,
                    r.holds ? "holds" : "VIOLATED");
      return kExitOk;
    }

    if (*coverage) {
      ExperimentConfig cfg = load(config_path);
      if (replicates) cfg.experiment.replicates = *replicates;
      if (workers) cfg.experiment.workers = *workers;
      if (cfg.experiment.workers < 1) throw ConfigError("--workers must be >= 1");
      ensure_dir(out);
      const CoverageRun run = run_coverage(cfg);
      emit(run, Format::kJson, join(out, "coverage.json"));
      emit(run, Format::kCsv, join(out, "coverage.csv"));
      emit(run, Format::kSvg, join(out, "coverage.svg"));
      for (const auto& c : run.cells) {
        std::printf("n=%zu alpha=%g: %zu/%zu replicates completed\n", c.n, c.alpha, c.completed, c.replicates);
        for (const auto& f : c.flags) std::printf("  flag: %s\n", f.c_str());
        for (const auto& t : c.theorems)
          std::printf("  thm %-3s hold %zu/%zu (%.3f, target %.3f, p=%.3g) %s  max lhs/rhs %.3g\n",
                      t.theorem.c_str(), t.holds, t.trials, t.hold_rate, t.target, t.p_value,
                      t.passes ? "ok" : "BELOW TARGET", t.max_ratio);
      }
      if (run.requested == 0) return kExitOk;
      return failure_exit(run.failed, run.requested, cfg.experiment.failure_threshold);
    }

    if (*sweep) {
      ExperimentConfig cfg = load(config_path);
      if (replicates) cfg.experiment.replicates = *replicates;
      if (workers) cfg.experiment.workers = *workers;
      if (cfg.experiment.workers < 1) throw ConfigError("--workers must be >= 1");
      if (values.size() < 3) throw ConfigError("--values needs at least three entries");
      ensure_dir(out);
      const SweepResult res = run_sweep(cfg, sweep_param_from_string(param), values);
      emit(res, Format::kCsv, join(out, "sweep.csv"));
      emit(res, Format::kJson, join(out, "sweep.json"));
      emit(res, Format::kSvg, join(out, "sweep.svg"));
      if (res.slope) std::printf("log-log slope of median geometric gap: %.4f (r2 %.3f)\n", res.slope->slope,
                                 res.slope->r_squared);
      return failure_exit(res.failed, res.requested, cfg.experiment.failure_threshold);
    }

    if (*plot) {
      const Table t = read_csv_table(in_path);
      if (t.header.size() < 2) throw std::runtime_error("'" + in_path + "': need at least two columns");
      PlotSpec spec;
      spec.title = title.empty() ? fs::path(in_path).stem().string() : title;
      spec.x_label = t.header[0];
      spec.y_label = "value";
      spec.log_x = spec.log_y = loglog;
      for (std::size_t c = 1; c < t.header.size(); ++c) {
        Series s;
        s.name = t.header[c];
        for (const auto& row : t.rows) {
          s.x.push_back(row[0]);
          s.y.push_back(row[c]);
        }
        spec.series.push_back(std::move(s));
      }
      write_text(out, render_svg(spec));
      return kExitOk;
    }

    if (*lemmas) {
      if (!(beta > 1.0)) throw ConfigError("--beta must exceed 1");
      const auto rows = validate_lemmas(cases, seed, beta);
      write_text(out, to_csv(lemma_table(rows)));
      std::size_t violations = 0;
      for (const auto& r : rows)
        if (!r.dominated()) ++violations;
      std::printf("%zu comparisons, %zu with oracle above the upper bound\n", rows.size(), violations);
      return violations == 0 ? kExitOk : kExitReplicates;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}
