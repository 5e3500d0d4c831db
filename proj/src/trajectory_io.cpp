#include "genbounds/trajectory_io.hpp"

#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "genbounds/report_io.hpp"

namespace genbounds {

void write_trajectory_csv(const CoupledTrajectory& traj, const std::string& path) {
  const std::size_t d = traj.dim();
  std::string out = "k,t";
  for (const char* p : {"W", "Y"})
    for (std::size_t j = 1; j <= d; ++j) out += std::string(",") + p + "_" + std::to_string(j);
  out += '\n';
  for (std::size_t k = 0; k < traj.w.size(); ++k) {
    out += std::to_string(k) + "," + format_number(traj.times[k]);
    for (double v : traj.w[k]) out += "," + format_number(v);
    for (double v : traj.y[k]) out += "," + format_number(v);
    out += '\n';
  }
  write_text(path, out);
}

CoupledTrajectory read_trajectory_csv(const std::string& path) {
  const Table t = read_csv_table(path);
  if (t.header.size() < 4 || (t.header.size() - 2) % 2 != 0 || t.header[0] != "k" || t.header[1] != "t")
    throw std::runtime_error("'" + path + "': expected columns k, t, W_1..W_d, Y_1..Y_d");
  const std::size_t d = (t.header.size() - 2) / 2;
  CoupledTrajectory traj;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& row = t.rows[k];
    if (row[0] != static_cast<double>(k)) throw std::runtime_error("'" + path + "': step column out of order");
    traj.times.push_back(row[1]);
    traj.w.emplace_back(row.begin() + 2, row.begin() + 2 + static_cast<std::ptrdiff_t>(d));
    traj.y.emplace_back(row.begin() + 2 + static_cast<std::ptrdiff_t>(d), row.end());
  }
  if (traj.times.size() >= 2) traj.step_h = traj.times[1] - traj.times[0];
  return traj;
}

namespace {

namespace fs = std::filesystem;

ojson problem_json(const LearningProblem& p) {
  ojson atoms = ojson::array();
  for (const auto& a : p.atoms()) atoms.push_back({{"x", a.x}, {"y", a.y}});
  return {{"atoms", atoms}, {"probs", p.probs()}};
}

}  // namespace

SavedRun simulate_and_save(const Experiment& exp, std::size_t n, double alpha, std::size_t r, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());

  const Dataset data = exp.dataset(n, r);
  const SdeConfig sde = exp.dynamics(alpha, r);
  CoupledTrajectory traj = integrate_coupled(exp.problem(), data, sde);
  const std::uint64_t draw_seed = exp.replicate_stream(r).split(2).seed();

  write_trajectory_csv(traj, (fs::path(dir) / "trajectory.csv").string());
  ojson side = {
      {"config", ojson::parse(to_json(exp.config()).dump())},
      {"n", n},
      {"alpha", alpha},
      {"replicate", r},
      {"step_h", sde.step_h},
      {"steps", traj.steps()},
      {"dim", traj.dim()},
      {"dataset_seed", data.seed()},
      {"noise_seed", sde.noise_seed},
      {"draw_seed", draw_seed},
      {"horizon_adjusted", traj.meta.horizon_adjusted},
      {"problem", problem_json(exp.problem())},
      {"dataset", {{"entries", data.entries()}}},
  };
  write_text((fs::path(dir) / "run.json").string(), side.dump(2) + "\n");
  return {exp.config(), exp.problem(), data, std::move(traj), alpha, r, draw_seed};
}

SavedRun load_run(const std::string& dir) {
  const fs::path root(dir);
  ojson side;
  try {
    side = ojson::parse(read_text((root / "run.json").string()));
  } catch (const ojson::parse_error& e) {
    throw std::runtime_error("'" + (root / "run.json").string() + "': " + e.what());
  }
  ExperimentConfig cfg = parse_config(nlohmann::json::parse(side.at("config").dump()));

  std::vector<Atom> atoms;
  for (const auto& a : side.at("problem").at("atoms")) atoms.push_back({a.at("x").get<Vec>(), a.at("y").get<double>()});
  LearningProblem problem(std::move(atoms), side.at("problem").at("probs").get<std::vector<double>>(), cfg.problem);
  Dataset data(side.at("dataset").at("entries").get<std::vector<std::size_t>>(), problem.atom_count(),
               side.at("dataset_seed").get<std::uint64_t>());

  CoupledTrajectory traj = read_trajectory_csv((root / "trajectory.csv").string());
  const double alpha = side.at("alpha").get<double>();
  SdeConfig sde = cfg.dynamics;
  sde.alpha = alpha;
  sde.step_h = side.at("step_h").get<double>();
  sde.noise_seed = side.at("noise_seed").get<std::uint64_t>();
  traj.step_h = sde.step_h;
  traj.increments = draw_increments(sde, problem.dim());
  traj.meta.dataset_seed = data.seed();
  traj.meta.noise_seed = sde.noise_seed;
  traj.meta.horizon_adjusted = side.at("horizon_adjusted").get<bool>();
  if (traj.increments.size() + 1 != traj.w.size())
    throw std::runtime_error("'" + dir + "': trajectory length does not match the stored noise seed");

  return {std::move(cfg),
          std::move(problem),
          std::move(data),
          std::move(traj),
          alpha,
          side.at("replicate").get<std::size_t>(),
          side.at("draw_seed").get<std::uint64_t>()};
}

}  // namespace genbounds
