#include "genbounds/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "genbounds/svg.hpp"

namespace genbounds {

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  if (s == "svg") return Format::kSvg;
  throw std::invalid_argument("unknown output format '" + s + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// JSON has no NaN; it is written as null and read back as NaN.
double num(const ojson& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

ojson terms_json(const Terms& terms) {
  ojson o = ojson::object();
  for (const auto& [name, v] : terms) o[name] = v;
  return o;
}

Terms terms_from_json(const ojson& o) {
  Terms t;
  for (const auto& [name, v] : o.items()) t.emplace_back(name, num(v));
  return t;
}

ojson inputs_json(const BoundInputs& in) {
  ojson o = {
      {"n", in.n},           {"zeta", in.zeta},     {"gamma", in.gamma},         {"gamma_source", in.gamma_source},
      {"L", in.lipschitz},   {"M", in.smoothness},  {"sigma", in.sigma},         {"Sigma", in.coord_sigma},
      {"T", in.horizon},     {"d", in.dim},         {"s", in.smoothing},         {"lambda", in.lambda},
      {"beta", in.beta},
  };
  if (in.dissipativity_m) o["m"] = *in.dissipativity_m;
  if (in.dissipativity_k) o["K"] = *in.dissipativity_k;
  return o;
}

BoundInputs inputs_from_json(const ojson& o) {
  BoundInputs in;
  in.n = o.at("n").get<std::size_t>();
  in.zeta = num(o.at("zeta"));
  in.gamma = num(o.at("gamma"));
  in.gamma_source = o.at("gamma_source").get<std::string>();
  in.lipschitz = num(o.at("L"));
  in.smoothness = num(o.at("M"));
  in.sigma = num(o.at("sigma"));
  in.coord_sigma = num(o.at("Sigma"));
  in.horizon = num(o.at("T"));
  in.dim = o.at("d").get<std::size_t>();
  in.smoothing = num(o.at("s"));
  in.lambda = num(o.at("lambda"));
  in.beta = num(o.at("beta"));
  if (o.contains("m")) in.dissipativity_m = num(o.at("m"));
  if (o.contains("K")) in.dissipativity_k = num(o.at("K"));
  return in;
}

}  // namespace

ojson to_json(const BoundReport& r) {
  return {
      {"theorem", r.theorem},
      {"lhs", r.lhs},
      {"rhs", r.rhs},
      {"terms", terms_json(r.terms)},
      {"constants", terms_json(r.constants)},
      {"holds", r.holds},
      {"caveats", r.caveats},
      {"inputs", inputs_json(r.inputs)},
  };
}

BoundReport bound_report_from_json(const ojson& j) {
  BoundReport r;
  r.theorem = j.at("theorem").get<std::string>();
  r.lhs = num(j.at("lhs"));
  r.rhs = num(j.at("rhs"));
  r.terms = terms_from_json(j.at("terms"));
  if (j.contains("constants")) r.constants = terms_from_json(j.at("constants"));
  r.holds = j.at("holds").get<bool>();
  r.caveats = j.at("caveats").get<std::vector<std::string>>();
  r.inputs = inputs_from_json(j.at("inputs"));
  return r;
}

ojson to_json(const CoverageReport& r) {
  ojson theorems = ojson::array();
  for (const auto& t : r.theorems)
    theorems.push_back({
        {"theorem", t.theorem},
        {"target", t.target},
        {"trials", t.trials},
        {"holds", t.holds},
        {"skipped", t.skipped},
        {"hold_rate", t.hold_rate},
        {"ci95", {t.ci_low, t.ci_high}},
        {"p_value", t.p_value},
        {"passes", t.passes},
        {"mean_lhs", t.mean_lhs},
        {"mean_rhs", t.mean_rhs},
        {"max_ratio", t.max_ratio},
        {"mean_terms", terms_json(t.mean_terms)},
    });
  ojson errors = ojson::array();
  for (const auto& e : r.errors) errors.push_back({{"replicate", e.index}, {"message", e.message}});
  return {
      {"n", r.n},
      {"alpha", r.alpha},
      {"zeta", r.zeta},
      {"replicates", r.replicates},
      {"completed", r.completed},
      {"failed", r.failed},
      {"flags", r.flags},
      {"median_geometric_gap", r.median_geometric_gap},
      {"median_gamma_hat", r.median_gamma_hat},
      {"theorems", theorems},
      {"errors", errors},
  };
}

CoverageReport coverage_report_from_json(const ojson& j) {
  CoverageReport r;
  r.n = j.at("n").get<std::size_t>();
  r.alpha = num(j.at("alpha"));
  r.zeta = num(j.at("zeta"));
  r.replicates = j.at("replicates").get<std::size_t>();
  r.completed = j.at("completed").get<std::size_t>();
  r.failed = j.at("failed").get<std::size_t>();
  r.flags = j.at("flags").get<std::vector<std::string>>();
  r.median_geometric_gap = num(j.at("median_geometric_gap"));
  r.median_gamma_hat = num(j.at("median_gamma_hat"));
  for (const auto& t : j.at("theorems")) {
    TheoremCoverage c;
    c.theorem = t.at("theorem").get<std::string>();
    c.target = num(t.at("target"));
    c.trials = t.at("trials").get<std::size_t>();
    c.holds = t.at("holds").get<std::size_t>();
    c.skipped = t.at("skipped").get<std::size_t>();
    c.hold_rate = num(t.at("hold_rate"));
    c.ci_low = num(t.at("ci95").at(0));
    c.ci_high = num(t.at("ci95").at(1));
    c.p_value = num(t.at("p_value"));
    c.passes = t.at("passes").get<bool>();
    c.mean_lhs = num(t.at("mean_lhs"));
    c.mean_rhs = num(t.at("mean_rhs"));
    c.max_ratio = num(t.at("max_ratio"));
    c.mean_terms = terms_from_json(t.at("mean_terms"));
    r.theorems.push_back(std::move(c));
  }
  for (const auto& e : j.at("errors"))
    r.errors.push_back({e.at("replicate").get<std::size_t>(), e.at("message").get<std::string>()});
  return r;
}

ojson to_json(const CoverageRun& r) {
  ojson cells = ojson::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c));
  return {{"master_seed", r.master_seed}, {"requested", r.requested}, {"failed", r.failed}, {"cells", cells}};
}

CoverageRun coverage_run_from_json(const ojson& j) {
  CoverageRun r;
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.requested = j.at("requested").get<std::size_t>();
  r.failed = j.at("failed").get<std::size_t>();
  for (const auto& c : j.at("cells")) r.cells.push_back(coverage_report_from_json(c));
  return r;
}

ojson to_json(const SweepResult& r) {
  ojson rows = ojson::array();
  for (const auto& row : r.table.rows) {
    ojson o = ojson::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[r.table.header[i]] = row[i];
    rows.push_back(std::move(o));
  }
  ojson errors = ojson::array();
  for (const auto& e : r.errors) errors.push_back({{"replicate", e.index}, {"message", e.message}});
  ojson out = {{"param", to_string(r.param)}, {"requested", r.requested}, {"failed", r.failed}, {"rows", rows}};
  if (r.slope) out["loglog_slope"] = {{"slope", r.slope->slope}, {"intercept", r.slope->intercept}, {"r2", r.slope->r_squared}};
  out["errors"] = errors;
  return out;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  return out;
}

Table parse_csv_table(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0')
        throw std::runtime_error("csv line " + std::to_string(lineno) + ": non-numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.header.size())
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(t.header.size()) + " cells");
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_csv_table(const std::string& path) { return parse_csv_table(read_text(path)); }

Table coverage_table(const CoverageRun& run) {
  Table t;
  t.header = {"n",        "alpha",   "theorem", "target",   "trials",   "holds",    "skipped",   "hold_rate",
              "ci_low",   "ci_high", "p_value", "passes",   "mean_lhs", "mean_rhs", "max_ratio", "failed"};
  for (const auto& c : run.cells)
    for (const auto& th : c.theorems)
      t.rows.push_back({static_cast<double>(c.n), c.alpha, std::stod(th.theorem), th.target,
                        static_cast<double>(th.trials), static_cast<double>(th.holds),
                        static_cast<double>(th.skipped), th.hold_rate, th.ci_low, th.ci_high, th.p_value,
                        th.passes ? 1.0 : 0.0, th.mean_lhs, th.mean_rhs, th.max_ratio,
                        static_cast<double>(c.failed)});
  return t;
}

Table lemma_table(const std::vector<LemmaCase>& rows) {
  Table t;
  t.header = {"case_id", "s", "beta", "oracle_value", "upper_bound", "margin"};
  for (const auto& r : rows)
    t.rows.push_back({static_cast<double>(r.case_id), r.smoothing, r.beta, r.oracle_value, r.upper_bound, r.margin()});
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const CoverageRun& run, Format format, const std::string& path) {
  switch (format) {
    case Format::kCsv: write_text(path, to_csv(coverage_table(run))); return;
    case Format::kJson: write_text(path, to_json(run).dump(2) + "\n"); return;
    case Format::kSvg: {
      // hold rate per theorem across cells
      PlotSpec plot;
      plot.title = "coverage";
      plot.x_label = "cell";
      plot.y_label = "hold rate (lhs <= rhs)";
      std::map<std::string, Series> by_theorem;
      for (std::size_t i = 0; i < run.cells.size(); ++i)
        for (const auto& th : run.cells[i].theorems) {
          Series& s = by_theorem[th.theorem];
          s.name = "thm " + th.theorem;
          s.x.push_back(static_cast<double>(i));
          s.y.push_back(th.hold_rate);
        }
      for (auto& [id, s] : by_theorem) plot.series.push_back(std::move(s));
      write_text(path, render_svg(plot));
      return;
    }
  }
}

void emit(const SweepResult& sweep, Format format, const std::string& path) {
  switch (format) {
    case Format::kCsv: write_text(path, to_csv(sweep.table)); return;
    case Format::kJson: write_text(path, to_json(sweep).dump(2) + "\n"); return;
    case Format::kSvg: {
      PlotSpec plot;
      const std::string p = to_string(sweep.param);
      plot.title = "sweep over " + p;
      plot.x_label = p;
      plot.y_label = "median over replicates";
      plot.log_x = plot.log_y = sweep.param == SweepParam::kN;
      const auto& h = sweep.table.header;
      for (std::size_t c = 1; c < h.size(); ++c) {
        const std::string& name = h[c];
        if (name.size() < 7 || name.compare(name.size() - 7, 7, "_median") != 0) continue;
        Series s;
        s.name = name.substr(0, name.size() - 7);
        for (const auto& row : sweep.table.rows) {
          s.x.push_back(row[0]);
          s.y.push_back(row[c]);
        }
        plot.series.push_back(std::move(s));
      }
      write_text(path, render_svg(plot));
      return;
    }
  }
}

}  // namespace genbounds
