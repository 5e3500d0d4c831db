#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "genbounds/bounds.hpp"
#include "genbounds/harness.hpp"

namespace genbounds {

using ojson = nlohmann::ordered_json;

enum class Format { kCsv, kJson, kSvg };
Format format_from_string(const std::string& s);

/// Shortest round-trip representation ("%.17g"); "nan" / "inf" for non-finite values.
std::string format_number(double v);

ojson to_json(const BoundReport& r);
BoundReport bound_report_from_json(const ojson& j);

ojson to_json(const CoverageReport& r);
CoverageReport coverage_report_from_json(const ojson& j);
ojson to_json(const CoverageRun& r);
CoverageRun coverage_run_from_json(const ojson& j);

ojson to_json(const SweepResult& r);

std::string to_csv(const Table& t);
/// Header line plus numeric rows.
Table parse_csv_table(const std::string& text);
Table read_csv_table(const std::string& path);

/// One row per (cell, theorem).
Table coverage_table(const CoverageRun& run);
Table lemma_table(const std::vector<LemmaCase>& rows);

/// Writes `text` to `path`; throws std::runtime_error naming the path on failure.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

void emit(const CoverageRun& run, Format format, const std::string& path);
/// SVG plots every median series against the swept parameter (log-log for n sweeps).
void emit(const SweepResult& sweep, Format format, const std::string& path);

}  // namespace genbounds
