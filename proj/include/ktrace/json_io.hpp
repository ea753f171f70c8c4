#pragma once

#include <string>

#include "json.hpp"

#include "ktrace/bounds.hpp"
#include "ktrace/ensemble.hpp"
#include "ktrace/verify.hpp"

namespace ktrace {

using Json = nlohmann::json;

// Matrices serialize as {"re": [[..]], "im": [[..]]}, row-major; "im" may be
// omitted for real matrices on input and is omitted on output when zero.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

// Ensemble files: {"dimension": n, "summands": [...], "c": optional}.
// A summand is either {"atoms": [{"p": .., "matrix": ..}]} or a family
// reference {"family": "er_laplacian", "params": {"n", "p", "w_max"}} that
// expands in place; a family object is also accepted as the whole document.
// An explicit file-level "c" always wins over a family's default.
Json ensemble_to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_from_json(const Json& j);
EnsembleSpec load_ensemble(const std::string& path);

Json bound_report_to_json(const BoundReport& report);
Json sample_stats_to_json(const SampleStats& stats);
Json suite_result_to_json(const SuiteResult& result);

Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

// 17 significant digits: round-trip exact for doubles.
std::string format_double(double v);

// Columns: theta, bound_value, valid.
void write_curve_csv(const BoundReport& report, const std::string& path);

// Columns: k, top_mean, top_stderr, bot_mean, bot_stderr.
void write_sample_stats_csv(const SampleStats& stats, const std::string& path);

}  // namespace ktrace
