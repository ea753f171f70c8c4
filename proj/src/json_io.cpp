#include "ktrace/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ktrace/errors.hpp"

namespace ktrace {

namespace {

Json finite_or_null(double v) {
  return std::isfinite(v) ? Json(v) : Json();
}

std::vector<std::vector<double>> part_to_rows(const CMatrix& m, bool im) {
  std::vector<std::vector<double>> rows(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    rows[i].resize(m.cols());
    for (int j = 0; j < m.cols(); ++j) {
      rows[i][j] = im ? m(i, j).imag() : m(i, j).real();
    }
  }
  return rows;
}

void fill_part(CMatrix& m, const Json& rows, bool im, const char* what) {
  if (!rows.is_array() || int(rows.size()) != m.rows()) {
    throw ConfigError(std::string("matrix: '") + what + "' must be an array of " +
                      std::to_string(m.rows()) + " rows");
  }
  for (int i = 0; i < m.rows(); ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || int(row.size()) != m.cols()) {
      throw ConfigError(std::string("matrix: row ") + std::to_string(i) +
                        " of '" + what + "' has wrong length");
    }
    for (int j = 0; j < m.cols(); ++j) {
      if (!row[j].is_number()) {
        throw ConfigError(std::string("matrix: entry (") + std::to_string(i) +
                          ", " + std::to_string(j) + ") of '" + what +
                          "' is not a number");
      }
      double v = row[j].get<double>();
      if (im) {
        m(i, j) = Complex(m(i, j).real(), v);
      } else {
        m(i, j) = Complex(v, m(i, j).imag());
      }
    }
  }
}

FiniteSupportMatrix summand_from_json(const Json& j, std::size_t index) {
  if (!j.contains("atoms") || !j["atoms"].is_array() || j["atoms"].empty()) {
    throw ConfigError("summand " + std::to_string(index) +
                      ": expected a non-empty 'atoms' array");
  }
  FiniteSupportMatrix summand;
  for (std::size_t a = 0; a < j["atoms"].size(); ++a) {
    const Json& atom = j["atoms"][a];
    if (!atom.contains("p") || !atom["p"].is_number()) {
      throw ConfigError("summand " + std::to_string(index) + " atom " +
                        std::to_string(a) + ": missing numeric 'p'");
    }
    if (!atom.contains("matrix")) {
      throw ConfigError("summand " + std::to_string(index) + " atom " +
                        std::to_string(a) + ": missing 'matrix'");
    }
    CMatrix m = matrix_from_json(atom["matrix"]);
    summand.atoms.push_back(
        {atom["p"].get<double>(), HermitianMatrix(m)});
  }
  return summand;
}

// Expands a family reference into concrete summands; returns the family's
// default spectral bound c.
double expand_family(const Json& j, EnsembleSpec& spec) {
  std::string family = j.at("family").get<std::string>();
  if (family != "er_laplacian") {
    throw ConfigError("unknown ensemble family '" + family + "'");
  }
  const Json& params = j.at("params");
  int n = params.at("n").get<int>();
  double p = params.at("p").get<double>();
  double w_max = params.value("w_max", 1.0);
  if (spec.n == 0) spec.n = n;
  if (spec.n != n) {
    throw ConfigError("family er_laplacian: n = " + std::to_string(n) +
                      " conflicts with dimension " + std::to_string(spec.n));
  }
  EnsembleSpec er = er_laplacian_ensemble(n, p, w_max);
  for (auto& summand : er.summands) {
    spec.summands.push_back(std::move(summand));
  }
  return *er.c;
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json j;
  j["re"] = part_to_rows(m, false);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0) {
    j["im"] = part_to_rows(m, true);
  }
  return j;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("re") || !j["re"].is_array() ||
      j["re"].empty()) {
    throw ConfigError("matrix: expected an object with an 're' array");
  }
  int n = int(j["re"].size());
  CMatrix m = CMatrix::Zero(n, n);
  fill_part(m, j["re"], false, "re");
  if (j.contains("im")) fill_part(m, j["im"], true, "im");
  return m;
}

Json ensemble_to_json(const EnsembleSpec& spec) {
  Json j;
  j["dimension"] = spec.n;
  if (spec.c) j["c"] = *spec.c;
  j["summands"] = Json::array();
  for (const auto& summand : spec.summands) {
    Json js;
    js["atoms"] = Json::array();
    for (const auto& atom : summand.atoms) {
      js["atoms"].push_back(
          {{"p", atom.probability}, {"matrix", matrix_to_json(atom.matrix.mat())}});
    }
    j["summands"].push_back(std::move(js));
  }
  return j;
}

EnsembleSpec ensemble_from_json(const Json& j) {
  if (!j.is_object()) {
    throw ConfigError("ensemble: top-level JSON must be an object");
  }
  EnsembleSpec spec;
  spec.n = 0;
  bool saw_family = false;
  double family_c = 0.0;

  if (j.contains("family")) {
    family_c = std::max(family_c, expand_family(j, spec));
    saw_family = true;
  } else {
    if (j.contains("dimension")) {
      spec.n = j["dimension"].get<int>();
    }
    if (!j.contains("summands") || !j["summands"].is_array() ||
        j["summands"].empty()) {
      throw ConfigError("ensemble: expected a non-empty 'summands' array");
    }
    for (std::size_t s = 0; s < j["summands"].size(); ++s) {
      const Json& entry = j["summands"][s];
      if (entry.contains("family")) {
        family_c = std::max(family_c, expand_family(entry, spec));
        saw_family = true;
      } else {
        FiniteSupportMatrix summand = summand_from_json(entry, s);
        if (spec.n == 0) spec.n = summand.dim();
        spec.summands.push_back(std::move(summand));
      }
    }
  }

  if (j.contains("c")) {
    spec.c = j["c"].get<double>();
  } else if (saw_family) {
    spec.c = family_c;
  }
  validate_ensemble(spec);
  return spec;
}

EnsembleSpec load_ensemble(const std::string& path) {
  return ensemble_from_json(read_json_file(path));
}

Json bound_report_to_json(const BoundReport& report) {
  Json j;
  j["kind"] = report.kind;
  j["branch"] = report.branch == Branch::top ? "top" : "bottom";
  j["k"] = report.k;
  if (report.t) j["t"] = *report.t;
  if (report.epsilon) j["epsilon"] = *report.epsilon;
  j["best_theta"] = report.best_theta;
  j["bound"] = finite_or_null(report.bound);
  if (report.bound_clipped) j["bound_clipped"] = *report.bound_clipped;
  if (report.ground_truth) {
    j["ground_truth"] = *report.ground_truth;
    j["ground_truth_kind"] = report.ground_truth_kind;
  }
  if (report.slack) j["slack"] = *report.slack;
  j["curve"] = Json::array();
  for (const CurvePoint& pt : report.curve) {
    // invalid points carry a placeholder value; never serialize it as data
    j["curve"].push_back({{"theta", pt.theta},
                          {"value", pt.valid ? finite_or_null(pt.value)
                                             : Json(nullptr)},
                          {"valid", pt.valid}});
  }
  return j;
}

Json sample_stats_to_json(const SampleStats& stats) {
  Json j;
  j["sample_count"] = stats.sample_count;
  j["seed"] = stats.seed;
  j["n"] = stats.n;
  j["top_mean"] = stats.top_mean;
  j["top_stderr"] = stats.top_stderr;
  j["bot_mean"] = stats.bot_mean;
  j["bot_stderr"] = stats.bot_stderr;
  j["tails"] = Json::array();
  for (const auto& tail : stats.tails) {
    j["tails"].push_back({{"k", tail.k},
                          {"upper", tail.upper},
                          {"threshold", tail.threshold},
                          {"frequency", tail.frequency}});
  }
  return j;
}

Json suite_result_to_json(const SuiteResult& result) {
  Json j;
  j["suite"] = result.name;
  j["seed"] = result.seed;
  j["instances"] = result.instances;
  j["passed"] = result.passed;
  j["elapsed_seconds"] = result.elapsed_seconds;
  j["checks"] = Json::array();
  for (const CheckRow& row : result.rows) {
    j["checks"].push_back({{"label", row.label},
                           {"worst", finite_or_null(row.worst)},
                           {"limit", row.limit},
                           {"passed", row.passed}});
  }
  j["failures"] = result.failures;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_curve_csv(const BoundReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "theta,bound_value,valid\n";
  for (const CurvePoint& pt : report.curve) {
    out << format_double(pt.theta) << "," << format_double(pt.value) << ","
        << (pt.valid ? 1 : 0) << "\n";
  }
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_sample_stats_csv(const SampleStats& stats, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << "k,top_mean,top_stderr,bot_mean,bot_stderr\n";
  for (int k = 1; k <= stats.n; ++k) {
    out << k << "," << format_double(stats.top_mean[k - 1]) << ","
        << format_double(stats.top_stderr[k - 1]) << ","
        << format_double(stats.bot_mean[k - 1]) << ","
        << format_double(stats.bot_stderr[k - 1]) << "\n";
  }
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace ktrace
