#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ktrace/bounds.hpp"
#include "ktrace/ensemble.hpp"
#include "ktrace/errors.hpp"
#include "ktrace/json_io.hpp"
#include "ktrace/verify.hpp"

namespace fs = std::filesystem;
using namespace ktrace;

namespace {

struct Options {
  std::vector<std::string> suites{"all"};
  std::string in;
  std::string out;
  std::string format;
  std::uint64_t seed = 2026;
  int instances = 0;
  int n = 0;
  int k = 0;
  double tol = 0.0;
  std::int64_t samples = 0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  int theta_points = 0;
  std::optional<double> tail_t;
  std::optional<double> tail_epsilon;
};

ThetaGrid make_grid(const Options& opt, const EnsembleSpec& spec) {
  if (opt.theta_min <= 0.0 && opt.theta_max <= 0.0 && opt.theta_points <= 0) {
    return default_theta_grid(spec);
  }
  double c_eff = max_atom_spectral_norm(spec);
  double lo = opt.theta_min > 0.0 ? opt.theta_min : 1e-3;
  double hi = opt.theta_max > 0.0 ? opt.theta_max
                                  : (c_eff > 0.0 ? 50.0 / c_eff : 50.0);
  int points = opt.theta_points > 0 ? opt.theta_points : 64;
  if (hi <= lo) throw ArgumentError("theta grid: need --theta-max > --theta-min");
  return ThetaGrid::log_spaced(lo, hi, points);
}

Json config_echo(const Options& opt, const ThetaGrid* grid) {
  Json j;
  j["seed"] = opt.seed;
  if (!opt.in.empty()) j["input"] = opt.in;
  if (opt.instances > 0) j["instances"] = opt.instances;
  if (opt.n > 0) j["n"] = opt.n;
  if (opt.k > 0) j["k"] = opt.k;
  if (opt.tol > 0.0) j["tol"] = opt.tol;
  if (opt.samples > 0) j["samples"] = opt.samples;
  if (grid) {
    j["theta_grid"] = {{"min", grid->points.front()},
                       {"max", grid->points.back()},
                       {"points", grid->points.size()}};
  }
  return j;
}

int run_verify(const Options& opt) {
  SuiteConfig config;
  config.seed = opt.seed;
  config.instances = opt.instances;
  config.n = opt.n;
  config.k = opt.k;
  config.tol = opt.tol;
  config.samples = int(opt.samples);

  std::vector<std::string> selected;
  for (const auto& name : opt.suites) {
    if (name == "all") {
      for (const auto& known : suite_names()) selected.push_back(known);
    } else {
      selected.push_back(name);
    }
  }

  bool all_passed = true;
  Json report;
  report["config"] = config_echo(opt, nullptr);
  report["suites"] = Json::array();
  for (const auto& name : selected) {
    SuiteResult result = run_suite(name, config);
    all_passed = all_passed && result.passed;
    std::fprintf(stderr, "[%s] %-14s %6d instances  %7.2f s\n",
                 result.passed ? "PASS" : "FAIL", result.name.c_str(),
                 result.instances, result.elapsed_seconds);
    if (!result.passed) {
      for (const CheckRow& row : result.rows) {
        if (!row.passed) {
          std::fprintf(stderr, "       %s: worst %.4e, limit %.4e\n",
                       row.label.c_str(), row.worst, row.limit);
        }
      }
    }
    report["suites"].push_back(suite_result_to_json(result));
  }
  report["all_passed"] = all_passed;
  if (opt.out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    write_json_file(report, opt.out);
    std::fprintf(stderr, "report written to %s\n", opt.out.c_str());
  }
  return all_passed ? 0 : 1;
}

std::string csv_name(const BoundReport& report) {
  std::string branch = report.branch == Branch::top ? "top" : "bottom";
  return "curve_" + report.kind + "_" + branch + "_k" +
         std::to_string(report.k) + ".csv";
}

int run_bound(const Options& opt) {
  if (opt.in.empty()) throw ArgumentError("bound: --in ensemble file required");
  EnsembleSpec spec = load_ensemble(opt.in);
  std::string outdir = opt.out.empty() ? "." : opt.out;
  fs::create_directories(outdir);
  ThetaGrid grid = make_grid(opt, spec);

  std::vector<int> ks;
  if (opt.k > 0) {
    if (opt.k > spec.n) throw ArgumentError("bound: k exceeds dimension");
    ks.push_back(opt.k);
  } else {
    for (int k = 1; k <= std::min(spec.n, 3); ++k) ks.push_back(k);
  }

  bool chernoff_ok = spec.c.has_value() && spec.psd_flag;
  constexpr std::int64_t kExhaustiveCap = 1000000;
  bool exhaustive_ok =
      joint_support_size(spec.summands, kExhaustiveCap) <= kExhaustiveCap;

  for (int k : ks) {
    std::vector<BoundReport> reports;
    reports.push_back(master_expectation_bound(spec, k, grid, Branch::top));
    reports.push_back(master_expectation_bound(spec, k, grid, Branch::bottom));
    if (chernoff_ok) {
      auto [cu, cl] = chernoff_expectation_bounds(spec, k, grid);
      auto [su, sl] = subspace_comparison_bounds(spec, k, grid);
      reports.push_back(cu);
      reports.push_back(cl);
      reports.push_back(su);
      reports.push_back(sl);
    }
    if (opt.tail_t) {
      reports.push_back(master_tail_bound(spec, k, *opt.tail_t, grid,
                                          Branch::top));
      reports.push_back(master_tail_bound(spec, k, *opt.tail_t, grid,
                                          Branch::bottom));
    }
    if (opt.tail_epsilon && chernoff_ok) {
      auto [tu, tl] = chernoff_tail_bounds(spec, k, *opt.tail_epsilon);
      reports.push_back(tu);
      reports.push_back(tl);
    }

    if (exhaustive_ok) {
      ExhaustiveStats exact = exhaustive_expectations(spec, k);
      for (BoundReport& report : reports) {
        if (report.kind.find("tail") != std::string::npos) {
          if (!report.t) continue;
          double truth = report.branch == Branch::top
                             ? exact.top_tail_ge(*report.t)
                             : exact.bot_tail_le(*report.t);
          attach_ground_truth(report, truth, "exhaustive");
        } else {
          double truth = report.branch == Branch::top ? exact.top_mean
                                                      : exact.bot_mean;
          attach_ground_truth(report, truth, "exhaustive");
        }
      }
    } else if (opt.samples > 0) {
      SampleStats stats = sample_sum(spec, opt.seed, opt.samples);
      for (BoundReport& report : reports) {
        if (report.kind.find("tail") != std::string::npos) continue;
        double truth = report.branch == Branch::top
                           ? stats.top_mean[k - 1]
                           : stats.bot_mean[k - 1];
        attach_ground_truth(report, truth, "monte_carlo");
      }
    }

    Json file;
    file["config"] = config_echo(opt, &grid);
    file["config"]["n"] = spec.n;
    file["config"]["k"] = k;
    if (spec.c) file["config"]["c"] = *spec.c;
    file["reports"] = Json::array();
    for (const BoundReport& report : reports) {
      file["reports"].push_back(bound_report_to_json(report));
      write_curve_csv(report, outdir + "/" + csv_name(report));
    }
    std::string path = outdir + "/bounds_k" + std::to_string(k) + ".json";
    write_json_file(file, path);
    std::fprintf(stderr, "wrote %s (%zu reports)\n", path.c_str(),
                 reports.size());
  }
  return 0;
}

int run_simulate(const Options& opt) {
  if (opt.in.empty()) {
    throw ArgumentError("simulate: --in ensemble file required");
  }
  if (opt.samples < 1) {
    throw ArgumentError("simulate: --samples must be at least 1");
  }
  EnsembleSpec spec = load_ensemble(opt.in);
  std::string outdir = opt.out.empty() ? "." : opt.out;
  fs::create_directories(outdir);
  SampleStats stats = sample_sum(spec, opt.seed, opt.samples);

  Json file;
  file["config"] = config_echo(opt, nullptr);
  file["stats"] = sample_stats_to_json(stats);
  if (opt.format.empty() || opt.format == "json") {
    write_json_file(file, outdir + "/stats.json");
  }
  if (opt.format.empty() || opt.format == "csv") {
    write_sample_stats_csv(stats, outdir + "/stats.csv");
  }
  std::fprintf(stderr, "simulated %lld samples at seed %llu\n",
               (long long)opt.samples, (unsigned long long)opt.seed);
  return 0;
}

std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct ReportRow {
  int k = 0;
  std::string branch;
  std::optional<double> truth;
  std::string truth_kind;
  std::optional<double> master, chernoff, subspace;
  double log_binom = 0.0;
  double log_fall = 0.0;
};

int run_report(const Options& opt) {
  std::string indir = opt.in.empty() ? "." : opt.in;
  if (!fs::exists(indir)) {
    throw ConfigError("report: input directory '" + indir + "' does not exist");
  }
  std::vector<std::pair<int, Json>> files;
  for (const auto& entry : fs::directory_iterator(indir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("bounds_k", 0) == 0 && name.size() > 13 &&
        name.substr(name.size() - 5) == ".json") {
      int k = std::atoi(name.substr(8, name.size() - 13).c_str());
      files.emplace_back(k, read_json_file(entry.path().string()));
    }
  }
  if (files.empty()) {
    throw ConfigError("report: no bounds_k*.json in '" + indir +
                      "'; run the bound command first");
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Json stats;
  bool have_stats = fs::exists(indir + "/stats.json");
  if (have_stats) stats = read_json_file(indir + "/stats.json")["stats"];

  std::vector<ReportRow> rows;
  for (const auto& [k, file] : files) {
    int n = file.at("config").at("n").get<int>();
    for (const std::string branch : {"top", "bottom"}) {
      ReportRow row;
      row.k = k;
      row.branch = branch;
      row.log_binom = log_binomial(n, k);
      row.log_fall = log_falling_factorial(n, k);
      for (const Json& report : file.at("reports")) {
        if (report.at("branch").get<std::string>() != branch) continue;
        std::string kind = report.at("kind").get<std::string>();
        if (!report.at("bound").is_number()) continue;
        double bound = report.at("bound").get<double>();
        if (kind == "master_expectation") {
          row.master = bound;
          if (report.contains("ground_truth")) {
            row.truth = report["ground_truth"].get<double>();
            row.truth_kind = report.value("ground_truth_kind", "");
          }
        } else if (kind == "chernoff_expectation") {
          row.chernoff = bound;
        } else if (kind == "subspace_expectation") {
          row.subspace = bound;
        }
      }
      if (!row.truth && have_stats) {
        const auto& means = branch == "top" ? stats.at("top_mean")
                                            : stats.at("bot_mean");
        if (k - 1 < int(means.size())) {
          row.truth = means[k - 1].get<double>();
          row.truth_kind = "monte_carlo";
        }
      }
      rows.push_back(std::move(row));
    }
  }

  std::string outdir = opt.out.empty() ? indir : opt.out;
  fs::create_directories(outdir);
  auto opt_cell = [](const std::optional<double>& v) {
    return v ? cell(*v) : std::string("-");
  };

  if (opt.format.empty() || opt.format == "md") {
    std::ofstream md(outdir + "/report.md");
    if (!md) throw ConfigError("cannot write report.md");
    md << "# Bound comparison\n\n";
    md << "| k | branch | ground truth | truth kind | master | chernoff | "
          "subspace | ln C(n,k) | ln prod (n-i+1) |\n";
    md << "|---|--------|--------------|------------|--------|----------|"
          "----------|-----------|------------------|\n";
    for (const ReportRow& row : rows) {
      md << "| " << row.k << " | " << row.branch << " | "
         << opt_cell(row.truth) << " | "
         << (row.truth_kind.empty() ? "-" : row.truth_kind) << " | "
         << opt_cell(row.master) << " | " << opt_cell(row.chernoff) << " | "
         << opt_cell(row.subspace) << " | " << cell(row.log_binom) << " | "
         << cell(row.log_fall) << " |\n";
    }
    std::fprintf(stderr, "wrote %s/report.md\n", outdir.c_str());
  }
  if (opt.format.empty() || opt.format == "csv") {
    std::ofstream csv(outdir + "/report.csv");
    if (!csv) throw ConfigError("cannot write report.csv");
    csv << "k,branch,ground_truth,truth_kind,master,chernoff,subspace,"
           "log_binomial,log_falling_factorial\n";
    auto csv_cell = [](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string("");
    };
    for (const ReportRow& row : rows) {
      csv << row.k << "," << row.branch << "," << csv_cell(row.truth) << ","
          << row.truth_kind << "," << csv_cell(row.master) << ","
          << csv_cell(row.chernoff) << "," << csv_cell(row.subspace) << ","
          << format_double(row.log_binom) << "," << format_double(row.log_fall)
          << "\n";
    }
    std::fprintf(stderr, "wrote %s/report.csv\n", outdir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"k-trace calculus toolkit: property suites, spectral-sum "
               "bounds, and Monte-Carlo simulation"};
  app.require_subcommand(1);

  CLI::App* verify = app.add_subcommand(
      "verify", "run property suites against random instances");
  verify->add_option("--suite", opt.suites,
                     "suite names, or 'all' (default)");
  verify->add_option("--instances", opt.instances, "instance count override");
  verify->add_option("--seed", opt.seed, "base seed");
  verify->add_option("--n", opt.n, "fix the matrix dimension");
  verify->add_option("--k", opt.k, "fix the order k");
  verify->add_option("--tol", opt.tol, "multiply all suite tolerances");
  verify->add_option("--samples", opt.samples,
                     "Monte-Carlo sample count override");
  verify->add_option("--out", opt.out, "write the JSON report here");

  CLI::App* bound = app.add_subcommand(
      "bound", "evaluate bounds for an ensemble spec file");
  bound->add_option("--in", opt.in, "ensemble JSON file")->required();
  bound->add_option("--out", opt.out, "output directory (default .)");
  bound->add_option("--k", opt.k, "single order k (default 1..min(n,3))");
  bound->add_option("--seed", opt.seed, "seed for Monte-Carlo ground truth");
  bound->add_option("--samples", opt.samples,
                    "Monte-Carlo ground-truth sample count (0 = exhaustive "
                    "only)");
  bound->add_option("--theta-min", opt.theta_min, "grid lower endpoint");
  bound->add_option("--theta-max", opt.theta_max, "grid upper endpoint");
  bound->add_option("--theta-points", opt.theta_points, "grid size");
  double tail_t = 0.0, tail_eps = 0.0;
  CLI::Option* t_opt =
      bound->add_option("--t", tail_t, "also emit tail bounds at threshold t");
  CLI::Option* eps_opt = bound->add_option(
      "--epsilon", tail_eps, "also emit Chernoff tail bounds at deviation "
      "epsilon");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "sample the ensemble sum and report spectral-sum statistics");
  simulate->add_option("--in", opt.in, "ensemble JSON file")->required();
  simulate->add_option("--out", opt.out, "output directory (default .)");
  simulate->add_option("--samples", opt.samples, "sample count");
  simulate->add_option("--seed", opt.seed, "sampling seed");
  simulate->add_option("--format", opt.format, "json or csv (default both)")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* report = app.add_subcommand(
      "report", "tabulate bound outputs against ground truth");
  report->add_option("--in", opt.in, "directory with bound command outputs");
  report->add_option("--out", opt.out, "output directory (default --in)");
  report->add_option("--format", opt.format, "md or csv (default both)")
      ->check(CLI::IsMember({"md", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (t_opt->count() > 0) opt.tail_t = tail_t;
  if (eps_opt->count() > 0) opt.tail_epsilon = tail_eps;

  try {
    if (verify->parsed()) return run_verify(opt);
    if (bound->parsed()) return run_bound(opt);
    if (simulate->parsed()) return run_simulate(opt);
    if (report->parsed()) return run_report(opt);
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
