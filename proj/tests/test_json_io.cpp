#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ktrace/ensemble.hpp"
#include "ktrace/errors.hpp"
#include "ktrace/json_io.hpp"
#include "ktrace/random.hpp"

using namespace ktrace;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ktrace_json_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("matrix serialization round trip") {
  Rng rng(91);
  CMatrix a = gaussian_matrix(rng, 3, 3);
  Json j = matrix_to_json(a);
  CMatrix back = matrix_from_json(j);
  CHECK((a - back).norm() == 0.0);

  // a real matrix omits its imaginary block
  CMatrix r = CMatrix::Zero(2, 2);
  r(0, 0) = 1.5;
  r(1, 0) = -2.0;
  Json jr = matrix_to_json(r);
  CHECK_FALSE(jr.contains("im"));
  CHECK((matrix_from_json(jr) - r).norm() == 0.0);

  // and parses fine without one
  Json hand = Json::parse(R"({"re": [[1, 2], [2, 5]]})");
  CMatrix h = matrix_from_json(hand);
  CHECK(h(0, 1) == Complex(2, 0));

  // ragged rows are rejected
  Json ragged = Json::parse(R"({"re": [[1, 2], [3]]})");
  CHECK_THROWS_AS(matrix_from_json(ragged), ConfigError);
}

TEST_CASE("ensemble serialization round trip") {
  auto spec = er_laplacian_ensemble(4, 0.3, 2.0);
  Json j = ensemble_to_json(spec);
  auto back = ensemble_from_json(j);
  CHECK(back.n == spec.n);
  REQUIRE(back.summands.size() == spec.summands.size());
  REQUIRE(back.c.has_value());
  CHECK(*back.c == *spec.c);
  CHECK(back.psd_flag == spec.psd_flag);
  for (size_t i = 0; i < spec.summands.size(); ++i) {
    REQUIRE(back.summands[i].atoms.size() == spec.summands[i].atoms.size());
    for (size_t a = 0; a < spec.summands[i].atoms.size(); ++a) {
      CHECK(back.summands[i].atoms[a].probability ==
            spec.summands[i].atoms[a].probability);
      CHECK((back.summands[i].atoms[a].matrix.mat() -
             spec.summands[i].atoms[a].matrix.mat()).norm() == 0.0);
    }
  }
}

TEST_CASE("family reference expands in place") {
  Json whole = Json::parse(
      R"({"family": "er_laplacian", "params": {"n": 5, "p": 0.5, "w_max": 1.0}})");
  auto spec = ensemble_from_json(whole);
  CHECK(spec.n == 5);
  CHECK(int(spec.summands.size()) == 10);
  REQUIRE(spec.c.has_value());
  CHECK(*spec.c == 2.0);

  // family nested in a summand list, with dimension cross-checked
  Json nested = Json::parse(R"({
    "dimension": 5,
    "summands": [
      {"family": "er_laplacian", "params": {"n": 5, "p": 0.5, "w_max": 1.0}}
    ]
  })");
  auto spec2 = ensemble_from_json(nested);
  CHECK(spec2.n == 5);
  CHECK(int(spec2.summands.size()) == 10);

  // explicit file-level c wins over the family default
  Json with_c = whole;
  with_c["c"] = 7.5;
  auto spec3 = ensemble_from_json(with_c);
  CHECK(*spec3.c == 7.5);

  // dimension conflicting with the family parameters is an error
  Json conflict = nested;
  conflict["dimension"] = 6;
  CHECK_THROWS_AS(ensemble_from_json(conflict), ConfigError);

  Json unknown = Json::parse(
      R"({"family": "heisenberg", "params": {"n": 3}})");
  CHECK_THROWS_AS(ensemble_from_json(unknown), ConfigError);
}

TEST_CASE("malformed ensembles are configuration errors") {
  CHECK_THROWS_AS(ensemble_from_json(Json::parse(R"({"summands": []})")),
                  ConfigError);
  // probabilities that do not sum to one
  Json bad = Json::parse(R"({
    "dimension": 1,
    "summands": [{"atoms": [
      {"p": 0.5, "matrix": {"re": [[1]]}},
      {"p": 0.4, "matrix": {"re": [[0]]}}
    ]}]
  })");
  CHECK_THROWS_AS(ensemble_from_json(bad), ConfigError);
  // atom exceeding the declared uniform bound
  Json overc = Json::parse(R"({
    "dimension": 1,
    "c": 0.5,
    "summands": [{"atoms": [{"p": 1.0, "matrix": {"re": [[1]]}}]}]
  })");
  CHECK_THROWS_AS(ensemble_from_json(overc), ConfigError);
}

TEST_CASE("file round trip and parse failures") {
  auto dir = temp_dir();
  auto path = (dir / "ensemble.json").string();
  write_json_file(ensemble_to_json(er_laplacian_ensemble(3, 0.5, 1.0)), path);
  auto spec = load_ensemble(path);
  CHECK(spec.n == 3);
  CHECK(int(spec.summands.size()) == 3);

  auto broken = (dir / "broken.json").string();
  std::ofstream(broken) << "{ not json";
  CHECK_THROWS_AS(read_json_file(broken), ConfigError);
  CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()),
                  ConfigError);
}

TEST_CASE("report serialization") {
  auto spec = er_laplacian_ensemble(4, 0.5, 1.0);
  auto grid = default_theta_grid(spec);
  auto report = master_expectation_bound(spec, 1, grid, Branch::top);
  attach_ground_truth(report, 1.9, "monte_carlo");

  Json j = bound_report_to_json(report);
  CHECK(j["kind"] == "master_expectation");
  CHECK(j["branch"] == "top");
  CHECK(j["k"] == 1);
  CHECK(j["bound"].get<double>() == report.bound);
  CHECK(j["ground_truth"].get<double>() == 1.9);
  CHECK(j["ground_truth_kind"] == "monte_carlo");
  CHECK(j["slack"].get<double>() == doctest::Approx(report.bound - 1.9));
  REQUIRE(j["curve"].is_array());
  CHECK(j["curve"].size() == grid.points.size());
  // invalid points serialize with a null value
  bool saw_invalid = false;
  for (const auto& pt : j["curve"]) {
    if (pt["valid"] == false) {
      saw_invalid = true;
      CHECK(pt["value"].is_null());
    }
  }
  // with atom spread 2 the conditioning edge sits at theta = 6, well inside
  // the grid's reach of 25, so invalid points must appear
  CHECK(saw_invalid);
}

TEST_CASE("sample stats serialization") {
  auto spec = er_laplacian_ensemble(3, 0.5, 1.0);
  auto stats = sample_sum(spec, 11, 100, {{1, true, 2.0}});
  Json j = sample_stats_to_json(stats);
  CHECK(j["sample_count"] == 100);
  CHECK(j["seed"] == 11);
  CHECK(j["top_mean"].size() == 3);
  REQUIRE(j["tails"].size() == 1);
  CHECK(j["tails"][0]["k"] == 1);
  CHECK(j["tails"][0]["upper"] == true);
}

TEST_CASE("doubles print round-trip exact") {
  for (double v : {0.1, 1.0 / 3.0, 2.3e-308, 12345.6789, -1e300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("csv outputs") {
  auto dir = temp_dir();
  auto spec = er_laplacian_ensemble(3, 0.5, 1.0);
  auto grid = default_theta_grid(spec);
  auto report = master_expectation_bound(spec, 1, grid, Branch::top);

  auto curve_path = dir / "curve.csv";
  write_curve_csv(report, curve_path.string());
  std::string curve = slurp(curve_path);
  CHECK(curve.rfind("theta,bound_value,valid\n", 0) == 0);
  // header plus one line per grid point
  CHECK(std::count(curve.begin(), curve.end(), '\n') ==
        long(grid.points.size()) + 1);

  auto stats = sample_sum(spec, 11, 50);
  auto stats_path = dir / "stats.csv";
  write_sample_stats_csv(stats, stats_path.string());
  std::string sc = slurp(stats_path);
  CHECK(sc.rfind("k,top_mean,top_stderr,bot_mean,bot_stderr\n", 0) == 0);
  CHECK(std::count(sc.begin(), sc.end(), '\n') == 3 + 1);
}
