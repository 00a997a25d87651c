#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/io.hpp"
#include "dpmbq/errors.hpp"

using namespace dpmbq;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "dpmbq_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_scratch(const std::string& name, const std::string& content) {
  const fs::path path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

std::string smooth_task_json() {
  return R"({"mixture": {"weights": [1.0], "means": [0.0], "sds": [1.0]},
             "polynomial": {"coefficients": [1.0, 1.0, -0.1], "exponents": [0, 1, 3]}})";
}

std::string small_sample_csv() {
  std::ostringstream out;
  out << "x1,f\n";
  const double xs[] = {-1.2, -0.7, -0.3, 0.0, 0.2, 0.5, 0.8, 1.1, 1.5, -0.1, 0.9, -1.6};
  for (double x : xs) out << x << ',' << 1.0 + x - 0.1 * x * x * x << '\n';
  return out.str();
}

int run_binary(const std::string& args, const fs::path& stdout_path) {
  const char* bin = std::getenv("DPMBQ_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "DPMBQ_BIN must point at the CLI binary");
  const std::string command =
      std::string(bin) + " " + args + " > " + stdout_path.string() + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("io: csv parsing accepts reordered columns") {
  const std::string text = "f, x2, x1\n1.5, 0.25, -1\n2.5, 0.5, 0\n";
  const SampleSet<double> samples = cli::parse_sample_csv(text);
  CHECK(samples.size() == 2);
  CHECK(samples.dims() == 2);
  CHECK(samples.locations(0, 0) == -1.0);
  CHECK(samples.locations(0, 1) == 0.25);
  CHECK(samples.values(1) == 2.5);
}

TEST_CASE("io: csv parse errors carry line and column") {
  const std::string bad_row = "x1,f\n0.0,1.0\n0.3,oops\n";
  try {
    (void)cli::parse_sample_csv(bad_row);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("column 5") != std::string::npos);
  }
  CHECK_THROWS_AS((void)cli::parse_sample_csv("x1,f\n1.0\n"), InvalidInput);
  CHECK_THROWS_AS((void)cli::parse_sample_csv("x1,g\n1.0,2.0\n"), InvalidInput);
  CHECK_THROWS_AS((void)cli::parse_sample_csv("x1,f\n"), InvalidInput);
}

TEST_CASE("io: json sample sets, flat and nested") {
  const SampleSet<double> flat =
      cli::parse_sample_json(R"({"x": [0.0, 1.0, 2.0], "f": [1.0, 2.0, 3.0]})");
  CHECK(flat.size() == 3);
  CHECK(flat.dims() == 1);

  const SampleSet<double> nested = cli::parse_sample_json(
      R"({"x": [[0.0, 1.0], [2.0, 3.0]], "f": [1.0, 2.0]})");
  CHECK(nested.size() == 2);
  CHECK(nested.dims() == 2);
  CHECK(nested.locations(1, 1) == 3.0);

  CHECK_THROWS_AS((void)cli::parse_sample_json(R"({"x": [0.0]})"), InvalidInput);
  CHECK_THROWS_AS((void)cli::parse_sample_json("{nope"), InvalidInput);
  CHECK_THROWS_AS(
      (void)cli::parse_sample_json(R"({"x": [[0.0], [1.0, 2.0]], "f": [1, 2]})"),
      InvalidInput);
}

TEST_CASE("io: task json round-trip") {
  const IntegrationTask task = cli::parse_task_json(smooth_task_json());
  CHECK(true_integral(task) == 1.0);
  CHECK_THROWS_AS((void)cli::parse_task_json(R"({"mixture": {}})"), InvalidInput);
  CHECK_THROWS_AS(
      (void)cli::parse_task_json(
          R"({"mixture": {"weights": [1], "means": [0], "sds": [1]},
              "polynomial": {"coefficients": [1], "exponents": [1.5]}})"),
      InvalidInput);
}

TEST_CASE("io: content hash is stable and content-sensitive") {
  CHECK(cli::content_hash("abc") == cli::content_hash("abc"));
  CHECK(cli::content_hash("abc") != cli::content_hash("abd"));
  CHECK(cli::content_hash("abc").rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("io: format_double round-trips") {
  for (double v : {0.5, 1.0 / 3.0, -123.456e-7, 42.0}) {
    CHECK(std::stod(cli::format_double(v)) == v);
  }
}

TEST_CASE("estimate: report schema and determinism") {
  const fs::path input = write_scratch("estimate_in.csv", small_sample_csv());
  cli::EstimateOptions options;
  options.input_path = input.string();
  options.draws = 40;
  options.burn_in_sweeps = 20;
  options.truncation = 100;
  options.seed = 7;
  options.levels = {0.5, 0.9};

  const std::string report = cli::estimate_report(options);
  CHECK(report == cli::estimate_report(options));

  const auto doc = nlohmann::json::parse(report);
  CHECK(doc.at("draws").size() == 40);
  CHECK(doc.at("intervals").contains("0.5"));
  CHECK(doc.at("intervals").contains("0.9"));
  CHECK(doc.at("meta").at("seed") == 7);
  CHECK(doc.at("meta").at("input").at("n") == 12);
  CHECK(doc.at("meta").at("config").at("draws") == 40);
  CHECK(doc.at("meta").at("failed_draws") == 0);
  const double lo = doc.at("intervals").at("0.9").at(0).get<double>();
  const double hi = doc.at("intervals").at("0.9").at(1).get<double>();
  CHECK(lo < hi);
  CHECK(doc.at("mean").get<double>() == doctest::Approx(1.0).epsilon(1.0));
}

TEST_CASE("estimate: standardize-f back-transforms the posterior") {
  const fs::path input = write_scratch("estimate_std.csv", small_sample_csv());
  cli::EstimateOptions options;
  options.input_path = input.string();
  options.draws = 30;
  options.burn_in_sweeps = 15;
  options.truncation = 80;
  options.seed = 3;

  const std::string plain = cli::estimate_report(options);
  options.standardize_f = true;
  const std::string standardized = cli::estimate_report(options);
  CHECK(plain != standardized);
  const auto doc = nlohmann::json::parse(standardized);
  CHECK(doc.at("meta").at("standardize_f") == true);
  // Posterior still lands near the true integral of the cubic task.
  CHECK(doc.at("mean").get<double>() == doctest::Approx(1.0).epsilon(1.0));
}

TEST_CASE("baseline: degenerate and textbook intervals") {
  const fs::path equal = write_scratch("baseline_equal.csv", "x1,f\n0,1\n1,1\n");
  cli::BaselineOptions options;
  options.input_path = equal.string();
  const auto equal_doc = nlohmann::json::parse(cli::baseline_report(options));
  CHECK(equal_doc.at("interval").at(0) == 1.0);
  CHECK(equal_doc.at("interval").at(1) == 1.0);

  const fs::path spread =
      write_scratch("baseline_spread.csv", "x1,f\n0,0\n1,0\n2,2\n3,2\n");
  options.input_path = spread.string();
  const auto doc = nlohmann::json::parse(cli::baseline_report(options));
  CHECK(doc.at("interval").at(0).get<double>() == doctest::Approx(0.558).epsilon(2e-3));
  CHECK(doc.at("interval").at(1).get<double>() == doctest::Approx(1.442).epsilon(2e-3));
  CHECK(doc.at("n") == 4);

  const fs::path single = write_scratch("baseline_single.csv", "x1,f\n0,1\n");
  options.input_path = single.string();
  CHECK_THROWS_AS((void)cli::baseline_report(options), InvalidInput);
}

TEST_CASE("coverage: csv schema, determinism and validation") {
  const fs::path task = write_scratch("coverage_task.json", smooth_task_json());
  cli::CoverageOptions options;
  options.task_path = task.string();
  options.ns = {5};
  options.trials = 3;
  options.baseline_trials = 5;
  options.draws = 30;
  options.burn_in_sweeps = 10;
  options.truncation = 50;
  options.seed = 11;

  const std::string report = cli::coverage_report(options);
  CHECK(report == cli::coverage_report(options));

  std::istringstream lines(report);
  std::string line;
  std::getline(lines, line);
  CHECK(line.rfind("# meta {", 0) == 0);
  std::getline(lines, line);
  CHECK(line == "method,n,trials,rate,se");
  std::getline(lines, line);
  CHECK(line.rfind("dpmbq,5,3,", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("t-interval,5,5,", 0) == 0);

  options.trials = 0;
  CHECK_THROWS_AS((void)cli::coverage_report(options), InvalidInput);
}

TEST_CASE("coverage: report is independent of the worker count") {
  const fs::path task = write_scratch("coverage_threads.json", smooth_task_json());
  cli::CoverageOptions options;
  options.task_path = task.string();
  options.ns = {4};
  options.trials = 4;
  options.baseline_trials = 4;
  options.draws = 20;
  options.burn_in_sweeps = 8;
  options.truncation = 40;
  options.seed = 19;

  setenv("DPMBQ_THREADS", "1", 1);
  const std::string serial = cli::coverage_report(options);
  setenv("DPMBQ_THREADS", "3", 1);
  const std::string threaded = cli::coverage_report(options);
  unsetenv("DPMBQ_THREADS");
  CHECK(serial == threaded);
}

TEST_CASE("convergence: synthetic power law recovers its slope exactly") {
  const fs::path task = write_scratch("convergence_task.json", smooth_task_json());
  cli::ConvergenceOptions options;
  options.task_path = task.string();
  options.n_grid = {10, 20, 40, 80, 160};
  options.reps = 4;
  options.seed = 13;

  const std::string report = cli::convergence_report(
      options, [](int n, int) { return 2.0 * std::pow(n, -0.25); });

  std::istringstream lines(report);
  std::string meta_line;
  std::getline(lines, meta_line);
  const auto meta = nlohmann::json::parse(meta_line.substr(std::string("# meta ").size()));
  CHECK(meta.at("fit").at("slope").get<double>() == doctest::Approx(-0.25).epsilon(1e-12));

  std::string header;
  std::getline(lines, header);
  CHECK(header == "n,rep,wasserstein");
  std::string row;
  std::getline(lines, row);
  CHECK(row.rfind("10,0,", 0) == 0);
}

TEST_CASE("convergence: tiny sampler-backed run is deterministic") {
  const fs::path task = write_scratch("convergence_small.json", smooth_task_json());
  cli::ConvergenceOptions options;
  options.task_path = task.string();
  options.n_grid = {4, 8};
  options.reps = 2;
  options.draws = 25;
  options.burn_in_sweeps = 10;
  options.truncation = 40;
  options.seed = 17;

  const std::string report = cli::convergence_report(options);
  CHECK(report == cli::convergence_report(options));
  CHECK(report.find("n,rep,wasserstein") != std::string::npos);

  options.n_grid = {8, 4};
  CHECK_THROWS_AS((void)cli::convergence_report(options), InvalidInput);
}

TEST_CASE("cli binary: exit codes for missing and malformed input") {
  const fs::path out = scratch_dir() / "exit_codes.out";
  CHECK(run_binary("baseline --input /nonexistent/file.csv", out) == 2);
  const fs::path bad = write_scratch("bad_input.csv", "x1,f\n1.0,oops\n2.0,3.0\n");
  CHECK(run_binary("baseline --input " + bad.string(), out) == 2);
  CHECK(run_binary("estimate --input " + bad.string() + " --draws 5", out) == 2);
  CHECK(run_binary("nonsense-subcommand", out) == 2);
}

TEST_CASE("cli binary: successful baseline run") {
  const fs::path input = write_scratch("bin_baseline.csv", "x1,f\n0,0\n1,0\n2,2\n3,2\n");
  const fs::path out = scratch_dir() / "bin_baseline.out";
  CHECK(run_binary("baseline --input " + input.string() + " --level 0.5", out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("mean") == 1.0);
}
