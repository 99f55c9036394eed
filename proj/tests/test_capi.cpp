#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <doctest.h>

#include "locreg.h"

namespace {

double zero_drift(double, double, void*) { return 0.0; }
double unit_sigma(double, double, void*) { return 1.0; }

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and catalog") {
  CHECK(std::strlen(lr_version()) > 0);
  const std::string catalog = lr_scheme_catalog();
  CHECK(catalog.find("| J |") != std::string::npos);
  CHECK(lr_downcrossing_factor() == 2.64);
}

TEST_CASE("path lifecycle and estimation") {
  lr_path* p = nullptr;
  REQUIRE(lr_path_brownian(1.0, 1 << 10, 0.0, 42, 0, &p) == LR_OK);
  CHECK(lr_path_num_steps(p) == 1 << 10);
  CHECK(lr_path_horizon(p) == 1.0);
  CHECK(lr_path_values(p)[0] == 0.0);

  lr_path* d = nullptr;
  REQUIRE(lr_path_diffusion(1.0, 1 << 10, 0.0, zero_drift, nullptr, unit_sigma, nullptr, 42, 0,
                            &d) == LR_OK);
  for (int i = 0; i <= (1 << 10); ++i) CHECK(lr_path_values(d)[i] == lr_path_values(p)[i]);
  lr_path_free(d);

  lr_curve* c = nullptr;
  REQUIRE(lr_estimate(p, "J", 0.0, 16, &c) == LR_OK);
  CHECK(lr_curve_size(c) == (1 << 10) + 1);
  CHECK(lr_curve_values(c)[0] == 0.0);
  lr_curve_free(c);

  lr_curve* oracle = nullptr;
  REQUIRE(lr_oracle(p, "TANAKA", 0.0, 0.0, &oracle) == LR_OK);
  CHECK(lr_curve_size(oracle) == (1 << 10) + 1);
  lr_curve_free(oracle);

  lr_curve* lhs = nullptr;
  lr_curve* rhs = nullptr;
  REQUIRE(lr_weak_pairing_hat(p, 16, &lhs, &rhs) == LR_OK);
  CHECK(lr_curve_values(lhs)[0] == 0.0);
  lr_curve_free(lhs);
  lr_curve_free(rhs);

  lr_path* rev = nullptr;
  REQUIRE(lr_path_reverse(p, &rev) == LR_OK);
  CHECK(lr_path_values(rev)[0] == lr_path_values(p)[1 << 10]);
  lr_path_free(rev);
  lr_path_free(p);
}

TEST_CASE("error codes map to categories") {
  lr_path* p = nullptr;
  CHECK(lr_path_brownian(-1.0, 4, 0.0, 0, 0, &p) == LR_ERR_CONFIG);
  CHECK(std::strlen(lr_last_error()) > 0);

  REQUIRE(lr_path_brownian(1.0, 100, 0.0, 0, 0, &p) == LR_OK);
  lr_curve* c = nullptr;
  CHECK(lr_estimate(p, "J", 0.0, 0, &c) == LR_ERR_ALIGN);
  CHECK(lr_estimate(p, "J", 0.0, 101, &c) == LR_ERR_ALIGN);
  CHECK(lr_estimate(p, "NOPE", 0.0, 10, &c) == LR_ERR_CONFIG);
  CHECK(lr_path_save_csv(p, "/nonexistent/dir/x.csv") == LR_ERR_IO);
  lr_path_free(p);

  CHECK(lr_path_load_csv("/nonexistent/dir/x.csv", &p) == LR_ERR_IO);
  char* report = nullptr;
  CHECK(lr_run_experiment("{not json", nullptr, 0, &report) == LR_ERR_CONFIG);
  CHECK(lr_run_experiment("{\"ladder\": [0.3], \"grid_log2\": 10, \"num_paths\": 1}", nullptr, 0,
                          &report) == LR_ERR_ALIGN);
}

TEST_CASE("experiment round trip through json configs") {
  const char* config =
      "{\"process\": \"brownian\", \"scheme\": \"QV\", \"target\": \"QV_T\","
      " \"grid_log2\": 10, \"ladder\": [0.125, 0.0625, 0.03125],"
      " \"num_paths\": 8, \"master_seed\": 3}";
  char* report = nullptr;
  REQUIRE(lr_run_experiment(config, nullptr, 0, &report) == LR_OK);
  const std::string text(report);
  lr_string_free(report);
  CHECK(text.find("\"kind\": \"convergence\"") != std::string::npos);
  CHECK(text.find("\"scheme\": \"QV\"") != std::string::npos);

  // overrides win over file values
  const char* overrides[] = {"num_paths=4", "scheme=\"J\"", "target=\"L\""};
  char* overridden = nullptr;
  REQUIRE(lr_run_experiment(config, overrides, 3, &overridden) == LR_OK);
  const std::string text2(overridden);
  lr_string_free(overridden);
  CHECK(text2.find("\"scheme\": \"J\"") != std::string::npos);
  CHECK(text2.find("\"num_paths\": 4") != std::string::npos);
}

TEST_CASE("fit rate through the c surface") {
  const double eps[] = {0.4, 0.2, 0.1};
  const double errors[] = {0.4, 0.2, 0.1};
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  REQUIRE(lr_fit_rate(eps, errors, 3, &slope, &intercept, &r2) == LR_OK);
  CHECK(std::abs(slope - 1.0) < 1e-12);
  const double bad[] = {0.4, 0.0, 0.1};
  CHECK(lr_fit_rate(eps, bad, 3, &slope, &intercept, &r2) == LR_ERR_CONFIG);
}

TEST_CASE("command layer writes outputs and honors gates") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "locreg_capi_cmd";
  fs::remove_all(dir);

  char* summary = nullptr;
  const char* sim_cfg = "{\"process\": \"constant\", \"x0\": 1.0, \"num_steps\": 16,"
                        " \"num_paths\": 2}";
  REQUIRE(lr_cmd_simulate(sim_cfg, nullptr, 0, (dir / "sim").c_str(), &summary) == LR_OK);
  lr_string_free(summary);
  CHECK(fs::exists(dir / "sim" / "path_000.csv"));
  CHECK(fs::exists(dir / "sim" / "path_001.csv"));

  const char* est_cfg = "{\"process\": \"brownian\", \"num_steps\": 256, \"eps\": 0.0625,"
                        " \"schemes\": [\"J\", \"I1\", \"I2\", \"I3\", \"I31\", \"I32\", \"R3\"]}";
  summary = nullptr;
  REQUIRE(lr_cmd_estimate(est_cfg, nullptr, 0, (dir / "est").c_str(), LR_FLAG_CHECK_IDENTITIES,
                          &summary) == LR_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("identities hold") != std::string::npos);
  lr_string_free(summary);
  CHECK(fs::exists(dir / "est" / "curve_J.csv"));

  const char* conv_cfg = "{\"process\": \"brownian\", \"scheme\": \"QV\", \"grid_log2\": 10,"
                         " \"ladder\": [0.125, 0.0625, 0.03125], \"num_paths\": 8,"
                         " \"terminal_error_max\": 1e-9}";
  // the tiny terminal gate cannot hold: with --enforce this is a gate failure
  summary = nullptr;
  CHECK(lr_cmd_converge(conv_cfg, nullptr, 0, (dir / "conv").c_str(),
                        LR_FLAG_ENFORCE | LR_FLAG_NO_TIMINGS, &summary) == LR_ERR_GATE);
  lr_string_free(summary);
  CHECK(fs::exists(dir / "conv" / "report.json"));
  CHECK(fs::exists(dir / "conv" / "rungs.csv"));
  // without the gate the same run succeeds
  summary = nullptr;
  CHECK(lr_cmd_converge(conv_cfg, nullptr, 0, (dir / "conv2").c_str(), LR_FLAG_NO_TIMINGS,
                        &summary) == LR_OK);
  lr_string_free(summary);

  char* markdown = nullptr;
  const std::string report_file = (dir / "conv" / "report.json").string();
  const char* inputs[] = {report_file.c_str()};
  REQUIRE(lr_cmd_report(inputs, 1, &markdown) == LR_OK);
  CHECK(std::string(markdown).find("| QV |") != std::string::npos);
  lr_string_free(markdown);

  fs::remove_all(dir);
}

}  // TEST_SUITE
