// End-to-end checks of the installed command-line interface; every call goes
// through the real binary.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include <doctest.h>

namespace fs = std::filesystem;

namespace {

#ifndef LOCREG_CLI_PATH
#define LOCREG_CLI_PATH "locreg"
#endif

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LOCREG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string run_cli_stdout(const std::string& args, const fs::path& tmp) {
  const fs::path out_file = tmp / "stdout.txt";
  const std::string cmd =
      std::string(LOCREG_CLI_PATH) + " " + args + " >" + out_file.string() + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  (void)rc;
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& file, const std::string& text) {
  std::ofstream out(file);
  out << text;
}

std::size_t line_count(const fs::path& file) {
  std::ifstream in(file);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  return lines;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / fs::path("locreg_cli_test")) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes the fixture ensembles reproducibly") {
  TempDir tmp;
  const struct {
    const char* name;
    const char* body;
  } fixtures[] = {
      {"brownian", "{\"process\": \"brownian\", \"num_steps\": 64, \"num_paths\": 2}"},
      {"ou", "{\"process\": \"ou\", \"ou_theta\": 1.0, \"num_steps\": 64, \"num_paths\": 1}"},
      {"linear", "{\"process\": \"linear\", \"lin_slope\": 1.0, \"num_steps\": 64}"},
  };
  for (const auto& f : fixtures) {
    const fs::path cfg = tmp.path / (std::string(f.name) + ".json");
    write(cfg, f.body);
    const fs::path out1 = tmp.path / (std::string(f.name) + "_run1");
    const fs::path out2 = tmp.path / (std::string(f.name) + "_run2");
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out1.string()) == 0);
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out2.string()) == 0);
    // header + 65 grid points
    CHECK(line_count(out1 / "path_000.csv") == 66);
    CHECK(slurp(out1 / "path_000.csv") == slurp(out2 / "path_000.csv"));
    CHECK(slurp(out1 / "path_000.csv").rfind("t,x\n", 0) == 0);
  }

  const fs::path const_cfg = tmp.path / "const.json";
  write(const_cfg, "{\"process\": \"constant\", \"x0\": 1.0, \"num_steps\": 8}");
  const fs::path out = tmp.path / "const_out";
  CHECK(run_cli("simulate --config " + const_cfg.string() + " --out " + out.string()) == 0);
  std::ifstream in(out / "path_000.csv");
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
    CHECK(line.substr(line.find(',') + 1) == "1");
}

TEST_CASE("estimate emits curves and checks identities") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "est.json";
  write(cfg,
        "{\"process\": \"constant\", \"x0\": 2.0, \"num_steps\": 32, \"eps\": 0.25,"
        " \"schemes\": [\"J\", \"I1\", \"I2\", \"I3\", \"I4\", \"I31\", \"I32\", \"I41\","
        " \"I42\", \"R3\", \"R4\", \"R_EPS\", \"QV\"]}");
  const fs::path out = tmp.path / "est_out";
  CHECK(run_cli("estimate --config " + cfg.string() + " --out " + out.string() +
                " --check-identities") == 0);
  // constant path: every curve is identically zero
  std::ifstream in(out / "curve_J.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,value");
  while (std::getline(in, line)) CHECK(line.substr(line.find(',') + 1) == "0");

  // the linear crossing reproduces the closed-form value at the end
  std::ostringstream path_csv;
  path_csv << "t,x\n";
  for (int i = 0; i <= 100; ++i)
    path_csv << (i / 100.0) << "," << ((i - 50) * 0.01) << "\n";
  write(tmp.path / "linear.csv", path_csv.str());
  const fs::path cfg2 = tmp.path / "est2.json";
  write(cfg2, "{\"path_csv\": \"" + (tmp.path / "linear.csv").string() +
                  "\", \"eps\": 0.1, \"schemes\": [\"J\", \"I1\", \"I2\"]}");
  const fs::path out2 = tmp.path / "est2_out";
  CHECK(run_cli("estimate --config " + cfg2.string() + " --out " + out2.string() +
                " --check-identities") == 0);
  const std::string j_curve = slurp(out2 / "curve_J.csv");
  const auto last_comma = j_curve.find_last_of(',');
  const double j_end = std::stod(j_curve.substr(last_comma + 1));
  CHECK(j_end == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("converge runs, enforces, and self-tests") {
  TempDir tmp;
  CHECK(run_cli("converge --selftest --out " + (tmp.path / "self").string()) == 0);
  CHECK(fs::exists(tmp.path / "self" / "selftest.json"));

  const fs::path cfg = tmp.path / "conv.json";
  write(cfg,
        "{\"process\": \"brownian\", \"scheme\": \"QV\", \"grid_log2\": 10,"
        " \"ladder\": [0.125, 0.0625, 0.03125], \"num_paths\": 8, \"master_seed\": 7}");
  const fs::path out1 = tmp.path / "conv1";
  const fs::path out2 = tmp.path / "conv2";
  CHECK(run_cli("converge --config " + cfg.string() + " --out " + out1.string() +
                " --no-timings") == 0);
  CHECK(run_cli("converge --config " + cfg.string() + " --out " + out2.string() +
                " --no-timings") == 0);
  CHECK(fs::exists(out1 / "report.json"));
  CHECK(fs::exists(out1 / "rungs.csv"));
  CHECK(fs::exists(out1 / "errors.svg"));
  CHECK(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
  CHECK(slurp(out1 / "rungs.csv").rfind("eps,mean_sup_error,std_error\n", 0) == 0);

  // an unreachable terminal gate fails the run only under --enforce
  CHECK(run_cli("converge --config " + cfg.string() + " --out " + (tmp.path / "g1").string() +
                " --set terminal_error_max=1e-9") == 0);
  CHECK(run_cli("converge --config " + cfg.string() + " --out " + (tmp.path / "g2").string() +
                " --set terminal_error_max=1e-9 --enforce") == 5);

  // dedicated override flags win over the file
  CHECK(run_cli("converge --config " + cfg.string() + " --out " + (tmp.path / "ov").string() +
                " --no-timings --paths 4 --seed 9") == 0);
  const std::string report = slurp(tmp.path / "ov" / "report.json");
  CHECK(report.find("\"num_paths\": 4") != std::string::npos);
  CHECK(report.find("\"master_seed\": 9") != std::string::npos);
}

TEST_CASE("as-converge writes trajectories") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "as.json";
  write(cfg,
        "{\"process\": \"brownian\", \"scheme\": \"J\", \"grid_log2\": 12,"
        " \"ladder\": [0.0625, 0.015625, 0.00390625], \"num_paths\": 16}");
  const fs::path out = tmp.path / "as_out";
  CHECK(run_cli("as-converge --config " + cfg.string() + " --out " + out.string() +
                " --no-timings") == 0);
  const std::string report = slurp(out / "as_report.json");
  CHECK(report.find("\"kind\": \"as_convergence\"") != std::string::npos);
  CHECK(report.find("\"trajectories\"") != std::string::npos);
}

TEST_CASE("report summarizes and merges") {
  TempDir tmp;
  CHECK(run_cli_stdout("report", tmp.path) ==
        "| scheme | process | target | terminal_error | fitted_rate | verdict |\n"
        "|---|---|---|---|---|---|\n");

  const fs::path cfg = tmp.path / "conv.json";
  write(cfg,
        "{\"process\": \"brownian\", \"scheme\": \"QV\", \"grid_log2\": 10,"
        " \"ladder\": [0.125, 0.0625, 0.03125], \"num_paths\": 4}");
  CHECK(run_cli("converge --config " + cfg.string() + " --out " + (tmp.path / "a").string()) == 0);
  CHECK(run_cli("converge --config " + cfg.string() + " --out " + (tmp.path / "b").string() +
                " --scheme J --set target=\\\"L\\\"") == 0);
  const std::string table = run_cli_stdout(
      "report " + (tmp.path / "a" / "report.json").string() + " " +
          (tmp.path / "b" / "report.json").string(),
      tmp.path);
  const auto j_row = table.find("| J |");
  const auto qv_row = table.find("| QV |");
  CHECK(j_row != std::string::npos);
  CHECK(qv_row != std::string::npos);
  CHECK(j_row < qv_row);  // sorted by scheme tag
}

TEST_CASE("exit codes follow the failure category") {
  TempDir tmp;
  // missing config file: configuration error
  CHECK(run_cli("simulate --config /nonexistent/locreg.json --out " +
                (tmp.path / "x").string()) == 2);
  // unknown flag: configuration error
  CHECK(run_cli("simulate --nope") == 2);

  const fs::path cfg = tmp.path / "bad_ladder.json";
  write(cfg,
        "{\"process\": \"brownian\", \"scheme\": \"J\", \"grid_log2\": 10,"
        " \"ladder\": [0.3, 0.15], \"num_paths\": 2}");
  CHECK(run_cli("converge --config " + cfg.string() + " --out " + (tmp.path / "y").string()) == 3);

  const fs::path ok_cfg = tmp.path / "sim.json";
  write(ok_cfg, "{\"process\": \"brownian\", \"num_steps\": 8}");
  CHECK(run_cli("simulate --config " + ok_cfg.string() + " --out /proc/locreg_denied") == 4);
}

}  // TEST_SUITE
