// Command-line front end. All functionality flows through the C API in
// locreg.h; this file only parses flags, reads the config file, and reports
// exit codes (config=2, alignment=3, io=4, gate=5).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locreg.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;

  // dedicated override flags
  std::string seed, paths, grid_log2, ladder, scheme, level;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
  auto* config = cmd->add_option("--config", args.config_path, "declarative config file (JSON)");
  if (needs_config) config->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--set", args.overrides, "config override key=value (repeatable)");
  cmd->add_option("--seed", args.seed, "override master_seed");
  cmd->add_option("--paths", args.paths, "override num_paths");
  cmd->add_option("--grid-log2", args.grid_log2, "override grid_log2");
  cmd->add_option("--ladder", args.ladder, "override ladder (comma-separated eps)");
  cmd->add_option("--scheme", args.scheme, "override scheme tag");
  cmd->add_option("--level", args.level, "override level");
}

int slurp(const std::string& file, std::string& text) {
  if (file.empty()) {
    text = "{}";
    return 0;
  }
  std::ifstream in(file);
  if (!in) {
    std::cerr << "error: cannot read config " << file << "\n";
    return LR_ERR_CONFIG;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return 0;
}

std::vector<std::string> collect_overrides(const CommonArgs& args) {
  std::vector<std::string> all = args.overrides;
  if (!args.seed.empty()) all.push_back("master_seed=" + args.seed);
  if (!args.paths.empty()) all.push_back("num_paths=" + args.paths);
  if (!args.grid_log2.empty()) all.push_back("grid_log2=" + args.grid_log2);
  if (!args.ladder.empty()) all.push_back("ladder=" + args.ladder);
  if (!args.scheme.empty()) all.push_back("scheme=\"" + args.scheme + "\"");
  if (!args.level.empty()) all.push_back("level=" + args.level);
  return all;
}

int finish(int status, char* summary) {
  if (summary) {
    std::cout << summary;
    lr_string_free(summary);
  }
  if (status != LR_OK) std::cerr << "error: " << lr_last_error() << "\n";
  return status;
}

using CmdFn = int (*)(const char*, const char* const*, int, const char*, unsigned, char**);

int run_verb(const CommonArgs& args, unsigned flags, CmdFn fn) {
  std::string text;
  if (int rc = slurp(args.config_path, text)) return rc;
  const auto overrides = collect_overrides(args);
  std::vector<const char*> ptrs;
  ptrs.reserve(overrides.size());
  for (const auto& s : overrides) ptrs.push_back(s.c_str());
  char* summary = nullptr;
  const int status = fn(text.c_str(), ptrs.data(), static_cast<int>(ptrs.size()),
                        args.out_dir.c_str(), flags, &summary);
  return finish(status, summary);
}

int cmd_simulate_wrapper(const char* cfg, const char* const* ov, int n, const char* out,
                         unsigned, char** summary) {
  return lr_cmd_simulate(cfg, ov, n, out, summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local-time regularization laboratory"};
  app.require_subcommand(1);

  CommonArgs sim_args, est_args, conv_args, as_args;
  bool enforce = false, no_timings = false, check_identities = false, selftest = false;

  auto* simulate = app.add_subcommand("simulate", "simulate paths and write CSV files");
  add_common(simulate, sim_args, true);

  auto* estimate = app.add_subcommand("estimate", "write estimator curves for a path");
  add_common(estimate, est_args, true);
  estimate->add_flag("--check-identities", check_identities,
                     "verify the exact scheme identities across the emitted files");

  auto* converge = app.add_subcommand("converge", "Monte Carlo convergence experiment");
  add_common(converge, conv_args, false);
  converge->add_flag("--enforce", enforce, "exit nonzero unless all pass gates hold");
  converge->add_flag("--no-timings", no_timings, "omit timing metadata from reports");
  converge->add_flag("--selftest", selftest, "fit a synthetic power law instead of running");

  auto* as_converge = app.add_subcommand("as-converge", "fixed-path convergence along a ladder");
  add_common(as_converge, as_args, true);
  as_converge->add_flag("--enforce", enforce, "exit nonzero unless all pass gates hold");
  as_converge->add_flag("--no-timings", no_timings, "omit timing metadata from reports");

  std::vector<std::string> report_inputs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "summarize report JSON files as a markdown table");
  report->add_option("inputs", report_inputs, "report.json files");
  report->add_option("--out", report_out, "also write the table to <out>/summary.md");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return LR_ERR_CONFIG;
  }

  if (simulate->parsed()) return run_verb(sim_args, 0, cmd_simulate_wrapper);

  if (estimate->parsed()) {
    unsigned flags = check_identities ? LR_FLAG_CHECK_IDENTITIES : 0;
    return run_verb(est_args, flags, lr_cmd_estimate);
  }

  if (converge->parsed()) {
    unsigned flags = 0;
    if (enforce) flags |= LR_FLAG_ENFORCE;
    if (no_timings) flags |= LR_FLAG_NO_TIMINGS;
    if (selftest) flags |= LR_FLAG_SELFTEST;
    if (conv_args.config_path.empty() && !selftest) {
      std::cerr << "error: converge needs --config (or --selftest)\n";
      return LR_ERR_CONFIG;
    }
    return run_verb(conv_args, flags, lr_cmd_converge);
  }

  if (as_converge->parsed()) {
    unsigned flags = 0;
    if (enforce) flags |= LR_FLAG_ENFORCE;
    if (no_timings) flags |= LR_FLAG_NO_TIMINGS;
    return run_verb(as_args, flags, lr_cmd_as_converge);
  }

  if (report->parsed()) {
    std::vector<const char*> ptrs;
    ptrs.reserve(report_inputs.size());
    for (const auto& s : report_inputs) ptrs.push_back(s.c_str());
    char* markdown = nullptr;
    const int status =
        lr_cmd_report(ptrs.data(), static_cast<int>(ptrs.size()), &markdown);
    if (status != LR_OK) {
      std::cerr << "error: " << lr_last_error() << "\n";
      return status;
    }
    std::cout << markdown;
    if (!report_out.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(report_out, ec);
      std::ofstream out(report_out + "/summary.md");
      if (!out) {
        std::cerr << "error: cannot write " << report_out << "/summary.md\n";
        lr_string_free(markdown);
        return LR_ERR_IO;
      }
      out << markdown;
    }
    lr_string_free(markdown);
    return 0;
  }

  return LR_ERR_CONFIG;
}
