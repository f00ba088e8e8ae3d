// Command-line front end: `run` executes a scenario config and writes the
// report bundle, `verify` runs the self-check suites, `figure` emits the
// capacity-series CSV. Exit codes: 0 success, 1 config error, 2 invariant
// failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "densecode/verify.hpp"

namespace fs = std::filesystem;
using namespace densecode;

namespace {

// Write once, atomically: the bundle never contains a half-written file.
void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

int do_run(const std::string& config_path, const std::string& out_dir, bool seed_set,
           std::uint64_t seed, int threads) {
  Scenario s = Scenario::load(config_path);
  if (seed_set) s.seed = seed;
  const RunResult r = run_scenario(s, threads);
  fs::create_directories(out_dir);
  const fs::path base(out_dir);
  write_atomic(base / "report.json", r.report.dump(2) + "\n");
  if (r.has_figure) write_atomic(base / "figure.csv", r.figure_csv);
  if (r.has_sim) {
    std::string lines;
    for (const auto& l : r.sim_lines) lines += l + "\n";
    write_atomic(base / "sim.jsonl", lines);
  }
  std::printf("wrote %s\n", (base / "report.json").string().c_str());
  if (r.has_figure) std::printf("wrote %s\n", (base / "figure.csv").string().c_str());
  if (r.has_sim) std::printf("wrote %s\n", (base / "sim.jsonl").string().c_str());
  return 0;
}

int do_verify(const std::string& suite) {
  const auto results = run_verify(suite);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%-26s %s  %8.1f ms  %s\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.millis,
                r.detail.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("%zu checks, %d failure%s (%s suite)\n", results.size(), failures,
              failures == 1 ? "" : "s", suite.c_str());
  return failures == 0 ? 0 : 2;
}

int do_figure(double p, int n_max, const std::string& mode, const std::string& out_csv) {
  const SchurMode m = mode == "paper" ? SchurMode::Paper : SchurMode::Oracle;
  const auto rows = figure_series(1, n_max, p, m);
  write_atomic(out_csv, figure_csv_text(rows));
  std::printf("wrote %s (%zu rows)\n", out_csv.c_str(), rows.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dense coding capacities under locality-restricted decoding"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute a scenario config and write the report bundle");
  std::string config_path;
  run->add_option("config", config_path, "scenario JSON file")->required();
  std::string out_dir = ".";
  run->add_option("--out", out_dir, "output directory (default: current)");
  std::uint64_t seed = 0;
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  int threads = 1;
  run->add_option("--threads", threads, "worker count (output is identical for any value)")
      ->check(CLI::Range(1, 64));

  auto* ver = app.add_subcommand("verify", "run the self-check suites");
  std::string suite = "fast";
  ver->add_option("--suite", suite, "fast (default) or full")
      ->check(CLI::IsMember({"fast", "full"}));

  auto* fig = app.add_subcommand("figure", "emit the product-family capacity series as CSV");
  double p = 0.25;
  fig->add_option("--p", p, "single-site population of the excited level");
  int n_max = 8;
  fig->add_option("--n-max", n_max, "largest site count")->check(CLI::Range(1, 20));
  std::string mode = "oracle";
  fig->add_option("--mode", mode, "dimension factor: oracle or paper")
      ->check(CLI::IsMember({"oracle", "paper"}));
  std::string out_csv;
  fig->add_option("--out", out_csv, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return do_run(config_path, out_dir, seed_opt->count() > 0, seed, threads);
    if (ver->parsed()) return do_verify(suite);
    if (fig->parsed()) return do_figure(p, n_max, mode, out_csv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "invariant failure: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "invariant failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
