#include "CLI11.hpp"
#include "ncglab/runner.hpp"

#include <cstdlib>

int main(int argc, char** argv) {
  CLI::App app{"ncglab: numerical laboratory for fuzzy-torus spectral triples"};

  std::string config_path;
  app.add_option("config", config_path, "path to the experiment config (JSON)")->required();

  ncglab::CliOverrides ov;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out_dir, format;
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker count (env NCG_LAB_JOBS as fallback)");
  auto* out_opt = app.add_option("--out-dir", out_dir, "override the output directory");
  auto* fmt_opt = app.add_option("--format", format, "series format: csv or json")
                      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--plot", ov.plot, "emit SVG line plots next to CSV series");

  CLI11_PARSE(app, argc, argv);

  if (*seed_opt) ov.seed = seed;
  if (*jobs_opt) {
    ov.jobs = jobs;
  } else if (const char* env = std::getenv("NCG_LAB_JOBS")) {
    ov.jobs = std::atoi(env);
  }
  if (*out_opt) ov.out_dir = out_dir;
  if (*fmt_opt) ov.format = format;

  return ncglab::run_config_file(config_path, ov);
}
