#pragma once

#include "ncglab/config.hpp"
#include "ncglab/lab.hpp"

namespace ncglab {

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;  // csv | json
  bool plot = false;
};

// exit codes: 0 all pass, 1 invariant-suite failure, 2 config/schema error
int run_config_file(const std::string& path, const CliOverrides& overrides);

// line plot of a numeric CSV (first column is x); deterministic bytes,
// log-scale y when the data spans two decades; throws on an empty series
std::string render_svg(const std::string& csv);

void emit_plot(const std::string& csv_path, const std::string& svg_path);

// deterministic numeric formatting used for all artifacts
std::string fmt_double(double v);

}  // namespace ncglab
