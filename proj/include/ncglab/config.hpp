#pragma once

#include "ncglab/families.hpp"

#include <optional>
#include <string>

// vendored single-header nlohmann/json
#include "json.hpp"

namespace ncglab {

using json = nlohmann::json;

struct ConfigError : NcgError {
  using NcgError::NcgError;
};

enum class ExperimentKind { Verify, Spectrum, Seminorm, Converge, Dynamics, Mk };

struct ExperimentSpec {
  ExperimentKind kind;
  std::int64_t n = 0;                  // verify, spectrum, mk
  int samples = 1000;                  // verify
  std::vector<std::int64_t> grid;      // seminorm, converge, dynamics
  std::int64_t f_radius = 2;           // converge, dynamics
  std::int64_t window_radius = 6;      // dynamics
  std::vector<double> tgrid;           // dynamics
  int budget = 200;                    // mk
  std::vector<std::tuple<IVec, double, double>> element;  // seminorm input
};

struct ExperimentConfig {
  Family family = Family::ClockShift;
  MatrixXd theta;        // theta-sequence / custom
  Shape custom_shape{IVec{2}};
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::int64_t window_radius = 8;
  int jobs = 1;
  bool plot = false;
  std::string format = "csv";
  std::vector<ExperimentSpec> experiments;

  SequenceSpec sequence(const std::vector<std::int64_t>& grid) const;
};

// throws ConfigError with a field-level message on any schema violation
ExperimentConfig parse_config(const json& j);

// canonical re-serialization of the semantic fields, used for the manifest
// hash
json canonical_config(const ExperimentConfig& c);

std::uint64_t fnv1a64(const std::string& s);

// shapes serialize as arrays of integers with "inf" for infinite axes
Shape shape_from_json(const json& j);
json shape_to_json(const Shape& k);

// cocycles serialize as {type, omega (row-major), beta} for the closed forms
// and {type, shape, table (row-major complex pairs)} for tabulated ones
Cocycle cocycle_from_json(const json& j, const Shape& k);
json cocycle_to_json_bicharacter(const MatrixXd& theta, const Shape& k);
json cocycle_to_json_normalized(const MatrixXd& theta, double beta);

}  // namespace ncglab
