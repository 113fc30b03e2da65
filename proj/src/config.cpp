#include "ncglab/config.hpp"

namespace ncglab {

Shape shape_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("shape: expected a nonempty array");
  IVec e;
  for (const auto& v : j) {
    if (v.is_string()) {
      if (v.get<std::string>() != "inf")
        throw ConfigError("shape: string entries must be \"inf\"");
      e.push_back(kInf);
    } else if (v.is_number_integer()) {
      std::int64_t k = v.get<std::int64_t>();
      if (k < 2) throw ConfigError("shape: finite entries must be >= 2, got " + std::to_string(k));
      e.push_back(k);
    } else {
      throw ConfigError("shape: entries must be integers or \"inf\"");
    }
  }
  return Shape(std::move(e));
}

json shape_to_json(const Shape& k) {
  json out = json::array();
  for (int j = 0; j < k.dim(); ++j) {
    if (k.finite(j))
      out.push_back(k[j]);
    else
      out.push_back("inf");
  }
  return out;
}

namespace {

MatrixXd theta_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("theta: expected a matrix");
  int d = static_cast<int>(j.size());
  MatrixXd th(d, d);
  for (int r = 0; r < d; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != d)
      throw ConfigError("theta: expected a square matrix");
    for (int c = 0; c < d; ++c) th(r, c) = j[r][c].get<double>();
  }
  if ((th + th.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("theta: must be antisymmetric");
  return th;
}

std::vector<std::int64_t> grid_from_json(const json& j, const char* who) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(who) + ": grid must be a nonempty array");
  std::vector<std::int64_t> g;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 2)
      throw ConfigError(std::string(who) + ": grid entries must be integers >= 2");
    g.push_back(v.get<std::int64_t>());
  }
  for (size_t i = 1; i < g.size(); ++i)
    if (g[i] <= g[i - 1]) throw ConfigError(std::string(who) + ": grid must be strictly increasing");
  return g;
}

ExperimentSpec experiment_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("experiment: missing type");
  std::string t = j.at("type").get<std::string>();
  ExperimentSpec e;
  if (t == "verify") {
    e.kind = ExperimentKind::Verify;
    e.n = j.value("n", std::int64_t{5});
    e.samples = j.value("samples", 1000);
  } else if (t == "spectrum") {
    e.kind = ExperimentKind::Spectrum;
    if (!j.contains("n")) throw ConfigError("spectrum: missing n");
    e.n = j.at("n").get<std::int64_t>();
  } else if (t == "seminorm") {
    e.kind = ExperimentKind::Seminorm;
    e.grid = grid_from_json(j.at("grid"), "seminorm");
    if (!j.contains("element")) throw ConfigError("seminorm: missing element");
    for (const auto& entry : j.at("element")) {
      IVec coords;
      for (const auto& c : entry.at("coords")) coords.push_back(c.get<std::int64_t>());
      e.element.emplace_back(coords, entry.value("re", 0.0), entry.value("im", 0.0));
    }
  } else if (t == "converge") {
    e.kind = ExperimentKind::Converge;
    e.grid = grid_from_json(j.at("grid"), "converge");
    e.f_radius = j.value("F_radius", std::int64_t{2});
  } else if (t == "dynamics") {
    e.kind = ExperimentKind::Dynamics;
    e.grid = grid_from_json(j.at("grid"), "dynamics");
    e.f_radius = j.value("F_radius", std::int64_t{2});
    e.window_radius = j.value("window_radius", std::int64_t{6});
    if (j.contains("t"))
      for (const auto& v : j.at("t")) e.tgrid.push_back(v.get<double>());
    else
      e.tgrid = {1.0};
    for (double tv : e.tgrid)
      if (!(tv >= 0.0)) throw ConfigError("dynamics: t values must be nonnegative");
  } else if (t == "mk") {
    e.kind = ExperimentKind::Mk;
    e.n = j.value("n", std::int64_t{4});
    e.budget = j.value("budget", 200);
    if (e.budget < 1) throw ConfigError("mk: budget must be positive");
  } else {
    throw ConfigError("experiment: unknown type '" + t + "'");
  }
  return e;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected an object");
  ExperimentConfig c;

  if (!j.contains("seed")) throw ConfigError("config: missing seed");
  c.seed = j.at("seed").get<std::uint64_t>();

  if (!j.contains("family") || !j.at("family").is_object() || !j.at("family").contains("type"))
    throw ConfigError("config: missing family.type");
  std::string fam = j.at("family").at("type").get<std::string>();
  if (fam == "clock-shift") {
    c.family = Family::ClockShift;
    c.theta = MatrixXd::Zero(2, 2);
  } else if (fam == "theta-sequence") {
    c.family = Family::ThetaSequence;
    if (!j.at("family").contains("theta")) throw ConfigError("theta-sequence: missing theta");
    c.theta = theta_from_json(j.at("family").at("theta"));
  } else if (fam == "custom") {
    c.family = Family::Custom;
    if (!j.at("family").contains("theta")) throw ConfigError("custom: missing theta");
    c.theta = theta_from_json(j.at("family").at("theta"));
    if (j.at("family").contains("shape")) c.custom_shape = shape_from_json(j.at("family").at("shape"));
  } else {
    throw ConfigError("config: unknown family '" + fam + "'");
  }

  c.out_dir = j.value("out_dir", std::string("out"));
  c.window_radius = j.value("window_radius", std::int64_t{8});
  c.jobs = j.value("jobs", 1);
  if (c.jobs < 1) throw ConfigError("config: jobs must be >= 1");

  if (!j.contains("experiments") || !j.at("experiments").is_array() || j.at("experiments").empty())
    throw ConfigError("config: experiments must be a nonempty array");
  for (const auto& e : j.at("experiments")) c.experiments.push_back(experiment_from_json(e));
  return c;
}

SequenceSpec ExperimentConfig::sequence(const std::vector<std::int64_t>& grid) const {
  switch (family) {
    case Family::ClockShift:
      return clock_shift_family(grid, window_radius);
    case Family::ThetaSequence:
      return theta_sequence_family(theta, grid, window_radius);
    case Family::Custom: {
      if (custom_shape.dim() != theta.rows())
        throw ConfigError("custom: shape and theta dimensions differ");
      std::vector<bool> finite;
      for (int j = 0; j < custom_shape.dim(); ++j) finite.push_back(custom_shape.finite(j));
      SequenceSpec s;
      s.family = Family::Custom;
      s.d = static_cast<int>(theta.rows());
      s.theta_inf = theta;
      s.ngrid = grid;
      s.radius = window_radius;
      s.finite_axes = std::move(finite);
      s.beta = theta_sequence_family(theta, grid, window_radius).beta;
      // recompute the shared branch angle with the axis pattern applied
      SequenceSpec probe = s;
      s.beta = shared_branch_angle_for(probe);
      return s;
    }
    case Family::AbelianTorus:
      break;
  }
  throw ConfigError("sequence: unsupported family");
}

json canonical_config(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  switch (c.family) {
    case Family::ClockShift: j["family"] = {{"type", "clock-shift"}}; break;
    case Family::ThetaSequence: {
      json th = json::array();
      for (int r = 0; r < c.theta.rows(); ++r) {
        json row = json::array();
        for (int cc = 0; cc < c.theta.cols(); ++cc) row.push_back(c.theta(r, cc));
        th.push_back(row);
      }
      j["family"] = {{"type", "theta-sequence"}, {"theta", th}};
      break;
    }
    default: j["family"] = {{"type", "custom"}}; break;
  }
  j["window_radius"] = c.window_radius;
  json exps = json::array();
  for (const auto& e : c.experiments) {
    json ej;
    switch (e.kind) {
      case ExperimentKind::Verify:
        ej = {{"type", "verify"}, {"n", e.n}, {"samples", e.samples}};
        break;
      case ExperimentKind::Spectrum:
        ej = {{"type", "spectrum"}, {"n", e.n}};
        break;
      case ExperimentKind::Seminorm: {
        json el = json::array();
        for (const auto& [coords, re, im] : e.element) {
          json ent;
          ent["coords"] = coords;
          ent["re"] = re;
          ent["im"] = im;
          el.push_back(ent);
        }
        ej = {{"type", "seminorm"}, {"grid", e.grid}, {"element", el}};
        break;
      }
      case ExperimentKind::Converge:
        ej = {{"type", "converge"}, {"grid", e.grid}, {"F_radius", e.f_radius}};
        break;
      case ExperimentKind::Dynamics:
        ej = {{"type", "dynamics"}, {"grid", e.grid}, {"F_radius", e.f_radius},
              {"window_radius", e.window_radius}, {"t", e.tgrid}};
        break;
      case ExperimentKind::Mk:
        ej = {{"type", "mk"}, {"n", e.n}, {"budget", e.budget}};
        break;
    }
    exps.push_back(ej);
  }
  j["experiments"] = exps;
  return j;
}

Cocycle cocycle_from_json(const json& j, const Shape& k) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("cocycle: missing type");
  std::string t = j.at("type").get<std::string>();
  if (t == "trivial") return Cocycle::trivial(k);
  if (t == "bicharacter" || t == "normalized") {
    if (!j.contains("omega")) throw ConfigError("cocycle: missing omega");
    const auto& om = j.at("omega");
    int d = k.dim();
    if (static_cast<int>(om.size()) != d * d) throw ConfigError("cocycle: omega must be d*d row-major");
    MatrixXd theta(d, d);
    for (int r = 0; r < d; ++r)
      for (int cidx = 0; cidx < d; ++cidx) theta(r, cidx) = om[r * d + cidx].get<double>();
    if (t == "bicharacter") return bicharacter_from_theta(theta, k);
    double beta = j.contains("beta") ? j.at("beta").get<double>() : pick_branch_angle(theta, k);
    return normalize_from_theta(theta, k, beta);
  }
  if (t == "tabulated") {
    if (!j.contains("shape") || !j.contains("table")) throw ConfigError("cocycle: missing table");
    Shape ks = shape_from_json(j.at("shape"));
    std::vector<cplx> table;
    for (const auto& e : j.at("table")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("cocycle: table entries are [re, im]");
      table.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return Cocycle::tabulated(ks, std::move(table));
  }
  throw ConfigError("cocycle: unknown type '" + t + "'");
}

json cocycle_to_json_bicharacter(const MatrixXd& theta, const Shape& k) {
  json om = json::array();
  for (int r = 0; r < theta.rows(); ++r)
    for (int c = 0; c < theta.cols(); ++c) om.push_back(theta(r, c));
  return {{"type", "bicharacter"}, {"omega", om}, {"shape", shape_to_json(k)}};
}

json cocycle_to_json_normalized(const MatrixXd& theta, double beta) {
  json om = json::array();
  for (int r = 0; r < theta.rows(); ++r)
    for (int c = 0; c < theta.cols(); ++c) om.push_back(theta(r, c));
  return {{"type", "normalized"}, {"omega", om}, {"beta", beta}};
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace ncglab
