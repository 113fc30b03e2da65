#include "ncglab/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace ncglab {

namespace fs = std::filesystem;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

struct Artifact {
  std::string name;
  std::string content;
};

struct ExperimentOutcome {
  std::vector<Artifact> artifacts;
  Report report;
  double wall_ms = 0.0;
  std::string label;
};

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw NcgError("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string report_json(const Report& r) {
  json j;
  j["pass"] = r.pass();
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"bound", c.bound},
                      {"pass", c.pass}});
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

// --- individual experiments ---------------------------------------------------

ExperimentOutcome run_verify(const ExperimentConfig& cfg, const ExperimentSpec& spec,
                             std::uint64_t seed) {
  ExperimentOutcome out;
  out.label = "verify";
  SequenceSpec seq = cfg.sequence({spec.n});
  TripleConfig tc = seq.level(spec.n);

  Report rep;
  {
    Report r = verify_cocycle(tc.emb.outer, spec.samples, task_seed(seed, {1}), tc.radius);
    for (auto& c : r.checks) c.name = "cocycle/" + c.name;
    rep.merge(r);
  }
  {
    Report r = verify_embedding(tc.emb, std::min(spec.samples, 64), task_seed(seed, {2}),
                                std::min<std::int64_t>(tc.radius, 4));
    for (auto& c : r.checks) c.name = "embedding/" + c.name;
    rep.merge(r);
  }
  {
    Report r = verify_clifford(tc.cl);
    for (auto& c : r.checks) c.name = "clifford/" + c.name;
    rep.merge(r);
  }
  {
    Report r = inequality_suite(tc, std::max(4, spec.samples / 20), task_seed(seed, {3}));
    for (auto& c : r.checks) c.name = "inequalities/" + c.name;
    rep.merge(r);
  }
  bool any_inf = !tc.emb.outer_shape.all_finite();
  if (any_inf) {
    Report r = resolvent_bound_check(tc, tc.base_window());
    for (auto& c : r.checks) c.name = "resolvent/" + c.name;
    rep.merge(r);
  }
  out.report = rep;
  out.artifacts.push_back({"verify.json", report_json(rep)});
  return out;
}

ExperimentOutcome run_spectrum(const ExperimentConfig& cfg, const ExperimentSpec& spec) {
  ExperimentOutcome out;
  out.label = "spectrum";
  SequenceSpec seq = cfg.sequence({spec.n});
  TripleConfig tc = seq.level(spec.n);
  OperatorWindow d = assemble_dirac(tc, tc.base_window());
  VectorXd ev = spectrum(d, 8192);
  std::ostringstream csv;
  csv << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < ev.size(); ++i) csv << i << "," << fmt_double(ev(i)) << "\n";
  out.artifacts.push_back({"spectrum.csv", csv.str()});
  out.report.add_flag("spectrum_computed", true, static_cast<double>(ev.size()));
  return out;
}

ExperimentOutcome run_seminorm(const ExperimentConfig& cfg, const ExperimentSpec& spec) {
  ExperimentOutcome out;
  out.label = "seminorm";
  SequenceSpec seq = cfg.sequence(spec.grid);
  TripleConfig limit = seq.level(kInf);
  AlgebraElement a(limit.emb.inner_shape);
  for (const auto& [coords, re, im] : spec.element) a.add(coords, cplx{re, im});
  if (!a.selfadjoint()) {
    AlgebraElement sym = a + adjoint(a);
    sym *= cplx{0.5, 0.0};
    a = sym;
  }
  SeminormTrace tr = seminorm_trace(a, seq);
  NormResult lim = seminorm(a, limit);
  std::ostringstream csv;
  csv << "n,L,rel_gap,skipped\n";
  for (const auto& row : tr.rows) {
    double rel = (!row.skipped && tr.limit_estimate > 0)
                     ? std::abs(row.value - tr.limit_estimate) / tr.limit_estimate
                     : 0.0;
    csv << row.n << "," << fmt_double(row.value) << "," << fmt_double(rel) << ","
        << (row.skipped ? 1 : 0) << "\n";
  }
  out.artifacts.push_back({"seminorm.csv", csv.str()});
  json j;
  j["value"] = lim.value;
  j["converged"] = lim.converged;
  j["window"] = limit.radius;
  j["limit_estimate"] = tr.limit_estimate;
  j["limit_stability"] = tr.limit_stability;
  j["final_rel_gap"] = tr.final_rel_gap;
  out.artifacts.push_back({"seminorm.json", j.dump(2) + "\n"});
  out.report.add_flag("seminorm_trace", true, tr.final_rel_gap);
  return out;
}

ExperimentOutcome run_converge(const ExperimentConfig& cfg, const ExperimentSpec& spec,
                               std::uint64_t seed) {
  ExperimentOutcome out;
  out.label = "converge";
  SequenceSpec seq = cfg.sequence(spec.grid);
  TripleConfig limit = seq.level(kInf);
  Window f = Window::box(limit.dprime(), spec.f_radius);

  std::ostringstream csv, dcsv;
  csv << "n,j,gap\n";
  dcsv << "n,gap,graph_sup\n";
  for (std::int64_t n : spec.grid) {
    for (int j = 0; j < limit.ngamma(); ++j) {
      double g = gamma_gap(seq, n, j, f);
      csv << n << "," << (j + 1) << "," << fmt_double(g) << "\n";
    }
    DiracGapResult dg = dirac_gap(seq, n, f, 12, task_seed(seed, {static_cast<std::uint64_t>(n)}));
    dcsv << n << "," << fmt_double(dg.gap) << "," << fmt_double(dg.graph_norm_sup) << "\n";
  }
  out.artifacts.push_back({"converge.csv", csv.str()});
  out.artifacts.push_back({"converge_dirac.csv", dcsv.str()});
  out.report.add_flag("converge_scan", true);
  return out;
}

ExperimentOutcome run_dynamics(const ExperimentConfig& cfg, const ExperimentSpec& spec) {
  ExperimentOutcome out;
  out.label = "dynamics";
  SequenceSpec seq = cfg.sequence(spec.grid);
  TripleConfig limit = seq.level(kInf);
  Window f = Window::box(limit.dprime(), spec.f_radius);

  std::ostringstream csv;
  csv << "n,t,gap,bound\n";
  double worst_truncation = 0.0;
  bool duhamel_ok = true;
  for (std::int64_t n : spec.grid) {
    auto rows = dynamics_gap(seq, n, f, spec.tgrid, spec.window_radius);
    for (const auto& r : rows) {
      csv << n << "," << fmt_double(r.t) << "," << fmt_double(r.gap) << ","
          << fmt_double(r.bound) << "\n";
      worst_truncation = std::max(worst_truncation, r.truncation);
      if (r.gap > r.bound + 1e-9) duhamel_ok = false;
    }
  }
  out.artifacts.push_back({"dynamics.csv", csv.str()});
  out.report.add_flag("duhamel_bound", duhamel_ok);
  out.report.add_flag("truncation_diagnostic", true, worst_truncation);
  return out;
}

ExperimentOutcome run_mk(const ExperimentConfig& cfg, const ExperimentSpec& spec,
                         std::uint64_t seed) {
  ExperimentOutcome out;
  out.label = "mk";
  SequenceSpec seq = cfg.sequence({spec.n});
  TripleConfig tc = seq.level(spec.n);
  State tau = canonical_trace_state(tc);
  tau.validate();
  // deterministic two-point pure state; delta-basis states coincide with tau
  VectorXcd v = VectorXcd::Zero(tau.window.size());
  v(tau.window.index(IVec(tc.dprime(), 0))) = 1.0;
  IVec e2(tc.dprime(), 0);
  e2[std::min(1, tc.dprime() - 1)] = 1;
  v(tau.window.index(e2)) = 1.0;
  State pure = State::pure(tau.window, v);
  pure.validate();

  MkResult r = mk_lower_bound(tau, pure, tc, spec.budget, task_seed(seed, {9}));
  std::ostringstream csv;
  csv << "value,witness_support\n";
  csv << fmt_double(r.value) << "," << r.witness.coeffs.size() << "\n";
  out.artifacts.push_back({"mk.csv", csv.str()});
  out.report.add("mk_witness_feasible", r.witness_seminorm, 1.0 + 1e-8);
  out.report.add_flag("mk_value", true, r.value);
  return out;
}

ExperimentOutcome run_one(const ExperimentConfig& cfg, size_t idx) {
  const ExperimentSpec& spec = cfg.experiments[idx];
  std::uint64_t seed = task_seed(cfg.seed, {static_cast<std::uint64_t>(idx)});
  auto t0 = std::chrono::steady_clock::now();
  ExperimentOutcome out;
  switch (spec.kind) {
    case ExperimentKind::Verify: out = run_verify(cfg, spec, seed); break;
    case ExperimentKind::Spectrum: out = run_spectrum(cfg, spec); break;
    case ExperimentKind::Seminorm: out = run_seminorm(cfg, spec); break;
    case ExperimentKind::Converge: out = run_converge(cfg, spec, seed); break;
    case ExperimentKind::Dynamics: out = run_dynamics(cfg, spec); break;
    case ExperimentKind::Mk: out = run_mk(cfg, spec, seed); break;
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::string csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  std::istringstream hs(header);
  std::string tok;
  while (std::getline(hs, tok, ',')) cols.push_back(tok);
  json rows = json::array();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    json row;
    size_t c = 0;
    while (std::getline(ls, tok, ',') && c < cols.size()) row[cols[c++]] = tok;
    rows.push_back(row);
  }
  return rows.dump(2) + "\n";
}

}  // namespace

std::string render_svg(const std::string& csv) {
  std::istringstream in(csv);
  std::string header;
  if (!std::getline(in, header)) throw NcgError("emit_plot: empty series");
  std::vector<std::string> names;
  {
    std::istringstream hs(header);
    std::string tok;
    while (std::getline(hs, tok, ',')) names.push_back(tok);
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) row.push_back(std::strtod(tok.c_str(), nullptr));
    if (row.size() == names.size()) rows.push_back(row);
  }
  if (rows.empty() || names.size() < 2) throw NcgError("emit_plot: empty series");

  const double width = 640, height = 400, mlx = 60, mrx = 20, mty = 20, mby = 40;
  double xmin = rows.front()[0], xmax = rows.front()[0];
  double ymin = rows.front()[1], ymax = rows.front()[1];
  bool positive = true;
  for (const auto& r : rows) {
    xmin = std::min(xmin, r[0]);
    xmax = std::max(xmax, r[0]);
    for (size_t c = 1; c < r.size(); ++c) {
      ymin = std::min(ymin, r[c]);
      ymax = std::max(ymax, r[c]);
      if (r[c] <= 0.0) positive = false;
    }
  }
  bool logy = positive && ymin > 0.0 && ymax / ymin > 50.0;
  auto ty = [&](double v) {
    double a = logy ? std::log10(v) : v;
    double lo = logy ? std::log10(ymin) : ymin;
    double hi = logy ? std::log10(ymax) : ymax;
    if (hi == lo) hi = lo + 1.0;
    return height - mby - (a - lo) / (hi - lo) * (height - mty - mby);
  };
  auto tx = [&](double v) {
    double lo = xmin, hi = xmax;
    if (hi == lo) hi = lo + 1.0;
    return mlx + (v - lo) / (hi - lo) * (width - mlx - mrx);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\">\n";
  svg << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << num(mlx) << "\" y1=\"" << num(height - mby) << "\" x2=\"" << num(width - mrx)
      << "\" y2=\"" << num(height - mby) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << num(mlx) << "\" y1=\"" << num(mty) << "\" x2=\"" << num(mlx) << "\" y2=\""
      << num(height - mby) << "\" stroke=\"black\"/>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (size_t c = 1; c < names.size(); ++c) {
    const char* col = colors[(c - 1) % 5];
    svg << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (const auto& r : rows) svg << num(tx(r[0])) << "," << num(ty(r[c])) << " ";
    svg << "\"/>\n";
    for (const auto& r : rows)
      svg << "<circle cx=\"" << num(tx(r[0])) << "\" cy=\"" << num(ty(r[c])) << "\" r=\"3\" fill=\""
          << col << "\"/>\n";
    svg << "<text x=\"" << num(width - mrx - 100) << "\" y=\"" << num(mty + 16.0 * c)
        << "\" fill=\"" << col << "\" font-size=\"12\">" << names[c] << "</text>\n";
  }
  svg << "<text x=\"" << num(width / 2) << "\" y=\"" << num(height - 8) << "\" font-size=\"12\">"
      << names[0] << (logy ? " (log y)" : "") << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::string& csv_path, const std::string& svg_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw NcgError("emit_plot: cannot read " + csv_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  write_atomic(svg_path, render_svg(ss.str()));
}

int run_config_file(const std::string& path, const CliOverrides& overrides) {
  json j;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::fprintf(stderr, "config error: cannot open %s\n", path.c_str());
      return 2;
    }
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    }
  }

  ExperimentConfig cfg;
  try {
    cfg = parse_config(j);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.jobs) cfg.jobs = *overrides.jobs;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.format) cfg.format = *overrides.format;
  cfg.plot = overrides.plot;
  if (cfg.format != "csv" && cfg.format != "json") {
    std::fprintf(stderr, "config error: format must be csv or json\n");
    return 2;
  }

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);

  std::vector<ExperimentOutcome> outcomes(cfg.experiments.size());
  std::vector<std::string> errors(cfg.experiments.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cfg.experiments.size()) return;
      try {
        outcomes[i] = run_one(cfg, i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  bool all_pass = true;
  json manifest;
  manifest["tool"] = "ncglab 0.1.0";
  manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION);
  manifest["config_hash"] = fnv1a64(canonical_config(cfg).dump());
  json exps = json::array();

  for (size_t i = 0; i < cfg.experiments.size(); ++i) {
    json entry;
    entry["index"] = i;
    if (!errors[i].empty()) {
      all_pass = false;
      entry["error"] = errors[i];
      exps.push_back(entry);
      std::fprintf(stderr, "experiment %zu failed: %s\n", i, errors[i].c_str());
      continue;
    }
    const ExperimentOutcome& out = outcomes[i];
    entry["label"] = out.label;
    entry["wall_ms"] = out.wall_ms;
    entry["pass"] = out.report.pass();
    if (!out.report.pass()) all_pass = false;
    json files = json::array();
    for (const auto& a : out.artifacts) {
      std::string name = std::to_string(i) + "_" + a.name;
      fs::path p = fs::path(cfg.out_dir) / name;
      bool is_csv = name.size() > 4 && name.substr(name.size() - 4) == ".csv";
      if (is_csv && cfg.format == "json") {
        std::string jname = name.substr(0, name.size() - 4) + ".json";
        write_atomic(fs::path(cfg.out_dir) / jname, csv_to_json(a.content));
        files.push_back(jname);
      } else {
        write_atomic(p, a.content);
        files.push_back(name);
      }
      if (is_csv && cfg.plot) {
        std::string sname = name.substr(0, name.size() - 4) + ".svg";
        try {
          write_atomic(fs::path(cfg.out_dir) / sname, render_svg(a.content));
          files.push_back(sname);
        } catch (const NcgError&) {
          // single-row series have no plot
        }
      }
    }
    entry["artifacts"] = files;
    exps.push_back(entry);
  }
  manifest["experiments"] = exps;
  manifest["pass"] = all_pass;
  write_atomic(fs::path(cfg.out_dir) / "manifest.json", manifest.dump(2) + "\n");

  for (const auto& e : errors)
    if (!e.empty()) return 1;
  return all_pass ? 0 : 1;
}

}  // namespace ncglab
