#include "ncglab/lab.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ncglab {

namespace {

IVec unit_vec(int d, int j) {
  IVec e(d, 0);
  e[j] = 1;
  return e;
}

enum class SpKind { MultDerive, Commutator, Derive, DiagFinite };

struct SpGamma {
  SpKind kind;
  int axis;
  AlgebraElement mult;  // X or Y element
  double scale;         // with sign folded in, as in the windowed builder
};

SpGamma sparse_gamma_spec(const TripleConfig& cfg, int i) {
  const int d = cfg.d();
  const Shape& kp = cfg.emb.outer_shape;
  if (i < 2 * d) {
    int j = i % d;
    bool first = i < d;
    if (!kp.finite(j))
      return {SpKind::MultDerive, j, first ? cfg.x_element(j) : cfg.y_element(j), 0.0};
    double sign = first ? -1.0 : 1.0;
    return {SpKind::Commutator, j, first ? cfg.y_element(j) : cfg.x_element(j),
            sign * static_cast<double>(kp[j]) / kTau};
  }
  int j = i - d;
  if (!kp.finite(j)) return {SpKind::Derive, j, AlgebraElement(kp), 0.0};
  return {SpKind::DiagFinite, j, AlgebraElement(kp), static_cast<double>(kp[j]) / kTau};
}

}  // namespace

SparseVec gamma_apply_sparse(const TripleConfig& cfg, int i, const SparseVec& xi) {
  SpGamma g = sparse_gamma_spec(cfg, i);
  const Shape& kp = cfg.emb.outer_shape;
  SparseVec out;
  switch (g.kind) {
    case SpKind::Derive:
      for (const auto& [m, v] : xi)
        if (m[g.axis] != 0) out[m] = cplx{0.0, static_cast<double>(m[g.axis])} * v;
      return out;
    case SpKind::DiagFinite:
      for (const auto& [m, v] : xi) {
        double s = std::sin(kTau * static_cast<double>(m[g.axis]) / static_cast<double>(kp[g.axis]));
        out[m] = cplx{0.0, -g.scale * (1.0 - s)} * v;
      }
      return out;
    case SpKind::MultDerive: {
      SparseVec tmp;
      for (const auto& [m, v] : xi)
        if (m[g.axis] != 0) tmp[m] = cplx{0.0, static_cast<double>(m[g.axis])} * v;
      AlgebraElement f = g.mult;
      return left_action(f, cfg.emb.outer, tmp);
    }
    case SpKind::Commutator: {
      const cplx pref{0.0, -g.scale};  // scale/i
      for (const auto& [y, cy] : g.mult.coeffs)
        for (const auto& [p, v] : xi)
          out[add_canonical(p, y, kp)] +=
              pref * cy * (cfg.emb.outer(y, p) - cfg.emb.outer(p, y)) * v;
      return out;
    }
  }
  return out;
}

SparseSpinor dirac_apply_sparse(const TripleConfig& cfg, const SparseSpinor& xi) {
  const int s = cfg.spin();
  SparseSpinor out;
  for (int i = 0; i < cfg.ngamma(); ++i) {
    for (int c = 0; c < s; ++c) {
      SparseVec comp;
      for (const auto& [m, v] : xi)
        if (v(c) != cplx{0.0, 0.0}) comp[m] = v(c);
      SparseVec moved = gamma_apply_sparse(cfg, i, comp);
      for (const auto& [m, v] : moved) {
        auto it = out.find(m);
        if (it == out.end()) it = out.emplace(m, VectorXcd::Zero(s)).first;
        it->second += v * cfg.cl.gamma[i].col(c);
      }
    }
  }
  return out;
}

SparseVec rho_embed(const SparseVec& xi, const Shape& from_level) {
  SparseVec out;
  for (const auto& [m, v] : xi) out[canonical_rep(m, from_level)] = v;
  return out;
}

SparseVec rho_restrict(const SparseVec& xi, const Shape& to_level) {
  SparseVec out;
  for (const auto& [m, v] : xi) {
    IVec q = canonical_rep(m, to_level);
    if (q == m) out[q] = v;  // rho* kills points outside the centered window
  }
  return out;
}

SpinorField rho_embed_field(const SpinorField& xi, const Shape& from_level, const Window& to) {
  SpinorField out(to, static_cast<int>(xi.values.cols()));
  for (Eigen::Index i = 0; i < xi.values.rows(); ++i) {
    if (xi.values.row(i).isZero(0.0)) continue;
    IVec m = canonical_rep(xi.window.point(i), from_level);
    if (!to.contains(m)) throw NcgError("rho_embed_field: window mismatch");
    out.values.row(to.index(m)) += xi.values.row(i);
  }
  return out;
}

SpinorField rho_restrict_field(const SpinorField& xi, const Shape& to_level, const Window& to) {
  SpinorField out(to, static_cast<int>(xi.values.cols()));
  for (Eigen::Index i = 0; i < xi.values.rows(); ++i) {
    IVec m = xi.window.point(i);
    if (!(canonical_rep(m, to_level) == m)) continue;  // rho^* kills it
    if (to.contains(m)) out.values.row(to.index(m)) += xi.values.row(i);
  }
  return out;
}

namespace {

// dense matrix of a sparse-column map: rows indexed by the union support
struct ColumnStack {
  std::vector<IVec> rows;
  std::map<IVec, Eigen::Index> row_of;
  std::vector<SparseVec> cols;

  void push(SparseVec col) {
    for (const auto& [m, v] : col)
      if (!row_of.count(m)) {
        row_of[m] = static_cast<Eigen::Index>(rows.size());
        rows.push_back(m);
      }
    cols.push_back(std::move(col));
  }

  MatrixXcd dense() const {
    MatrixXcd out = MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()),
                                    static_cast<Eigen::Index>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
      for (const auto& [m, v] : cols[c]) out(row_of.at(m), static_cast<Eigen::Index>(c)) = v;
    return out;
  }
};

void require_inside_level(const Window& F, const Shape& level) {
  for (std::int64_t i = 0; i < F.size(); ++i) {
    IVec m = F.point(i);
    if (!(canonical_rep(m, level) == m))
      throw NcgError("window F is not contained in the level's centered window");
  }
}

SparseVec gap_column(const TripleConfig& cn, const TripleConfig& cinf, int i, const IVec& m) {
  // rho Gamma_n rho* delta_m - Gamma_inf delta_m
  SparseVec dn{{canonical_rep(m, cn.emb.outer_shape), cplx{1.0, 0.0}}};
  SparseVec un = rho_embed(gamma_apply_sparse(cn, i, dn), cn.emb.outer_shape);
  SparseVec uinf = gamma_apply_sparse(cinf, i, SparseVec{{m, cplx{1.0, 0.0}}});
  for (const auto& [p, v] : uinf) un[p] -= v;
  return un;
}

}  // namespace

double gamma_gap(const SequenceSpec& seq, std::int64_t n, int j, const Window& F) {
  TripleConfig cn = seq.level(n);
  TripleConfig cinf = seq.level(kInf);
  require_inside_level(F, cn.emb.outer_shape);
  ColumnStack stack;
  for (std::int64_t c = 0; c < F.size(); ++c) stack.push(gap_column(cn, cinf, j, F.point(c)));
  if (stack.rows.empty()) return 0.0;
  Eigen::BDCSVD<MatrixXcd> svd(stack.dense());
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

DiracGapResult dirac_gap(const SequenceSpec& seq, std::int64_t n, const Window& F, int samples,
                         std::uint64_t seed) {
  TripleConfig cn = seq.level(n);
  TripleConfig cinf = seq.level(kInf);
  require_inside_level(F, cn.emb.outer_shape);
  const int s = cinf.spin();

  // columns of the spinor-level difference over F x C^s
  std::map<IVec, Eigen::Index> rows;
  std::vector<IVec> row_list;
  auto row_index = [&](const IVec& m) {
    auto it = rows.find(m);
    if (it == rows.end()) {
      it = rows.emplace(m, static_cast<Eigen::Index>(row_list.size())).first;
      row_list.push_back(m);
    }
    return it->second;
  };

  std::vector<std::map<Eigen::Index, VectorXcd>> cols;
  for (std::int64_t c = 0; c < F.size(); ++c) {
    IVec m = F.point(c);
    for (int a = 0; a < s; ++a) {
      SparseSpinor xi{{m, VectorXcd::Unit(s, a)}};
      // rho D_n rho* - D_inf on the basis vector
      SparseSpinor xin{{canonical_rep(m, cn.emb.outer_shape), VectorXcd::Unit(s, a)}};
      SparseSpinor dn = dirac_apply_sparse(cn, xin);
      SparseSpinor diff;
      for (const auto& [p, v] : dn) diff[canonical_rep(p, cn.emb.outer_shape)] = v;
      SparseSpinor dinf = dirac_apply_sparse(cinf, xi);
      for (const auto& [p, v] : dinf) {
        auto it = diff.find(p);
        if (it == diff.end())
          diff[p] = -v;
        else
          it->second -= v;
      }
      std::map<Eigen::Index, VectorXcd> col;
      for (const auto& [p, v] : diff) col[row_index(p)] = v;
      cols.push_back(std::move(col));
    }
  }

  MatrixXcd dmat = MatrixXcd::Zero(static_cast<Eigen::Index>(row_list.size()) * s,
                                   static_cast<Eigen::Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, v] : cols[c]) dmat.block(r * s, static_cast<Eigen::Index>(c), s, 1) = v;

  DiracGapResult res;
  if (dmat.size() > 0) {
    Eigen::BDCSVD<MatrixXcd> svd(dmat);
    res.gap = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  }

  // sampled graph-norm discrepancy on unit vectors in l^2(F) (x) C^s
  Rng rng(seed);
  for (int t = 0; t < samples; ++t) {
    SparseSpinor xi, xin;
    double norm2 = 0.0;
    std::vector<std::pair<IVec, VectorXcd>> entries;
    for (std::int64_t c = 0; c < F.size(); ++c) {
      VectorXcd v(s);
      for (int a = 0; a < s; ++a) v(a) = rng.complex_in_disc();
      norm2 += v.squaredNorm();
      entries.emplace_back(F.point(c), v);
    }
    double nn = std::sqrt(norm2);
    for (auto& [m, v] : entries) {
      xi[m] = v / nn;
      xin[canonical_rep(m, cn.emb.outer_shape)] = v / nn;
    }
    auto l2 = [](const SparseSpinor& u) {
      double acc = 0.0;
      for (const auto& [m, v] : u) acc += v.squaredNorm();
      return std::sqrt(acc);
    };
    double dn_n = 1.0 + l2(dirac_apply_sparse(cn, xin));
    double dn_inf = 1.0 + l2(dirac_apply_sparse(cinf, xi));
    res.graph_norm_sup = std::max(res.graph_norm_sup, std::abs(dn_n - dn_inf));
  }
  return res;
}

SeminormTrace seminorm_trace(const AlgebraElement& a, const SequenceSpec& seq) {
  SeminormTrace out;
  if (!a.selfadjoint()) throw NcgError("seminorm_trace: element must be self-adjoint");

  for (std::int64_t n : seq.ngrid) {
    TripleConfig cfg = seq.level(n);
    const Shape& kin = cfg.emb.inner_shape;
    bool fits = true;
    for (const auto& [m, c] : a.coeffs)
      if (!(canonical_rep(m, kin) == m)) fits = false;
    if (!fits) {
      out.rows.push_back({n, 0.0, true});
      continue;
    }
    AlgebraElement an(kin);
    for (const auto& [m, c] : a.coeffs) an.coeffs[m] = c;
    out.rows.push_back({n, seminorm(an, cfg).value, false});
  }

  // windowed-stable limit value
  TripleConfig cinf = seq.level(kInf);
  AlgebraElement ainf(cinf.emb.inner_shape);
  for (const auto& [m, c] : a.coeffs) ainf.coeffs[m] = c;
  TripleConfig cbig = cinf;
  cbig.radius = cinf.radius * 2;
  double l_small = seminorm(ainf, cinf).value;
  double l_big = seminorm(ainf, cbig).value;
  out.limit_estimate = l_big;
  out.limit_stability = l_big > 0 ? (l_big - l_small) / l_big : 0.0;
  if (!out.rows.empty() && !out.rows.back().skipped && out.limit_estimate > 0)
    out.final_rel_gap = std::abs(out.rows.back().value - out.limit_estimate) / out.limit_estimate;
  return out;
}

// --- inequality suite --------------------------------------------------------

namespace {

// operator norm of an inner-algebra element in its own GNS representation
double inner_element_norm(const AlgebraElement& b, const TripleConfig& cfg) {
  Window w = Window::canonical(cfg.emb.inner_shape, cfg.radius + 4);
  return operator_norm(represent_compressed(b, cfg.emb.inner, w)).value;
}

}  // namespace

AlgebraElement random_inner_selfadjoint(Rng& rng, const TripleConfig& cfg, int support,
                                        std::int64_t radius) {
  const Shape& k = cfg.emb.inner_shape;
  AlgebraElement b(k);
  for (int t = 0; t < support; ++t) {
    IVec m(k.dim());
    for (int j = 0; j < k.dim(); ++j) {
      std::int64_t lo = k.finite(j) ? k.window_lo(j) : -radius;
      std::int64_t hi = k.finite(j) ? k.window_hi(j) : radius;
      m[j] = lo + rng.below(hi - lo + 1);
    }
    b.add(m, rng.complex_in_disc());
  }
  AlgebraElement a = b + adjoint(b);
  a *= cplx{0.5, 0.0};
  a.prune();
  return a;
}

TorusPoint random_group_point(Rng& rng, const Shape& k, int components) {
  std::vector<double> t(static_cast<size_t>(components), 0.0);
  for (int j = 0; j < components; ++j) {
    if (j < k.dim() && k.finite(j))
      t[j] = static_cast<double>(rng.below(k[j])) / static_cast<double>(k[j]);
    else
      t[j] = rng.uniform(-0.5, 0.5);
  }
  return TorusPoint(std::move(t));
}

SpinorField random_spinor(Rng& rng, const TripleConfig& cfg, const Window& w, std::int64_t margin) {
  SpinorField xi(w, cfg.spin());
  Window inner = w.shrunk(margin, cfg.emb.outer_shape);
  for (std::int64_t i = 0; i < inner.size(); ++i) {
    Eigen::Index row = w.index(inner.point(i));
    for (int c = 0; c < cfg.spin(); ++c) xi.values(row, c) = rng.complex_in_disc();
  }
  xi.values /= xi.values.norm();
  return xi;
}

Report inequality_suite(const TripleConfig& cfg, int samples, std::uint64_t seed, double slack) {
  Report rep;
  const int d = cfg.d();
  const int dp = cfg.dprime();
  const Shape& kin = cfg.emb.inner_shape;
  Window w = cfg.base_window();

  double mvt = -1.0, dila = -1.0, hmvt = -1.0, deriv = -1.0;
  Rng rng(seed);

  // L(1) = 0 exactly
  rep.add("L(unit)", seminorm(AlgebraElement::unit(kin), cfg).value, 0.0);

  OperatorWindow dirac = assemble_dirac(cfg, w);

  for (int t = 0; t < samples; ++t) {
    AlgebraElement a = random_inner_selfadjoint(rng, cfg, 3, 2);
    double la = seminorm(a, cfg, 1e-11, rng.next(), 512).value;

    // mean value: ||a - alpha^z(a)|| <= 2 slen(z) L(a), z in the inner dual
    TorusPoint z = random_group_point(rng, kin, d);
    AlgebraElement moved = a - dual_action(z, a);
    double lhs = inner_element_norm(moved, cfg);
    double rhs = 2.0 * slen(z) * la;
    mvt = std::max(mvt, lhs - rhs * (1.0 + slack));

    // dilation: |L(a) - L(alpha^w a)| <= dil(w) L(a), w in the full dual
    TorusPoint zf = random_group_point(rng, cfg.emb.outer_shape, dp);
    std::vector<double> inner_turns(zf.turns.begin(), zf.turns.begin() + d);
    AlgebraElement aw = dual_action(TorusPoint(inner_turns), a);
    double law = seminorm(aw, cfg, 1e-11, rng.next(), 512).value;
    double dz = dil(zf, cfg.emb.f, d);
    dila = std::max(dila, std::abs(la - law) - dz * la * (1.0 + slack) - 1e-12);

    // Hilbert mean value: ||xi - v^z xi|| <= 2 slen(z) DN(xi)
    SpinorField xi = random_spinor(rng, cfg, w, 1);
    double dn = xi.values.norm() + dirac.apply(xi.values).norm();
    SpinorField vxi = xi;
    for (Eigen::Index i = 0; i < vxi.values.rows(); ++i)
      vxi.values.row(i) *= unit_phase(character_turns(zf, w.point(i)));
    double hl = (xi.values - vxi.values).norm();
    hmvt = std::max(hmvt, hl - 2.0 * slen(zf) * dn * (1.0 + slack));

    // derivation bounds
    for (int j = 0; j < d; ++j) {
      double lhsj;
      if (kin.finite(j)) {
        TorusPoint zj = TorusPoint::root(kin, unit_vec(d, j));
        AlgebraElement diff = dual_action(zj, a) - a;
        lhsj = static_cast<double>(kin[j]) / kTau * inner_element_norm(diff, cfg);
      } else {
        lhsj = inner_element_norm(derive(j, a), cfg);
      }
      deriv = std::max(deriv, lhsj - 2.0 * la * (1.0 + slack));
    }
  }

  rep.add("mean_value_margin", mvt, 0.0);
  rep.add("dilation_margin", dila, 0.0);
  rep.add("hilbert_mean_value_margin", hmvt, 0.0);
  rep.add("derivation_bound_margin", deriv, 0.0);
  return rep;
}

// --- dynamics ------------------------------------------------------------------

namespace {

MatrixXcd dense_on_window(const TripleConfig& cfg, const Window& w, bool through_rho) {
  const int s = cfg.spin();
  MatrixXcd out = MatrixXcd::Zero(w.size() * s, w.size() * s);
  for (std::int64_t c = 0; c < w.size(); ++c) {
    IVec m = w.point(c);
    for (int a = 0; a < s; ++a) {
      SparseSpinor xi;
      if (through_rho) {
        IVec q = canonical_rep(m, cfg.emb.outer_shape);
        if (!(q == m)) continue;  // rho* kills it
        xi[q] = VectorXcd::Unit(s, a);
      } else {
        xi[m] = VectorXcd::Unit(s, a);
      }
      SparseSpinor img = dirac_apply_sparse(cfg, xi);
      for (const auto& [p, v] : img) {
        IVec pp = p;
        if (through_rho) {
          // rho embeds the level-n point at its canonical representative
          pp = canonical_rep(p, cfg.emb.outer_shape);
        }
        if (!w.contains(pp)) continue;
        out.block(w.index(pp) * s, c * s + a, s, 1) = v;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<DynamicsRow> dynamics_gap(const SequenceSpec& seq, std::int64_t n, const Window& F,
                                      const std::vector<double>& tgrid,
                                      std::int64_t window_radius) {
  TripleConfig cn = seq.level(n);
  TripleConfig cinf = seq.level(kInf);
  require_inside_level(F, cn.emb.outer_shape);
  const int s = cinf.spin();

  Window w = F;
  for (int j = 0; j < w.dim(); ++j) {
    w.lo[j] -= window_radius;
    w.hi[j] += window_radius;
  }

  MatrixXcd a = dense_on_window(cn, w, true);
  MatrixXcd b = dense_on_window(cinf, w, false);

  Eigen::SelfAdjointEigenSolver<MatrixXcd> ea(a), eb(b);
  double abnorm;
  {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ed(a - b);
    abnorm = ed.eigenvalues().cwiseAbs().maxCoeff();
  }

  // doubled window for the truncation diagnostic on e^{itB}
  Window w2 = F;
  for (int j = 0; j < w2.dim(); ++j) {
    w2.lo[j] -= 2 * window_radius;
    w2.hi[j] += 2 * window_radius;
  }
  MatrixXcd b2 = dense_on_window(cinf, w2, false);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eb2(b2);

  // column selectors for F (x) C^s
  std::vector<Eigen::Index> fcols, fcols2;
  for (std::int64_t c = 0; c < F.size(); ++c)
    for (int sp = 0; sp < s; ++sp) {
      fcols.push_back(w.index(F.point(c)) * s + sp);
      fcols2.push_back(w2.index(F.point(c)) * s + sp);
    }

  std::vector<DynamicsRow> rows;
  for (double t : tgrid) {
    if (t == 0.0) {
      rows.push_back({0.0, 0.0, 0.0, 0.0});
      continue;
    }
    auto propagator = [&](const Eigen::SelfAdjointEigenSolver<MatrixXcd>& es) {
      VectorXcd ph(es.eigenvalues().size());
      for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = unit_phase(t * es.eigenvalues()(i) / kTau);
      return MatrixXcd(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
    };
    MatrixXcd ua = propagator(ea), ub = propagator(eb), ub2 = propagator(eb2);

    MatrixXcd diff(w.size() * s, static_cast<Eigen::Index>(fcols.size()));
    for (size_t c = 0; c < fcols.size(); ++c) diff.col(c) = ua.col(fcols[c]) - ub.col(fcols[c]);
    Eigen::BDCSVD<MatrixXcd> svd(diff);

    // truncation drift: e^{itB} on w vs on the doubled window, on F columns
    double drift = 0.0;
    for (size_t c = 0; c < fcols.size(); ++c) {
      VectorXcd big = ub2.col(fcols2[c]);
      VectorXcd small = ub.col(fcols[c]);
      double dd = 0.0;
      for (std::int64_t q = 0; q < w2.size(); ++q) {
        IVec p = w2.point(q);
        for (int sp = 0; sp < s; ++sp) {
          cplx inside = w.contains(p) ? small(w.index(p) * s + sp) : cplx{0.0, 0.0};
          dd += std::norm(big(q * s + sp) - inside);
        }
      }
      drift = std::max(drift, std::sqrt(dd));
    }

    rows.push_back({t, svd.singularValues().size() ? svd.singularValues()(0) : 0.0,
                    std::abs(t) * abnorm, drift});
  }
  return rows;
}

// --- states -------------------------------------------------------------------

State State::maximally_mixed(const Window& w) {
  State s;
  s.window = w;
  s.rho = MatrixXcd::Identity(w.size(), w.size()) / static_cast<double>(w.size());
  return s;
}

State State::pure(const Window& w, const VectorXcd& v) {
  if (v.size() != w.size()) throw NcgError("State::pure: vector size mismatch");
  State s;
  s.window = w;
  VectorXcd u = v / v.norm();
  s.rho = u * u.adjoint();
  return s;
}

void State::validate() const {
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-12) throw NcgError("State: trace is not 1");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10) throw NcgError("State: not positive semidefinite");
}

double State::expectation(const AlgebraElement& a, const Cocycle& sigma) const {
  // Tr(rho pi(a)) = sum_m a(m) sum_q rho(q, q+m) sigma(m, q)
  const Shape& k = a.shape;
  cplx acc{0.0, 0.0};
  for (const auto& [m, c] : a.coeffs) {
    cplx mom{0.0, 0.0};
    for (std::int64_t qi = 0; qi < window.size(); ++qi) {
      IVec q = window.point(qi);
      IVec p = add_canonical(q, m, k);
      if (!window.contains(p)) continue;
      mom += rho(qi, window.index(p)) * sigma(m, q);
    }
    acc += c * mom;
  }
  return acc.real();
}

State canonical_trace_state(const TripleConfig& cfg) {
  if (!cfg.emb.outer_shape.all_finite())
    throw NcgError("canonical_trace_state: needs a finite full window");
  return State::maximally_mixed(Window::canonical(cfg.emb.outer_shape, 0));
}

MkResult mk_lower_bound(const State& phi, const State& psi, const TripleConfig& cfg, int budget,
                        std::uint64_t seed) {
  if (!(phi.window == psi.window)) throw NcgError("mk_lower_bound: states on different windows");
  const Shape& kin = cfg.emb.inner_shape;
  const Cocycle& sig = cfg.emb.outer;

  MkResult best;
  best.witness = AlgebraElement(kin);
  Rng rng(seed);

  auto evaluate = [&](const AlgebraElement& cand) {
    AlgebraElement a = cand;
    a.coeffs.erase(IVec(kin.dim(), 0));  // trace-free; constants do not separate states
    if (a.coeffs.empty()) return;
    double l = seminorm(a, cfg).value;
    if (l < 1e-12) return;
    a *= cplx{1.0 / l, 0.0};
    AlgebraElement ae = a.embedded(cfg.emb.outer_shape);
    double v = std::abs(phi.expectation(ae, sig) - psi.expectation(ae, sig));
    if (v > best.value) {
      double lw = seminorm(a, cfg).value;
      best = {v, a, lw};
    }
  };

  for (int step = 0; step < budget; ++step) {
    if (best.value == 0.0 || step % 2 == 0 || best.witness.coeffs.empty()) {
      evaluate(random_inner_selfadjoint(rng, cfg, 1 + static_cast<int>(rng.below(3)), 2));
    } else {
      // local improvement: perturb one coefficient pair of the incumbent
      AlgebraElement a = best.witness;
      std::vector<IVec> keys;
      for (const auto& [m, c] : a.coeffs) keys.push_back(m);
      IVec m = keys[static_cast<size_t>(rng.below(static_cast<std::int64_t>(keys.size())))];
      cplx delta = 0.25 * rng.complex_in_disc();
      a.add(m, delta);
      a.add(neg_canonical(m, kin), std::conj(delta));
      evaluate(a);
    }
  }
  return best;
}

}  // namespace ncglab
