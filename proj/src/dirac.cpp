#include "ncglab/dirac.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ncglab {

namespace {

IVec unit_vec(int d, int j) {
  IVec e(d, 0);
  e[j] = 1;
  return e;
}

// pairing <m,m>_n: coordinates over the infinite axes only
double pairing_self(const IVec& m, const Shape& k) {
  double s = 0.0;
  for (int j = 0; j < k.dim(); ++j)
    if (!k.finite(j)) s += static_cast<double>(m[j]) * static_cast<double>(m[j]);
  return s;
}

enum class GammaKind { MultDerive, Commutator, Derive, DiagFinite };

struct GammaSpec {
  GammaKind kind;
  int axis;             // the lattice axis the operator acts along
  int shift_axis;       // f(axis) for the U_{f(j)}-built cases
  AlgebraElement mult;  // X or Y element for the first two kinds
  double scale;         // k/(2 pi) for commutator, k'/(2 pi) for diag
};

GammaSpec gamma_spec(const TripleConfig& cfg, int i) {
  const int d = cfg.d();
  const int dp = cfg.dprime();
  if (i < 0 || i >= d + dp) throw NcgError("gamma: index out of range");
  const Shape& kp = cfg.emb.outer_shape;
  if (i < 2 * d) {
    int j = i % d;
    bool first = i < d;
    AlgebraElement m = first ? cfg.x_element(j) : cfg.y_element(j);
    if (!kp.finite(j)) {
      // Gamma_j = X_j d_j, Gamma_{d+j} = Y_j d_j
      return {GammaKind::MultDerive, j, cfg.emb.f[j], std::move(m), 0.0};
    }
    // Gamma_j = (-k/2 i pi)[Y_j, .], Gamma_{d+j} = (k/2 i pi)[X_j, .]
    AlgebraElement c = first ? cfg.y_element(j) : cfg.x_element(j);
    double sign = first ? -1.0 : 1.0;
    double scale = sign * static_cast<double>(kp[j]) / kTau;
    return {GammaKind::Commutator, j, cfg.emb.f[j], std::move(c), scale};
  }
  int j = i - d;  // axis in {d..d'-1}
  if (!kp.finite(j)) return {GammaKind::Derive, j, -1, AlgebraElement(kp), 0.0};
  double scale = static_cast<double>(kp[j]) / kTau;
  return {GammaKind::DiagFinite, j, -1, AlgebraElement(kp), scale};
}

// diagonal value of Gamma for the two diagonal kinds (purely imaginary)
cplx gamma_diag_value(const GammaSpec& g, const IVec& m, const Shape& kp) {
  if (g.kind == GammaKind::Derive) return {0.0, static_cast<double>(m[g.axis])};
  // (k'/2 i pi)(1 - Im(v^{z_j})): entries (k'/2 pi)(1 - sin(2 pi m_j/k'))/i
  double s = std::sin(kTau * static_cast<double>(m[g.axis]) / static_cast<double>(kp[g.axis]));
  return {0.0, -g.scale * (1.0 - s)};
}

struct ShiftTables {
  // per support point of the multiplier: target index in cod (-1 when the
  // contribution leaves the window) and the twisted phases
  struct Entry {
    std::vector<Eigen::Index> target;
    std::vector<cplx> left;   // sigma(y, p)
    std::vector<cplx> right;  // sigma(p, y)
    IVec y;
    cplx coeff;
  };
  std::vector<Entry> entries;
};

ShiftTables make_tables(const AlgebraElement& mult, const Cocycle& sigma, const Window& dom,
                        const Window& cod) {
  ShiftTables t;
  const Shape& k = mult.shape;
  for (const auto& [y, c] : mult.coeffs) {
    ShiftTables::Entry e;
    e.y = y;
    e.coeff = c;
    e.target.resize(dom.size());
    e.left.resize(dom.size());
    e.right.resize(dom.size());
    for (Eigen::Index i = 0; i < dom.size(); ++i) {
      IVec p = dom.point(i);
      IVec q = add_canonical(p, y, k);
      e.target[i] = cod.contains(q) ? cod.index(q) : -1;
      e.left[i] = sigma(y, p);
      e.right[i] = sigma(p, y);
    }
    t.entries.push_back(std::move(e));
  }
  return t;
}

}  // namespace

AlgebraElement TripleConfig::x_element(int j) const {
  const Shape& kp = emb.outer_shape;
  IVec ef = unit_vec(dprime(), emb.f[j]);
  AlgebraElement x(kp);
  x.add(ef, cplx{0.5, 0.0});
  x.add(neg_canonical(ef, kp), cplx{0.5, 0.0});
  return x;
}

AlgebraElement TripleConfig::y_element(int j) const {
  const Shape& kp = emb.outer_shape;
  IVec ef = unit_vec(dprime(), emb.f[j]);
  double s = static_cast<double>(emb.sgn[j]);
  AlgebraElement y(kp);
  y.add(ef, cplx{0.0, -0.5 * s});           // s/(2i) = -i s/2
  y.add(neg_canonical(ef, kp), cplx{0.0, 0.5 * s});
  return y;
}

TripleConfig make_triple(EmbeddingData emb, std::int64_t radius, double M,
                         const CliffordRep* rep) {
  TripleConfig cfg;
  if (rep) {
    if (rep->N != emb.d + emb.dprime) throw NcgError("make_triple: need N = d + d' generators");
    if (!verify_clifford(*rep).pass()) throw NcgError("make_triple: supplied gammas violate the relations");
    cfg.cl = *rep;
  } else {
    cfg.cl = build_gammas(emb.d + emb.dprime);
  }
  cfg.emb = std::move(emb);
  cfg.radius = radius;
  cfg.M = M > 0 ? M : 10.0 * cfg.emb.d;
  return cfg;
}

OperatorWindow build_gamma_op(const TripleConfig& cfg, int i, const Window& w) {
  GammaSpec g = gamma_spec(cfg, i);
  const Shape kp = cfg.emb.outer_shape;

  OperatorWindow op;
  op.dom = w;
  op.cod = w;
  op.shape = kp;
  op.spin = 1;
  op.hermitian = false;  // skew-symmetric

  if (g.kind == GammaKind::Derive || g.kind == GammaKind::DiagFinite) {
    auto diag = std::make_shared<VectorXcd>(w.size());
    for (Eigen::Index p = 0; p < w.size(); ++p) (*diag)(p) = gamma_diag_value(g, w.point(p), kp);
    op.apply_fn = [diag](const MatrixXcd& in, MatrixXcd& out) {
      out += diag->asDiagonal() * in;
    };
    op.adj_fn = [diag](const MatrixXcd& in, MatrixXcd& out) {
      out += diag->conjugate().asDiagonal() * in;
    };
    return op;
  }

  auto tables = std::make_shared<ShiftTables>(make_tables(g.mult, cfg.emb.outer, w, w));

  if (g.kind == GammaKind::MultDerive) {
    int axis = g.axis;
    auto wptr = std::make_shared<Window>(w);
    op.apply_fn = [tables, wptr, axis](const MatrixXcd& in, MatrixXcd& out) {
      for (const auto& e : tables->entries) {
        for (Eigen::Index p = 0; p < in.rows(); ++p) {
          if (e.target[p] < 0) continue;
          double mj = static_cast<double>(wptr->point(p)[axis]);
          out.row(e.target[p]) += e.coeff * e.left[p] * cplx{0.0, mj} * in.row(p);
        }
      }
    };
    op.adj_fn = [op_apply = op.apply_fn](const MatrixXcd& in, MatrixXcd& out) {
      MatrixXcd tmp = MatrixXcd::Zero(out.rows(), out.cols());
      op_apply(in, tmp);
      out -= tmp;  // skew-symmetric
    };
    return op;
  }

  // Commutator kind: scale/i * ([mult, .]) = -i*scale*(sigma(y,p) - sigma(p,y)) shifts
  double scale = g.scale;
  op.apply_fn = [tables, scale](const MatrixXcd& in, MatrixXcd& out) {
    const cplx pref{0.0, -scale};  // scale/(i)
    for (const auto& e : tables->entries) {
      for (Eigen::Index p = 0; p < in.rows(); ++p) {
        if (e.target[p] < 0) continue;
        out.row(e.target[p]) += pref * e.coeff * (e.left[p] - e.right[p]) * in.row(p);
      }
    }
  };
  op.adj_fn = [op_apply = op.apply_fn](const MatrixXcd& in, MatrixXcd& out) {
    MatrixXcd tmp = MatrixXcd::Zero(out.rows(), out.cols());
    op_apply(in, tmp);
    out -= tmp;
  };
  return op;
}

OperatorWindow assemble_dirac(const TripleConfig& cfg, const Window& w) {
  int n = cfg.ngamma();
  auto gammas = std::make_shared<std::vector<OperatorWindow>>();
  for (int i = 0; i < n; ++i) gammas->push_back(build_gamma_op(cfg, i, w));
  auto cl = std::make_shared<CliffordRep>(cfg.cl);

  OperatorWindow op;
  op.dom = w;
  op.cod = w;
  op.shape = cfg.emb.outer_shape;
  op.spin = cfg.spin();
  op.hermitian = true;
  op.apply_fn = [gammas, cl](const MatrixXcd& in, MatrixXcd& out) {
    for (size_t i = 0; i < gammas->size(); ++i) {
      MatrixXcd tmp = MatrixXcd::Zero(in.rows(), in.cols());
      (*gammas)[i].apply_fn(in, tmp);
      out += tmp * cl->gamma[i].transpose();
    }
  };
  op.adj_fn = op.apply_fn;
  return op;
}

OperatorWindow represent_spinor(const AlgebraElement& a, const Cocycle& sigma, const Window& w,
                                int spin) {
  OperatorWindow base = represent(a, sigma, w, &w);
  base.spin = spin;  // row-wise action is spin-blind
  return base;
}

VectorXd spectrum(const OperatorWindow& dirac, Eigen::Index dense_cap, double residual_tol) {
  if (!dirac.hermitian || !(dirac.dom == dirac.cod))
    throw NcgError("spectrum: operator must be Hermitian on a fixed window");
  if (dirac.dim_dom() > dense_cap)
    throw NcgError("spectrum: size cap exceeded; use windowed extremal eigenvalues instead");
  MatrixXcd m = dirac.dense();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw NcgError("spectrum: eigensolver failed");
  VectorXd vals = es.eigenvalues();
  double scale = std::max(vals.cwiseAbs().maxCoeff(), 1.0);
  double resid = (m * es.eigenvectors() - es.eigenvectors() * vals.asDiagonal()).cwiseAbs().maxCoeff();
  if (resid > residual_tol * scale) throw NcgError("spectrum: residual check failed");
  return vals;
}

std::vector<AlgebraElement> gradient(const AlgebraElement& a, const TripleConfig& cfg) {
  const int d = cfg.d();
  const Shape& kp = cfg.emb.outer_shape;
  AlgebraElement ae = a.shape.dim() == kp.dim() ? a : a.embedded(kp);
  for (const auto& [m, c] : ae.coeffs)
    for (int j = d; j < cfg.dprime(); ++j)
      if (m[j] != 0) throw NcgError("gradient: support outside the inner algebra");

  std::vector<AlgebraElement> out;
  out.reserve(2 * d);
  const Cocycle& sig = cfg.emb.outer;
  for (int i = 0; i < 2 * d; ++i) {
    int j = i % d;
    bool first = i < d;
    if (!kp.finite(j)) {
      AlgebraElement da = derive(j, ae);
      out.push_back(convolve(first ? cfg.x_element(j) : cfg.y_element(j), da, sig));
    } else {
      AlgebraElement m = first ? cfg.y_element(j) : cfg.x_element(j);
      double sign = first ? -1.0 : 1.0;
      AlgebraElement comm = convolve(m, ae, sig) - convolve(ae, m, sig);
      comm *= cplx{0.0, -sign * static_cast<double>(kp[j]) / kTau};  // sign*k/(2 i pi)
      out.push_back(std::move(comm));
    }
  }
  return out;
}

NormResult seminorm(const AlgebraElement& a, const TripleConfig& cfg, double tol,
                    std::uint64_t seed, Eigen::Index dense_cap) {
  if (!a.selfadjoint()) throw NcgError("seminorm: element must be self-adjoint");
  std::vector<AlgebraElement> g = gradient(a, cfg);
  Window w = cfg.base_window();

  auto ops = std::make_shared<std::vector<OperatorWindow>>();
  for (auto& gi : g) ops->push_back(represent_compressed(gi, cfg.emb.outer, w));
  auto cl = std::make_shared<CliffordRep>(cfg.cl);

  // i [D, a (x) 1] is Hermitian for self-adjoint a
  OperatorWindow h;
  h.dom = w;
  h.cod = w;
  h.shape = cfg.emb.outer_shape;
  h.spin = cfg.spin();
  h.hermitian = true;
  h.apply_fn = [ops, cl](const MatrixXcd& in, MatrixXcd& out) {
    const cplx I{0.0, 1.0};
    for (size_t i = 0; i < ops->size(); ++i) {
      MatrixXcd tmp = MatrixXcd::Zero(in.rows(), in.cols());
      (*ops)[i].apply_fn(in, tmp);
      out += I * (tmp * cl->gamma[i].transpose());
    }
  };
  h.adj_fn = h.apply_fn;
  return operator_norm(h, tol, 240, seed, dense_cap);
}

double graph_norm(const SpinorField& xi, const TripleConfig& cfg) {
  Window w = xi.window;
  if (!xi.supported_within(w.shrunk(1, cfg.emb.outer_shape)))
    throw NcgError("graph_norm: field violates the window margin");
  OperatorWindow d = assemble_dirac(cfg, w);
  return xi.values.norm() + d.apply(xi.values).norm();
}

Report resolvent_bound_check(const TripleConfig& cfg, const Window& w) {
  Report rep;
  const Shape& kp = cfg.emb.outer_shape;
  const int d = cfg.d();
  const double M = cfg.M;

  bool any_inf = false;
  for (int j = 0; j < kp.dim(); ++j)
    if (!kp.finite(j)) any_inf = true;
  if (!any_inf) {
    rep.add_flag("vacuous_no_infinite_axes", true);
    return rep;
  }

  // windowed ||sqrt(K)||; equals 1/M exactly when 0 is in the window
  double sk = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    sk = std::max(sk, 1.0 / std::sqrt(M * M + pairing_self(w.point(i), kp)));
  rep.add("sqrtK_norm_vs_1/M", std::abs(sk - 1.0 / M), 1e-12);

  // indices of the Gamma's entering D^inf
  std::vector<int> idx;
  for (int j = 0; j < d; ++j)
    if (!kp.finite(j)) {
      idx.push_back(j);
      idx.push_back(d + j);
    }
  for (int j = d; j < cfg.dprime(); ++j)
    if (!kp.finite(j)) idx.push_back(d + j);

  // inner window grown by the composition reach so every product is exact
  Window w2 = w.expanded(2, kp);
  std::vector<OperatorWindow> gam;
  for (int i : idx) gam.push_back(build_gamma_op(cfg, i, w2));
  auto k_diag = [&](double power) {
    VectorXcd diag(w2.size());
    for (Eigen::Index i = 0; i < w2.size(); ++i)
      diag(i) = std::pow(M * M + pairing_self(w2.point(i), kp), -power);
    return diag;
  };
  VectorXcd skdiag = k_diag(0.5), kdiag = k_diag(1.0);

  auto embed = [&](const MatrixXcd& in, int spin) {
    MatrixXcd out = MatrixXcd::Zero(w2.size(), spin);
    for (Eigen::Index i = 0; i < w.size(); ++i) out.row(w2.index(w.point(i))) = in.row(i);
    return out;
  };
  auto restrict_w = [&](const MatrixXcd& in, int spin) {
    MatrixXcd out(w.size(), spin);
    for (Eigen::Index i = 0; i < w.size(); ++i) out.row(i) = in.row(w2.index(w.point(i)));
    return out;
  };

  // pairwise commutator norms against the case table
  const double s2 = std::sqrt(2.0);
  for (size_t ai = 0; ai < idx.size(); ++ai) {
    for (size_t bi = ai + 1; bi < idx.size(); ++bi) {
      int i1 = idx[ai], i2 = idx[bi];
      int ax1 = i1 < 2 * d ? i1 % d : i1 - d;
      int ax2 = i2 < 2 * d ? i2 % d : i2 - d;
      double bound;
      if (i1 >= 2 * d && i2 >= 2 * d) {
        bound = 0.0;
      } else {
        int j = std::min(ax1, ax2) < d ? (ax1 < d ? ax1 : ax2) : ax1;
        int s = (j == ax1) ? ax2 : ax1;
        if (s == cfg.emb.f[j])
          bound = (i2 >= 2 * d || i1 >= 2 * d) ? s2 / 2.0 : s2;
        else
          bound = 0.0;
      }

      const OperatorWindow& g1 = gam[ai];
      const OperatorWindow& g2 = gam[bi];
      auto comm2 = [&, g1, g2](const MatrixXcd& u) {
        MatrixXcd t1 = MatrixXcd::Zero(w2.size(), u.cols()), t2 = MatrixXcd::Zero(w2.size(), u.cols());
        g2.apply_fn(u, t1);
        MatrixXcd r1 = MatrixXcd::Zero(w2.size(), u.cols());
        g1.apply_fn(t1, r1);
        g1.apply_fn(u, t2);
        MatrixXcd r2 = MatrixXcd::Zero(w2.size(), u.cols());
        g2.apply_fn(t2, r2);
        return MatrixXcd(r1 - r2);
      };
      OperatorWindow c;
      c.dom = w;
      c.cod = w;
      c.shape = kp;
      c.spin = 1;
      c.apply_fn = [&, comm2](const MatrixXcd& in, MatrixXcd& out) {
        MatrixXcd u = skdiag.asDiagonal() * embed(in, 1);
        out += restrict_w(comm2(u), 1);
      };
      // ([G1,G2] sqrtK)* = -sqrtK [G1,G2]
      c.adj_fn = [&, comm2](const MatrixXcd& in, MatrixXcd& out) {
        MatrixXcd u = comm2(embed(in, 1));
        out -= restrict_w(MatrixXcd(skdiag.asDiagonal() * u), 1);
      };
      double val;
      if (c.dim_dom() <= 1500) {
        Eigen::BDCSVD<MatrixXcd> svd(c.dense());
        val = svd.singularValues()(0);
      } else {
        val = operator_norm(c).value;
      }
      rep.add("commutator[G" + std::to_string(i1) + ",G" + std::to_string(i2) + "]sqrtK",
              val, bound + 1e-9);
    }
  }

  // windowed ||F K|| with F = (D^inf)^2 - Delta, via the commutator sums
  const CliffordRep& cl = cfg.cl;
  const int s = cfg.spin();
  auto apply_f = [&, idx](const MatrixXcd& u) {
    MatrixXcd acc = MatrixXcd::Zero(w2.size(), s);
    for (size_t ai = 0; ai < idx.size(); ++ai) {
      for (size_t bi = ai + 1; bi < idx.size(); ++bi) {
        MatrixXcd t = MatrixXcd::Zero(w2.size(), s);
        gam[bi].apply_fn(u, t);
        MatrixXcd r = MatrixXcd::Zero(w2.size(), s);
        gam[ai].apply_fn(t, r);
        MatrixXcd t2 = MatrixXcd::Zero(w2.size(), s);
        gam[ai].apply_fn(u, t2);
        MatrixXcd r2 = MatrixXcd::Zero(w2.size(), s);
        gam[bi].apply_fn(t2, r2);
        acc += (r - r2) * (cl.gamma[idx[ai]] * cl.gamma[idx[bi]]).transpose();
      }
    }
    return acc;
  };
  OperatorWindow fk;
  fk.dom = w;
  fk.cod = w;
  fk.shape = kp;
  fk.spin = s;
  fk.apply_fn = [&, apply_f](const MatrixXcd& in, MatrixXcd& out) {
    MatrixXcd u = kdiag.asDiagonal() * embed(in, s);
    out += restrict_w(apply_f(u), s);
  };
  // (F K)* = K F for Hermitian F and real diagonal K
  fk.adj_fn = [&, apply_f](const MatrixXcd& in, MatrixXcd& out) {
    MatrixXcd u = apply_f(embed(in, s));
    out += restrict_w(MatrixXcd(kdiag.asDiagonal() * u), s);
  };
  double fkval;
  if (fk.dim_dom() <= 1500) {
    Eigen::BDCSVD<MatrixXcd> svd(fk.dense());
    fkval = svd.singularValues()(0);
  } else {
    fkval = operator_norm(fk).value;
  }
  rep.add("FK_norm", fkval, 1.0);

  return rep;
}

}  // namespace ncglab
