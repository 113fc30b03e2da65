#include "ncglab/cocycle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ncglab {

namespace {

double fract(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;
  return f;
}

MatrixXd upper_part(const MatrixXd& theta) {
  MatrixXd w = MatrixXd::Zero(theta.rows(), theta.cols());
  for (int r = 0; r < theta.rows(); ++r)
    for (int c = r + 1; c < theta.cols(); ++c) w(r, c) = theta(r, c);
  return w;
}

void require_antisymmetric(const MatrixXd& theta) {
  if (theta.rows() != theta.cols()) throw NcgError("theta must be square");
  if ((theta + theta.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NcgError("theta must be antisymmetric");
}

IVec unit_vec(int d, int j) {
  IVec e(d, 0);
  e[j] = 1;
  return e;
}

}  // namespace

Cocycle Cocycle::bicharacter(MatrixXd omega, Shape k) {
  if (omega.rows() != k.dim() || omega.cols() != k.dim())
    throw NcgError("bicharacter: omega dimension mismatch");
  if (auto v = quotient_violation(omega, k)) {
    throw NcgError("bicharacter: omega does not descend to the quotient; generator pair (" +
                   std::to_string(v->first) + "," + std::to_string(v->second) + ")");
  }
  Cocycle c(std::move(k));
  c.body_ = Bicharacter{std::move(omega)};
  return c;
}

Cocycle Cocycle::normalized_from_theta(const MatrixXd& theta, Shape k, double beta) {
  require_antisymmetric(theta);
  MatrixXd omega = upper_part(theta);
  if (auto v = quotient_violation(omega, k)) {
    throw NcgError("normalized_from_theta: theta does not descend; generator pair (" +
                   std::to_string(v->first) + "," + std::to_string(v->second) + ")");
  }
  Cocycle c(std::move(k));
  c.body_ = Normalized{std::move(omega), beta};
  return c;
}

Cocycle Cocycle::product(std::vector<Cocycle> factors) {
  if (factors.empty()) throw NcgError("product: no factors");
  Cocycle c(factors.front().shape());
  Product p;
  for (auto& f : factors) {
    if (!(f.shape() == c.shape_)) throw NcgError("product: shape mismatch");
    p.factors.push_back(std::make_shared<const Cocycle>(std::move(f)));
  }
  c.body_ = std::move(p);
  return c;
}

Cocycle Cocycle::lift(Cocycle base, Shape outer) {
  int take = base.shape().dim();
  if (take > outer.dim()) throw NcgError("lift: base larger than outer");
  for (int j = 0; j < take; ++j)
    if (outer[j] != base.shape()[j]) throw NcgError("lift: inner axes must match");
  Cocycle c(std::move(outer));
  c.body_ = Lift{std::make_shared<const Cocycle>(std::move(base))};
  return c;
}

Cocycle Cocycle::tabulated(Shape k, std::vector<cplx> table) {
  std::int64_t n = k.group_size();
  if (n > 4096) throw NcgError("tabulated: group too large (cap 4096)");
  if (static_cast<std::int64_t>(table.size()) != n * n)
    throw NcgError("tabulated: table size mismatch");
  Cocycle c(std::move(k));
  c.body_ = Tabulated{std::move(table)};
  return c;
}

Cocycle Cocycle::tabulate(const Cocycle& src) {
  const Shape& k = src.shape();
  std::int64_t n = k.group_size();
  if (n > 4096) throw NcgError("tabulate: group too large (cap 4096)");
  Window w = Window::canonical(k, 0);
  std::vector<cplx> table(static_cast<size_t>(n * n));
  for (std::int64_t i = 0; i < n; ++i) {
    IVec m = w.point(i);
    for (std::int64_t j = 0; j < n; ++j) table[static_cast<size_t>(i * n + j)] = src(m, w.point(j));
  }
  return tabulated(k, std::move(table));
}

cplx Cocycle::eval_canonical(const IVec& m, const IVec& mp) const {
  struct Visitor {
    const Cocycle* self;
    const IVec& m;
    const IVec& mp;

    cplx operator()(const Trivial&) const { return {1.0, 0.0}; }

    cplx operator()(const Bicharacter& b) const { return unit_phase(quad_turns(b.omega, m, mp)); }

    cplx operator()(const Normalized& n) const {
      auto f = [&](const IVec& x) {
        // conj(sqrt(varsigma(x,-x))); angle of varsigma(x,-x) is -<omega x, x>
        return std::conj(branch_sqrt(-quad_turns(n.omega, x, x), n.beta));
      };
      IVec s = add_canonical(m, mp, self->shape_);
      return f(m) * f(mp) * std::conj(f(s)) * unit_phase(quad_turns(n.omega, m, mp));
    }

    cplx operator()(const Product& p) const {
      cplx v{1.0, 0.0};
      for (const auto& f : p.factors) v *= f->eval_canonical(m, mp);
      return v;
    }

    cplx operator()(const Lift& l) const {
      int take = l.base->shape().dim();
      IVec a(m.begin(), m.begin() + take), b(mp.begin(), mp.begin() + take);
      return l.base->eval_canonical(a, b);
    }

    cplx operator()(const Tabulated& t) const {
      Window w = Window::canonical(self->shape_, 0);
      std::int64_t n = w.size();
      return t.table[static_cast<size_t>(w.index(m) * n + w.index(mp))];
    }
  };
  return std::visit(Visitor{this, m, mp}, body_);
}

std::optional<std::pair<int, int>> quotient_violation(const MatrixXd& omega, const Shape& k,
                                                      double tol) {
  for (int a = 0; a < k.dim(); ++a) {
    if (!k.finite(a)) continue;
    double ka = static_cast<double>(k[a]);
    for (int b = 0; b < k.dim(); ++b) {
      double u = ka * omega(a, b);
      double v = ka * omega(b, a);
      if (std::abs(u - std::round(u)) > tol || std::abs(v - std::round(v)) > tol)
        return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

Cocycle bicharacter_from_theta(const MatrixXd& theta, const Shape& k) {
  require_antisymmetric(theta);
  if (theta.cwiseAbs().maxCoeff() == 0.0) return Cocycle::trivial(k);
  MatrixXd half = 0.5 * theta;
  if (!quotient_violation(half, k)) return Cocycle::bicharacter(half, k);
  return normalize_from_theta(theta, k, pick_branch_angle(theta, k));
}

Cocycle normalize_from_theta(const MatrixXd& theta, const Shape& k, double beta) {
  return Cocycle::normalized_from_theta(theta, k, beta);
}

double pick_branch_angle(const MatrixXd& theta, const Shape& k, std::int64_t radius) {
  require_antisymmetric(theta);
  MatrixXd omega = upper_part(theta);
  Window w = Window::canonical(k, radius);
  std::set<double> angles;
  std::int64_t n = w.size();
  std::int64_t step = std::max<std::int64_t>(1, n / 20000);
  for (std::int64_t i = 0; i < n; i += step) {
    IVec m = w.point(i);
    angles.insert(fract(-quad_turns(omega, m, m)));
  }
  angles.insert(0.0);  // m = 0 always contributes
  // midpoint of the largest circular gap
  std::vector<double> a(angles.begin(), angles.end());
  double best_gap = (1.0 - a.back()) + a.front();
  double beta = fract(a.back() + 0.5 * best_gap);
  for (size_t i = 0; i + 1 < a.size(); ++i) {
    double gap = a[i + 1] - a[i];
    if (gap > best_gap) {
      best_gap = gap;
      beta = a[i] + 0.5 * gap;
    }
  }
  return beta;
}

namespace {

IVec random_point(Rng& rng, const Shape& k, std::int64_t radius) {
  IVec m(k.dim());
  for (int j = 0; j < k.dim(); ++j) {
    std::int64_t lo = k.finite(j) ? k.window_lo(j) : -radius;
    std::int64_t hi = k.finite(j) ? k.window_hi(j) : radius;
    m[j] = lo + rng.below(hi - lo + 1);
  }
  return m;
}

}  // namespace

Report verify_cocycle(const Cocycle& sigma, int samples, std::uint64_t seed, std::int64_t radius,
                      std::int64_t exhaustive_cap) {
  const Shape& k = sigma.shape();
  Report rep;
  double id_viol = 0.0, norm_viol = 0.0, mod_viol = 0.0, conj_viol = 0.0;

  auto check_triple = [&](const IVec& x, const IVec& y, const IVec& z) {
    cplx lhs = sigma(x, y) * sigma(add_canonical(x, y, k), z);
    cplx rhs = sigma(x, add_canonical(y, z, k)) * sigma(y, z);
    id_viol = std::max(id_viol, std::abs(lhs - rhs));
  };
  auto check_pair = [&](const IVec& x, const IVec& y) {
    mod_viol = std::max(mod_viol, std::abs(std::abs(sigma(x, y)) - 1.0));
    conj_viol = std::max(conj_viol,
                         std::abs(std::conj(sigma(x, y)) - sigma(neg_canonical(y, k), neg_canonical(x, k))));
  };
  auto check_single = [&](const IVec& x) {
    norm_viol = std::max(norm_viol, std::abs(sigma(x, neg_canonical(x, k)) - cplx{1.0, 0.0}));
    cplx ex = sigma(x, IVec(k.dim(), 0));
    cplx ex2 = sigma(IVec(k.dim(), 0), x);
    norm_viol = std::max({norm_viol, std::abs(ex - cplx{1.0, 0.0}), std::abs(ex2 - cplx{1.0, 0.0})});
  };

  bool exhaustive = k.all_finite() && k.group_size() <= exhaustive_cap;
  if (exhaustive) {
    Window w = Window::canonical(k, 0);
    std::int64_t n = w.size();
    for (std::int64_t i = 0; i < n; ++i) check_single(w.point(i));
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j) check_pair(w.point(i), w.point(j));
    for (std::int64_t i = 0; i < n; ++i) {
      IVec x = w.point(i);
      for (std::int64_t j = 0; j < n; ++j) {
        IVec y = w.point(j);
        for (std::int64_t l = 0; l < n; ++l) check_triple(x, y, w.point(l));
      }
    }
  } else {
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
      IVec x = random_point(rng, k, radius);
      IVec y = random_point(rng, k, radius);
      IVec z = random_point(rng, k, radius);
      check_triple(x, y, z);
      check_pair(x, y);
      check_single(x);
    }
  }

  rep.add(exhaustive ? "cocycle_identity(exhaustive)" : "cocycle_identity(sampled)", id_viol, 1e-12);
  rep.add("normalization", norm_viol, 1e-12);
  rep.add("unit_modulus", mod_viol, 1e-12);
  rep.add("conjugation_rule", conj_viol, 1e-12);
  return rep;
}

// --- embeddings -------------------------------------------------------------

EmbeddingData::EmbeddingData(int d_, std::vector<int> f_, Shape ks, Shape kps, Cocycle sig,
                             Cocycle sigp, MatrixXd theta)
    : d(d_),
      dprime(static_cast<int>(f_.size())),
      f(std::move(f_)),
      inner_shape(std::move(ks)),
      outer_shape(std::move(kps)),
      inner(std::move(sig)),
      outer(std::move(sigp)),
      theta_inner(std::move(theta)) {
  if (inner_shape.dim() != d || outer_shape.dim() != dprime || dprime < d || dprime > 2 * d)
    throw NcgError("EmbeddingData: dimension mismatch");
  std::vector<bool> hit(dprime, false);
  for (int j = 0; j < dprime; ++j) {
    if (f[j] < 0 || f[j] >= dprime) throw NcgError("EmbeddingData: f out of range");
    if (f[j] == j) throw NcgError("EmbeddingData: f has a fixed point");
    if (f[f[j]] != j) throw NcgError("EmbeddingData: f is not an involution");
    hit[f[j]] = true;
  }
  for (int j = d; j < dprime; ++j) {
    if (f[j] >= d) throw NcgError("EmbeddingData: {d..d'-1} must be covered by f({0..d-1})");
  }
  (void)hit;
  for (int j = 0; j < d; ++j) {
    if (outer_shape[j] != inner_shape[j] || outer_shape[f[j]] != inner_shape[j])
      throw NcgError("EmbeddingData: shape condition k'(f(j)) = k'(j) = k(j) violated");
  }
  fsgn.resize(d);
  for (int j = 0; j < d; ++j) fsgn[j] = f[j] > j ? 1 : -1;
  if (sgn.empty()) sgn = fsgn;
}

TorusPoint EmbeddingData::z_axis(int j) const {
  std::vector<double> t(dprime, 0.0);
  if (outer_shape.finite(j)) t[j] = 1.0 / static_cast<double>(outer_shape[j]);
  return TorusPoint(std::move(t));
}

TorusPoint EmbeddingData::conj_orientation(int j) const {
  std::vector<double> t(dprime, 0.0);
  if (outer_shape.finite(j)) t[j] = static_cast<double>(sgn[j]) / static_cast<double>(outer_shape[j]);
  return TorusPoint(std::move(t));
}

EmbeddingData innerify(const Shape& k, const Cocycle& sigma, const MatrixXd& theta_inner,
                       double beta) {
  int d = k.dim();
  int dp = 2 * d;
  IVec kk(k.entries);
  kk.insert(kk.end(), k.entries.begin(), k.entries.end());
  Shape kprime(kk);

  MatrixXd theta_c = MatrixXd::Zero(dp, dp);
  for (int j = 0; j < d; ++j) {
    if (!k.finite(j)) continue;
    double r = 1.0 / static_cast<double>(k[j]);
    theta_c(j, d + j) = r;
    theta_c(d + j, j) = -r;
  }
  Cocycle c = normalize_from_theta(theta_c, kprime, beta);
  Cocycle outer = Cocycle::product({Cocycle::lift(sigma, kprime), std::move(c)});

  std::vector<int> f(dp);
  for (int j = 0; j < d; ++j) {
    f[j] = d + j;
    f[d + j] = j;
  }
  EmbeddingData e(d, std::move(f), k, std::move(kprime), sigma, std::move(outer), theta_inner);
  // theta_c(j, d+j) = +1/k(j): the conjugation by U_{f(j)} rotates axis j in
  // the +z_{n,j} direction
  e.sgn.assign(d, 1);
  return e;
}

namespace {

// minimal sparse vector ops for the verification below; the algebra module
// has the general versions
using SparseVec = std::map<IVec, cplx>;

SparseVec left_delta(const IVec& y, const Cocycle& sig, const SparseVec& xi) {
  SparseVec out;
  const Shape& k = sig.shape();
  for (const auto& [m, v] : xi) out[add_canonical(m, y, k)] += sig(y, m) * v;
  return out;
}

SparseVec right_delta(const IVec& y, const Cocycle& sig, const SparseVec& xi) {
  SparseVec out;
  const Shape& k = sig.shape();
  for (const auto& [m, v] : xi) out[add_canonical(m, y, k)] += sig(m, y) * v;
  return out;
}

}  // namespace

Report verify_embedding(const EmbeddingData& e, int samples, std::uint64_t seed,
                        std::int64_t radius) {
  Report rep;
  const Shape& kp = e.outer_shape;
  int dp = e.dprime;

  // item-(5)-style commutation on generators, in the embedding's orientation
  double comm_viol = 0.0;
  for (int j = 0; j < e.d; ++j) {
    for (int s = 0; s < dp; ++s) {
      cplx factor = e.outer.commutation(unit_vec(dp, e.f[j]), unit_vec(dp, s));
      cplx expected{1.0, 0.0};
      if (s == j && kp.finite(j))
        expected = unit_phase(static_cast<double>(e.sgn[j]) / static_cast<double>(kp[j]));
      comm_viol = std::max(comm_viol, std::abs(factor - expected));
    }
  }
  rep.add("generator_commutation", comm_viol, 1e-12);

  // conjugation identity U_{f(j)} (xi . U_{f(j)}^*) = v^{w_j} xi on deltas
  Rng rng(seed);
  double conj_viol = 0.0;
  for (int s = 0; s < samples; ++s) {
    IVec m(dp);
    for (int j = 0; j < dp; ++j) {
      std::int64_t lo = kp.finite(j) ? kp.window_lo(j) : -radius;
      std::int64_t hi = kp.finite(j) ? kp.window_hi(j) : radius;
      m[j] = lo + rng.below(hi - lo + 1);
    }
    for (int j = 0; j < e.d; ++j) {
      IVec ef = unit_vec(dp, e.f[j]);
      IVec nef = neg_canonical(ef, kp);
      SparseVec xi{{m, cplx{1.0, 0.0}}};
      SparseVec got = left_delta(ef, e.outer, right_delta(nef, e.outer, xi));
      cplx expect = unit_phase(character_turns(e.conj_orientation(j), m));
      double v = std::abs(got[m] - expect);
      for (const auto& [p, w] : got)
        if (p != m) v = std::max(v, std::abs(w));
      conj_viol = std::max(conj_viol, v);
    }
  }
  rep.add("conjugation_identity", conj_viol, 1e-12);

  // inner-block restriction of sigma' equals sigma
  double restr_viol = 0.0;
  for (int s = 0; s < samples; ++s) {
    IVec a(e.d), b(e.d);
    for (int j = 0; j < e.d; ++j) {
      std::int64_t lo = e.inner_shape.finite(j) ? e.inner_shape.window_lo(j) : -radius;
      std::int64_t hi = e.inner_shape.finite(j) ? e.inner_shape.window_hi(j) : radius;
      a[j] = lo + rng.below(hi - lo + 1);
      b[j] = lo + rng.below(hi - lo + 1);
    }
    IVec ea(a), eb(b);
    ea.resize(dp, 0);
    eb.resize(dp, 0);
    restr_viol = std::max(restr_viol, std::abs(e.outer(ea, eb) - e.inner(a, b)));
  }
  rep.add("inner_block_restriction", restr_viol, 1e-12);

  return rep;
}

}  // namespace ncglab
