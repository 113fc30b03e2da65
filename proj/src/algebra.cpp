#include "ncglab/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ncglab {

bool AlgebraElement::selfadjoint(double tol) const {
  for (const auto& [m, c] : coeffs) {
    if (std::abs(std::conj(at(neg_canonical(m, shape))) - c) > tol) return false;
  }
  return true;
}

AlgebraElement AlgebraElement::embedded(const Shape& outer) const {
  if (outer.dim() < shape.dim()) throw NcgError("embedded: outer shape too small");
  for (int j = 0; j < shape.dim(); ++j)
    if (outer[j] != shape[j]) throw NcgError("embedded: inner axes must match");
  AlgebraElement out(outer);
  for (const auto& [m, c] : coeffs) {
    IVec p(m);
    p.resize(outer.dim(), 0);
    out.coeffs[p] = c;
  }
  return out;
}

IVec AlgebraElement::reach() const {
  IVec r(shape.dim(), 0);
  for (const auto& [m, c] : coeffs)
    for (int j = 0; j < shape.dim(); ++j) r[j] = std::max(r[j], std::abs(m[j]));
  return r;
}

AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g, const Cocycle& sigma) {
  if (!(f.shape == g.shape) || !(f.shape == sigma.shape()))
    throw NcgError("convolve: shape mismatch");
  AlgebraElement out(f.shape);
  for (const auto& [m, fm] : f.coeffs)
    for (const auto& [n, gn] : g.coeffs)
      out.coeffs[add_canonical(m, n, f.shape)] += fm * gn * sigma(m, n);
  out.prune();
  return out;
}

AlgebraElement adjoint(const AlgebraElement& f) {
  AlgebraElement out(f.shape);
  for (const auto& [m, c] : f.coeffs) out.coeffs[neg_canonical(m, f.shape)] = std::conj(c);
  return out;
}

AlgebraElement dual_action(const TorusPoint& z, const AlgebraElement& a) {
  if (z.dim() != a.shape.dim()) throw NcgError("dual_action: shape mismatch");
  AlgebraElement out(a.shape);
  for (const auto& [m, c] : a.coeffs) out.coeffs[m] = unit_phase(character_turns(z, m)) * c;
  return out;
}

AlgebraElement derive(int axis, const AlgebraElement& a) {
  AlgebraElement out(a.shape);
  if (a.shape.finite(axis)) return out;  // pairing drops finite axes
  for (const auto& [m, c] : a.coeffs) {
    if (m[axis] == 0) continue;
    out.coeffs[m] = cplx{0.0, static_cast<double>(m[axis])} * c;
  }
  return out;
}

AlgebraElement jordan_product(const AlgebraElement& a, const AlgebraElement& b, const Cocycle& s) {
  AlgebraElement out = convolve(a, b, s) + convolve(b, a, s);
  out *= cplx{0.5, 0.0};
  return out;
}

AlgebraElement lie_product(const AlgebraElement& a, const AlgebraElement& b, const Cocycle& s) {
  AlgebraElement out = convolve(a, b, s) - convolve(b, a, s);
  out *= cplx{0.0, -0.5};
  return out;
}

SparseVec left_action(const AlgebraElement& f, const Cocycle& sigma, const SparseVec& xi) {
  SparseVec out;
  const Shape& k = f.shape;
  for (const auto& [m, fm] : f.coeffs)
    for (const auto& [p, v] : xi) out[add_canonical(m, p, k)] += fm * sigma(m, p) * v;
  return out;
}

SparseVec right_action(const SparseVec& xi, const AlgebraElement& f, const Cocycle& sigma) {
  SparseVec out;
  const Shape& k = f.shape;
  for (const auto& [y, fy] : f.coeffs)
    for (const auto& [p, v] : xi) out[add_canonical(p, y, k)] += fy * sigma(p, y) * v;
  return out;
}

SparseVec j_involution(const SparseVec& xi, const Shape& k) {
  SparseVec out;
  for (const auto& [m, v] : xi) out[neg_canonical(m, k)] = std::conj(v);
  return out;
}

SparseVec commutator_apply(const AlgebraElement& a, const Cocycle& sigma, const SparseVec& xi) {
  SparseVec out = left_action(a, sigma, xi);
  for (auto& [m, v] : right_action(xi, a, sigma)) out[m] -= v;
  return out;
}

MatrixXcd OperatorWindow::dense() const {
  MatrixXcd out(dim_cod(), dim_dom());
  MatrixXcd in = MatrixXcd::Zero(dom.size(), spin);
  for (Eigen::Index p = 0; p < dom.size(); ++p) {
    for (int c = 0; c < spin; ++c) {
      in(p, c) = 1.0;
      MatrixXcd col = apply(in);
      in(p, c) = 0.0;
      for (Eigen::Index q = 0; q < cod.size(); ++q)
        for (int r = 0; r < spin; ++r) out(q * spin + r, p * spin + c) = col(q, r);
    }
  }
  return out;
}

namespace {

OperatorWindow represent_core(const AlgebraElement& f, const Cocycle& sigma, const Window& window,
                              Window cod);

}  // namespace

OperatorWindow represent(const AlgebraElement& f, const Cocycle& sigma, const Window& window,
                         const Window* pinned_codomain) {
  const Shape& k = f.shape;
  if (window.dim() != k.dim()) throw NcgError("represent: window dimension mismatch");

  Window cod = pinned_codomain ? *pinned_codomain : window;
  if (!pinned_codomain) {
    IVec r = f.reach();
    std::int64_t maxr = 0;
    for (int j = 0; j < k.dim(); ++j)
      if (!k.finite(j)) maxr = std::max(maxr, r[j]);
    cod = window.expanded(maxr, k);
  } else {
    // a pinned codomain must contain every image point of the domain
    IVec r = f.reach();
    for (int j = 0; j < k.dim(); ++j) {
      if (k.finite(j)) continue;
      if (cod.lo[j] > window.lo[j] - r[j] || cod.hi[j] < window.hi[j] + r[j])
        throw NcgError("represent: pinned codomain smaller than support reach");
    }
  }
  return represent_core(f, sigma, window, std::move(cod));
}

OperatorWindow represent_compressed(const AlgebraElement& f, const Cocycle& sigma,
                                    const Window& w) {
  if (w.dim() != f.shape.dim()) throw NcgError("represent: window dimension mismatch");
  return represent_core(f, sigma, w, w);
}

namespace {

OperatorWindow represent_core(const AlgebraElement& f, const Cocycle& sigma, const Window& window,
                              Window cod) {
  const Shape k = f.shape;
  // support snapshot for the closures
  auto supp = std::make_shared<std::vector<std::pair<IVec, cplx>>>();
  for (const auto& [m, c] : f.coeffs) supp->emplace_back(m, c);
  auto sig = std::make_shared<Cocycle>(sigma);

  OperatorWindow op;
  op.dom = window;
  op.cod = cod;
  op.shape = k;
  op.spin = 1;
  op.hermitian = (window == cod) && f.selfadjoint();

  Window dw = window, cw = cod;
  op.apply_fn = [supp, sig, k, dw, cw](const MatrixXcd& in, MatrixXcd& out) {
    for (Eigen::Index i = 0; i < dw.size(); ++i) {
      IVec p = dw.point(i);
      for (const auto& [m, fm] : *supp) {
        IVec q = add_canonical(m, p, k);
        if (!cw.contains(q)) continue;
        out.row(cw.index(q)) += fm * (*sig)(m, p) * in.row(i);
      }
    }
  };
  // pi(f)* = pi(f*): (f* conv xi)(p) accumulated from cod into dom
  auto asupp = std::make_shared<std::vector<std::pair<IVec, cplx>>>();
  for (const auto& [m, c] : adjoint(f).coeffs) asupp->emplace_back(m, c);
  op.adj_fn = [asupp, sig, k, dw, cw](const MatrixXcd& in, MatrixXcd& out) {
    for (Eigen::Index i = 0; i < cw.size(); ++i) {
      IVec p = cw.point(i);
      for (const auto& [m, fm] : *asupp) {
        IVec q = add_canonical(m, p, k);
        if (!dw.contains(q)) continue;
        out.row(dw.index(q)) += fm * (*sig)(m, p) * in.row(i);
      }
    }
  };
  return op;
}

}  // namespace

namespace {

MatrixXcd random_unit(Eigen::Index rows, int cols, Rng& rng) {
  MatrixXcd v(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) v(i, c) = rng.complex_in_disc();
  v /= v.norm();
  return v;
}

// Lanczos with full reorthogonalization: directly on A when A is Hermitian
// (one apply per step, extremal |eigenvalue|), on A*A otherwise. Returns a
// certified lower bound ||A v|| for the best Ritz vector v.
NormResult lanczos_norm(const OperatorWindow& a, double tol, int max_iter, std::uint64_t seed) {
  const Eigen::Index rows = a.dom.size();
  const int spin = a.spin;
  const bool herm = a.hermitian && a.dom == a.cod;
  NormResult best{0.0, false};

  for (int restart = 0; restart < 2; ++restart) {
    Rng rng(task_seed(seed, {static_cast<std::uint64_t>(restart)}));
    std::vector<MatrixXcd> basis;
    std::vector<double> alpha, beta;
    basis.push_back(random_unit(rows, spin, rng));

    double prev_theta = -1.0;
    bool converged = false;
    int m = std::min(max_iter, 140);

    auto tridiag = [&] {
      int n = static_cast<int>(alpha.size());
      MatrixXd t = MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      return t;
    };
    auto top_value = [&]() -> double {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(tridiag(), Eigen::EigenvaluesOnly);
      double lo = std::abs(es.eigenvalues()(0));
      double hi = std::abs(es.eigenvalues()(es.eigenvalues().size() - 1));
      return herm ? std::max(lo, hi) : es.eigenvalues()(es.eigenvalues().size() - 1);
    };

    for (int k = 0; k < m; ++k) {
      MatrixXcd w = herm ? a.apply(basis[k]) : a.apply_adjoint(a.apply(basis[k]));
      double ak = w.cwiseProduct(basis[k].conjugate()).sum().real();
      alpha.push_back(ak);
      w -= ak * basis[k];
      if (k > 0) w -= beta[k - 1] * basis[k - 1];
      for (const auto& b : basis) {
        cplx ip = b.conjugate().cwiseProduct(w).sum();
        w -= ip * b;
      }
      double bk = w.norm();
      if (k >= 6 && k % 2 == 0) {
        double theta = top_value();
        if (prev_theta >= 0.0 && theta > 0.0 && std::abs(theta - prev_theta) <= tol * theta) {
          converged = true;
          break;
        }
        prev_theta = theta;
      }
      if (bk < 1e-14) {
        converged = true;
        break;
      }
      beta.push_back(bk);
      basis.push_back(w / bk);
    }

    // Ritz vector for the extremal eigenvalue of the tridiagonal
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(tridiag());
    int n = static_cast<int>(alpha.size());
    int pick = n - 1;
    if (herm && std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(n - 1))) pick = 0;
    Eigen::VectorXd y = es.eigenvectors().col(pick);
    MatrixXcd v = MatrixXcd::Zero(rows, spin);
    for (int i = 0; i < n; ++i) v += y(i) * basis[i];
    double nv = v.norm();
    if (nv > 0) {
      v /= nv;
      double val = a.apply(v).norm();
      if (val > best.value) best = {val, converged};
    }
    if (best.converged && restart == 0 && best.value > 0) break;  // second start only as a rescue
  }
  return best;
}

}  // namespace

NormResult operator_norm(const OperatorWindow& a, double tol, int max_iter, std::uint64_t seed,
                         Eigen::Index dense_cap) {
  Eigen::Index n = a.dim_dom();
  if (a.hermitian && a.dom == a.cod && n <= dense_cap) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a.dense());
    double v = es.eigenvalues().cwiseAbs().maxCoeff();
    return {v, true};
  }
  if (std::max(n, a.dim_cod()) <= std::min<Eigen::Index>(1024, dense_cap)) {
    Eigen::BDCSVD<MatrixXcd> svd(a.dense());
    return {svd.singularValues().size() ? svd.singularValues()(0) : 0.0, true};
  }
  return lanczos_norm(a, tol, max_iter, seed);
}

}  // namespace ncglab
