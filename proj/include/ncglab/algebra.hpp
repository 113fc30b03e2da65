#pragma once

#include "ncglab/cocycle.hpp"

#include <functional>
#include <map>

namespace ncglab {

// Finitely supported Fourier-coefficient map on Z^d_k; an element of l^1
// acting on l^2 through the twisted convolution.
struct AlgebraElement {
  Shape shape;
  std::map<IVec, cplx> coeffs;  // keys are canonical representatives

  AlgebraElement() : shape(IVec{2}) {}
  explicit AlgebraElement(Shape k) : shape(std::move(k)) {}

  static AlgebraElement delta(const Shape& k, const IVec& m, cplx c = {1.0, 0.0}) {
    AlgebraElement a(k);
    a.add(m, c);
    return a;
  }
  static AlgebraElement unit(const Shape& k) { return delta(k, IVec(k.dim(), 0)); }

  void add(const IVec& m, cplx c) {
    if (c == cplx{0.0, 0.0}) return;
    coeffs[canonical_rep(m, shape)] += c;
  }

  cplx at(const IVec& m) const {
    auto it = coeffs.find(canonical_rep(m, shape));
    return it == coeffs.end() ? cplx{0.0, 0.0} : it->second;
  }

  double norm1() const {
    double s = 0.0;
    for (const auto& [m, c] : coeffs) s += std::abs(c);
    return s;
  }

  double norm2() const {
    double s = 0.0;
    for (const auto& [m, c] : coeffs) s += std::norm(c);
    return std::sqrt(s);
  }

  AlgebraElement& operator*=(cplx t) {
    for (auto& [m, c] : coeffs) c *= t;
    return *this;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    for (const auto& [m, c] : o.coeffs) coeffs[m] += c;
    return *this;
  }

  AlgebraElement& operator-=(const AlgebraElement& o) {
    for (const auto& [m, c] : o.coeffs) coeffs[m] -= c;
    return *this;
  }

  void prune(double eps = 0.0) {
    for (auto it = coeffs.begin(); it != coeffs.end();)
      it = std::abs(it->second) <= eps ? coeffs.erase(it) : std::next(it);
  }

  bool selfadjoint(double tol = 1e-12) const;

  // view in a larger-dimensional shape, support padded with zero coordinates
  AlgebraElement embedded(const Shape& outer) const;

  // support bounding radius per axis
  IVec reach() const;
};

inline AlgebraElement operator*(cplx t, AlgebraElement a) {
  a *= t;
  return a;
}
inline AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
  a += b;
  return a;
}
inline AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
  a -= b;
  return a;
}

// twisted convolution (f*g)(n) = sum_m f(m) g(n-m) sigma(m, n-m)
AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g, const Cocycle& sigma);

// f*(m) = conj(f(-m))
AlgebraElement adjoint(const AlgebraElement& f);

// Fourier multiplier coeffs(m) -> z^m coeffs(m)
AlgebraElement dual_action(const TorusPoint& z, const AlgebraElement& a);

// coeffs(m) -> i m_j coeffs(m); zero unless axis j is infinite
AlgebraElement derive(int axis, const AlgebraElement& a);

inline cplx trace(const AlgebraElement& a) { return a.at(IVec(a.shape.dim(), 0)); }

AlgebraElement jordan_product(const AlgebraElement& a, const AlgebraElement& b, const Cocycle& s);
AlgebraElement lie_product(const AlgebraElement& a, const AlgebraElement& b, const Cocycle& s);

// --- sparse vectors on the dual group ---------------------------------------

using SparseVec = std::map<IVec, cplx>;

// pi(f) xi = f * xi
SparseVec left_action(const AlgebraElement& f, const Cocycle& sigma, const SparseVec& xi);
// xi . pi(f) = xi * f
SparseVec right_action(const SparseVec& xi, const AlgebraElement& f, const Cocycle& sigma);
// J xi : m -> conj(xi(-m))
SparseVec j_involution(const SparseVec& xi, const Shape& k);
// [a, xi] = a xi - xi . a
SparseVec commutator_apply(const AlgebraElement& a, const Cocycle& sigma, const SparseVec& xi);

// --- windowed operators ------------------------------------------------------

// Linear map between finite index windows of l^2 tensor C^spin. Vectors are
// stored as (window size) x spin matrices; index layout follows the window's
// lexicographic enumeration. Contributions leaving the codomain window are
// compressed away, so windowed norms are monotone lower bounds.
struct OperatorWindow {
  Window dom, cod;
  Shape shape;
  int spin = 1;
  bool hermitian = false;
  std::function<void(const MatrixXcd&, MatrixXcd&)> apply_fn;
  std::function<void(const MatrixXcd&, MatrixXcd&)> adj_fn;

  Eigen::Index dim_dom() const { return dom.size() * spin; }
  Eigen::Index dim_cod() const { return cod.size() * spin; }

  MatrixXcd apply(const MatrixXcd& in) const {
    MatrixXcd out = MatrixXcd::Zero(cod.size(), spin);
    apply_fn(in, out);
    return out;
  }
  MatrixXcd apply_adjoint(const MatrixXcd& in) const {
    MatrixXcd out = MatrixXcd::Zero(dom.size(), spin);
    adj_fn(in, out);
    return out;
  }

  // dense matrix, dim_cod x dim_dom; basis order: window index major, spinor
  // component minor
  MatrixXcd dense() const;
};

// windowed matrix of pi(f); codomain defaults to the window expanded by the
// support reach of f; a pinned codomain that cannot contain the reach throws
OperatorWindow represent(const AlgebraElement& f, const Cocycle& sigma, const Window& window,
                         const Window* pinned_codomain = nullptr);

// compression P_w pi(f) P_w onto one fixed window; windowed norms of these
// are monotone lower bounds of the true operator norm
OperatorWindow represent_compressed(const AlgebraElement& f, const Cocycle& sigma,
                                    const Window& w);

struct NormResult {
  double value = 0.0;
  bool converged = false;
};

// largest singular value: exact dense solve for small operators, seeded
// Lanczos iteration on A*A above the dense cap; the value is always a
// certified lower bound ||A v|| for an explicit unit v
NormResult operator_norm(const OperatorWindow& a, double tol = 1e-11, int max_iter = 240,
                         std::uint64_t seed = 1, Eigen::Index dense_cap = 2048);

}  // namespace ncglab
