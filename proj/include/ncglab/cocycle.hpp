#pragma once

#include "ncglab/lattice.hpp"
#include "ncglab/report.hpp"

#include <memory>
#include <variant>

namespace ncglab {

// Normalized 2-cocycles on Z^d_k, evaluable in closed form or tabulated.
//
// Conventions used throughout:
//   <A m, m'>   means  m'^T A m  (turns when A carries angles),
//   sigma is always evaluated on canonical window representatives,
//   commutation(m,m') = sigma(m,m') * conj(sigma(m',m)), so that
//   W^m W^m' = commutation(m,m') W^m' W^m.

struct BranchCutError : NcgError {
  using NcgError::NcgError;
};

inline double quad_turns(const MatrixXd& a, const IVec& m, const IVec& mp) {
  double s = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      s += a(r, c) * static_cast<double>(m[c]) * static_cast<double>(mp[r]);
  return s;
}

// square root of the unit value exp(2*pi*i*t0), on the branch whose cut sits
// at angle beta (turns); the lifted angle lands in (beta-1, beta]
inline cplx branch_sqrt(double t0, double beta, double coll_tol = 1e-9) {
  double t = t0 - std::ceil(t0 - beta);
  if (std::min(std::abs(t - beta), std::abs(t - (beta - 1.0))) < coll_tol)
    throw BranchCutError("branch_sqrt: angle collides with the cut; re-seed beta");
  return half_phase(t);
}

class Cocycle {
 public:
  Cocycle() : shape_(IVec{2}) {}

  const Shape& shape() const { return shape_; }

  cplx operator()(const IVec& m, const IVec& mp) const {
    return eval_canonical(canonical_rep(m, shape_), canonical_rep(mp, shape_));
  }

  cplx commutation(const IVec& m, const IVec& mp) const {
    return (*this)(m, mp) * std::conj((*this)(mp, m));
  }

  // --- constructors ---------------------------------------------------------

  static Cocycle trivial(Shape k) {
    Cocycle c(std::move(k));
    c.body_ = Trivial{};
    return c;
  }

  // sigma(m,m') = exp(2 pi i <omega m, m'>); normalized iff omega is
  // antisymmetric
  static Cocycle bicharacter(MatrixXd omega, Shape k);

  // the coboundary-normalized cocycle built from the upper-triangular part of
  // theta and a branch angle; commutation factor exp(2 pi i <theta m, m'>)
  static Cocycle normalized_from_theta(const MatrixXd& theta, Shape k, double beta);

  static Cocycle product(std::vector<Cocycle> factors);

  // evaluates `base` on the first base.shape().dim() coordinates
  static Cocycle lift(Cocycle base, Shape outer);

  static Cocycle tabulated(Shape k, std::vector<cplx> table);

  // dense table of an existing cocycle (finite shapes only, <= 4096 elements)
  static Cocycle tabulate(const Cocycle& src);

  bool is_trivial() const { return std::holds_alternative<Trivial>(body_); }

 private:
  explicit Cocycle(Shape k) : shape_(std::move(k)) {}

  struct Trivial {};
  struct Bicharacter {
    MatrixXd omega;
  };
  struct Normalized {
    MatrixXd omega;  // upper triangular, zero diagonal
    double beta;
  };
  struct Product {
    std::vector<std::shared_ptr<const Cocycle>> factors;
  };
  struct Lift {
    std::shared_ptr<const Cocycle> base;
  };
  struct Tabulated {
    std::vector<cplx> table;  // row-major over window x window
  };

  cplx eval_canonical(const IVec& m, const IVec& mp) const;

  Shape shape_;
  std::variant<Trivial, Bicharacter, Normalized, Product, Lift, Tabulated> body_;
};

// per-entry quotient compatibility of the angle matrix: on every finite axis
// a, k(a)*omega(a,b) and k(a)*omega(b,a) must be integers; returns the first
// offending (axis, other) pair
std::optional<std::pair<int, int>> quotient_violation(const MatrixXd& omega, const Shape& k,
                                                      double tol = 1e-9);

// builds an evaluable normalized cocycle with commutation matrix theta: the
// skew-bicharacter exp(i pi <theta m,m'>) when theta/2 descends to the
// quotient, the normalized upper-triangular construction otherwise
Cocycle bicharacter_from_theta(const MatrixXd& theta, const Shape& k);

Cocycle normalize_from_theta(const MatrixXd& theta, const Shape& k, double beta);

// default branch angle: midpoint of the largest circular gap among the angles
// <omega m, -m> mod 1 over the working window
double pick_branch_angle(const MatrixXd& theta, const Shape& k, std::int64_t radius = 16);

// report on cocycle identity, normalization, unit modulus and the conjugation
// rule; exhaustive when the group has at most `exhaustive_cap` elements
Report verify_cocycle(const Cocycle& sigma, int samples = 1000, std::uint64_t seed = 7,
                      std::int64_t radius = 8, std::int64_t exhaustive_cap = 512);

// --- embeddings -------------------------------------------------------------

// All data of the embedding of a fuzzy/quantum d-torus into a d'-torus whose
// extra generators implement the dual-action rotations by conjugation.
struct EmbeddingData {
  int d = 0;
  int dprime = 0;
  std::vector<int> f;     // order-2 permutation of {0..d'-1}, no fixed point
  std::vector<int> fsgn;  // +1 if f(j) > j, -1 otherwise; j < d
  // orientation of the conjugation by U_{f(j)}: conjugating rotates axis j by
  // exp(2 pi i sgn(j)/k(j)); equals fsgn for embeddings built by innerify,
  // set explicitly by families whose generators commute the other way
  std::vector<int> sgn;
  Shape inner_shape;
  Shape outer_shape;
  Cocycle inner;
  Cocycle outer;
  MatrixXd theta_inner;   // d x d commutation matrix of the inner torus

  EmbeddingData() = default;
  EmbeddingData(int d_, std::vector<int> f_, Shape ks, Shape kps, Cocycle sig, Cocycle sigp,
                MatrixXd theta);

  // the group element z_{n,j}: exp(2 pi i / k'(j)) in slot j, 1 elsewhere
  TorusPoint z_axis(int j) const;

  // z_axis(j)^{sgn(j)}: conjugation by U_{f(j)} equals the dual action at
  // this point
  TorusPoint conj_orientation(int j) const;

  bool axis_finite(int j) const { return outer_shape.finite(j); }
};

// generic innerification: d' = 2d, f(j) = d+j, outer cocycle
// sigma'(m,m') = sigma(q m, q m') * c(m,m') with c built from
// [[0, r], [-r, 0]], r = diag(1/k(j))
EmbeddingData innerify(const Shape& k, const Cocycle& sigma, const MatrixXd& theta_inner,
                       double beta);

// numeric check of the commutation relations on generators, the conjugation
// identity on sampled vectors, and the inner-block restriction
Report verify_embedding(const EmbeddingData& e, int samples = 64, std::uint64_t seed = 11,
                        std::int64_t radius = 6);

}  // namespace ncglab
