#pragma once

#include "ncglab/algebra.hpp"
#include "ncglab/clifford.hpp"

namespace ncglab {

// All data of one spectral-triple level: the embedding, the Clifford
// representation on N = d + d' generators, the window policy for infinite
// axes, and the resolvent constant.
struct TripleConfig {
  EmbeddingData emb;
  CliffordRep cl;
  std::int64_t radius = 8;  // window radius per infinite axis
  double M = 0.0;           // resolvent constant, 10 d by default

  int d() const { return emb.d; }
  int dprime() const { return emb.dprime; }
  int ngamma() const { return emb.d + emb.dprime; }
  int spin() const { return cl.s; }
  const Shape& shape() const { return emb.outer_shape; }

  Window base_window() const { return Window::canonical(emb.outer_shape, radius); }

  // real/imaginary parts of U_{f(j)}, with the embedding's orientation sign
  // on the imaginary part
  AlgebraElement x_element(int j) const;
  AlgebraElement y_element(int j) const;
};

// a user-supplied representation must carry N = d + d' generators and pass
// verify_clifford; the minimal 2^ceil(N/2) representation is built otherwise
TripleConfig make_triple(EmbeddingData emb, std::int64_t radius = 8, double M = -1.0,
                         const CliffordRep* rep = nullptr);

struct SpinorField {
  Window window;
  MatrixXcd values;  // window.size() x spin

  SpinorField() = default;
  SpinorField(Window w, int spin) : window(std::move(w)) {
    values = MatrixXcd::Zero(window.size(), spin);
  }

  double norm() const { return values.norm(); }

  bool supported_within(const Window& w) const {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      if (values.row(i).isZero(0.0)) continue;
      if (!w.contains(window.point(i))) return false;
    }
    return true;
  }
};

// skew-symmetric windowed operator for the index i in {0..d+d'-1}; support
// reach at most 1 per axis; exact on vectors supported in window minus margin
OperatorWindow build_gamma_op(const TripleConfig& cfg, int i, const Window& w);

// sum_i Gamma_i (x) c(gamma_i) on window (x) C^s; Hermitian
OperatorWindow assemble_dirac(const TripleConfig& cfg, const Window& w);

// pi(a) (x) 1_s on the window
OperatorWindow represent_spinor(const AlgebraElement& a, const Cocycle& sigma, const Window& w,
                                int spin);

// full Hermitian eigenvalues, ascending, with residual check
VectorXd spectrum(const OperatorWindow& dirac, Eigen::Index dense_cap = 4096,
                  double residual_tol = 1e-9);

// the 2d outer-algebra components of [D, a (x) 1]: index j carries gamma_j,
// index d+j carries gamma_{d+j}; input is inner-supported and finitely
// supported
std::vector<AlgebraElement> gradient(const AlgebraElement& a, const TripleConfig& cfg);

// L(a) = ||[D, a (x) 1]||: exact on full finite groups, monotone windowed
// lower bound otherwise
NormResult seminorm(const AlgebraElement& a, const TripleConfig& cfg, double tol = 1e-11,
                    std::uint64_t seed = 1, Eigen::Index dense_cap = 2048);

// ||xi|| + ||D xi||; the field must respect the margin
double graph_norm(const SpinorField& xi, const TripleConfig& cfg);

// windowed evidence for the self-adjointness ingredients: ||sqrt(K)|| = 1/M,
// ||F K|| < 1, and the pairwise commutator case table
Report resolvent_bound_check(const TripleConfig& cfg, const Window& w);

}  // namespace ncglab
