#include "ncglab/clifford.hpp"

namespace ncglab {

namespace {

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

CliffordRep build_gammas(int N) {
  if (N < 1) throw NcgError("build_gammas: N must be >= 1");
  const cplx I{0.0, 1.0};
  MatrixXcd sx(2, 2), sy(2, 2), sz(2, 2), id2 = MatrixXcd::Identity(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -I, I, 0;
  sz << 1, 0, 0, -1;

  int q = (N + 1) / 2;  // qubit count; s = 2^q
  std::vector<MatrixXcd> e;
  e.reserve(N);
  for (int j = 0; j < N; ++j) {
    // Jordan-Wigner string: Z^{a} (X or Y) I^{q-a-1}
    int a = j / 2;
    MatrixXcd m = MatrixXcd::Identity(1, 1);
    for (int t = 0; t < a; ++t) m = kron(m, sz);
    m = kron(m, (j % 2 == 0) ? sx : sy);
    for (int t = a + 1; t < q; ++t) m = kron(m, id2);
    e.push_back(std::move(m));
  }

  CliffordRep rep;
  rep.N = N;
  rep.s = 1 << q;
  rep.gamma.reserve(N);
  for (auto& m : e) rep.gamma.push_back(I * m);
  return rep;
}

Report verify_clifford(const CliffordRep& rep) {
  Report r;
  double skew = 0.0, square = 0.0, anti = 0.0, unitary = 0.0;
  MatrixXcd id = MatrixXcd::Identity(rep.s, rep.s);
  for (int j = 0; j < rep.N; ++j) {
    const MatrixXcd& g = rep.gamma[j];
    skew = std::max(skew, (g.adjoint() + g).cwiseAbs().maxCoeff());
    square = std::max(square, (g * g + id).cwiseAbs().maxCoeff());
    unitary = std::max(unitary, ((cplx{0, 1} * g) * (cplx{0, 1} * g).adjoint() - id).cwiseAbs().maxCoeff());
    for (int t = j + 1; t < rep.N; ++t) {
      const MatrixXcd& h = rep.gamma[t];
      anti = std::max(anti, (g * h + h * g).cwiseAbs().maxCoeff());
    }
  }
  r.add("skew_adjoint", skew, 1e-14);
  r.add("square_minus_one", square, 1e-14);
  r.add("anticommutation", anti, 1e-14);
  r.add("i_gamma_unitary", unitary, 1e-14);
  return r;
}

std::optional<MatrixXcd> chirality(const CliffordRep& rep) {
  if (rep.N % 2 != 0) return std::nullopt;
  const cplx mi{0.0, -1.0};
  MatrixXcd p = MatrixXcd::Identity(rep.s, rep.s);
  for (int j = 0; j < rep.N; ++j) p = p * (mi * rep.gamma[j]);  // e_j = -i gamma_j
  // normalize so the product is Hermitian and squares to the identity
  int r = (rep.N * (rep.N - 1) / 2) % 4;
  cplx kappa{1.0, 0.0};
  switch (r) {
    case 0: kappa = {1.0, 0.0}; break;
    case 1: kappa = {0.0, 1.0}; break;
    case 2: kappa = {-1.0, 0.0}; break;
    case 3: kappa = {0.0, -1.0}; break;
  }
  return kappa * p;
}

}  // namespace ncglab
