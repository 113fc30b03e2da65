#include "doctest.h"
#include "ncglab/families.hpp"
#include "ncglab/lab.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

using namespace ncglab;

namespace {

MatrixXcd kron_window_spin(const MatrixXcd& g, const MatrixXcd& spin) {
  MatrixXcd out(g.rows() * spin.rows(), g.cols() * spin.cols());
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c)
      out.block(r * spin.rows(), c * spin.cols(), spin.rows(), spin.cols()) = g(r, c) * spin;
  return out;
}

TripleConfig clock_shift_cfg(std::int64_t n) {
  return clock_shift_family({n}).level(n);
}

double op_norm_dense(const MatrixXcd& m) {
  Eigen::BDCSVD<MatrixXcd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace

TEST_CASE("gamma operators are skew-symmetric on full finite groups") {
  TripleConfig cfg = clock_shift_cfg(5);
  Window w = cfg.base_window();
  for (int i = 0; i < cfg.ngamma(); ++i) {
    MatrixXcd g = build_gamma_op(cfg, i, w).dense();
    CHECK((g + g.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gamma operators match the sparse exact layer") {
  TripleConfig cfg = clock_shift_cfg(5);
  Window w = cfg.base_window();
  Rng rng(3);
  for (int i = 0; i < cfg.ngamma(); ++i) {
    OperatorWindow op = build_gamma_op(cfg, i, w);
    for (int t = 0; t < 10; ++t) {
      IVec m{rng.below(5) - 2, rng.below(5) - 2};
      MatrixXcd in = MatrixXcd::Zero(w.size(), 1);
      in(w.index(m), 0) = 1.0;
      MatrixXcd out = op.apply(in);
      SparseVec sp = gamma_apply_sparse(cfg, i, SparseVec{{m, cplx{1.0, 0.0}}});
      for (Eigen::Index p = 0; p < w.size(); ++p) {
        cplx expect{0.0, 0.0};
        auto it = sp.find(w.point(p));
        if (it != sp.end()) expect = it->second;
        CHECK(std::abs(out(p, 0) - expect) < 1e-13);
      }
    }
  }
}

TEST_CASE("diagonal gamma on an infinite outer axis is i m_j") {
  // d=1 generic innerification of the quantum torus: axis 1 is infinite
  Shape k(IVec{kInf});
  Cocycle one = Cocycle::trivial(k);
  EmbeddingData e = innerify(k, one, MatrixXd::Zero(1, 1), 0.37);
  TripleConfig cfg = make_triple(e, 6);
  // index 2d..d+d'-1 are the derive-type operators; here ngamma = 3
  SparseVec out = gamma_apply_sparse(cfg, 2, SparseVec{{IVec{2, -3}, cplx{1.0, 0.0}}});
  REQUIRE(out.size() == 1);
  CHECK(std::abs(out[IVec{2, -3}] - cplx{0.0, -3.0}) < 1e-15);
}

TEST_CASE("dirac is hermitian and satisfies the anticommutation identity") {
  for (std::int64_t n : {3, 5, 8}) {
    TripleConfig cfg = clock_shift_cfg(n);
    Window w = cfg.base_window();
    OperatorWindow dop = assemble_dirac(cfg, w);
    MatrixXcd d = dop.dense();
    double dn = d.cwiseAbs().maxCoeff();
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, dn));

    MatrixXcd idw = MatrixXcd::Identity(w.size(), w.size());
    for (int j = 0; j < cfg.ngamma(); ++j) {
      MatrixXcd ej = kron_window_spin(idw, cfg.cl.gamma[j]);
      MatrixXcd gj = kron_window_spin(build_gamma_op(cfg, j, w).dense(),
                                      MatrixXcd::Identity(cfg.spin(), cfg.spin()));
      MatrixXcd lhs = ej * d + d * ej;
      CHECK((lhs + 2.0 * gj).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, dn));
    }
  }
}

TEST_CASE("dense dirac agrees with the sparse apply route") {
  TripleConfig cfg = clock_shift_cfg(2);  // 16-dim brute-force comparison
  Window w = cfg.base_window();
  MatrixXcd d = assemble_dirac(cfg, w).dense();
  const int s = cfg.spin();
  MatrixXcd d2 = MatrixXcd::Zero(w.size() * s, w.size() * s);
  for (std::int64_t c = 0; c < w.size(); ++c)
    for (int a = 0; a < s; ++a) {
      SparseSpinor xi{{w.point(c), VectorXcd::Unit(s, a)}};
      for (const auto& [p, v] : dirac_apply_sparse(cfg, xi))
        d2.block(w.index(p) * s, c * s + a, s, 1) = v;
    }
  CHECK((d - d2).cwiseAbs().maxCoeff() < 1e-13);

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(d2);
  VectorXd direct = es.eigenvalues();
  VectorXd viaspec = spectrum(assemble_dirac(cfg, w));
  CHECK((direct - viaspec).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectrum: basics and chirality symmetry") {
  TripleConfig cfg = clock_shift_cfg(6);
  Window w = cfg.base_window();

  VectorXd ev = spectrum(assemble_dirac(cfg, w));
  CHECK(ev.size() == w.size() * cfg.spin());
  // eigenvalues ascend
  for (Eigen::Index i = 1; i < ev.size(); ++i) CHECK(ev(i) >= ev(i - 1));
  // chirality anticommutes with D for even N: spectrum symmetric about 0
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    CHECK(std::abs(ev(i) + ev(ev.size() - 1 - i)) < 1e-9);

  // zero operator: all zeros
  OperatorWindow zero;
  zero.dom = zero.cod = w;
  zero.shape = cfg.emb.outer_shape;
  zero.spin = 1;
  zero.hermitian = true;
  zero.apply_fn = [](const MatrixXcd&, MatrixXcd&) {};
  zero.adj_fn = zero.apply_fn;
  CHECK(spectrum(zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient matches the dense commutator [D, a(x)1]") {
  for (std::int64_t n : {5, 8}) {
    TripleConfig cfg = clock_shift_cfg(n);
    Window w = cfg.base_window();
    MatrixXcd d = assemble_dirac(cfg, w).dense();
    Rng rng(7);
    for (int t = 0; t < 8; ++t) {
      AlgebraElement a = random_inner_selfadjoint(rng, cfg, 3, 2);
      MatrixXcd ao = kron_window_spin(
          represent_compressed(a.embedded(cfg.emb.outer_shape), cfg.emb.outer, w).dense(),
          MatrixXcd::Identity(cfg.spin(), cfg.spin()));
      MatrixXcd comm = d * ao - ao * d;

      std::vector<AlgebraElement> g = gradient(a, cfg);
      REQUIRE(static_cast<int>(g.size()) == 2 * cfg.d());
      MatrixXcd viag = MatrixXcd::Zero(comm.rows(), comm.cols());
      for (size_t i = 0; i < g.size(); ++i)
        viag += kron_window_spin(represent_compressed(g[i], cfg.emb.outer, w).dense(),
                                 cfg.cl.gamma[i]);
      CHECK((comm - viag).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, comm.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("gradient of the unit vanishes; inner-support precondition enforced") {
  TripleConfig cfg = clock_shift_cfg(4);
  for (const auto& comp : gradient(AlgebraElement::unit(cfg.emb.inner_shape), cfg))
    CHECK(comp.norm1() == 0.0);

  Shape kin(IVec{kInf});
  EmbeddingData e = innerify(kin, Cocycle::trivial(kin), MatrixXd::Zero(1, 1), 0.37);
  TripleConfig c1 = make_triple(e, 6);
  AlgebraElement bad(c1.emb.outer_shape);
  bad.add(IVec{0, 1}, cplx{1.0, 0.0});
  bad.add(IVec{0, -1}, cplx{1.0, 0.0});
  CHECK_THROWS_AS(gradient(bad, c1), NcgError);
}

TEST_CASE("seminorm: dense oracle, homogeneity, zero kernel") {
  TripleConfig cfg = clock_shift_cfg(8);
  Window w = cfg.base_window();
  MatrixXcd d = assemble_dirac(cfg, w).dense();

  const Shape& kin = cfg.emb.inner_shape;
  AlgebraElement re1 = AlgebraElement::delta(kin, IVec{1, 0}, {0.5, 0.0}) +
                       AlgebraElement::delta(kin, IVec{-1, 0}, {0.5, 0.0});
  MatrixXcd ao = kron_window_spin(
      represent_compressed(re1.embedded(cfg.emb.outer_shape), cfg.emb.outer, w).dense(),
      MatrixXcd::Identity(cfg.spin(), cfg.spin()));
  double oracle = op_norm_dense(d * ao - ao * d);
  NormResult l = seminorm(re1, cfg);
  CHECK(l.converged);
  CHECK(l.value == doctest::Approx(oracle).epsilon(1e-11));

  CHECK(seminorm(AlgebraElement::unit(kin), cfg).value == 0.0);

  Rng rng(8);
  AlgebraElement a = random_inner_selfadjoint(rng, cfg, 3, 3);
  double la = seminorm(a, cfg).value;
  AlgebraElement ta = a;
  ta *= cplx{-2.5, 0.0};
  CHECK(seminorm(ta, cfg).value == doctest::Approx(2.5 * la).epsilon(1e-10));

  CHECK_THROWS_AS(seminorm(AlgebraElement::delta(kin, IVec{1, 0}), cfg), NcgError);
}

TEST_CASE("norm comparison: ||[Gamma_j, a]|| <= L(a) for j <= 2d") {
  TripleConfig cfg = clock_shift_cfg(6);
  Window w = cfg.base_window();
  Rng rng(9);
  for (int t = 0; t < 6; ++t) {
    AlgebraElement a = random_inner_selfadjoint(rng, cfg, 3, 2);
    double la = seminorm(a, cfg).value;
    MatrixXcd am =
        represent_compressed(a.embedded(cfg.emb.outer_shape), cfg.emb.outer, w).dense();
    for (int j = 0; j < 2 * cfg.d(); ++j) {
      MatrixXcd g = build_gamma_op(cfg, j, w).dense();
      CHECK(op_norm_dense(g * am - am * g) <= la * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("leibniz bound for the jordan and lie products") {
  TripleConfig cfg = clock_shift_cfg(5);
  const Cocycle& sig = cfg.emb.inner;
  Window wi = Window::canonical(cfg.emb.inner_shape, 0);
  Rng rng(10);
  for (int t = 0; t < 6; ++t) {
    AlgebraElement a = random_inner_selfadjoint(rng, cfg, 3, 2);
    AlgebraElement b = random_inner_selfadjoint(rng, cfg, 3, 2);
    double la = seminorm(a, cfg).value, lb = seminorm(b, cfg).value;
    double na = operator_norm(represent(a, sig, wi)).value;
    double nb = operator_norm(represent(b, sig, wi)).value;
    double bound = na * lb + la * nb;
    CHECK(seminorm(jordan_product(a, b, sig), cfg).value <= bound * (1.0 + 1e-9) + 1e-12);
    CHECK(seminorm(lie_product(a, b, sig), cfg).value <= bound * (1.0 + 1e-9) + 1e-12);
  }
}

TEST_CASE("graph norm agrees with the dense oracle and enforces the margin") {
  Shape kin(IVec{kInf});
  EmbeddingData e = innerify(kin, Cocycle::trivial(kin), MatrixXd::Zero(1, 1), 0.37);
  TripleConfig cfg = make_triple(e, 5);
  Window w = cfg.base_window();
  OperatorWindow dop = assemble_dirac(cfg, w);
  MatrixXcd d = dop.dense();

  Rng rng(11);
  SpinorField xi = random_spinor(rng, cfg, w, 1);
  Eigen::Map<const VectorXcd> flat(xi.values.data(), xi.values.size());
  // dense() uses window-major, spinor-minor layout; rebuild accordingly
  VectorXcd v(w.size() * cfg.spin());
  for (Eigen::Index p = 0; p < w.size(); ++p)
    for (int c = 0; c < cfg.spin(); ++c) v(p * cfg.spin() + c) = xi.values(p, c);
  double oracle = xi.values.norm() + (d * v).norm();
  CHECK(graph_norm(xi, cfg) == doctest::Approx(oracle).epsilon(1e-12));

  SpinorField edge(w, cfg.spin());
  edge.values(0, 0) = 1.0;  // corner of the window violates the margin
  CHECK_THROWS_AS(graph_norm(edge, cfg), NcgError);

  SpinorField zero(w, cfg.spin());
  CHECK(graph_norm(zero, cfg) == 0.0);
  CHECK(graph_norm(xi, cfg) >= xi.norm());
}

TEST_CASE("resolvent ingredients for the d=1 quantum torus") {
  Shape kin(IVec{kInf});
  EmbeddingData e = innerify(kin, Cocycle::trivial(kin), MatrixXd::Zero(1, 1), 0.37);
  TripleConfig cfg = make_triple(e, 8);
  CHECK(cfg.M == 10.0);
  Report r = resolvent_bound_check(cfg, cfg.base_window());
  for (const auto& c : r.checks) {
    INFO(c.name, " value=", c.value, " bound=", c.bound);
    CHECK(c.pass);
  }
  // FK norm is well below one at this window
  for (const auto& c : r.checks)
    if (c.name == "FK_norm") CHECK(c.value < 1.0);
}

TEST_CASE("resolvent commutator table includes the sqrt(2) case") {
  TripleConfig cfg = abelian_torus_config(2, 6);
  Report r = resolvent_bound_check(cfg, cfg.base_window());
  bool saw_sqrt2 = false;
  for (const auto& c : r.checks) {
    INFO(c.name, " value=", c.value, " bound=", c.bound);
    CHECK(c.pass);
    if (std::abs(c.bound - std::sqrt(2.0) - 1e-9) < 1e-12) saw_sqrt2 = true;
  }
  CHECK(saw_sqrt2);
}

TEST_CASE("all-finite configs make the resolvent check vacuous") {
  TripleConfig cfg = clock_shift_cfg(4);
  Report r = resolvent_bound_check(cfg, cfg.base_window());
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].name == "vacuous_no_infinite_axes");
  CHECK(r.checks[0].pass);
}
