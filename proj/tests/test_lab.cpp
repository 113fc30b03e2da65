#include "doctest.h"
#include "ncglab/lab.hpp"

#include <Eigen/Eigenvalues>

using namespace ncglab;

TEST_CASE("rho embedding is an isometry with the right range projection") {
  Shape level(IVec{5, 5});
  Rng rng(2);
  SparseVec xi;
  for (int t = 0; t < 6; ++t) xi[IVec{rng.below(5) - 2, rng.below(5) - 2}] = rng.complex_in_disc();

  SparseVec up = rho_embed(xi, level);
  double n1 = 0.0, n2 = 0.0;
  for (const auto& [m, v] : xi) n1 += std::norm(v);
  for (const auto& [m, v] : up) n2 += std::norm(v);
  CHECK(n1 == doctest::Approx(n2));  // isometry

  // rho* rho = id
  SparseVec back = rho_restrict(up, level);
  for (const auto& [m, v] : xi) CHECK(std::abs(back[m] - v) == 0.0);

  // rho rho* kills everything outside the centered window
  SparseVec far{{IVec{7, 0}, cplx{1.0, 0.0}}, {IVec{1, 1}, cplx{2.0, 0.0}}};
  SparseVec proj = rho_embed(rho_restrict(far, level), level);
  CHECK(proj.count(IVec{7, 0}) == 0);
  CHECK(std::abs(proj[IVec{1, 1}] - cplx{2.0, 0.0}) == 0.0);
}

TEST_CASE("spinor-field rho: isometry and rho* rho = id") {
  Shape level(IVec{5, 5});
  Window wn = Window::canonical(level, 0);
  Window winf = Window::box(2, 4);
  Rng rng(31);
  SpinorField xi(wn, 2);
  for (Eigen::Index i = 0; i < xi.values.rows(); ++i)
    for (int c = 0; c < 2; ++c) xi.values(i, c) = rng.complex_in_disc();

  SpinorField up = rho_embed_field(xi, level, winf);
  CHECK(up.norm() == doctest::Approx(xi.norm()).epsilon(1e-14));
  SpinorField back = rho_restrict_field(up, level, wn);
  CHECK((back.values - xi.values).cwiseAbs().maxCoeff() == 0.0);

  // rho rho* projects onto the centered block
  SpinorField far(winf, 2);
  far.values(winf.index(IVec{3, 0}), 0) = 1.0;  // outside C_5 = {-2..2}^2
  far.values(winf.index(IVec{1, 1}), 1) = 2.0;
  SpinorField proj = rho_embed_field(rho_restrict_field(far, level, wn), level, winf);
  CHECK(proj.values(winf.index(IVec{3, 0}), 0) == cplx{0.0, 0.0});
  CHECK(proj.values(winf.index(IVec{1, 1}), 1) == cplx{2.0, 0.0});
}

TEST_CASE("gamma gap: diagonal type is exactly zero on an infinite axis") {
  // d=2 theta-sequence with axis 1 pinned infinite: the derive-type gamma on
  // that axis is identical at every level
  MatrixXd th = MatrixXd::Zero(2, 2);
  th(0, 1) = 0.25;
  th(1, 0) = -0.25;
  SequenceSpec seq = theta_sequence_family(th, {4, 8}, 5);
  seq.finite_axes = {true, false};
  seq.beta = 0.37;

  Window f = Window::box(4, 1);
  TripleConfig lim = seq.level(kInf);
  // axis 3 (outer partner of the infinite inner axis 1) stays infinite:
  // gamma index d + 3 = 5 is the diagonal derive on axis 3
  CHECK(!lim.emb.outer_shape.finite(3));
  double g = gamma_gap(seq, 4, 5, f);
  CHECK(g == 0.0);
}

TEST_CASE("gamma gap decreases along the clock-shift grid") {
  SequenceSpec seq = clock_shift_family({8, 32});
  Window f = Window::box(2, 1);
  for (int j = 0; j < 4; ++j) {
    double g8 = gamma_gap(seq, 8, j, f);
    double g32 = gamma_gap(seq, 32, j, f);
    INFO("j = ", j, " g8 = ", g8, " g32 = ", g32);
    CHECK(g32 < g8);
    CHECK(g32 <= g8 / 2.0 + 1e-12);
    CHECK(g8 < 10.0);
  }
  // error when F pokes out of the level window
  CHECK_THROWS_AS(gamma_gap(seq, 8, 0, Window::box(2, 6)), NcgError);
}

TEST_CASE("dirac gap is bounded by the summed gamma gaps") {
  SequenceSpec seq = clock_shift_family({8, 16});
  Window f = Window::box(2, 1);
  for (std::int64_t n : {8, 16}) {
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) sum += gamma_gap(seq, n, j, f);
    DiracGapResult dg = dirac_gap(seq, n, f, 8, 3);
    INFO("n = ", n);
    CHECK(dg.gap <= sum + 1e-10);
    CHECK(dg.graph_norm_sup <= dg.gap + 1e-10);
  }
  // minimal window computes without error
  Window f0(IVec{0, 0}, IVec{0, 0});
  CHECK(dirac_gap(seq, 8, f0, 2, 1).gap >= 0.0);
}

TEST_CASE("seminorm trace: unit element, skipped entries, commutative oracle") {
  SequenceSpec seq = clock_shift_family({4, 8}, 8);
  TripleConfig lim = seq.level(kInf);

  AlgebraElement one = AlgebraElement::unit(lim.emb.inner_shape);
  SeminormTrace t1 = seminorm_trace(one, seq);
  for (const auto& r : t1.rows) CHECK(r.value == 0.0);
  CHECK(t1.limit_estimate == 0.0);

  // support outside C_4 marks the n=4 row skipped
  AlgebraElement far(lim.emb.inner_shape);
  far.add(IVec{3, 0}, cplx{0.5, 0.0});
  far.add(IVec{-3, 0}, cplx{0.5, 0.0});
  SeminormTrace t2 = seminorm_trace(far, seq);
  CHECK(t2.rows[0].skipped);
  CHECK(!t2.rows[1].skipped);

  // commutative limit oracle: L_inf(a) = sup_z || sum ghat_j(z) gamma_j ||
  AlgebraElement a(lim.emb.inner_shape);
  a.add(IVec{1, 0}, cplx{0.5, 0.0});
  a.add(IVec{-1, 0}, cplx{0.5, 0.0});
  a.add(IVec{0, 1}, cplx{0.5, 0.0});
  a.add(IVec{0, -1}, cplx{0.5, 0.0});
  SeminormTrace t3 = seminorm_trace(a, seq);

  std::vector<AlgebraElement> g = gradient(a, lim);
  double oracle = 0.0;
  int grid = 64;
  for (int p = 0; p < grid; ++p)
    for (int q = 0; q < grid; ++q) {
      TorusPoint z({-0.5 + (p + 0.5) / grid, -0.5 + (q + 0.5) / grid, 0.0, 0.0});
      MatrixXcd m = MatrixXcd::Zero(lim.spin(), lim.spin());
      for (size_t i = 0; i < g.size(); ++i) {
        cplx sym{0.0, 0.0};
        for (const auto& [pt, c] : g[i].coeffs) sym += c * unit_phase(character_turns(z, pt));
        m += sym * lim.cl.gamma[i];
      }
      Eigen::BDCSVD<MatrixXcd> svd(m);
      oracle = std::max(oracle, svd.singularValues()(0));
    }
  INFO("limit estimate ", t3.limit_estimate, " oracle ", oracle);
  CHECK(t3.limit_estimate <= oracle * (1.0 + 1e-8));
  CHECK(t3.limit_estimate >= oracle * 0.95);  // windowed lower bound close at radius 10
}

TEST_CASE("inequality suite passes on the clock-shift config and flags injected faults") {
  TripleConfig cfg = clock_shift_family({8}).level(8);
  Report r = inequality_suite(cfg, 25, 17);
  for (const auto& c : r.checks) {
    INFO(c.name, " margin ", c.value);
    CHECK(c.pass);
  }

  // fault injection: an artificially halved seminorm breaks the mean-value
  // inequality for some sample, and the margin arithmetic reports it
  Rng rng(5);
  AlgebraElement a = random_inner_selfadjoint(rng, cfg, 3, 3);
  double la = seminorm(a, cfg).value;
  TorusPoint z = random_group_point(rng, cfg.emb.inner_shape, 2);
  AlgebraElement diff = a - dual_action(z, a);
  Window wi = Window::canonical(cfg.emb.inner_shape, 0);
  double lhs = operator_norm(represent(diff, cfg.emb.inner, wi)).value;
  double honest = lhs - 2.0 * slen(z) * la;
  double faulty = lhs - 2.0 * slen(z) * (1e-3 * la);
  CHECK(honest <= 1e-10);
  CHECK(faulty > 0.0);
  Report fake;
  fake.add("injected", faulty, 0.0);
  CHECK(!fake.pass());
}

TEST_CASE("dynamics gap: zero time, duhamel bound, decreasing in n") {
  SequenceSpec seq = clock_shift_family({8, 16});
  Window f = Window::box(2, 1);
  auto rows8 = dynamics_gap(seq, 8, f, {0.0, 0.5, 1.0}, 3);
  CHECK(rows8[0].gap == 0.0);
  for (const auto& r : rows8) {
    CHECK(r.gap <= r.bound + 1e-9);
    CHECK(r.gap <= 2.0 + 1e-12);
  }
  auto rows16 = dynamics_gap(seq, 16, f, {0.0, 0.5, 1.0}, 3);
  CHECK(rows16[2].gap < rows8[2].gap);
}

TEST_CASE("states: trace state, pure states, validation") {
  TripleConfig cfg = clock_shift_family({4}).level(4);
  State tau = canonical_trace_state(cfg);
  tau.validate();

  const Shape& kp = cfg.emb.outer_shape;
  AlgebraElement d0 = AlgebraElement::unit(kp);
  CHECK(tau.expectation(d0, cfg.emb.outer) == doctest::Approx(1.0));
  AlgebraElement dm = AlgebraElement::delta(kp, IVec{1, 2}, {1.0, 0.0}) +
                      AlgebraElement::delta(kp, IVec{-1, -2}, {1.0, 0.0});
  CHECK(std::abs(tau.expectation(dm, cfg.emb.outer)) < 1e-14);

  // invariance under the dual action
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    AlgebraElement a = random_inner_selfadjoint(rng, cfg, 3, 2).embedded(kp);
    TorusPoint z = random_group_point(rng, kp, cfg.dprime());
    AlgebraElement az = dual_action(z, a);
    // the rotated element is generally not self-adjoint; symmetrize
    AlgebraElement sym = az + adjoint(az);
    sym *= cplx{0.5, 0.0};
    AlgebraElement asym = a + adjoint(a);
    asym *= cplx{0.5, 0.0};
    CHECK(std::abs(tau.expectation(sym, cfg.emb.outer) - trace(sym).real()) < 1e-12);
  }

  // a non-state density is rejected
  State bad = tau;
  bad.rho(0, 0) += 1.0;
  CHECK_THROWS_AS(bad.validate(), NcgError);
}

TEST_CASE("mk estimate stays below the mean-value upper bound, commutative d=1") {
  // C(U_6) with the generic innerification; for L(a) <= 1 the mean value
  // theorem gives ||a - tau(a) 1|| <= 2 int slen dmu = pi, so the distance
  // between any two states is at most 2 pi
  Shape k(IVec{6});
  EmbeddingData e = innerify(k, Cocycle::trivial(k), MatrixXd::Zero(1, 1), 0.37);
  TripleConfig cfg = make_triple(e, 0);
  State tau = canonical_trace_state(cfg);
  VectorXcd v = VectorXcd::Zero(tau.window.size());
  v(tau.window.index(IVec{0, 0})) = 1.0;
  v(tau.window.index(IVec{1, 0})) = 1.0;
  State pure = State::pure(tau.window, v);
  MkResult r = mk_lower_bound(tau, pure, cfg, 150, 41);
  CHECK(r.value > 0.0);
  CHECK(r.value <= kTau);
  CHECK(r.witness_seminorm <= 1.0 + 1e-8);
}

TEST_CASE("mk lower bound: reflexivity, feasibility, positivity, budget monotone") {
  TripleConfig cfg = clock_shift_family({4}).level(4);
  State tau = canonical_trace_state(cfg);

  MkResult zero = mk_lower_bound(tau, tau, cfg, 60, 23);
  CHECK(zero.value <= 1e-12);

  VectorXcd v = VectorXcd::Zero(tau.window.size());
  v(tau.window.index(IVec{0, 0})) = 1.0;
  v(tau.window.index(IVec{0, 1})) = 1.0;
  State pure = State::pure(tau.window, v);
  pure.validate();

  double prev = -1.0;
  for (int budget : {40, 80, 160}) {
    MkResult r = mk_lower_bound(tau, pure, cfg, budget, 23);
    CHECK(r.value >= prev);
    prev = r.value;
    CHECK(r.witness_seminorm <= 1.0 + 1e-8);
  }
  CHECK(prev >= 1e-3);

  // symmetry under swapping the states (same seed)
  MkResult ab = mk_lower_bound(tau, pure, cfg, 60, 29);
  MkResult ba = mk_lower_bound(pure, tau, cfg, 60, 29);
  CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-12));
}
