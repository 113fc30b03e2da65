#include "doctest.h"
#include "ncglab/cocycle.hpp"

using namespace ncglab;

namespace {

MatrixXd clock_shift_theta(int n) {
  MatrixXd th = MatrixXd::Zero(2, 2);
  th(0, 1) = -1.0 / n;
  th(1, 0) = 1.0 / n;
  return th;
}

}  // namespace

TEST_CASE("trivial cocycle from theta = 0") {
  Shape k(IVec{5, 5});
  Cocycle s = bicharacter_from_theta(MatrixXd::Zero(2, 2), k);
  CHECK(s.is_trivial());
  Report r = verify_cocycle(s);
  CHECK(r.pass());
  CHECK(r.max_violation() == 0.0);
}

TEST_CASE("clock-shift commutation factor") {
  int n = 7;
  Shape k(IVec{n, n});
  double beta = pick_branch_angle(clock_shift_theta(n), k);
  Cocycle s = normalize_from_theta(clock_shift_theta(n), k, beta);

  // W^{e1} W^{e2} = exp(2 pi i/n) W^{e2} W^{e1}
  cplx f = s.commutation(IVec{1, 0}, IVec{0, 1});
  CHECK(std::abs(f - unit_phase(1.0 / n)) < 1e-13);

  // exhaustive triples for n = 7, d = 2
  Report r = verify_cocycle(s, 0, 1, 0, 512);
  for (const auto& c : r.checks) {
    INFO(c.name, " ", c.value);
    CHECK(c.pass);
  }
}

TEST_CASE("bicharacter and normalized routes induce the same commutation") {
  MatrixXd th(2, 2);
  th << 0.0, 0.25, -0.25, 0.0;
  Shape k(IVec{8, 8});
  Cocycle a = bicharacter_from_theta(th, k);  // theta/2 descends: 8*0.125 = 1
  Cocycle b = normalize_from_theta(th, k, pick_branch_angle(th, k));
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    IVec m{rng.below(8) - 4, rng.below(8) - 4}, mp{rng.below(8) - 4, rng.below(8) - 4};
    CHECK(std::abs(a.commutation(m, mp) - b.commutation(m, mp)) < 1e-12);
    CHECK(std::abs(a.commutation(m, mp) - unit_phase(quad_turns(th, m, mp))) < 1e-12);
  }
  CHECK(verify_cocycle(a, 500, 2).pass());
  CHECK(verify_cocycle(b, 500, 2).pass());
}

TEST_CASE("quotient compatibility violations are reported with the generator pair") {
  MatrixXd th(2, 2);
  th << 0.0, 0.3, -0.3, 0.0;
  CHECK_THROWS_AS(normalize_from_theta(th, Shape(IVec{5, 5}), 0.37), NcgError);
  // the same theta is fine on the full lattice
  CHECK_NOTHROW(normalize_from_theta(th, Shape(IVec{kInf, kInf}), 0.37));
}

TEST_CASE("tabulated cocycle with one perturbed entry fails the identity") {
  int n = 4;
  Shape k(IVec{n, n});
  Cocycle s = normalize_from_theta(clock_shift_theta(n), k, pick_branch_angle(clock_shift_theta(n), k));
  Cocycle t = Cocycle::tabulate(s);
  CHECK(verify_cocycle(t, 0, 1, 0, 512).pass());

  Window w = Window::canonical(k, 0);
  std::vector<cplx> table(static_cast<size_t>(w.size() * w.size()));
  for (std::int64_t i = 0; i < w.size(); ++i)
    for (std::int64_t j = 0; j < w.size(); ++j)
      table[static_cast<size_t>(i * w.size() + j)] = s(w.point(i), w.point(j));
  size_t bad = static_cast<size_t>(3 * w.size() + 5);
  table[bad] *= unit_phase(0.13);
  Cocycle broken = Cocycle::tabulated(k, table);
  Report r = verify_cocycle(broken, 0, 1, 0, 512);
  CHECK(!r.pass());
  CHECK(r.max_violation() > 0.1);
}

TEST_CASE("branch collision is detected") {
  CHECK_THROWS_AS(branch_sqrt(0.25, 0.25), BranchCutError);
  CHECK(std::abs(branch_sqrt(0.0, 0.3) - cplx{1.0, 0.0}) < 1e-15);
  // square of the branch sqrt is the value
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    double a = rng.uniform();
    if (std::abs(a - 0.3) < 1e-3 || std::abs(a - 1.3) < 1e-3) continue;
    cplx r = branch_sqrt(a, 0.3);
    CHECK(std::abs(r * r - unit_phase(a)) < 1e-13);
  }
}

TEST_CASE("generic innerification") {
  int n = 5;
  Shape k(IVec{n, n});
  MatrixXd th = clock_shift_theta(n);
  double beta = pick_branch_angle(th, k);
  Cocycle sigma = normalize_from_theta(th, k, beta);
  EmbeddingData e = innerify(k, sigma, th, beta);

  CHECK(e.dprime == 4);
  CHECK(e.f == std::vector<int>{2, 3, 0, 1});
  CHECK(e.sgn == std::vector<int>{1, 1});

  // U'_{f(j)} U'_j = exp(2 pi i / n) U'_j U'_{f(j)}
  cplx f01 = e.outer.commutation(IVec{0, 0, 1, 0}, IVec{1, 0, 0, 0});
  CHECK(std::abs(f01 - unit_phase(1.0 / n)) < 1e-13);

  Report r = verify_embedding(e, 48, 11, 4);
  for (const auto& c : r.checks) {
    INFO(c.name, " -> ", c.value);
    CHECK(c.pass);
  }
  CHECK(verify_cocycle(e.outer, 800, 3).pass());
}

TEST_CASE("innerification of an all-infinite shape leaves the outer generators central") {
  Shape k(IVec{kInf});
  MatrixXd th = MatrixXd::Zero(1, 1);
  Cocycle sigma = Cocycle::trivial(k);
  EmbeddingData e = innerify(k, sigma, th, 0.37);
  // commutation factors of the added generator are 1 against everything
  for (int s = 0; s < 2; ++s) {
    cplx f = e.outer.commutation(IVec{0, 1}, s == 0 ? IVec{1, 0} : IVec{0, 1});
    CHECK(std::abs(f - cplx{1.0, 0.0}) < 1e-15);
  }
  // inner block restriction is exactly the inner cocycle
  CHECK(std::abs(e.outer(IVec{3, 0}, IVec{-2, 0}) - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("identity permutation is rejected at construction") {
  Shape k(IVec{4});
  Shape kp(IVec{4, 4});
  Cocycle tr = Cocycle::trivial(k);
  Cocycle trp = Cocycle::trivial(kp);
  CHECK_THROWS_AS(EmbeddingData(1, std::vector<int>{0, 1}, k, kp, tr, trp, MatrixXd::Zero(1, 1)),
                  NcgError);
}

TEST_CASE("clock-shift orientation: conjugation rotates the partner axis") {
  // with U1 U2 = exp(2 pi i/n) U2 U1 the conjugation by U2 rotates axis 1
  // through conj(z_{n,1}); the embedding's sgn records this
  int n = 5;
  Shape k(IVec{n, n});
  MatrixXd th = clock_shift_theta(n);
  Cocycle s = normalize_from_theta(th, k, pick_branch_angle(th, k));
  EmbeddingData e(2, std::vector<int>{1, 0}, k, k, s, s, th);
  e.sgn = {-1, 1};
  Report r = verify_embedding(e, 32, 5, 0);
  for (const auto& c : r.checks) {
    INFO(c.name, " -> ", c.value);
    CHECK(c.pass);
  }
}
