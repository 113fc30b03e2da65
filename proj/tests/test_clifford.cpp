#include "doctest.h"
#include "ncglab/clifford.hpp"

using namespace ncglab;

TEST_CASE("gamma relations hold exactly") {
  for (int N : {1, 2, 3, 4, 6}) {
    CliffordRep rep = build_gammas(N);
    CHECK(rep.s == (1 << ((N + 1) / 2)));
    Report r = verify_clifford(rep);
    INFO("N = ", N);
    CHECK(r.pass());
    CHECK(r.max_violation() == 0.0);  // entries are exact 0, +-1, +-i
  }
  CHECK(build_gammas(1).s == 2);
  CHECK(build_gammas(3).s == 4);
  CHECK(build_gammas(4).s == 4);
}

TEST_CASE("verify_clifford detects an injected fault") {
  CliffordRep rep = build_gammas(4);
  rep.gamma[2] = MatrixXcd::Identity(rep.s, rep.s);
  CHECK(!verify_clifford(rep).pass());
}

TEST_CASE("chirality") {
  CHECK(!chirality(build_gammas(3)).has_value());
  for (int N : {2, 4, 6}) {
    CliffordRep rep = build_gammas(N);
    auto th = chirality(rep);
    REQUIRE(th.has_value());
    MatrixXcd t = *th;
    CHECK((t - t.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((t * t - MatrixXcd::Identity(rep.s, rep.s)).cwiseAbs().maxCoeff() == 0.0);
    for (int j = 0; j < N; ++j)
      CHECK((t * rep.gamma[j] + rep.gamma[j] * t).cwiseAbs().maxCoeff() == 0.0);
  }
  // N=2: eigenvalues of the grading are +-1 with equal multiplicity
  auto t2 = *chirality(build_gammas(2));
  CHECK(std::abs(t2.trace()) < 1e-15);
}
