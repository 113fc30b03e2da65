#include "doctest.h"
#include "ncglab/lattice.hpp"

#include <set>

using namespace ncglab;

TEST_CASE("canonical representatives land in the centered window") {
  Shape k5(IVec{5});
  CHECK(canonical_rep(IVec{7}, k5) == IVec{2});
  CHECK(canonical_rep(IVec{-3}, k5) == IVec{2});
  Shape kinf(IVec{kInf, kInf});
  CHECK(canonical_rep(IVec{4, -4}, kinf) == IVec{4, -4});

  // even extent: window {-4..3} for k = 8
  Shape k8(IVec{8});
  CHECK(k8.window_lo(0) == -4);
  CHECK(k8.window_hi(0) == 3);
  CHECK(canonical_rep(IVec{4}, k8) == IVec{-4});

  // idempotent, and a bijection from any full residue system
  for (std::int64_t m = -20; m <= 20; ++m) {
    IVec r = canonical_rep(IVec{m}, k5);
    CHECK(canonical_rep(r, k5) == r);
    CHECK(((m - r[0]) % 5) == 0);
  }
  std::set<IVec> hits;
  for (std::int64_t m = 10; m < 15; ++m) hits.insert(canonical_rep(IVec{m}, k5));
  CHECK(hits.size() == 5);
}

TEST_CASE("pairing keeps infinite axes only") {
  CHECK(pairing(IVec{1, 2}, IVec{3, 4}, Shape(IVec{kInf, kInf})) == 11);
  CHECK(pairing(IVec{1, 2}, IVec{3, 4}, Shape(IVec{5, kInf})) == 8);
  CHECK(pairing(IVec{1, 2}, IVec{3, 4}, Shape(IVec{5, 7})) == 0);
}

TEST_CASE("characters") {
  Shape k(IVec{6, 6});
  TorusPoint one = TorusPoint::identity(2);
  CHECK(std::abs(character(one, IVec{3, -2}) - cplx{1.0, 0.0}) < 1e-15);

  TorusPoint z = TorusPoint::root(k, IVec{1, 0});
  CHECK(std::abs(character(z, IVec{1, 0}) - unit_phase(1.0 / 6.0)) < 1e-15);

  // well-defined on classes mod k
  TorusPoint w(std::vector<double>{1.0 / 6.0, -1.0 / 3.0});
  IVec m{2, 5}, mk{2 + 6, 5 - 12};
  CHECK(std::abs(character(w, m) - character(w, mk)) < 1e-12);

  // homomorphism in m
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    IVec a{rng.below(13) - 6, rng.below(13) - 6}, b{rng.below(13) - 6, rng.below(13) - 6};
    IVec s{a[0] + b[0], a[1] + b[1]};
    CHECK(std::abs(character(w, s) - character(w, a) * character(w, b)) < 1e-12);
  }
}

TEST_CASE("geometry: length, slen, dil") {
  TorusPoint one = TorusPoint::identity(3);
  Geometry g = geometry(one);
  CHECK(g.length == 0.0);
  CHECK(g.slen == 0.0);

  // single coordinate exp(2 pi i / n) has length 2 pi / n
  for (int n : {3, 5, 8}) {
    std::vector<double> t(3, 0.0);
    t[1] = 1.0 / n;
    CHECK(geometry(TorusPoint(t)).length == doctest::Approx(kTau / n).epsilon(1e-14));
  }

  // slen >= length on random points; slen subadditive under products
  Rng rng(17);
  std::vector<int> f{1, 0};
  for (int t = 0; t < 100; ++t) {
    TorusPoint z({rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)});
    TorusPoint w({rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)});
    Geometry gz = geometry(z, &f, 2);
    CHECK(gz.slen >= gz.length - 1e-12);
    CHECK(gz.length >= 0.0);
    CHECK(*gz.dil >= 0.0);
    CHECK(slen(z * w) <= slen(z) + slen(w) + 1e-12);
  }

  // dil at the identity vanishes
  CHECK(dil(TorusPoint::identity(2), f, 1) == 0.0);
}

TEST_CASE("window enumeration is lexicographic and invertible") {
  Window w(IVec{-2, -1}, IVec{1, 2});
  CHECK(w.size() == 16);
  CHECK(w.index(IVec{-2, -1}) == 0);
  CHECK(w.index(IVec{-2, 0}) == 1);  // last axis fastest
  CHECK(w.index(IVec{-1, -1}) == 4);
  for (std::int64_t i = 0; i < w.size(); ++i) CHECK(w.index(w.point(i)) == i);

  Shape k(IVec{kInf, kInf});
  Window e = w.expanded(2, k);
  CHECK(e.lo == IVec{-4, -3});
  Window s = e.shrunk(2, k);
  CHECK(s == w);
}
