#pragma once

#include "ncglab/common.hpp"

#include <limits>
#include <optional>

namespace ncglab {

// Arithmetic of the groups prod_j Z/k(j)Z, their duals, and the centered
// windows on which every operator in this library is represented.

inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

struct Shape {
  IVec entries;

  Shape() = default;
  explicit Shape(IVec e) : entries(std::move(e)) {
    if (entries.empty()) throw NcgError("Shape: dimension must be >= 1");
    for (auto k : entries)
      if (k != kInf && k < 2) throw NcgError("Shape: finite entries must be >= 2");
  }

  int dim() const { return static_cast<int>(entries.size()); }
  bool finite(int j) const { return entries[j] != kInf; }
  bool all_finite() const {
    for (int j = 0; j < dim(); ++j)
      if (!finite(j)) return false;
    return true;
  }
  std::int64_t operator[](int j) const { return entries[j]; }

  // centered window bounds floor((1-k)/2) .. floor((k-1)/2)
  std::int64_t window_lo(int j) const {
    return finite(j) ? -(entries[j] / 2) : kInf;
  }
  std::int64_t window_hi(int j) const {
    return finite(j) ? (entries[j] - 1) / 2 : kInf;
  }

  std::int64_t group_size() const {  // requires all axes finite
    std::int64_t n = 1;
    for (auto k : entries) {
      if (k == kInf) throw NcgError("group_size: infinite axis");
      n *= k;
    }
    return n;
  }

  bool operator==(const Shape& o) const { return entries == o.entries; }
};

// canonical representative of m modulo k, in the centered window; identity on
// infinite axes
inline std::int64_t canonical_coord(std::int64_t m, std::int64_t k) {
  if (k == kInf) return m;
  std::int64_t r = m % k;
  if (r < 0) r += k;
  if (r > (k - 1) / 2) r -= k;
  return r;
}

inline IVec canonical_rep(const IVec& m, const Shape& k) {
  if (static_cast<int>(m.size()) != k.dim())
    throw NcgError("canonical_rep: dimension mismatch");
  IVec r(m.size());
  for (int j = 0; j < k.dim(); ++j) r[j] = canonical_coord(m[j], k.entries[j]);
  return r;
}

inline IVec add_canonical(const IVec& a, const IVec& b, const Shape& k) {
  IVec r(a.size());
  for (int j = 0; j < k.dim(); ++j) r[j] = canonical_coord(a[j] + b[j], k.entries[j]);
  return r;
}

inline IVec neg_canonical(const IVec& a, const Shape& k) {
  IVec r(a.size());
  for (int j = 0; j < k.dim(); ++j) r[j] = canonical_coord(-a[j], k.entries[j]);
  return r;
}

// sum of coordinate products over the infinite axes only
inline std::int64_t pairing(const IVec& m, const IVec& mp, const Shape& k) {
  if (m.size() != mp.size() || static_cast<int>(m.size()) != k.dim())
    throw NcgError("pairing: shape mismatch");
  std::int64_t s = 0;
  for (int j = 0; j < k.dim(); ++j)
    if (!k.finite(j)) s += m[j] * mp[j];
  return s;
}

// A point of the dual group, stored as angles t_j in (-1/2, 1/2] (turns), so
// z_j = exp(2*pi*i*t_j). On finite axes t_j must be p/k(j).
struct TorusPoint {
  std::vector<double> turns;

  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> t) : turns(std::move(t)) { reduce(); }

  static TorusPoint identity(int d) { return TorusPoint(std::vector<double>(d, 0.0)); }

  // group point with t_j = p_j / k(j) on finite axes (p ignored on infinite)
  static TorusPoint root(const Shape& k, const IVec& p) {
    std::vector<double> t(k.dim(), 0.0);
    for (int j = 0; j < k.dim(); ++j)
      if (k.finite(j)) t[j] = static_cast<double>(canonical_coord(p[j], k[j])) / static_cast<double>(k[j]);
    return TorusPoint(std::move(t));
  }

  int dim() const { return static_cast<int>(turns.size()); }

  void reduce() {
    for (auto& t : turns) {
      t -= std::floor(t);           // [0,1)
      if (t > 0.5) t -= 1.0;        // (-1/2, 1/2]
    }
  }

  cplx component(int j) const { return unit_phase(turns[j]); }

  TorusPoint conj() const {
    std::vector<double> t(turns);
    for (auto& x : t) x = -x;
    return TorusPoint(std::move(t));
  }

  TorusPoint operator*(const TorusPoint& o) const {
    std::vector<double> t(turns);
    for (size_t j = 0; j < t.size(); ++j) t[j] += o.turns[j];
    return TorusPoint(std::move(t));
  }
};

// z^m = prod_j z_j^{m_j}
inline cplx character(const TorusPoint& z, const IVec& m) {
  if (z.dim() != static_cast<int>(m.size())) throw NcgError("character: shape mismatch");
  double turns = 0.0;
  for (int j = 0; j < z.dim(); ++j)
    turns += z.turns[j] * static_cast<double>(m[j]);
  return unit_phase(turns);
}

// the angle itself, in turns; callers that need exact phase sums use this
inline double character_turns(const TorusPoint& z, const IVec& m) {
  double turns = 0.0;
  for (int j = 0; j < z.dim(); ++j) turns += z.turns[j] * static_cast<double>(m[j]);
  return turns;
}

struct Geometry {
  double length;                 // 2*pi*||t||_2 over minimal-angle lifts
  double slen;                   // 2*pi*sum |t_j|
  std::optional<double> dil;     // 2*sum_{j<d} |1 - z_{f(j)}|, needs f
};

// dil is computed from the permutation f on {0..d'-1}; torus components past
// z.dim() are treated as 1
inline Geometry geometry(const TorusPoint& z, const std::vector<int>* f = nullptr,
                         int inner_d = -1) {
  Geometry g{0.0, 0.0, std::nullopt};
  double sq = 0.0;
  for (int j = 0; j < z.dim(); ++j) {
    double a = std::abs(z.turns[j]);
    sq += z.turns[j] * z.turns[j];
    g.slen += kTau * a;
  }
  g.length = kTau * std::sqrt(sq);
  if (f) {
    int d = inner_d < 0 ? static_cast<int>(f->size()) / 2 : inner_d;
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      int fj = (*f)[j];
      if (fj < z.dim()) s += std::abs(1.0 - z.component(fj));
    }
    g.dil = 2.0 * s;
  }
  return g;
}

inline double slen(const TorusPoint& z) { return geometry(z).slen; }

inline double dil(const TorusPoint& z, const std::vector<int>& f, int inner_d) {
  return *geometry(z, &f, inner_d).dil;
}

// A finite box of lattice points with fixed lexicographic enumeration
// (axis 0 most significant). Part of the public contract: matrices built on a
// window are reproducible bit for bit.
struct Window {
  IVec lo, hi;

  Window() = default;
  Window(IVec l, IVec h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size() || lo.empty()) throw NcgError("Window: bad bounds");
    for (size_t j = 0; j < lo.size(); ++j)
      if (lo[j] > hi[j]) throw NcgError("Window: empty axis");
  }

  // canonical window of the shape; radius used on infinite axes
  static Window canonical(const Shape& k, std::int64_t radius) {
    IVec l(k.dim()), h(k.dim());
    for (int j = 0; j < k.dim(); ++j) {
      l[j] = k.finite(j) ? k.window_lo(j) : -radius;
      h[j] = k.finite(j) ? k.window_hi(j) : radius;
    }
    return Window(std::move(l), std::move(h));
  }

  static Window box(int d, std::int64_t radius) {
    return Window(IVec(d, -radius), IVec(d, radius));
  }

  int dim() const { return static_cast<int>(lo.size()); }

  std::int64_t extent(int j) const { return hi[j] - lo[j] + 1; }

  std::int64_t size() const {
    std::int64_t n = 1;
    for (int j = 0; j < dim(); ++j) n *= extent(j);
    return n;
  }

  bool contains(const IVec& m) const {
    for (int j = 0; j < dim(); ++j)
      if (m[j] < lo[j] || m[j] > hi[j]) return false;
    return true;
  }

  std::int64_t index(const IVec& m) const {
    std::int64_t idx = 0;
    for (int j = 0; j < dim(); ++j) idx = idx * extent(j) + (m[j] - lo[j]);
    return idx;
  }

  IVec point(std::int64_t idx) const {
    IVec m(dim());
    for (int j = dim() - 1; j >= 0; --j) {
      m[j] = lo[j] + idx % extent(j);
      idx /= extent(j);
    }
    return m;
  }

  // grown by r on every axis, clipped to the canonical window of k on finite
  // axes (those already span the whole group)
  Window expanded(std::int64_t r, const Shape& k) const {
    IVec l(lo), h(hi);
    for (int j = 0; j < dim(); ++j) {
      if (k.finite(j)) continue;
      l[j] -= r;
      h[j] += r;
    }
    return Window(std::move(l), std::move(h));
  }

  // shrunk by r on infinite axes; margin discipline for exact operator use
  Window shrunk(std::int64_t r, const Shape& k) const {
    IVec l(lo), h(hi);
    for (int j = 0; j < dim(); ++j) {
      if (k.finite(j)) continue;
      l[j] += r;
      h[j] -= r;
      if (l[j] > h[j]) throw NcgError("Window: margin exceeds window");
    }
    return Window(std::move(l), std::move(h));
  }

  bool operator==(const Window& o) const { return lo == o.lo && hi == o.hi; }
};

}  // namespace ncglab
