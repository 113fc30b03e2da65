#include "ncglab/families.hpp"

#include <numeric>
#include <set>

namespace ncglab {

MatrixXd clock_shift_theta(std::int64_t n) {
  MatrixXd th = MatrixXd::Zero(2, 2);
  th(0, 1) = -1.0 / static_cast<double>(n);
  th(1, 0) = 1.0 / static_cast<double>(n);
  return th;
}

Shape SequenceSpec::shape_at(std::int64_t n) const {
  IVec e(static_cast<size_t>(d), n);
  for (int j = 0; j < d; ++j)
    if (!finite_axes.empty() && !finite_axes[static_cast<size_t>(j)]) e[j] = kInf;
  return Shape(std::move(e));
}

MatrixXd SequenceSpec::theta_at(std::int64_t n) const {
  if (family == Family::ClockShift) {
    return n == kInf ? MatrixXd::Zero(2, 2) : clock_shift_theta(n);
  }
  if (family == Family::AbelianTorus) return MatrixXd::Zero(d, d);
  if (n == kInf) return theta_inf;
  // rational rounding: any pair touching a finite axis gets denominator n, so
  // gcd(k_a,k_b) theta_ab is integral
  MatrixXd th = MatrixXd::Zero(d, d);
  Shape k = shape_at(n);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      double v = theta_inf(a, b);
      if (k.finite(a) || k.finite(b))
        v = std::round(static_cast<double>(n) * v) / static_cast<double>(n);
      th(a, b) = v;
      th(b, a) = -v;
    }
  return th;
}

TripleConfig SequenceSpec::level(std::int64_t n) const {
  switch (family) {
    case Family::ClockShift: {
      Shape k(n == kInf ? IVec{kInf, kInf} : IVec{n, n});
      MatrixXd th = theta_at(n);
      Cocycle sigma = normalize_from_theta(th, k, beta);
      EmbeddingData e(2, std::vector<int>{1, 0}, k, k, sigma, sigma, th);
      // U1 U2 = exp(2 pi i/n) U2 U1: conjugation by U2 rotates axis 0 through
      // conj(z_{n,0}), conjugation by U1 rotates axis 1 through z_{n,1}
      e.sgn = {-1, 1};
      return make_triple(std::move(e), radius);
    }
    case Family::AbelianTorus:
      return abelian_torus_config(d, radius);
    case Family::ThetaSequence:
    case Family::Custom: {
      Shape k = shape_at(n);
      MatrixXd th = theta_at(n);
      Cocycle sigma = normalize_from_theta(th, k, beta);
      EmbeddingData e = innerify(k, sigma, th, beta);
      return make_triple(std::move(e), radius);
    }
  }
  throw NcgError("level: unknown family");
}

namespace {

double shared_branch_angle(const SequenceSpec& spec) {
  // One branch angle for the whole sequence. Level angles converge to the
  // limit angles, so the cut must sit far from the limit set; collisions at
  // every level are avoided by cutting inside a gap of the union set.
  std::set<double> all_angles, limit_angles;
  const bool innerified = spec.family == Family::ThetaSequence || spec.family == Family::Custom;
  auto collect = [&](std::int64_t lv) {
    MatrixXd th_in = spec.theta_at(lv);
    Shape k_in = spec.shape_at(lv);
    MatrixXd th;
    Shape k = k_in;
    if (innerified) {
      // angles of the full outer torus [[theta, r], [-r, 0]], which includes
      // the innerification cocycle's branch angles
      int d = spec.d;
      th = MatrixXd::Zero(2 * d, 2 * d);
      th.topLeftCorner(d, d) = th_in;
      for (int j = 0; j < d; ++j) {
        if (!k_in.finite(j)) continue;
        th(j, d + j) = 1.0 / static_cast<double>(k_in[j]);
        th(d + j, j) = -th(j, d + j);
      }
      IVec kk(k_in.entries);
      kk.insert(kk.end(), k_in.entries.begin(), k_in.entries.end());
      k = Shape(kk);
    } else {
      th = th_in;
    }
    MatrixXd omega = MatrixXd::Zero(th.rows(), th.cols());
    for (int a = 0; a < th.rows(); ++a)
      for (int b = a + 1; b < th.cols(); ++b) omega(a, b) = th(a, b);
    Window w = Window::canonical(k, innerified ? 6 : 12);
    std::int64_t sz = w.size();
    std::int64_t step = std::max<std::int64_t>(1, sz / 40000);
    for (std::int64_t i = 0; i < sz; i += step) {
      IVec m = w.point(i);
      double ang = -quad_turns(omega, m, m);
      ang -= std::floor(ang);
      if (ang >= 1.0) ang = 0.0;
      all_angles.insert(ang);
      if (lv == kInf) limit_angles.insert(ang);
    }
  };
  for (std::int64_t n : spec.ngrid) collect(n);
  collect(kInf);

  auto circ_dist = [](double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
  };
  std::vector<double> sorted(all_angles.begin(), all_angles.end());
  double best = 0.5, best_score = -1.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    double lo = sorted[i];
    double hi = (i + 1 < sorted.size()) ? sorted[i + 1] : sorted.front() + 1.0;
    double cand = lo + 0.5 * (hi - lo);
    if (cand >= 1.0) cand -= 1.0;
    double score = 1.0;
    for (double a : limit_angles) score = std::min(score, circ_dist(cand, a));
    if (score > best_score + 1e-15) {
      best_score = score;
      best = cand;
    }
  }
  return best;
}

}  // namespace

double shared_branch_angle_for(const SequenceSpec& spec) { return shared_branch_angle(spec); }

SequenceSpec clock_shift_family(std::vector<std::int64_t> ngrid, std::int64_t radius) {
  SequenceSpec s;
  s.family = Family::ClockShift;
  s.d = 2;
  s.theta_inf = MatrixXd::Zero(2, 2);
  s.ngrid = std::move(ngrid);
  s.radius = radius;
  s.beta = shared_branch_angle(s);
  return s;
}

SequenceSpec theta_sequence_family(MatrixXd theta_inf, std::vector<std::int64_t> ngrid,
                                   std::int64_t radius) {
  if ((theta_inf + theta_inf.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NcgError("theta_sequence_family: theta must be antisymmetric");
  SequenceSpec s;
  s.family = Family::ThetaSequence;
  s.d = static_cast<int>(theta_inf.rows());
  s.theta_inf = std::move(theta_inf);
  s.ngrid = std::move(ngrid);
  s.radius = radius;
  s.beta = shared_branch_angle(s);
  return s;
}

TripleConfig abelian_torus_config(int d, std::int64_t radius) {
  if (d % 2 != 0) throw NcgError("abelian_torus_config: d must be even for the swap");
  Shape k(IVec(static_cast<size_t>(d), kInf));
  Cocycle one = Cocycle::trivial(k);
  std::vector<int> f(d);
  for (int j = 0; j + 1 < d; j += 2) {
    f[j] = j + 1;
    f[j + 1] = j;
  }
  EmbeddingData e(d, std::move(f), k, k, one, one, MatrixXd::Zero(d, d));
  return make_triple(std::move(e), radius);
}

}  // namespace ncglab
