#include "ncglab/approx.hpp"

#include <functional>

namespace ncglab {

double Kernel::coefficient(const IVec& p) const {
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) {
    std::int64_t c = canonical_coord(p[j], shape[j]);
    std::int64_t off = c - axis_lo[j];
    if (off < 0 || off >= static_cast<std::int64_t>(axis_coeffs[j].size())) return 0.0;
    v *= axis_coeffs[j][static_cast<size_t>(off)];
  }
  return v;
}

double Kernel::value(const TorusPoint& z) const {
  // folded coefficient supports can be asymmetric on even finite axes, so the
  // sum is complex; at group points the imaginary part cancels
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) {
    cplx s{0.0, 0.0};
    for (size_t t = 0; t < axis_coeffs[j].size(); ++t) {
      double p = static_cast<double>(axis_lo[j] + static_cast<std::int64_t>(t));
      s += axis_coeffs[j][t] * unit_phase(z.turns[j] * p);
    }
    v *= s.real();
  }
  return v;
}

Kernel fejer_kernel(const IVec& orders, const Shape& k) {
  if (static_cast<int>(orders.size()) != k.dim()) throw NcgError("fejer_kernel: order count");
  Kernel kn;
  kn.shape = k;
  kn.orders = orders;
  for (int j = 0; j < k.dim(); ++j) {
    std::int64_t n = orders[j];
    if (n < 0) throw NcgError("fejer_kernel: negative order");
    std::int64_t lo, hi;
    if (k.finite(j)) {
      lo = k.window_lo(j);
      hi = k.window_hi(j);
    } else {
      lo = -n;
      hi = n;
    }
    std::vector<double> c(static_cast<size_t>(hi - lo + 1), 0.0);
    for (std::int64_t p = -n; p <= n; ++p) {
      double w = 1.0 - static_cast<double>(std::abs(p)) / static_cast<double>(n + 1);
      std::int64_t q = canonical_coord(p, k.entries[j]);
      c[static_cast<size_t>(q - lo)] += w;  // aliasing onto the window
    }
    // unit integral: divide by the folded zero coefficient (1 when n < k)
    double c0 = c[static_cast<size_t>(-lo)];
    for (auto& x : c) x /= c0;
    kn.axis_lo.push_back(lo);
    kn.axis_coeffs.push_back(std::move(c));
  }
  return kn;
}

AlgebraElement smooth_element(const Kernel& kappa, const AlgebraElement& a) {
  if (!(kappa.shape == a.shape)) throw NcgError("smooth_element: shape mismatch");
  AlgebraElement out(a.shape);
  for (const auto& [m, c] : a.coeffs) {
    double w = kappa.coefficient(neg_canonical(m, a.shape));
    if (w != 0.0) out.coeffs[m] = w * c;
  }
  return out;
}

SpinorField smooth_vector(const Kernel& kappa, const SpinorField& xi) {
  if (kappa.dim() != xi.window.dim()) throw NcgError("smooth_vector: shape mismatch");
  SpinorField out(xi.window, static_cast<int>(xi.values.cols()));
  for (Eigen::Index i = 0; i < xi.values.rows(); ++i) {
    double w = kappa.coefficient(neg_canonical(xi.window.point(i), kappa.shape));
    if (w != 0.0) out.values.row(i) = w * xi.values.row(i);
  }
  return out;
}

namespace {

// one-axis expectation of f_j(z) g(t(z)) d mu: exact group sum on finite
// axes, uniform grid with a doubling diagnostic on infinite ones
double axis_expectation(const Kernel& kn, int j, const std::function<double(double)>& g,
                        int grid, bool* stable) {
  const Shape& k = kn.shape;
  auto fj = [&](double t) {
    cplx s{0.0, 0.0};
    for (size_t i = 0; i < kn.axis_coeffs[j].size(); ++i) {
      double p = static_cast<double>(kn.axis_lo[j] + static_cast<std::int64_t>(i));
      s += kn.axis_coeffs[j][i] * unit_phase(t * p);
    }
    return s.real();
  };
  if (k.finite(j)) {
    std::int64_t kj = k[j];
    double acc = 0.0;
    for (std::int64_t p = 0; p < kj; ++p) {
      double t = static_cast<double>(canonical_coord(p, kj)) / static_cast<double>(kj);
      acc += fj(t) * g(t);
    }
    return acc / static_cast<double>(kj);
  }
  auto quad = [&](int n) {
    double acc = 0.0;
    for (int p = 0; p < n; ++p) {
      double t = -0.5 + (static_cast<double>(p) + 0.5) / static_cast<double>(n);
      acc += fj(t) * g(t);
    }
    return acc / static_cast<double>(n);
  };
  double coarse = quad(grid);
  double fine = quad(2 * grid);
  if (stable && std::abs(fine - coarse) > 1e-6 * (1.0 + std::abs(fine))) *stable = false;
  return fine;
}

}  // namespace

KernelBudget kernel_budget(const Kernel& kappa, const Shape& k, const std::vector<int>& f_perm,
                           int inner_d, int grid) {
  if (!(kappa.shape == k)) throw NcgError("kernel_budget: shape mismatch");
  KernelBudget b;
  auto ell = [](double t) { return kTau * std::abs(t); };
  auto gap = [](double t) { return std::abs(1.0 - unit_phase(t)); };

  // slen(z) = sum_j l(z_j): per-axis expectations (the other axes integrate
  // to one, the kernel being a normalized product)
  for (int j = 0; j < kappa.dim(); ++j)
    b.slen += axis_expectation(kappa, j, ell, grid, &b.quad_stable);

  // dil(z) = 2 sum_{j < inner_d} |1 - z_{f(j)}|
  for (int j = 0; j < inner_d; ++j) {
    int fj = f_perm[j];
    if (fj >= kappa.dim()) continue;  // embedded component is 1
    b.dil += 2.0 * axis_expectation(kappa, fj, gap, grid, &b.quad_stable);
  }
  return b;
}

Kernel fejer_for_budget(const Shape& k, const std::vector<int>& f_perm, int inner_d, double eps,
                        std::int64_t max_order) {
  for (std::int64_t order = 1; order <= max_order; order *= 2) {
    IVec o(k.dim());
    bool saturated = true;
    for (int j = 0; j < k.dim(); ++j) {
      // a finite axis never needs more than k-1: the folded kernel is the
      // discrete delta there
      o[j] = k.finite(j) ? std::min<std::int64_t>(order, k[j] - 1) : order;
      if (!k.finite(j) || o[j] < k[j] - 1) saturated = false;
    }
    Kernel kn = fejer_kernel(o, k);
    KernelBudget b = kernel_budget(kn, k, f_perm, inner_d);
    if (2.0 * b.slen <= eps && b.dil <= eps) return kn;
    if (saturated) break;
  }
  throw NcgError("fejer_for_budget: no kernel within the order cap");
}

}  // namespace ncglab
