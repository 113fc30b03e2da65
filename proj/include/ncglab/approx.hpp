#pragma once

#include "ncglab/algebra.hpp"
#include "ncglab/dirac.hpp"

namespace ncglab {

// Product Fejer kernel on U^d_k: per-axis Fourier coefficients
// (1 - |p|/(N+1)) for |p| <= N, folded onto the centered window of finite
// axes and renormalized so the axis integral is exactly one.
struct Kernel {
  Shape shape;
  IVec orders;
  // per-axis folded coefficients, indexed by the axis window offset
  std::vector<std::vector<double>> axis_coeffs;
  std::vector<std::int64_t> axis_lo;

  int dim() const { return shape.dim(); }

  // f-hat at a lattice point (product over axes); zero outside the support
  double coefficient(const IVec& p) const;

  // pointwise value f(z) = sum_p fhat(p) z^p
  double value(const TorusPoint& z) const;
};

Kernel fejer_kernel(const IVec& orders, const Shape& k);

// Fourier multiplier coeffs(m) -> fhat(-m) coeffs(m)
AlgebraElement smooth_element(const Kernel& kappa, const AlgebraElement& a);

// diagonal multiplier xi(m) -> fhat(-m) xi(m) on the window
SpinorField smooth_vector(const Kernel& kappa, const SpinorField& xi);

struct KernelBudget {
  double slen = 0.0;   // integral of f(z) slen(z)
  double dil = 0.0;    // integral of f(z) dil(z)
  bool quad_stable = true;  // doubling diagnostic on infinite-axis quadrature
};

// exact group sums on finite axes, tensor-grid quadrature with a doubling
// diagnostic on infinite axes; f_perm supplies dil's permutation (components
// past the kernel's axes count as 1)
KernelBudget kernel_budget(const Kernel& kappa, const Shape& k, const std::vector<int>& f_perm,
                           int inner_d, int grid = 4096);

// smallest common per-axis order whose budgets certify
// ||a - smooth(a)|| <= eps L(a) and L(smooth(a)) <= (1+eps) L(a)
Kernel fejer_for_budget(const Shape& k, const std::vector<int>& f_perm, int inner_d, double eps,
                        std::int64_t max_order = 4096);

}  // namespace ncglab
