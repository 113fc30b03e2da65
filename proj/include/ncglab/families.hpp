#pragma once

#include "ncglab/dirac.hpp"

namespace ncglab {

enum class Family { ClockShift, ThetaSequence, AbelianTorus, Custom };

// A sequence of triple configs converging to a limit config: theta_n -> theta
// entrywise, k_n -> infinity per axis, one shared branch angle across the
// whole sequence.
struct SequenceSpec {
  Family family = Family::ClockShift;
  int d = 2;
  MatrixXd theta_inf;
  double beta = 0.0;
  std::vector<std::int64_t> ngrid;
  std::int64_t radius = 8;
  // per-axis rule for theta-sequence/custom: axes marked false stay infinite
  // at every level (empty means all finite)
  std::vector<bool> finite_axes;

  // finite level for n in the grid; pass kInf for the limit level
  TripleConfig level(std::int64_t n) const;

  MatrixXd theta_at(std::int64_t n) const;

  Shape shape_at(std::int64_t n) const;
};

// d = 2, d' = 2, f the swap; U1 U2 = exp(2 pi i/n) U2 U1 and U_j^n = 1
SequenceSpec clock_shift_family(std::vector<std::int64_t> ngrid, std::int64_t radius = 8);

// rational rounding of theta with gcd(k_j,k_s) theta_js integral; generic
// innerification with d' = 2d at every level
SequenceSpec theta_sequence_family(MatrixXd theta_inf, std::vector<std::int64_t> ngrid,
                                   std::int64_t radius = 8);

// all-infinite commutative torus with f the swap; the d' = d embedding whose
// outer generators are central (test family for the sqrt(2) commutator row)
TripleConfig abelian_torus_config(int d, std::int64_t radius = 8);

// clock-shift theta: theta(0,1) = -1/n, theta(1,0) = 1/n
MatrixXd clock_shift_theta(std::int64_t n);

// one branch angle for a whole sequence: a union-gap midpoint farthest from
// the limit angle set
double shared_branch_angle_for(const SequenceSpec& spec);

}  // namespace ncglab
