#pragma once

#include "ncglab/common.hpp"
#include "ncglab/report.hpp"

#include <optional>

namespace ncglab {

// Faithful representation of the Clifford algebra of C^N on spinor dimension
// 2^ceil(N/2): gamma_j* = -gamma_j, gamma_j^2 = -1, anticommuting.
struct CliffordRep {
  int N = 0;
  int s = 0;
  std::vector<MatrixXcd> gamma;

  const MatrixXcd& operator[](int j) const { return gamma[j]; }
};

// iterated 2x2 tensor construction: Hermitian anticommuting e_j with
// e_j^2 = 1, then gamma_j = i e_j; entries are exact (0, +-1, +-i)
CliffordRep build_gammas(int N);

Report verify_clifford(const CliffordRep& rep);

// normalized product of all e_j for even N: Hermitian, squares to the
// identity, anticommutes with every gamma_j; absent for odd N
std::optional<MatrixXcd> chirality(const CliffordRep& rep);

}  // namespace ncglab
