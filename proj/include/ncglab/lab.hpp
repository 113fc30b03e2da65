#pragma once

#include "ncglab/approx.hpp"
#include "ncglab/families.hpp"

namespace ncglab {

// --- sparse exact operator layer ---------------------------------------------

using SparseSpinor = std::map<IVec, VectorXcd>;

// Gamma_i applied exactly to a finitely supported vector at the config's
// level; keys are canonical representatives
SparseVec gamma_apply_sparse(const TripleConfig& cfg, int i, const SparseVec& xi);

SparseSpinor dirac_apply_sparse(const TripleConfig& cfg, const SparseSpinor& xi);

// --- embeddings between levels -----------------------------------------------

// rho_n: zero-extension of a level-n vector through the window bijection, and
// its adjoint rho_n^* (restriction along canonical representatives)
SparseVec rho_embed(const SparseVec& xi, const Shape& from_level);
SparseVec rho_restrict(const SparseVec& xi, const Shape& to_level);

// SpinorField forms: rho_n zero-extends a level vector through the window
// bijection into the target window, rho_n^* restricts along canonical
// representatives; rho^* rho is the identity
SpinorField rho_embed_field(const SpinorField& xi, const Shape& from_level, const Window& to);
SpinorField rho_restrict_field(const SpinorField& xi, const Shape& to_level, const Window& to);

// --- convergence experiments ---------------------------------------------------

// exact largest singular value of rho Gamma_{n,j} rho* - Gamma_{inf,j} as a
// map on l^2(F); throws unless F sits inside the level-n window
double gamma_gap(const SequenceSpec& seq, std::int64_t n, int j, const Window& F);

struct DiracGapResult {
  double gap = 0.0;              // exact norm of the windowed difference
  double graph_norm_sup = 0.0;   // sampled sup of |DN_n(rho* xi) - DN_inf(xi)|
};

DiracGapResult dirac_gap(const SequenceSpec& seq, std::int64_t n, const Window& F,
                         int samples = 16, std::uint64_t seed = 5);

struct SeminormTraceRow {
  std::int64_t n = 0;
  double value = 0.0;
  bool skipped = false;
};

struct SeminormTrace {
  std::vector<SeminormTraceRow> rows;
  double limit_estimate = 0.0;
  double limit_stability = 0.0;  // relative change over the last enlargement
  double final_rel_gap = 0.0;
};

// L_n along the grid for a fixed finitely supported element of the limit
// algebra; full-group exact on finite levels, windowed-stable at the limit
SeminormTrace seminorm_trace(const AlgebraElement& a, const SequenceSpec& seq);

// --- inequality suite -----------------------------------------------------------

// seeded check of the mean-value, dilation, Hilbert mean-value and derivation
// bounds on one config; LHS and RHS evaluated exactly on finite configs
Report inequality_suite(const TripleConfig& cfg, int samples, std::uint64_t seed,
                        double slack = 1e-9);

// --- dynamics --------------------------------------------------------------------

struct DynamicsRow {
  double t = 0.0;
  double gap = 0.0;       // ||(e^{itA} - e^{itB}) P_F||
  double bound = 0.0;     // |t| ||A - B||_W
  double truncation = 0.0;  // window-doubling diagnostic on e^{itB}
};

std::vector<DynamicsRow> dynamics_gap(const SequenceSpec& seq, std::int64_t n, const Window& F,
                                      const std::vector<double>& tgrid,
                                      std::int64_t window_radius = 6);

// --- states and the Monge-Kantorovich estimator -----------------------------------

struct State {
  Window window;
  MatrixXcd rho;  // density matrix on l^2(window)

  static State maximally_mixed(const Window& w);
  static State pure(const Window& w, const VectorXcd& v);

  // PSD within 1e-10 and unit trace within 1e-12
  void validate() const;

  // phi(a) = Tr(rho pi(a)); exact finite sums
  double expectation(const AlgebraElement& a, const Cocycle& sigma) const;
};

// the normalized-trace state tau(a) = a(0) on the full finite window
State canonical_trace_state(const TripleConfig& cfg);

struct MkResult {
  double value = 0.0;
  AlgebraElement witness;
  double witness_seminorm = 0.0;
};

// seeded multi-start lower bound for sup{ |phi(a) - psi(a)| : L(a) <= 1 };
// the witness is re-verified feasible, so the value is a certified lower
// bound; deterministic and nondecreasing in the budget for a fixed seed
MkResult mk_lower_bound(const State& phi, const State& psi, const TripleConfig& cfg, int budget,
                        std::uint64_t seed);

// --- seeded sample generators (shared by tests and the runner) ---------------------

AlgebraElement random_inner_selfadjoint(Rng& rng, const TripleConfig& cfg, int support,
                                        std::int64_t radius);
TorusPoint random_group_point(Rng& rng, const Shape& k, int components);
SpinorField random_spinor(Rng& rng, const TripleConfig& cfg, const Window& w, std::int64_t margin);

}  // namespace ncglab
