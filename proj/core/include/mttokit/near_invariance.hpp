#pragma once

// Near S*-invariance of MTTO kernels: the defect space built from ker T_calG,
// certification of S* M0 in M + D, and the decomposition
// F = F0 k0 + z sum_j k_j e_j with (k0, ..., km) ranging over an S*-invariant K.

#include <optional>
#include <string>
#include <vector>

#include "mttokit/fourier.hpp"
#include "mttokit/linalg.hpp"
#include "mttokit/model_space.hpp"

namespace mttokit {

inline constexpr double kCertifyThreshold = 1e-8;
inline constexpr double kDecompositionThreshold = 1e-8;

/// S* f = (f - f(0)) / z.  Throws InputError when f has negative Fourier mass.
TrigPoly backward_shift(const TrigPoly& f);

/// Coordinates of the subspace's functions in a (larger) window.
Mat embed(const PolySubspace& s, const PolyWindow& w);

/// Smallest window [0, hi] holding both subspaces (dimensions must agree).
PolyWindow common_window(const PolySubspace& a, const PolySubspace& b);

struct DefectSpace {
  PolySubspace space;             // span{P_n(W_i)}/z intersected with (H^2)^n, orthonormalized
  Index kernel_dim = 0;           // dim ker T_calG
  Index w_dim = 0;                // r = dim W = dim ker T_calG(0)
  std::vector<Index> selected;    // kernel basis columns chosen as W_1..W_r
};

/// Defect space of P_n(ker T_calG) from the evaluations W_i(0).
DefectSpace defect_space(const ModelSpace& ms, const MatrixSymbol& G, std::optional<int> N_in = std::nullopt);

/// max over an orthonormal basis f of {f in M : f(0) = 0} of dist(S* f, M + D).
double certify_near_invariance(const PolySubspace& M, const PolySubspace& D);

/// Orthonormal basis of {f in M : f(0) = 0} in M's window.
PolySubspace vanishing_part(const PolySubspace& M);

enum class KernelCase { has_nonvanishing, all_vanish_at_zero };
std::string to_string(KernelCase c);

struct NearInvarianceReport {
  PolySubspace M;
  PolySubspace raw_defect;  // as supplied
  PolySubspace defect;      // orthogonalized against M
  Index raw_defect_dim = 0;
  Index defect_dim = 0;     // m
  KernelCase kernel_case = KernelCase::all_vanish_at_zero;
  std::vector<TrigPoly> F0;      // orthonormal basis of M minus (M cap z(H^2)^n)
  Index r = 0;
  std::vector<TrigPoly> e;       // orthonormal defect basis
  PolySubspace K;                // coefficient tuples (k0 (r entries), k1..km)
  int terms = 0;                 // Taylor length used for the k_j
  double certification_residual = 0.0;
  double reconstruction_residual = 0.0;
  double norm_identity_residual = 0.0;
  double k_invariance_residual = 0.0;
  bool degenerate = false;
  int degenerate_degree = -1;
  bool pass = false;
};

/// Decomposition F = F0 k0 + z sum_j k_j e_j of a nearly S*-invariant M with defect D.
/// Throws InputError when certify_near_invariance(M, D) exceeds kCertifyThreshold.
NearInvarianceReport decompose_kernel(const PolySubspace& M, const PolySubspace& D,
                                      std::optional<int> max_terms = std::nullopt);

struct NearInvarianceAnalysis {
  DefectSpace defect;
  NearInvarianceReport report;
  Index n = 0;
  bool defect_bound_holds = false;  // m <= n
};

/// ker A_G^Theta, its defect space and decomposition.  Certification failure
/// here is a numerical failure (the theorem guarantees it) and throws NumericalError.
NearInvarianceAnalysis analyze_near_invariance(const ModelSpace& ms, const MatrixSymbol& G,
                                               std::optional<int> N_in = std::nullopt);

}  // namespace mttokit
