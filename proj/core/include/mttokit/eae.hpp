#pragma once

// The block Toeplitz operator T_calG (f1, f2) -> (P_+(Theta^* f1), P_+(G f1 + Theta f2)),
// its factorization diag(P_Theta G P_Theta + Q_Theta, P_+) = T T1 T_calG T2, the
// kernel-coordinate identity P_n(ker T_calG) = ker A_G^Theta, and the Co-d
// codomain decomposition.
//
// Block vectors (f1, f2) are stacked into one polynomial of dimension 2n.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mttokit/fourier.hpp"
#include "mttokit/linalg.hpp"
#include "mttokit/model_space.hpp"

namespace mttokit {

using WindowMap = std::function<TrigPoly(const TrigPoly&)>;

/// Matrix of a linear map between polynomial windows, column j = out.coords(map(unit_j)).
/// Throws InputError "window budget violated; need N_out >= X" when an image leaves `out`.
Mat assemble_window_map(const WindowMap& map, const PolyWindow& in, const PolyWindow& out);

/// Matrix between stacked (H^2)^n + (H^2)^n windows [0, N_in] -> [0, N_out].
struct BlockOperator {
  Mat matrix;
  PolyWindow domain;    // dimension 2n
  PolyWindow codomain;  // dimension 2n
  ExponentPair exponents;

  Index n() const { return domain.n / 2; }
  int N_in() const { return domain.hi; }
  int N_out() const { return codomain.hi; }
  /// Block (i, j) in {0,1}^2 with rows and columns ordered (degree, component).
  Mat block(int i, int j) const;
};

/// max(0, highest Fourier index of G).
int analytic_degree(const MatrixSymbol& G);
/// N_in = N_Theta + deg^+ G: holds every lift (f1, f2) of ker A.
int default_input_degree(const ModelSpace& ms, const MatrixSymbol& G);
/// N_out = N_in + deg^+ G + N_Theta.
int required_output_degree(const ModelSpace& ms, const MatrixSymbol& G, int N_in);

/// Applies T_calG to a stacked polynomial.
TrigPoly apply_T_G(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& f);

BlockOperator assemble_T_G(const ModelSpace& ms, const MatrixSymbol& G, std::optional<int> N_in = std::nullopt,
                           std::optional<int> N_out = std::nullopt, ExponentPair exponents = {});

/// ker T_calG on its input window.
PolySubspace kernel_T_G(const BlockOperator& op, double tail, std::optional<double> tol = std::nullopt);

/// First n components of each function.
std::vector<TrigPoly> first_block(const std::vector<TrigPoly>& fs, Index n);

struct KernelProjectionReport {
  double principal_angle = 0.0;
  Index dim_ker_T_G = 0;
  Index dim_ker_A = 0;
  double threshold = 1e-8;
  bool pass = false;
};
KernelProjectionReport verify_kernel_projection(const ModelSpace& ms, const MatrixSymbol& G,
                                                std::optional<int> N_in = std::nullopt);

struct FactorizationReport {
  int N_in = 0;
  int N_out = 0;
  BlockOperator T;
  BlockOperator T1;
  BlockOperator T2;
  BlockOperator T_G;
  double residual = 0.0;             // || diag(P G P + Q, P_+) - T T1 T_G T2 ||
  double lemma_residual = 0.0;       // || (I - L)(I + L) - I ||, L = P_Theta T_G Q_Theta
  double nilpotency_residual = 0.0;  // || L^2 ||
  double t2_inverse_residual = 0.0;  // || T2 T2^{-1} - I || and || T2^{-1} T2 - I ||
  double t1_inverse_residual = 0.0;  // || T1^{-1} T1 - I || with the closed-form left inverse
  double sigma_min_T1 = 0.0;
  double sigma_min_T2 = 0.0;
  double tail = 0.0;
  double threshold = 0.0;  // tail + 1e-9
  bool pass = false;
};

/// Degrees along the chain N_in -> T2 -> T_G -> T1 -> T; the last is the required N_out.
std::vector<int> factorization_degrees(const ModelSpace& ms, const MatrixSymbol& G, int N_in);

FactorizationReport factor_operators(const ModelSpace& ms, const MatrixSymbol& G,
                                     std::optional<int> N_in = std::nullopt, std::optional<int> N_out = std::nullopt,
                                     double abs_tol = 1e-9);

/// T2^{-1}(f1, f2) = (f1, f2 + P_+Theta^* P_+(G f1) - P_+ Theta^* f1).
TrigPoly apply_T2_inverse(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& f);
/// Left inverse of T1: (y1, y2) -> (P_+Theta^* y1, P_Theta y1 + Theta (y2 + P_+Theta^* y1)).
TrigPoly apply_T1_inverse(const ModelSpace& ms, const TrigPoly& y);

struct CodomainSplit {
  TrigPoly p1;
  TrigPoly p2;
  TrigPoly p3;
  double co_d_norm = 0.0;  // ||Theta p1||_q + ||p2||_2 + ||p3||_2
  double reassembly_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// v = (0, Theta p1) + (0, p2) + (p3, P_+(G Theta p3)).
CodomainSplit decompose_codomain(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& v,
                                 ExponentPair exponents = {});

struct EaeReport {
  Index dim_ker_A = 0;
  Index dim_ker_T_G = 0;
  bool kernel_dims_equal = false;  // exact consequence
  Index dim_coker_A = 0;
  Index dim_coker_T_G = 0;        // against the truncated Co-d generator span
  bool cokernel_dims_equal = false;  // truncation heuristic, not an acceptance check
  KernelProjectionReport projection;
  FactorizationReport factorization;
  bool pass = false;  // kernel equality, projection and factorization
};

EaeReport eae_consequences_report(const ModelSpace& ms, const MatrixSymbol& G,
                                  std::optional<int> N_in = std::nullopt);

}  // namespace mttokit
