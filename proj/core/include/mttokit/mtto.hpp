#pragma once

// Matrix-valued truncated Toeplitz operators A_G^Theta : f -> P_Theta(G f) as
// explicit matrices on the model basis, plus the Hankel relation and rank-one
// truncated Toeplitz operators.

#include <optional>
#include <string>
#include <vector>

#include "mttokit/fourier.hpp"
#include "mttokit/linalg.hpp"
#include "mttokit/model_space.hpp"

namespace mttokit {

/// Which basis the rows or columns of an OperatorMatrix refer to.
struct BasisDescriptor {
  enum class Kind { model, window };
  Kind kind = Kind::model;
  Index size = 0;
  Index n = 1;     // vector dimension of the functions
  int lo = 0;      // window bounds (window kind only)
  int hi = 0;
  std::string label;

  static BasisDescriptor model(const ModelSpace& ms);
  static BasisDescriptor window(const PolyWindow& w, std::string label = "window");
};

struct OperatorMatrix {
  Mat matrix;
  BasisDescriptor domain;
  BasisDescriptor codomain;
  int truncation = 0;
  ExponentPair exponents;
  double tail = 0.0;
};

/// Matrix of A_G^Theta in the model basis: entry (i, j) = <P_Theta(G e_j), e_i>.
/// At polynomial truncation the modified operator coincides with A_G^Theta, so
/// the same matrix serves both; `exponents` is carried for reporting.
OperatorMatrix assemble_mtto(const ModelSpace& ms, const MatrixSymbol& G, ExponentPair exponents = {});
OperatorMatrix assemble_mtto(const MatrixInner& theta, const MatrixSymbol& G, int N);

/// Right singular vectors with sigma <= tol, in the canonical gauge.  The
/// default tolerance is truncated_rank_tol(matrix, tail).
Subspace kernel(const OperatorMatrix& op, std::optional<double> tol = std::nullopt);

/// Kernel vectors of a model-basis operator as functions.
std::vector<TrigPoly> kernel_functions(const ModelSpace& ms, const Subspace& ker);
/// The same functions as an orthonormal subspace of the window [0, max degree].
PolySubspace kernel_subspace(const ModelSpace& ms, const Subspace& ker);

/// f2 = -Theta^* P_+(G f1), so that (f1, f2) lies in ker T_calG.
/// Throws InputError when ||P_Theta(G f1)|| > tol ||f1||.
TrigPoly lift_kernel_witness(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& f1, double tol = 1e-8);

struct WitnessCheck {
  double negative_mass = 0.0;   // of f2
  double analytic_mass = 0.0;   // nonnegative-frequency mass of G f1 + Theta f2
  double bound = 0.0;           // tail + 1e-8 ||f1||
  bool pass = false;
};
WitnessCheck check_kernel_witness(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& f1, const TrigPoly& f2);

struct HankelReport {
  double residual = 0.0;  // operator norm of A_Psi - Theta H_{Theta^* Psi} on K_Theta
  double tail = 0.0;
  bool pass = false;
};
/// Psi must be analytic.
HankelReport hankel_relation_check(const ModelSpace& ms, const MatrixSymbol& psi);

/// Matrix of f -> <f, k_zeta> k_zeta on the model basis of K_theta.
OperatorMatrix rank_one_tto(const ScalarInner& theta, cplx zeta, int N);

struct GrowthPoint {
  Index dim = 0;
  int truncation = 0;
  double sigma_max = 0.0;
  double image_l2 = 0.0;  // ||A v||_2 for the top right singular vector
  std::optional<double> image_lq;  // grid L^q norm of the same image (function-backed operators)
};

struct GrowthReport {
  std::vector<GrowthPoint> points;
  std::vector<double> ratios;  // successive sigma_max ratios
  bool saturated = false;
  std::string verdict;  // "bounded at this scale" / "no bounded extension at this scale"
};

inline constexpr double kSaturationRatio = 1.0 + 1e-3;

/// Top singular value of A_G^Theta over a family of inner functions of
/// growing size.  Saturation of the last ratio reads as bounded at this scale.
GrowthReport boundedness_growth_diagnostic(const std::vector<MatrixInner>& family, const MatrixSymbol& G,
                                           ExponentPair exponents = {});
/// Same diagnostic over prebuilt operators (e.g. rank-one families).
GrowthReport boundedness_growth_diagnostic(const std::vector<OperatorMatrix>& ops);

}  // namespace mttokit
