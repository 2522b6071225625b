#pragma once

// Structured matrix inner functions Theta = U diag(theta_1..theta_n) V with
// monomial or finite Blaschke diagonal entries, their model spaces
// K_Theta = (H^2)^n minus Theta (H^2)^n, and the associated projections.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mttokit/fourier.hpp"
#include "mttokit/linalg.hpp"

namespace mttokit {

/// Target l1 tail for automatically chosen Blaschke truncation degrees.
inline constexpr double kAutoTail = 1e-12;
/// Largest tail accepted by theta_to_symbol.
inline constexpr double kMaxTail = 1e-10;

/// z^k, or rotation * prod_j (z - a_j) / (1 - conj(a_j) z).
class ScalarInner {
 public:
  enum class Kind { monomial, blaschke };

  static ScalarInner monomial(int k);
  static ScalarInner blaschke(std::vector<cplx> zeros, cplx rotation = 1.0);

  Kind kind() const { return kind_; }
  int power() const { return power_; }
  const std::vector<cplx>& zeros() const { return zeros_; }
  cplx rotation() const { return rotation_; }

  /// dim K_theta.
  int degree() const;
  /// max |a_j| (0 for monomials).
  double max_modulus() const;
  bool is_constant() const { return degree() == 0; }

  cplx operator()(cplx z) const;

  /// Taylor coefficients 0..N.
  std::vector<cplx> taylor(int N) const;
  /// Rigorous bound on sum_{k > N} |c_k| (so also on the sup-norm error on the circle).
  double tail_bound(int N) const;
  /// Smallest N whose tail bound is <= tol.
  int minimal_degree(double tol = kAutoTail) const;

  /// Takenaka-Malmquist orthonormal system of K_theta (monomials 1..z^{k-1}
  /// for z^k), Taylor-expanded to degree N.
  std::vector<TrigPoly> orthonormal_system(int N) const;
  /// Tail bound shared by every vector of orthonormal_system(N).
  double system_tail_bound(int N) const;

 private:
  Kind kind_ = Kind::monomial;
  int power_ = 0;
  std::vector<cplx> zeros_;
  cplx rotation_ = 1.0;
};

/// Theta(z) = left * diag(theta_i(z)) * right.
class MatrixInner {
 public:
  explicit MatrixInner(std::vector<ScalarInner> diag);
  MatrixInner(Mat left, std::vector<ScalarInner> diag, Mat right);

  static MatrixInner diagonal_monomials(const std::vector<int>& powers);

  Index n() const { return static_cast<Index>(diag_.size()); }
  const Mat& left() const { return left_; }
  const Mat& right() const { return right_; }
  const std::vector<ScalarInner>& diag() const { return diag_; }

  bool is_monomial() const;
  /// dim K_Theta = sum of the diagonal degrees.
  int model_dim() const;
  /// Exact polynomial degree of Theta when all entries are monomials.
  int monomial_degree() const;
  /// Smallest Taylor degree meeting the tail target (monomial degree when exact).
  int auto_degree(double tail = kAutoTail) const;
  double tail_bound(int N) const;
  /// ||Theta(0)|| < 1 (reported, never enforced).
  bool is_pure() const;

  Mat operator()(cplx z) const;

 private:
  void validate() const;

  Mat left_;
  std::vector<ScalarInner> diag_;
  Mat right_;
};

/// Truncated Fourier expansion of Theta with its l1 tail bound.
struct InnerSymbol {
  MatrixSymbol symbol;
  int N = 0;
  double tail = 0.0;
};

/// Taylor expansion of Theta to degree N; throws InputError naming the
/// minimal admissible N when the tail would exceed kMaxTail.
InnerSymbol theta_to_symbol(const MatrixInner& theta, int N);

struct ModelSpaceBasis {
  int N = 0;
  std::vector<TrigPoly> vectors;
  double tail_bound = 0.0;
};

ModelSpaceBasis model_basis(const MatrixInner& theta, int N);

/// Theta together with its truncated symbol, adjoint symbol and model basis.
/// All projections are evaluated through the displayed compositions
/// P_Theta = P_+ Theta P_- Theta^* and Q_Theta = Theta P_+ Theta^*.
class ModelSpace {
 public:
  explicit ModelSpace(MatrixInner theta, std::optional<int> N = std::nullopt);

  const MatrixInner& theta() const { return theta_; }
  Index n() const { return theta_.n(); }
  int N() const { return symbol_.N; }
  double tail() const { return std::max(symbol_.tail, basis_.tail_bound); }
  const MatrixSymbol& symbol() const { return symbol_.symbol; }
  const MatrixSymbol& adjoint_symbol() const { return adjoint_; }
  const ModelSpaceBasis& basis() const { return basis_; }
  Index dim() const { return static_cast<Index>(basis_.vectors.size()); }
  /// Window [0, D] containing every basis vector.
  PolyWindow window() const;

  TrigPoly project(const TrigPoly& f) const;          // P_Theta
  TrigPoly project_theta_h2(const TrigPoly& f) const;  // Q_Theta
  TrigPoly apply_theta(const TrigPoly& f) const;       // Theta f
  TrigPoly apply_theta_adjoint(const TrigPoly& f) const;  // Theta^* f

  /// Coordinates <f, e_i> against the model basis.
  Vec basis_coords(const TrigPoly& f) const;
  /// sum_i c_i e_i.
  TrigPoly from_basis_coords(const Vec& c) const;

 private:
  MatrixInner theta_;
  InnerSymbol symbol_;
  MatrixSymbol adjoint_;
  ModelSpaceBasis basis_;
};

TrigPoly project_model(const MatrixInner& theta, const TrigPoly& f);
TrigPoly project_theta_h2(const MatrixInner& theta, const TrigPoly& f);

/// k_zeta = (1 - conj(theta(zeta)) theta(z)) / (1 - conj(zeta) z), Taylor-expanded
/// to degree N.  |zeta| = 1 is admitted (finite Blaschke products and monomials
/// have an angular derivative everywhere on the circle); |zeta| > 1 is rejected.
TrigPoly reproducing_kernel(const ScalarInner& theta, cplx zeta, int N);

// ---------------------------------------------------------------------------
// L^p membership of boundary reproducing kernels via the zero-series test
//   sum_k (1 - |a_k|^2) / |zeta - a_k|^p < inf.

/// A zero a = (1 - gap) e^{i angle}; carrying the gap keeps 1 - |a|^2 accurate near the circle.
struct PolarZero {
  double gap = 1.0;
  double angle = 0.0;

  static PolarZero from_complex(cplx a);
  cplx value() const;
};

/// k -> a_k for k = 1, 2, ...
using ZeroSequence = std::function<PolarZero(std::size_t)>;

/// a_k = (1 - 1/k^2) exp(i log(k) / sqrt(k)).
ZeroSequence critical_zero_sequence();

enum class SeriesVerdict { converging, diverging_trend, inconclusive };
std::string to_string(SeriesVerdict v);

struct LpDiagnostic {
  std::vector<std::size_t> checkpoints;  // K/8, K/4, K/2, K (or the finite count)
  std::vector<double> partial_sums;
  std::vector<double> growth_ratios;  // S_{2K'} / S_{K'}
  std::optional<double> tail_estimate;  // empty: unbounded trend
  double decay_exponent = 0.0;          // local power-law exponent of the terms
  bool monotone_tail = false;
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
};

inline constexpr double kConvergingRelTail = 1e-6;
inline constexpr double kDivergingRatio = 1.5;

/// Partial sums over K terms of an infinite zero sequence.  "converging"
/// needs an integral-comparison tail bound below 1e-6 S_K; "diverging-trend"
/// needs S_{2K'}/S_{K'} > 1.5 at each of the three doublings ending at K.
/// Divergence is only ever reported as a trend.
LpDiagnostic lp_membership_diagnostic(const ZeroSequence& zeros, cplx zeta, double p, std::size_t K);
/// Finite zero sets always converge.
LpDiagnostic lp_membership_diagnostic(const std::vector<cplx>& zeros, cplx zeta, double p);

}  // namespace mttokit
