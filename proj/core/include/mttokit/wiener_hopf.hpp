#pragma once

// Finite-interval matricial convolution operators
//   (W_G k)_i(x) = sum_j int_0^{min(c_i, c_j)} G_ij(x - t) k_j(t) dt,  x in [0, c_i],
// with c_i = a for the first n_a components and b for the rest; the MIMO
// state-space solution built from them; an RK4 oracle; and the DFT check
// W_G k = F P_Theta(H k_check) for exponential inner functions.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mttokit/fourier.hpp"

namespace mttokit {

using RealVecFn = std::function<Vec(double)>;

/// exp(A s) B on one side of 0.  `positive` means s >= 0 (value B at s = 0+),
/// `nonpositive` means s <= 0 (value B at s = 0-).
struct ExpIndicator {
  enum class Side { positive, nonpositive };
  Mat A;
  Mat B;
  Side side = Side::positive;
};

/// sum_j C_j s^j.
struct PolynomialKernel {
  std::vector<Mat> coeffs;
};

/// Values on the uniform grid s_l = s0 + l ds, linearly interpolated.
struct SampledKernel {
  double s0 = 0.0;
  double ds = 1.0;
  std::vector<Mat> values;
};

/// Arbitrary closed form G(s, side); `jump_at_zero` requests the split at t = x.
struct FunctionKernel {
  Index n = 1;
  std::function<Mat(double, int)> eval;
  bool jump_at_zero = true;
};

class IntervalKernel {
 public:
  using Form = std::variant<ExpIndicator, PolynomialKernel, SampledKernel, FunctionKernel>;

  /// n_a: number of leading components living on [0, a] (default: all).
  IntervalKernel(Form form, double a, double b, std::optional<Index> n_a = std::nullopt);

  Index n() const { return n_; }
  double a() const { return a_; }
  double b() const { return b_; }
  Index n_a() const { return n_a_; }
  /// Interval length of component i.
  double length(Index i) const { return i < n_a_ ? a_ : b_; }
  const Form& form() const { return form_; }
  bool jumps_at_zero() const;

  /// G(s); at s = 0 the one-sided limit from the given side (+1: s > 0, -1: s < 0).
  /// Throws InputError outside [-max(a,b), max(a,b)] or outside a sampled grid.
  Mat operator()(double s, int side = +1) const;

 private:
  Form form_;
  double a_;
  double b_;
  Index n_;
  Index n_a_;
};

/// Values of a function on component grids: component i has M + 1 nodes on [0, c_i].
struct GridFunction {
  std::vector<double> lengths;             // c_i
  int M = 0;                               // intervals per component
  std::vector<std::vector<cplx>> values;   // values[i][l] at l c_i / M

  Index n() const { return static_cast<Index>(values.size()); }
  double node(Index i, int l) const { return lengths[static_cast<std::size_t>(i)] * l / M; }
  static GridFunction sample(const RealVecFn& f, const std::vector<double>& lengths, int M);
  /// Linear interpolation of component i.
  cplx at(Index i, double t) const;
};

/// Composite trapezoid quadrature of W_G k, split at t = x.  k must be sampled on the
/// kernel's component lengths.  M >= 8.
GridFunction wh_apply(const IntervalKernel& G, const GridFunction& k);
GridFunction wh_apply(const IntervalKernel& G, const RealVecFn& k, int M);

/// Relative l2 distance over all nodes of two grid functions on the same grids.
double relative_l2(const GridFunction& x, const GridFunction& ref);

/// Self-convergence of wh_apply: Richardson reference from 2M and 4M, error ratio M -> 2M.
struct ConvergenceReport {
  int M = 0;
  double error_M = 0.0;
  double error_2M = 0.0;
  double ratio = 0.0;
};
ConvergenceReport wh_self_convergence(const IntervalKernel& G, const RealVecFn& k, int M);

/// exp(A) by scaling-and-squaring with a degree-13 Pade approximant.
Mat matrix_exponential(const Mat& A);

struct StateSpaceSystem {
  Mat A;
  Mat B;
  Mat C;
  Mat D;
  Vec v0;
  double horizon = 1.0;

  void validate() const;
};

enum class Convention { causal, paper_literal };
std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

struct MimoSolution {
  Convention convention = Convention::causal;
  std::vector<double> x;
  std::vector<Vec> v;
  std::vector<Vec> y;
};

/// v = W_{G'} u + exp(A x) v0 with G'(s) = exp(A s) 1(s) B, where 1 is the indicator of
/// s >= 0 (causal) or s <= 0 (paper-literal); y = C v + D u.  M grid intervals on [0, horizon].
MimoSolution mimo_solve(const StateSpaceSystem& sys, const RealVecFn& u, int M, Convention convention);

/// Classical RK4 for v' = A v + B u on [0, horizon] with the given number of steps.
std::vector<Vec> ode_oracle(const StateSpaceSystem& sys, const RealVecFn& u, int steps);

struct ConventionCheck {
  Convention convention = Convention::causal;
  double rk4_relative_error = 0.0;
  double state_residual = 0.0;  // relative finite-difference residual of v' - A v - B u
  bool satisfies_state_equation = false;
};

struct MimoReport {
  int M = 0;
  int rk4_steps = 0;
  std::vector<ConventionCheck> checks;  // causal, paper-literal
  std::optional<Convention> adjudicated;  // convention that satisfied the state equation
  MimoSolution solution;                  // under the adjudicated (or requested) convention
};

inline constexpr double kMimoTolerance = 1e-4;

/// Solves under both conventions and lets RK4 (h = horizon / rk4_steps) adjudicate.
MimoReport mimo_report(const StateSpaceSystem& sys, const RealVecFn& u, int M, int rk4_steps = 10000,
                       std::optional<Convention> requested = std::nullopt, double tol = kMimoTolerance);

/// Closed-form Fourier pairs with Ghat(w) = int G(x) exp(-i w x) dx = H(w):
///   causal:     G = exp(-l x) 1_{x>0},  H = 1 / (l + i w)
///   anticausal: G = exp(l x) 1_{x<0},   H = 1 / (l - i w)
///   two_sided:  G = exp(-l |x|),        H = 2 l / (l^2 + w^2)
struct ClosedFormPair {
  enum class Kind { causal, anticausal, two_sided };
  Kind kind = Kind::causal;
  double rate = 1.0;

  cplx G(double x, int side = +1) const;
  cplx H(double w) const;
  void validate() const;
};
std::string to_string(ClosedFormPair::Kind k);
ClosedFormPair::Kind pair_kind_from_string(const std::string& s);

/// exp(1 - 1 / (1 - u^2)) with u = (2t - a) / (0.8 a) on |u| < 1, zero elsewhere.
double smooth_bump(double t, double a);

struct EquivalenceLevel {
  int M = 0;      // DFT size on [-L, L)
  double L = 0.0;
  double dx = 0.0;
  double discrepancy = 0.0;
};

struct EquivalenceReport {
  std::vector<EquivalenceLevel> levels;  // base, then each refinement (dx / 2, L * 2)
  bool decreasing = false;
  double threshold = 1e-3;
  bool pass = false;
};

/// Discrepancy between wh_apply and the DFT pipeline for a diagonal kernel
/// (one pair per component, all on [0, a]).  Requires L >= 8a and M / (2L / a) integral.
EquivalenceLevel equivalence_level(const std::vector<ClosedFormPair>& pairs, const RealVecFn& k, double a, int M,
                                   double L);
EquivalenceReport unitary_equivalence_check(const std::vector<ClosedFormPair>& pairs, const RealVecFn& k, double a,
                                            int M, double L, int refinements = 2, double threshold = 1e-3);

}  // namespace mttokit
