#pragma once

// Vector-valued trigonometric (Laurent) polynomials on the unit circle and
// the matrix symbols acting on them.  Coefficients are carried on an explicit
// Fourier window [lo, hi]; products widen the window, nothing is truncated
// implicitly.

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mttokit {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Raised for inputs that violate an operation's preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver its contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hoelder pair 1/q = 1/2 + 1/p with p in (2, inf] and q in (1, 2].
class ExponentPair {
 public:
  ExponentPair() = default;
  static ExponentPair from_p(double p);
  static ExponentPair bounded() { return {}; }

  double p() const { return p_; }
  double q() const { return q_; }
  bool is_bounded_symbol() const { return p_ == std::numeric_limits<double>::infinity(); }

 private:
  double p_ = std::numeric_limits<double>::infinity();
  double q_ = 2.0;
};

/// f(z) = sum_{k=lo}^{hi} c_k z^k with c_k in C^dim.
///
/// Normal form: the extreme coefficients are nonzero unless f is identically
/// zero, in which case lo = hi = 0 and the single coefficient is zero.
class TrigPoly {
 public:
  TrigPoly() : TrigPoly(1) {}
  explicit TrigPoly(Index dim);
  TrigPoly(int lo, std::vector<Vec> coeffs);

  static TrigPoly monomial(const Vec& c, int k);
  static TrigPoly scalar(int lo, const std::vector<cplx>& coeffs);
  static TrigPoly unit(Index dim, Index component, int k);

  Index dim() const { return dim_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  int width() const { return static_cast<int>(coeffs_.size()); }
  bool is_zero() const;

  /// Coefficient c_k; zero outside the window.
  Vec coeff(int k) const;
  const std::vector<Vec>& coeffs() const { return coeffs_; }

  /// Value at a point z (z != 0 when lo < 0).
  Vec operator()(cplx z) const;

  /// Scalar component i as a dimension-1 polynomial.
  TrigPoly component(Index i) const;

  TrigPoly& operator+=(const TrigPoly& g);
  TrigPoly& operator-=(const TrigPoly& g);
  TrigPoly& operator*=(cplx s);

 private:
  void trim();

  Index dim_ = 1;
  int lo_ = 0;
  std::vector<Vec> coeffs_;
};

TrigPoly add(const TrigPoly& f, const TrigPoly& g);
TrigPoly scale(const TrigPoly& f, cplx s);
TrigPoly operator+(TrigPoly f, const TrigPoly& g);
TrigPoly operator-(TrigPoly f, const TrigPoly& g);
TrigPoly operator*(cplx s, TrigPoly f);

/// Multiplication by z^s.
TrigPoly shift(const TrigPoly& f, int s);

/// Stack polynomials of dimensions n_1, n_2, ... into one of dimension sum n_i.
TrigPoly stack(const std::vector<TrigPoly>& parts);

/// Split into consecutive blocks of the given dimensions.
std::vector<TrigPoly> split(const TrigPoly& f, const std::vector<Index>& dims);

/// Keeps coefficients with k >= 0.
TrigPoly riesz_plus(const TrigPoly& f);
/// Keeps coefficients with k <= -1.
TrigPoly riesz_minus0(const TrigPoly& f);

/// l2 norm of the negative-frequency part.
double negative_mass(const TrigPoly& f);

/// Result of an explicit lossy truncation.
struct Truncation {
  TrigPoly poly;
  double dropped_l2 = 0.0;
};
/// Restricts f to the window [lo, hi], reporting the l2 norm of what was dropped.
Truncation truncate(const TrigPoly& f, int lo, int hi);

/// <f, g> = sum_k <c_k(f), c_k(g)>, conjugate-linear in g.
cplx inner_product(const TrigPoly& f, const TrigPoly& g);
double l2_norm(const TrigPoly& f);

/// Values f(exp(2 pi i j / M)), j = 0..M-1.
std::vector<Vec> evaluate_on_grid(const TrigPoly& f, int M);

/// Inverse DFT onto the window [lo, hi]; exact when M >= hi - lo + 1.
TrigPoly from_grid_values(const std::vector<Vec>& values, int lo, int hi);

/// 4 * (width + 1) rounded up to a power of two.
int default_grid_size(int width);

/// Discrete L^p norm over M equispaced nodes (p = inf gives the grid maximum).
/// Requires M >= 2 * width + 1.
double lp_norm_grid(const TrigPoly& f, double p, int M);
double lp_norm_grid(const TrigPoly& f, double p);

/// Matrix-valued Laurent polynomial sum_k C_k z^k with C_k of size rows x cols.
class MatrixSymbol {
 public:
  MatrixSymbol() : MatrixSymbol(1, 1) {}
  MatrixSymbol(Index rows, Index cols);
  MatrixSymbol(int lo, std::vector<Mat> coeffs);

  static MatrixSymbol constant(const Mat& c);
  static MatrixSymbol identity(Index n);
  static MatrixSymbol monomial(const Mat& c, int k);
  /// Built from scalar polynomials in row-major order.
  static MatrixSymbol from_entries(Index rows, Index cols, const std::vector<TrigPoly>& entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;
  bool is_analytic() const { return is_zero() || lo_ >= 0; }

  Mat coeff(int k) const;
  const std::vector<Mat>& coeffs() const { return coeffs_; }
  TrigPoly entry(Index i, Index j) const;
  Mat operator()(cplx z) const;

  /// Pointwise adjoint on the circle: sum_k C_k^* z^{-k}.
  MatrixSymbol adjoint() const;

  MatrixSymbol& operator+=(const MatrixSymbol& g);
  MatrixSymbol& operator*=(cplx s);

 private:
  void trim();

  Index rows_ = 1;
  Index cols_ = 1;
  int lo_ = 0;
  std::vector<Mat> coeffs_;
};

MatrixSymbol operator+(MatrixSymbol a, const MatrixSymbol& b);
MatrixSymbol operator-(MatrixSymbol a, const MatrixSymbol& b);
MatrixSymbol operator*(cplx s, MatrixSymbol a);
/// Left multiplication by a constant matrix.
MatrixSymbol operator*(const Mat& c, const MatrixSymbol& a);
MatrixSymbol operator*(const MatrixSymbol& a, const Mat& c);

/// Exact Cauchy product (M f)(z) = M(z) f(z).
TrigPoly mul(const MatrixSymbol& m, const TrigPoly& f);
MatrixSymbol mul(const MatrixSymbol& a, const MatrixSymbol& b);
/// Constant matrix times polynomial.
TrigPoly mul(const Mat& c, const TrigPoly& f);

/// Coordinates of analytic-window polynomials: f with dimension n and support
/// in [lo, hi] maps to the vector with entry (k - lo) * n + i = c_k[i].
struct PolyWindow {
  Index n = 1;
  int lo = 0;
  int hi = 0;

  Index size() const { return n * (hi - lo + 1); }
  /// Throws InputError if f has support outside the window.
  Vec coords(const TrigPoly& f) const;
  TrigPoly poly(const Vec& v) const;
  /// Value at z = 0 of the polynomial with coordinates v (requires lo == 0).
  Vec at_zero(const Vec& v) const;
  bool contains(const TrigPoly& f, double tol = 0.0) const;
};

}  // namespace mttokit
