#include "mttokit/fourier.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

namespace mttokit {

namespace {

int positive_mod(int k, int m) {
  const int r = k % m;
  return r < 0 ? r + m : r;
}

void check_dims(Index a, Index b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

}  // namespace

ExponentPair ExponentPair::from_p(double p) {
  if (!(p > 2.0)) {
    throw InputError("ExponentPair: p must lie in (2, inf], got " + std::to_string(p));
  }
  ExponentPair e;
  e.p_ = p;
  e.q_ = std::isinf(p) ? 2.0 : 2.0 * p / (p + 2.0);
  return e;
}

// ---------------------------------------------------------------------------
// TrigPoly

TrigPoly::TrigPoly(Index dim) : dim_(dim), lo_(0), coeffs_{Vec::Zero(dim)} {
  if (dim <= 0) throw InputError("TrigPoly: dimension must be positive");
}

TrigPoly::TrigPoly(int lo, std::vector<Vec> coeffs) : lo_(lo), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InputError("TrigPoly: empty coefficient list");
  dim_ = coeffs_.front().size();
  if (dim_ <= 0) throw InputError("TrigPoly: dimension must be positive");
  for (const auto& c : coeffs_) check_dims(c.size(), dim_, "TrigPoly");
  trim();
}

TrigPoly TrigPoly::monomial(const Vec& c, int k) { return TrigPoly(k, {c}); }

TrigPoly TrigPoly::scalar(int lo, const std::vector<cplx>& coeffs) {
  std::vector<Vec> cs;
  cs.reserve(coeffs.size());
  for (cplx c : coeffs) {
    Vec v(1);
    v(0) = c;
    cs.push_back(std::move(v));
  }
  return TrigPoly(lo, std::move(cs));
}

TrigPoly TrigPoly::unit(Index dim, Index component, int k) {
  Vec c = Vec::Zero(dim);
  c(component) = 1.0;
  return monomial(c, k);
}

void TrigPoly::trim() {
  auto nonzero = [](const Vec& v) { return !v.isZero(0.0); };
  const auto first = std::find_if(coeffs_.begin(), coeffs_.end(), nonzero);
  if (first == coeffs_.end()) {
    lo_ = 0;
    coeffs_.assign(1, Vec::Zero(dim_));
    return;
  }
  const auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), nonzero).base();
  lo_ += static_cast<int>(first - coeffs_.begin());
  coeffs_.erase(last, coeffs_.end());
  coeffs_.erase(coeffs_.begin(), first);
}

bool TrigPoly::is_zero() const { return coeffs_.size() == 1 && coeffs_.front().isZero(0.0); }

Vec TrigPoly::coeff(int k) const {
  if (k < lo_ || k > hi()) return Vec::Zero(dim_);
  return coeffs_[static_cast<std::size_t>(k - lo_)];
}

Vec TrigPoly::operator()(cplx z) const {
  // Horner from the top, then rescale by z^lo.
  Vec acc = Vec::Zero(dim_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, lo_);
}

TrigPoly TrigPoly::component(Index i) const {
  std::vector<Vec> cs;
  cs.reserve(coeffs_.size());
  for (const auto& c : coeffs_) cs.push_back(c.segment(i, 1));
  return TrigPoly(lo_, std::move(cs));
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& g) {
  check_dims(dim_, g.dim_, "add");
  if (g.is_zero()) return *this;
  if (is_zero()) return *this = g;
  const int lo = std::min(lo_, g.lo_);
  const int hi = std::max(this->hi(), g.hi());
  std::vector<Vec> cs(static_cast<std::size_t>(hi - lo + 1), Vec::Zero(dim_));
  for (int k = lo_; k <= this->hi(); ++k) cs[static_cast<std::size_t>(k - lo)] += coeffs_[k - lo_];
  for (int k = g.lo_; k <= g.hi(); ++k) cs[static_cast<std::size_t>(k - lo)] += g.coeffs_[k - g.lo_];
  lo_ = lo;
  coeffs_ = std::move(cs);
  trim();
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& g) { return *this += scale(g, -1.0); }

TrigPoly& TrigPoly::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

TrigPoly add(const TrigPoly& f, const TrigPoly& g) {
  TrigPoly r = f;
  r += g;
  return r;
}

TrigPoly scale(const TrigPoly& f, cplx s) {
  TrigPoly r = f;
  r *= s;
  return r;
}

TrigPoly operator+(TrigPoly f, const TrigPoly& g) { return f += g; }
TrigPoly operator-(TrigPoly f, const TrigPoly& g) { return f -= g; }
TrigPoly operator*(cplx s, TrigPoly f) { return f *= s; }

TrigPoly shift(const TrigPoly& f, int s) {
  if (f.is_zero()) return f;
  return TrigPoly(f.lo() + s, f.coeffs());
}

TrigPoly stack(const std::vector<TrigPoly>& parts) {
  if (parts.empty()) throw InputError("stack: no parts");
  Index dim = 0;
  int lo = parts.front().lo();
  int hi = parts.front().hi();
  for (const auto& p : parts) {
    dim += p.dim();
    lo = std::min(lo, p.lo());
    hi = std::max(hi, p.hi());
  }
  std::vector<Vec> cs(static_cast<std::size_t>(hi - lo + 1), Vec::Zero(dim));
  Index offset = 0;
  for (const auto& p : parts) {
    for (int k = p.lo(); k <= p.hi(); ++k) cs[static_cast<std::size_t>(k - lo)].segment(offset, p.dim()) = p.coeff(k);
    offset += p.dim();
  }
  return TrigPoly(lo, std::move(cs));
}

std::vector<TrigPoly> split(const TrigPoly& f, const std::vector<Index>& dims) {
  Index total = 0;
  for (Index d : dims) total += d;
  check_dims(total, f.dim(), "split");
  std::vector<TrigPoly> out;
  Index offset = 0;
  for (Index d : dims) {
    std::vector<Vec> cs;
    cs.reserve(f.coeffs().size());
    for (const auto& c : f.coeffs()) cs.push_back(c.segment(offset, d));
    out.emplace_back(f.lo(), std::move(cs));
    offset += d;
  }
  return out;
}

TrigPoly riesz_plus(const TrigPoly& f) {
  if (f.lo() >= 0) return f;
  if (f.hi() < 0) return TrigPoly(f.dim());
  std::vector<Vec> cs(f.coeffs().begin() + (-f.lo()), f.coeffs().end());
  return TrigPoly(0, std::move(cs));
}

TrigPoly riesz_minus0(const TrigPoly& f) {
  if (f.hi() < 0) return f;
  if (f.lo() >= 0) return TrigPoly(f.dim());
  std::vector<Vec> cs(f.coeffs().begin(), f.coeffs().begin() + (-f.lo()));
  return TrigPoly(f.lo(), std::move(cs));
}

double negative_mass(const TrigPoly& f) { return l2_norm(riesz_minus0(f)); }

Truncation truncate(const TrigPoly& f, int lo, int hi) {
  if (lo > hi) throw InputError("truncate: empty window");
  std::vector<Vec> cs;
  double dropped = 0.0;
  for (int k = f.lo(); k <= f.hi(); ++k) {
    if (k < lo || k > hi) dropped += f.coeff(k).squaredNorm();
  }
  for (int k = lo; k <= hi; ++k) cs.push_back(f.coeff(k));
  return {TrigPoly(lo, std::move(cs)), std::sqrt(dropped)};
}

cplx inner_product(const TrigPoly& f, const TrigPoly& g) {
  check_dims(f.dim(), g.dim(), "inner_product");
  const int lo = std::max(f.lo(), g.lo());
  const int hi = std::min(f.hi(), g.hi());
  cplx acc = 0.0;
  for (int k = lo; k <= hi; ++k) {
    acc += g.coeffs()[static_cast<std::size_t>(k - g.lo())].dot(f.coeffs()[static_cast<std::size_t>(k - f.lo())]);
  }
  return acc;
}

double l2_norm(const TrigPoly& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += c.squaredNorm();
  return std::sqrt(s);
}

std::vector<Vec> evaluate_on_grid(const TrigPoly& f, int M) {
  if (M < 1) throw InputError("evaluate_on_grid: grid size must be positive");
  Eigen::FFT<double> fft;
  std::vector<Vec> values(static_cast<std::size_t>(M), Vec::Zero(f.dim()));
  std::vector<cplx> folded(static_cast<std::size_t>(M));
  std::vector<cplx> out;
  for (Index i = 0; i < f.dim(); ++i) {
    std::fill(folded.begin(), folded.end(), cplx(0.0));
    for (int k = f.lo(); k <= f.hi(); ++k) folded[static_cast<std::size_t>(positive_mod(k, M))] += f.coeff(k)(i);
    fft.inv(out, folded);
    for (int j = 0; j < M; ++j) values[static_cast<std::size_t>(j)](i) = out[static_cast<std::size_t>(j)] * double(M);
  }
  return values;
}

TrigPoly from_grid_values(const std::vector<Vec>& values, int lo, int hi) {
  const int M = static_cast<int>(values.size());
  if (M == 0) throw InputError("from_grid_values: no samples");
  if (hi < lo) throw InputError("from_grid_values: empty window");
  if (M < hi - lo + 1) throw InputError("from_grid_values: grid smaller than window");
  const Index dim = values.front().size();
  Eigen::FFT<double> fft;
  std::vector<Vec> cs(static_cast<std::size_t>(hi - lo + 1), Vec::Zero(dim));
  std::vector<cplx> in(static_cast<std::size_t>(M));
  std::vector<cplx> out;
  for (Index i = 0; i < dim; ++i) {
    for (int j = 0; j < M; ++j) in[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>(j)](i);
    fft.fwd(out, in);
    for (int k = lo; k <= hi; ++k) cs[static_cast<std::size_t>(k - lo)](i) = out[static_cast<std::size_t>(positive_mod(k, M))] / double(M);
  }
  return TrigPoly(lo, std::move(cs));
}

int default_grid_size(int width) {
  int m = 1;
  while (m < 4 * (width + 1)) m <<= 1;
  return m;
}

double lp_norm_grid(const TrigPoly& f, double p, int M) {
  if (!(p >= 1.0)) throw InputError("lp_norm_grid: p must be >= 1");
  if (M < 2 * f.width() + 1) {
    throw InputError("lp_norm_grid: grid size " + std::to_string(M) + " too small for window width " +
                     std::to_string(f.width()));
  }
  const auto values = evaluate_on_grid(f, M);
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, v.norm());
    return m;
  }
  double s = 0.0;
  for (const auto& v : values) s += std::pow(v.norm(), p);
  return std::pow(s / M, 1.0 / p);
}

double lp_norm_grid(const TrigPoly& f, double p) { return lp_norm_grid(f, p, default_grid_size(f.width())); }

// ---------------------------------------------------------------------------
// MatrixSymbol

MatrixSymbol::MatrixSymbol(Index rows, Index cols) : rows_(rows), cols_(cols), lo_(0), coeffs_{Mat::Zero(rows, cols)} {
  if (rows <= 0 || cols <= 0) throw InputError("MatrixSymbol: sizes must be positive");
}

MatrixSymbol::MatrixSymbol(int lo, std::vector<Mat> coeffs) : lo_(lo), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InputError("MatrixSymbol: empty coefficient list");
  rows_ = coeffs_.front().rows();
  cols_ = coeffs_.front().cols();
  if (rows_ <= 0 || cols_ <= 0) throw InputError("MatrixSymbol: sizes must be positive");
  for (const auto& c : coeffs_) {
    if (c.rows() != rows_ || c.cols() != cols_) throw InputError("MatrixSymbol: inconsistent coefficient sizes");
  }
  trim();
}

MatrixSymbol MatrixSymbol::constant(const Mat& c) { return MatrixSymbol(0, {c}); }
MatrixSymbol MatrixSymbol::identity(Index n) { return constant(Mat::Identity(n, n)); }
MatrixSymbol MatrixSymbol::monomial(const Mat& c, int k) { return MatrixSymbol(k, {c}); }

MatrixSymbol MatrixSymbol::from_entries(Index rows, Index cols, const std::vector<TrigPoly>& entries) {
  if (static_cast<Index>(entries.size()) != rows * cols) throw InputError("MatrixSymbol: wrong number of entries");
  int lo = entries.front().lo();
  int hi = entries.front().hi();
  for (const auto& e : entries) {
    if (e.dim() != 1) throw InputError("MatrixSymbol: entries must be scalar polynomials");
    lo = std::min(lo, e.lo());
    hi = std::max(hi, e.hi());
  }
  std::vector<Mat> cs(static_cast<std::size_t>(hi - lo + 1), Mat::Zero(rows, cols));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const auto& e = entries[static_cast<std::size_t>(i * cols + j)];
      for (int k = e.lo(); k <= e.hi(); ++k) cs[static_cast<std::size_t>(k - lo)](i, j) = e.coeff(k)(0);
    }
  }
  return MatrixSymbol(lo, std::move(cs));
}

void MatrixSymbol::trim() {
  auto nonzero = [](const Mat& m) { return !m.isZero(0.0); };
  const auto first = std::find_if(coeffs_.begin(), coeffs_.end(), nonzero);
  if (first == coeffs_.end()) {
    lo_ = 0;
    coeffs_.assign(1, Mat::Zero(rows_, cols_));
    return;
  }
  const auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), nonzero).base();
  lo_ += static_cast<int>(first - coeffs_.begin());
  coeffs_.erase(last, coeffs_.end());
  coeffs_.erase(coeffs_.begin(), first);
}

bool MatrixSymbol::is_zero() const { return coeffs_.size() == 1 && coeffs_.front().isZero(0.0); }

Mat MatrixSymbol::coeff(int k) const {
  if (k < lo_ || k > hi()) return Mat::Zero(rows_, cols_);
  return coeffs_[static_cast<std::size_t>(k - lo_)];
}

TrigPoly MatrixSymbol::entry(Index i, Index j) const {
  std::vector<cplx> cs;
  cs.reserve(coeffs_.size());
  for (const auto& c : coeffs_) cs.push_back(c(i, j));
  return TrigPoly::scalar(lo_, cs);
}

Mat MatrixSymbol::operator()(cplx z) const {
  Mat acc = Mat::Zero(rows_, cols_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, lo_);
}

MatrixSymbol MatrixSymbol::adjoint() const {
  std::vector<Mat> cs;
  cs.reserve(coeffs_.size());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) cs.push_back(it->adjoint());
  return MatrixSymbol(-hi(), std::move(cs));
}

MatrixSymbol& MatrixSymbol::operator+=(const MatrixSymbol& g) {
  if (rows_ != g.rows_ || cols_ != g.cols_) throw InputError("MatrixSymbol add: size mismatch");
  const int lo = std::min(lo_, g.lo_);
  const int hi = std::max(this->hi(), g.hi());
  std::vector<Mat> cs(static_cast<std::size_t>(hi - lo + 1), Mat::Zero(rows_, cols_));
  for (int k = lo_; k <= this->hi(); ++k) cs[static_cast<std::size_t>(k - lo)] += coeffs_[k - lo_];
  for (int k = g.lo_; k <= g.hi(); ++k) cs[static_cast<std::size_t>(k - lo)] += g.coeffs_[k - g.lo_];
  lo_ = lo;
  coeffs_ = std::move(cs);
  trim();
  return *this;
}

MatrixSymbol& MatrixSymbol::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

MatrixSymbol operator+(MatrixSymbol a, const MatrixSymbol& b) { return a += b; }
MatrixSymbol operator-(MatrixSymbol a, const MatrixSymbol& b) { return a += (-1.0) * b; }
MatrixSymbol operator*(cplx s, MatrixSymbol a) { return a *= s; }

MatrixSymbol operator*(const Mat& c, const MatrixSymbol& a) {
  check_dims(c.cols(), a.rows(), "constant * symbol");
  std::vector<Mat> cs;
  cs.reserve(a.coeffs().size());
  for (const auto& m : a.coeffs()) cs.push_back(c * m);
  return MatrixSymbol(a.lo(), std::move(cs));
}

MatrixSymbol operator*(const MatrixSymbol& a, const Mat& c) {
  check_dims(a.cols(), c.rows(), "symbol * constant");
  std::vector<Mat> cs;
  cs.reserve(a.coeffs().size());
  for (const auto& m : a.coeffs()) cs.push_back(m * c);
  return MatrixSymbol(a.lo(), std::move(cs));
}

TrigPoly mul(const MatrixSymbol& m, const TrigPoly& f) {
  check_dims(m.cols(), f.dim(), "mul");
  const int lo = m.lo() + f.lo();
  const int width = static_cast<int>(m.coeffs().size() + f.coeffs().size()) - 1;
  std::vector<Vec> cs(static_cast<std::size_t>(width), Vec::Zero(m.rows()));
  for (std::size_t a = 0; a < m.coeffs().size(); ++a) {
    const Mat& ma = m.coeffs()[a];
    if (ma.isZero(0.0)) continue;
    for (std::size_t b = 0; b < f.coeffs().size(); ++b) cs[a + b].noalias() += ma * f.coeffs()[b];
  }
  return TrigPoly(lo, std::move(cs));
}

MatrixSymbol mul(const MatrixSymbol& a, const MatrixSymbol& b) {
  check_dims(a.cols(), b.rows(), "symbol product");
  const int lo = a.lo() + b.lo();
  const std::size_t width = a.coeffs().size() + b.coeffs().size() - 1;
  std::vector<Mat> cs(width, Mat::Zero(a.rows(), b.cols()));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) cs[i + j].noalias() += a.coeffs()[i] * b.coeffs()[j];
  }
  return MatrixSymbol(lo, std::move(cs));
}

TrigPoly mul(const Mat& c, const TrigPoly& f) {
  check_dims(c.cols(), f.dim(), "mul");
  std::vector<Vec> cs;
  cs.reserve(f.coeffs().size());
  for (const auto& v : f.coeffs()) cs.push_back(c * v);
  return TrigPoly(f.lo(), std::move(cs));
}

// ---------------------------------------------------------------------------
// PolyWindow

Vec PolyWindow::coords(const TrigPoly& f) const {
  check_dims(f.dim(), n, "PolyWindow");
  if (!f.is_zero() && (f.lo() < lo || f.hi() > hi)) {
    throw InputError("PolyWindow: polynomial support [" + std::to_string(f.lo()) + ", " + std::to_string(f.hi()) +
                     "] outside window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  Vec v = Vec::Zero(size());
  if (f.is_zero()) return v;
  for (int k = f.lo(); k <= f.hi(); ++k) v.segment((k - lo) * n, n) = f.coeff(k);
  return v;
}

TrigPoly PolyWindow::poly(const Vec& v) const {
  check_dims(v.size(), size(), "PolyWindow");
  std::vector<Vec> cs;
  cs.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) cs.push_back(v.segment((k - lo) * n, n));
  return TrigPoly(lo, std::move(cs));
}

Vec PolyWindow::at_zero(const Vec& v) const {
  if (lo > 0 || hi < 0) return Vec::Zero(n);
  return v.segment((0 - lo) * n, n);
}

bool PolyWindow::contains(const TrigPoly& f, double tol) const {
  if (f.dim() != n) return false;
  double outside = 0.0;
  for (int k = f.lo(); k <= f.hi(); ++k) {
    if (k < lo || k > hi) outside += f.coeff(k).squaredNorm();
  }
  return std::sqrt(outside) <= tol;
}

}  // namespace mttokit
