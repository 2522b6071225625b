#include "mttokit/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mttokit {

namespace {

constexpr int kMaxAutoDegree = 1 << 22;

// Nonnegative majorant series of a Blaschke-type product, tracked to degree N
// together with a bound on the l1 mass beyond N.
struct Majorant {
  std::vector<double> c;
  double tail = 0.0;

  explicit Majorant(int N) : c(static_cast<std::size_t>(N) + 1, 0.0) { c[0] = 1.0; }

  int N() const { return static_cast<int>(c.size()) - 1; }

  // Multiply by the majorant of (z - a)/(1 - conj(a) z): rho + (1 - rho^2) z / (1 - rho z).
  void mul_factor(double rho) {
    const int n = N();
    double horner = 0.0;  // sum_i c_i rho^{N-i}
    for (int i = 0; i <= n; ++i) horner = horner * rho + c[static_cast<std::size_t>(i)];
    tail = horner * (1.0 + rho) + tail * (1.0 + 2.0 * rho);
    std::vector<double> next(c.size(), 0.0);
    double w = 0.0;
    for (int m = 0; m <= n; ++m) {
      if (m > 0) w = c[static_cast<std::size_t>(m - 1)] + rho * w;
      next[static_cast<std::size_t>(m)] = rho * c[static_cast<std::size_t>(m)] + (1.0 - rho * rho) * w;
    }
    c = std::move(next);
  }

  // Multiply by the majorant of sqrt(1 - rho^2) / (1 - rho z).
  void mul_kernel(double rho) {
    const int n = N();
    const double s = std::sqrt(1.0 - rho * rho);
    double horner = 0.0;  // sum_i c_i rho^{N-i}
    for (int i = 0; i <= n; ++i) horner = horner * rho + c[static_cast<std::size_t>(i)];
    const double sum_all = s / (1.0 - rho);
    tail = s * rho * horner / (1.0 - rho) + tail * sum_all;
    std::vector<double> next(c.size(), 0.0);
    double w = 0.0;
    for (int m = 0; m <= n; ++m) {
      w = c[static_cast<std::size_t>(m)] + rho * w;
      next[static_cast<std::size_t>(m)] = s * w;
    }
    c = std::move(next);
  }
};

// Multiply a truncated series in place by (z - a)/(1 - conj(a) z).
void mul_blaschke_factor(std::vector<cplx>& s, cplx a) {
  const std::size_t n = s.size();
  std::vector<cplx> t(n);
  for (std::size_t m = 0; m < n; ++m) t[m] = (m > 0 ? s[m - 1] : cplx(0.0)) - a * s[m];
  const cplx ab = std::conj(a);
  cplx prev = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    prev = t[m] + ab * prev;
    s[m] = prev;
  }
}

void check_unitary(const Mat& u, Index n, const char* what) {
  if (u.rows() != n || u.cols() != n) throw InputError(std::string(what) + ": expected " + std::to_string(n) + "x" + std::to_string(n));
  if ((u * u.adjoint() - Mat::Identity(n, n)).norm() > 1e-12) throw InputError(std::string(what) + ": not unitary");
}

}  // namespace

// ---------------------------------------------------------------------------
// ScalarInner

ScalarInner ScalarInner::monomial(int k) {
  if (k < 0) throw InputError("ScalarInner: monomial power must be nonnegative");
  ScalarInner s;
  s.kind_ = Kind::monomial;
  s.power_ = k;
  return s;
}

ScalarInner ScalarInner::blaschke(std::vector<cplx> zeros, cplx rotation) {
  for (cplx a : zeros) {
    if (!(std::abs(a) < 1.0)) throw InputError("ScalarInner: Blaschke zeros must lie in the open disc");
  }
  if (std::abs(std::abs(rotation) - 1.0) > 1e-12) throw InputError("ScalarInner: rotation must be unimodular");
  ScalarInner s;
  s.kind_ = Kind::blaschke;
  s.zeros_ = std::move(zeros);
  s.rotation_ = rotation;
  return s;
}

int ScalarInner::degree() const { return kind_ == Kind::monomial ? power_ : static_cast<int>(zeros_.size()); }

double ScalarInner::max_modulus() const {
  double r = 0.0;
  for (cplx a : zeros_) r = std::max(r, std::abs(a));
  return r;
}

cplx ScalarInner::operator()(cplx z) const {
  if (kind_ == Kind::monomial) return std::pow(z, power_);
  cplx v = rotation_;
  for (cplx a : zeros_) v *= (z - a) / (1.0 - std::conj(a) * z);
  return v;
}

std::vector<cplx> ScalarInner::taylor(int N) const {
  if (N < 0) throw InputError("taylor: negative degree");
  std::vector<cplx> s(static_cast<std::size_t>(N) + 1, cplx(0.0));
  if (kind_ == Kind::monomial) {
    if (power_ <= N) s[static_cast<std::size_t>(power_)] = 1.0;
    return s;
  }
  s[0] = rotation_;
  for (cplx a : zeros_) mul_blaschke_factor(s, a);
  return s;
}

double ScalarInner::tail_bound(int N) const {
  if (kind_ == Kind::monomial) return power_ <= N ? 0.0 : 1.0;
  Majorant m(N);
  for (cplx a : zeros_) m.mul_factor(std::abs(a));
  return m.tail;
}

int ScalarInner::minimal_degree(double tol) const {
  if (kind_ == Kind::monomial) return power_;
  if (tail_bound(0) <= tol) return 0;
  int hi = 8;
  while (tail_bound(hi) > tol) {
    if (hi >= kMaxAutoDegree) throw NumericalError("Blaschke truncation degree exceeds limit; zeros too close to the circle");
    hi *= 2;
  }
  int lo = hi / 2;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (tail_bound(mid) <= tol ? hi : lo) = mid;
  }
  return hi;
}

std::vector<TrigPoly> ScalarInner::orthonormal_system(int N) const {
  std::vector<TrigPoly> out;
  if (kind_ == Kind::monomial) {
    for (int j = 0; j < power_; ++j) out.push_back(TrigPoly::unit(1, 0, j));
    return out;
  }
  for (std::size_t j = 0; j < zeros_.size(); ++j) {
    const cplx a = zeros_[j];
    std::vector<cplx> s(static_cast<std::size_t>(N) + 1, cplx(0.0));
    // sqrt(1 - |a|^2) / (1 - conj(a) z)
    const double norm = std::sqrt(1.0 - std::norm(a));
    cplx p = norm;
    for (auto& c : s) {
      c = p;
      p *= std::conj(a);
    }
    for (std::size_t l = 0; l < j; ++l) mul_blaschke_factor(s, zeros_[l]);
    out.push_back(TrigPoly::scalar(0, s));
  }
  return out;
}

double ScalarInner::system_tail_bound(int N) const {
  if (kind_ == Kind::monomial) return power_ <= N + 1 ? 0.0 : 1.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < zeros_.size(); ++j) {
    Majorant m(N);
    m.mul_kernel(std::abs(zeros_[j]));
    for (std::size_t l = 0; l < j; ++l) m.mul_factor(std::abs(zeros_[l]));
    worst = std::max(worst, m.tail);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// MatrixInner

MatrixInner::MatrixInner(std::vector<ScalarInner> diag)
    : MatrixInner(Mat::Identity(static_cast<Index>(diag.size()), static_cast<Index>(diag.size())), diag,
                  Mat::Identity(static_cast<Index>(diag.size()), static_cast<Index>(diag.size()))) {}

MatrixInner::MatrixInner(Mat left, std::vector<ScalarInner> diag, Mat right)
    : left_(std::move(left)), diag_(std::move(diag)), right_(std::move(right)) {
  validate();
}

MatrixInner MatrixInner::diagonal_monomials(const std::vector<int>& powers) {
  std::vector<ScalarInner> d;
  d.reserve(powers.size());
  for (int k : powers) d.push_back(ScalarInner::monomial(k));
  return MatrixInner(std::move(d));
}

void MatrixInner::validate() const {
  if (diag_.empty()) throw InputError("MatrixInner: empty diagonal");
  check_unitary(left_, n(), "MatrixInner left factor");
  check_unitary(right_, n(), "MatrixInner right factor");
}

bool MatrixInner::is_monomial() const {
  return std::all_of(diag_.begin(), diag_.end(), [](const ScalarInner& s) { return s.kind() == ScalarInner::Kind::monomial; });
}

int MatrixInner::model_dim() const {
  int d = 0;
  for (const auto& s : diag_) d += s.degree();
  return d;
}

int MatrixInner::monomial_degree() const {
  int d = 0;
  for (const auto& s : diag_) d = std::max(d, s.kind() == ScalarInner::Kind::monomial ? s.power() : 0);
  return d;
}

int MatrixInner::auto_degree(double tail) const {
  int N = 0;
  for (const auto& s : diag_) N = std::max(N, s.minimal_degree(tail));
  return N;
}

double MatrixInner::tail_bound(int N) const {
  double t = 0.0;
  for (const auto& s : diag_) t = std::max(t, s.tail_bound(N));
  return t;
}

bool MatrixInner::is_pure() const {
  const Mat t0 = (*this)(0.0);
  Eigen::JacobiSVD<Mat> svd(t0);
  return svd.singularValues()(0) < 1.0 - 1e-14;
}

Mat MatrixInner::operator()(cplx z) const {
  Vec d(n());
  for (Index i = 0; i < n(); ++i) d(i) = diag_[static_cast<std::size_t>(i)](z);
  return left_ * d.asDiagonal() * right_;
}

InnerSymbol theta_to_symbol(const MatrixInner& theta, int N) {
  if (N < 0) throw InputError("theta_to_symbol: N must be nonnegative");
  const double tail = theta.tail_bound(N);
  if (tail > kMaxTail) {
    throw InputError("theta_to_symbol: truncation degree " + std::to_string(N) + " leaves tail " + std::to_string(tail) +
                     "; minimal admissible N is " + std::to_string(theta.auto_degree(kMaxTail)));
  }
  const Index n = theta.n();
  std::vector<std::vector<cplx>> series;
  for (const auto& s : theta.diag()) series.push_back(s.taylor(N));
  std::vector<Mat> cs;
  cs.reserve(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) {
    Vec d(n);
    for (Index i = 0; i < n; ++i) d(i) = series[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    cs.push_back(theta.left() * d.asDiagonal() * theta.right());
  }
  return {MatrixSymbol(0, std::move(cs)), N, tail};
}

ModelSpaceBasis model_basis(const MatrixInner& theta, int N) {
  ModelSpaceBasis b;
  b.N = N;
  const Index n = theta.n();
  for (Index i = 0; i < n; ++i) {
    const auto& s = theta.diag()[static_cast<std::size_t>(i)];
    b.tail_bound = std::max(b.tail_bound, s.system_tail_bound(N));
    for (const auto& phi : s.orthonormal_system(N)) {
      std::vector<TrigPoly> parts;
      for (Index r = 0; r < n; ++r) parts.push_back(r == i ? phi : TrigPoly(1));
      b.vectors.push_back(mul(theta.left(), stack(parts)));
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// ModelSpace

ModelSpace::ModelSpace(MatrixInner theta, std::optional<int> N)
    : theta_(std::move(theta)),
      symbol_(theta_to_symbol(theta_, N.value_or(theta_.auto_degree()))),
      adjoint_(symbol_.symbol.adjoint()),
      basis_(model_basis(theta_, symbol_.N)) {}

PolyWindow ModelSpace::window() const {
  int hi = 0;
  for (const auto& v : basis_.vectors) hi = std::max(hi, v.hi());
  return {n(), 0, hi};
}

TrigPoly ModelSpace::project(const TrigPoly& f) const {
  return riesz_plus(mul(symbol(), riesz_minus0(mul(adjoint_, f))));
}

TrigPoly ModelSpace::project_theta_h2(const TrigPoly& f) const {
  return mul(symbol(), riesz_plus(mul(adjoint_, f)));
}

TrigPoly ModelSpace::apply_theta(const TrigPoly& f) const { return mul(symbol(), f); }
TrigPoly ModelSpace::apply_theta_adjoint(const TrigPoly& f) const { return mul(adjoint_, f); }

Vec ModelSpace::basis_coords(const TrigPoly& f) const {
  Vec c(dim());
  for (Index i = 0; i < dim(); ++i) c(i) = inner_product(f, basis_.vectors[static_cast<std::size_t>(i)]);
  return c;
}

TrigPoly ModelSpace::from_basis_coords(const Vec& c) const {
  if (c.size() != dim()) throw InputError("from_basis_coords: wrong coordinate count");
  TrigPoly f(n());
  for (Index i = 0; i < dim(); ++i) f += c(i) * basis_.vectors[static_cast<std::size_t>(i)];
  return f;
}

TrigPoly project_model(const MatrixInner& theta, const TrigPoly& f) { return ModelSpace(theta).project(f); }
TrigPoly project_theta_h2(const MatrixInner& theta, const TrigPoly& f) { return ModelSpace(theta).project_theta_h2(f); }

TrigPoly reproducing_kernel(const ScalarInner& theta, cplx zeta, int N) {
  if (std::abs(zeta) > 1.0 + 1e-14) throw InputError("reproducing_kernel: |zeta| > 1");
  if (N < 0) throw InputError("reproducing_kernel: negative degree");
  const cplx zb = std::conj(zeta);
  if (theta.kind() == ScalarInner::Kind::monomial) {
    std::vector<cplx> c(static_cast<std::size_t>(std::max(theta.power(), 1)), cplx(0.0));
    cplx p = 1.0;
    for (int j = 0; j < theta.power(); ++j) {
      c[static_cast<std::size_t>(j)] = p;
      p *= zb;
    }
    return TrigPoly::scalar(0, c);
  }
  const cplx w = std::conj(theta(zeta));
  const auto t = theta.taylor(N);
  std::vector<cplx> c(t.size());
  cplx prev = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const cplx numer = (k == 0 ? cplx(1.0) : cplx(0.0)) - w * t[k];
    prev = zb * prev + numer;
    c[k] = prev;
  }
  return TrigPoly::scalar(0, c);
}

// ---------------------------------------------------------------------------
// Zero-series diagnostics

PolarZero PolarZero::from_complex(cplx a) { return {1.0 - std::abs(a), std::arg(a)}; }
cplx PolarZero::value() const { return std::polar(1.0 - gap, angle); }

ZeroSequence critical_zero_sequence() {
  return [](std::size_t k) {
    const double kd = static_cast<double>(k);
    return PolarZero{1.0 / (kd * kd), std::log(kd) / std::sqrt(kd)};
  };
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::converging: return "converging";
    case SeriesVerdict::diverging_trend: return "diverging-trend";
    case SeriesVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double series_term(const PolarZero& a, double zeta_angle, double p) {
  if (!(a.gap > 0.0) || a.gap > 1.0) throw InputError("lp_membership_diagnostic: zero outside the open disc");
  const double r = 1.0 - a.gap;
  const double s = std::sin(0.5 * (a.angle - zeta_angle));
  const double dist2 = a.gap * a.gap + 4.0 * r * s * s;
  return a.gap * (2.0 - a.gap) / std::pow(dist2, 0.5 * p);
}

void check_boundary_point(cplx zeta, double p) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12) throw InputError("lp_membership_diagnostic: zeta must be unimodular");
  if (!(p >= 1.0)) throw InputError("lp_membership_diagnostic: p must be >= 1");
}

}  // namespace

LpDiagnostic lp_membership_diagnostic(const ZeroSequence& zeros, cplx zeta, double p, std::size_t K) {
  check_boundary_point(zeta, p);
  if (K < 10) throw InputError("lp_membership_diagnostic: K must be at least 10");
  const double psi = std::arg(zeta);
  LpDiagnostic d;
  for (int s = 3; s >= 0; --s) d.checkpoints.push_back(K >> s);

  std::vector<double> terms(K + 1, 0.0);
  double sum = 0.0;
  std::size_t next = 0;
  for (std::size_t k = 1; k <= K; ++k) {
    terms[k] = series_term(zeros(k), psi, p);
    sum += terms[k];
    if (next < d.checkpoints.size() && k == d.checkpoints[next]) {
      d.partial_sums.push_back(sum);
      ++next;
    }
  }
  for (std::size_t i = 1; i < d.partial_sums.size(); ++i) d.growth_ratios.push_back(d.partial_sums[i] / d.partial_sums[i - 1]);

  const std::size_t half = K / 2;
  d.monotone_tail = true;
  for (std::size_t k = half + 1; k <= K; ++k) {
    if (terms[k] > terms[k - 1]) {
      d.monotone_tail = false;
      break;
    }
  }
  const double tk = terms[K];
  d.decay_exponent = tk > 0.0 ? std::log(terms[half] / tk) / std::log(static_cast<double>(K) / static_cast<double>(half))
                              : std::numeric_limits<double>::infinity();
  if (tk == 0.0) {
    d.tail_estimate = 0.0;
  } else if (d.monotone_tail && d.decay_exponent > 1.0) {
    // sum_{k>K} t_k <= int_K^inf t_K (K/x)^alpha dx
    d.tail_estimate = tk * static_cast<double>(K) / (d.decay_exponent - 1.0);
  }

  const double sk = d.partial_sums.back();
  const bool growing = d.growth_ratios.size() == 3 &&
                       std::all_of(d.growth_ratios.begin(), d.growth_ratios.end(), [](double r) { return r > kDivergingRatio; });
  if (d.tail_estimate && *d.tail_estimate < kConvergingRelTail * sk) {
    d.verdict = SeriesVerdict::converging;
  } else if (growing) {
    d.verdict = SeriesVerdict::diverging_trend;
  }
  return d;
}

LpDiagnostic lp_membership_diagnostic(const std::vector<cplx>& zeros, cplx zeta, double p) {
  check_boundary_point(zeta, p);
  const double psi = std::arg(zeta);
  double sum = 0.0;
  for (cplx a : zeros) sum += series_term(PolarZero::from_complex(a), psi, p);
  LpDiagnostic d;
  d.checkpoints = {zeros.size()};
  d.partial_sums = {sum};
  d.tail_estimate = 0.0;
  d.monotone_tail = true;
  d.decay_exponent = std::numeric_limits<double>::infinity();
  d.verdict = SeriesVerdict::converging;
  return d;
}

}  // namespace mttokit
