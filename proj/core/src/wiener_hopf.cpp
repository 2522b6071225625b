#include "mttokit/wiener_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include "mttokit/parallel.hpp"

namespace mttokit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Index form_size(const IntervalKernel::Form& form) {
  return std::visit(Overloaded{[](const ExpIndicator& e) { return e.A.rows(); },
                               [](const PolynomialKernel& p) { return p.coeffs.empty() ? Index{0} : p.coeffs[0].rows(); },
                               [](const SampledKernel& s) { return s.values.empty() ? Index{0} : s.values[0].rows(); },
                               [](const FunctionKernel& f) { return f.n; }},
                    form);
}

/// Trapezoid contributions of component j to output (i, x) over [0, U], split at x.
cplx generic_integral(const IntervalKernel& G, const GridFunction& k, Index i, Index j, double x) {
  const double cj = k.lengths[static_cast<std::size_t>(j)];
  const double U = std::min(k.lengths[static_cast<std::size_t>(i)], cj);
  const double eps = 1e-13 * std::max(1.0, U);
  std::vector<double> t;
  for (int l = 0; l <= k.M; ++l) {
    const double tl = k.node(j, l);
    if (tl < U - eps) t.push_back(tl);
  }
  t.push_back(U);
  if (G.jumps_at_zero() && x > eps && x < U - eps) t.push_back(x);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end(), [eps](double p, double q) { return std::abs(p - q) <= eps; }), t.end());
  cplx sum = 0.0;
  for (std::size_t p = 0; p + 1 < t.size(); ++p) {
    const int side = t[p + 1] <= x + eps ? +1 : -1;
    const cplx f0 = G(x - t[p], side)(i, j) * k.at(j, t[p]);
    const cplx f1 = G(x - t[p + 1], side)(i, j) * k.at(j, t[p + 1]);
    sum += 0.5 * (t[p + 1] - t[p]) * (f0 + f1);
  }
  return sum;
}

}  // namespace

IntervalKernel::IntervalKernel(Form form, double a, double b, std::optional<Index> n_a)
    : form_(std::move(form)), a_(a), b_(b), n_(form_size(form_)), n_a_(n_a.value_or(n_)) {
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("interval lengths must be positive");
  if (n_ <= 0) throw InputError("kernel has no entries");
  if (n_a_ < 0 || n_a_ > n_) throw InputError("n_a must lie in [0, n]");
  std::visit(Overloaded{[&](const ExpIndicator& e) {
                          if (e.A.rows() != e.A.cols() || e.B.rows() != n_ || e.B.cols() != n_) {
                            throw InputError("exp-indicator kernel needs square A and B of equal size");
                          }
                        },
                        [&](const PolynomialKernel& p) {
                          for (const auto& c : p.coeffs) {
                            if (c.rows() != n_ || c.cols() != n_) throw InputError("polynomial kernel coefficients must be square");
                          }
                        },
                        [&](const SampledKernel& s) {
                          if (s.values.size() < 2 || !(s.ds > 0.0)) throw InputError("sampled kernel needs >= 2 values and ds > 0");
                          for (const auto& v : s.values) {
                            if (v.rows() != n_ || v.cols() != n_) throw InputError("sampled kernel values must be square");
                          }
                        },
                        [&](const FunctionKernel& f) {
                          if (!f.eval) throw InputError("function kernel without evaluator");
                        }},
             form_);
}

bool IntervalKernel::jumps_at_zero() const {
  return std::visit(Overloaded{[](const ExpIndicator&) { return true; }, [](const PolynomialKernel&) { return false; },
                               [](const SampledKernel&) { return false; },
                               [](const FunctionKernel& f) { return f.jump_at_zero; }},
                    form_);
}

Mat IntervalKernel::operator()(double s, int side) const {
  const double reach = std::max(a_, b_);
  if (!std::isfinite(s) || std::abs(s) > reach * (1.0 + 1e-12)) {
    throw InputError("kernel evaluated outside [-max(a,b), max(a,b)]");
  }
  return std::visit(
      Overloaded{[&](const ExpIndicator& e) -> Mat {
                   const bool pos = e.side == ExpIndicator::Side::positive;
                   const bool on = s > 0.0 ? pos : (s < 0.0 ? !pos : (pos ? side > 0 : side < 0));
                   if (!on) return Mat::Zero(n_, n_);
                   return matrix_exponential(e.A * s) * e.B;
                 },
                 [&](const PolynomialKernel& p) -> Mat {
                   Mat out = Mat::Zero(n_, n_);
                   for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) out = out * s + *it;
                   return out;
                 },
                 [&](const SampledKernel& sk) -> Mat {
                   const double pos = (s - sk.s0) / sk.ds;
                   const double last = static_cast<double>(sk.values.size() - 1);
                   if (pos < -1e-9 || pos > last + 1e-9) throw InputError("kernel evaluated outside its sample grid");
                   const double c = std::clamp(pos, 0.0, last);
                   const auto l = std::min(static_cast<std::size_t>(c), sk.values.size() - 2);
                   const double w = c - static_cast<double>(l);
                   return (1.0 - w) * sk.values[l] + w * sk.values[l + 1];
                 },
                 [&](const FunctionKernel& f) -> Mat { return f.eval(s, side); }},
      form_);
}

GridFunction GridFunction::sample(const RealVecFn& f, const std::vector<double>& lengths, int M) {
  GridFunction g;
  g.lengths = lengths;
  g.M = M;
  g.values.assign(lengths.size(), std::vector<cplx>(static_cast<std::size_t>(M) + 1));
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    for (int l = 0; l <= M; ++l) {
      const Vec v = f(g.node(static_cast<Index>(i), l));
      if (v.size() != static_cast<Index>(lengths.size())) throw InputError("input function has the wrong dimension");
      g.values[i][static_cast<std::size_t>(l)] = v(static_cast<Index>(i));
    }
  }
  return g;
}

cplx GridFunction::at(Index i, double t) const {
  const double c = lengths[static_cast<std::size_t>(i)];
  const double pos = std::clamp(t / c * M, 0.0, static_cast<double>(M));
  const int l = std::min(static_cast<int>(pos), M - 1);
  const double w = pos - l;
  const auto& v = values[static_cast<std::size_t>(i)];
  return (1.0 - w) * v[static_cast<std::size_t>(l)] + w * v[static_cast<std::size_t>(l) + 1];
}

GridFunction wh_apply(const IntervalKernel& G, const GridFunction& k) {
  const Index n = G.n();
  if (k.n() != n) throw InputError("wh_apply: input dimension does not match the kernel");
  if (k.M < 8) throw InputError("wh_apply: grid needs M >= 8");
  for (Index i = 0; i < n; ++i) {
    if (std::abs(k.lengths[static_cast<std::size_t>(i)] - G.length(i)) > 1e-12 * G.length(i)) {
      throw InputError("wh_apply: input grid lengths do not match the kernel intervals");
    }
  }
  const int M = k.M;
  GridFunction out;
  out.lengths = k.lengths;
  out.M = M;
  out.values.assign(static_cast<std::size_t>(n), std::vector<cplx>(static_cast<std::size_t>(M) + 1, 0.0));

  // Kernel tables by offset for components sharing a length: plus[d] = G(d dx, +), minus[d] = G(-d dx, -).
  std::vector<double> distinct;
  for (Index i = 0; i < n; ++i) {
    const double c = G.length(i);
    if (std::find(distinct.begin(), distinct.end(), c) == distinct.end()) distinct.push_back(c);
  }
  struct Table {
    std::vector<Mat> plus;
    std::vector<Mat> minus;
  };
  std::vector<Table> tables(distinct.size());
  for (std::size_t g = 0; g < distinct.size(); ++g) {
    const double dx = distinct[g] / M;
    tables[g].plus.resize(static_cast<std::size_t>(M) + 1);
    tables[g].minus.resize(static_cast<std::size_t>(M) + 1);
    parallel_for(static_cast<std::size_t>(M) + 1, [&](std::size_t d) {
      const double s = dx * static_cast<double>(d);
      tables[g].plus[d] = G(s, +1);
      tables[g].minus[d] = G(-s, -1);
    });
  }
  auto group = [&](double c) {
    return static_cast<std::size_t>(std::find(distinct.begin(), distinct.end(), c) - distinct.begin());
  };

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double ci = G.length(i);
      const double cj = G.length(j);
      auto& res = out.values[static_cast<std::size_t>(i)];
      if (ci == cj) {
        const auto& tab = tables[group(ci)];
        const double dx = ci / M;
        std::vector<cplx> plus(static_cast<std::size_t>(M) + 1);
        std::vector<cplx> minus(static_cast<std::size_t>(M) + 1);
        for (int d = 0; d <= M; ++d) {
          plus[static_cast<std::size_t>(d)] = tab.plus[static_cast<std::size_t>(d)](i, j);
          minus[static_cast<std::size_t>(d)] = tab.minus[static_cast<std::size_t>(d)](i, j);
        }
        const auto& kv = k.values[static_cast<std::size_t>(j)];
        parallel_for(static_cast<std::size_t>(M) + 1, [&](std::size_t lu) {
          const int l = static_cast<int>(lu);
          cplx sum = 0.0;
          for (int m = 0; m < l; ++m) {
            const double w = m == 0 ? 0.5 : 1.0;
            sum += w * plus[static_cast<std::size_t>(l - m)] * kv[static_cast<std::size_t>(m)];
          }
          for (int m = l + 1; m <= M; ++m) {
            const double w = m == M ? 0.5 : 1.0;
            sum += w * minus[static_cast<std::size_t>(m - l)] * kv[static_cast<std::size_t>(m)];
          }
          cplx diag = 0.0;
          if (l > 0) diag += 0.5 * plus[0];
          if (l < M) diag += 0.5 * minus[0];
          sum += diag * kv[lu];
          res[lu] += dx * sum;
        });
      } else {
        parallel_for(static_cast<std::size_t>(M) + 1, [&](std::size_t lu) {
          res[lu] += generic_integral(G, k, i, j, out.node(i, static_cast<int>(lu)));
        });
      }
    }
  }
  return out;
}

GridFunction wh_apply(const IntervalKernel& G, const RealVecFn& k, int M) {
  std::vector<double> lengths;
  for (Index i = 0; i < G.n(); ++i) lengths.push_back(G.length(i));
  return wh_apply(G, GridFunction::sample(k, lengths, M));
}

double relative_l2(const GridFunction& x, const GridFunction& ref) {
  if (x.n() != ref.n() || x.M != ref.M) throw InputError("relative_l2: grids differ");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ref.values.size(); ++i) {
    for (std::size_t l = 0; l < ref.values[i].size(); ++l) {
      num += std::norm(x.values[i][l] - ref.values[i][l]);
      den += std::norm(ref.values[i][l]);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

namespace {

GridFunction subsample(const GridFunction& f, int factor) {
  GridFunction g;
  g.lengths = f.lengths;
  g.M = f.M / factor;
  for (const auto& comp : f.values) {
    std::vector<cplx> v;
    for (int l = 0; l <= g.M; ++l) v.push_back(comp[static_cast<std::size_t>(l * factor)]);
    g.values.push_back(std::move(v));
  }
  return g;
}

}  // namespace

ConvergenceReport wh_self_convergence(const IntervalKernel& G, const RealVecFn& k, int M) {
  const auto w1 = wh_apply(G, k, M);
  const auto w2 = subsample(wh_apply(G, k, 2 * M), 2);
  const auto w4 = subsample(wh_apply(G, k, 4 * M), 4);
  GridFunction ref = w4;
  for (std::size_t i = 0; i < ref.values.size(); ++i) {
    for (std::size_t l = 0; l < ref.values[i].size(); ++l) ref.values[i][l] = (4.0 * w4.values[i][l] - w2.values[i][l]) / 3.0;
  }
  ConvergenceReport r;
  r.M = M;
  r.error_M = relative_l2(w1, ref);
  r.error_2M = relative_l2(w2, ref);
  r.ratio = r.error_2M > 0.0 ? r.error_M / r.error_2M : INFINITY;
  return r;
}

Mat matrix_exponential(const Mat& A) { return A.exp(); }

void StateSpaceSystem::validate() const {
  const Index n = A.rows();
  if (n == 0 || A.cols() != n) throw InputError("A must be square and nonempty");
  for (const Mat* m : {&B, &C, &D}) {
    if (m->rows() != n || m->cols() != n) throw InputError("B, C and D must be n x n");
  }
  if (v0.size() != n) throw InputError("v0 must have length n");
  if (!(horizon > 0.0)) throw InputError("horizon must be positive");
}

std::string to_string(Convention c) { return c == Convention::causal ? "causal" : "paper-literal"; }

Convention convention_from_string(const std::string& s) {
  if (s == "causal") return Convention::causal;
  if (s == "paper-literal") return Convention::paper_literal;
  throw InputError("unknown convention '" + s + "' (expected causal or paper-literal)");
}

MimoSolution mimo_solve(const StateSpaceSystem& sys, const RealVecFn& u, int M, Convention convention) {
  sys.validate();
  const Index n = sys.A.rows();
  const auto side = convention == Convention::causal ? ExpIndicator::Side::positive : ExpIndicator::Side::nonpositive;
  const IntervalKernel G(ExpIndicator{sys.A, sys.B, side}, sys.horizon, sys.horizon);
  const auto ug = GridFunction::sample(u, std::vector<double>(static_cast<std::size_t>(n), sys.horizon), M);
  const auto w = wh_apply(G, ug);
  MimoSolution s;
  s.convention = convention;
  for (int l = 0; l <= M; ++l) {
    const double x = w.node(0, l);
    Vec v(n);
    Vec uv(n);
    for (Index i = 0; i < n; ++i) {
      v(i) = w.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
      uv(i) = ug.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
    }
    v += matrix_exponential(sys.A * x) * sys.v0;
    s.x.push_back(x);
    s.y.push_back(sys.C * v + sys.D * uv);
    s.v.push_back(std::move(v));
  }
  return s;
}

std::vector<Vec> ode_oracle(const StateSpaceSystem& sys, const RealVecFn& u, int steps) {
  sys.validate();
  if (steps < 1) throw InputError("ode_oracle: steps must be positive");
  const double h = sys.horizon / steps;
  auto rhs = [&](double x, const Vec& v) -> Vec { return sys.A * v + sys.B * u(x); };
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  Vec v = sys.v0;
  out.push_back(v);
  for (int s = 0; s < steps; ++s) {
    const double x = h * s;
    const Vec k1 = rhs(x, v);
    const Vec k2 = rhs(x + h / 2, v + h / 2 * k1);
    const Vec k3 = rhs(x + h / 2, v + h / 2 * k2);
    const Vec k4 = rhs(x + h, v + h * k3);
    v += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(v);
  }
  return out;
}

MimoReport mimo_report(const StateSpaceSystem& sys, const RealVecFn& u, int M, int rk4_steps,
                       std::optional<Convention> requested, double tol) {
  sys.validate();
  if (M < 8) throw InputError("mimo: grid needs M >= 8");
  if (rk4_steps % M != 0) throw InputError("mimo: rk4 steps must be a multiple of the grid size M");
  const int stride = rk4_steps / M;
  const auto rk = ode_oracle(sys, u, rk4_steps);
  MimoReport rep;
  rep.M = M;
  rep.rk4_steps = rk4_steps;
  std::vector<MimoSolution> sols;
  for (const auto c : {Convention::causal, Convention::paper_literal}) {
    auto sol = mimo_solve(sys, u, M, c);
    ConventionCheck chk;
    chk.convention = c;
    double num = 0.0;
    double den = 0.0;
    for (int l = 0; l <= M; ++l) {
      num += (sol.v[static_cast<std::size_t>(l)] - rk[static_cast<std::size_t>(l * stride)]).squaredNorm();
      den += rk[static_cast<std::size_t>(l * stride)].squaredNorm();
    }
    chk.rk4_relative_error = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    const double dx = sys.horizon / M;
    double rn = 0.0;
    double rd = 0.0;
    for (int l = 1; l < M; ++l) {
      const Vec dv = (sol.v[static_cast<std::size_t>(l) + 1] - sol.v[static_cast<std::size_t>(l) - 1]) / (2 * dx);
      const Vec av = sys.A * sol.v[static_cast<std::size_t>(l)];
      const Vec bu = sys.B * u(sol.x[static_cast<std::size_t>(l)]);
      rn += (dv - av - bu).squaredNorm();
      rd += av.squaredNorm() + bu.squaredNorm();
    }
    chk.state_residual = rd > 0.0 ? std::sqrt(rn / rd) : std::sqrt(rn);
    chk.satisfies_state_equation = chk.rk4_relative_error < tol;
    if (chk.satisfies_state_equation && !rep.adjudicated) rep.adjudicated = c;
    rep.checks.push_back(chk);
    sols.push_back(std::move(sol));
  }
  const Convention pick = requested.value_or(rep.adjudicated.value_or(Convention::causal));
  rep.solution = sols[pick == Convention::causal ? 0 : 1];
  return rep;
}

cplx ClosedFormPair::G(double x, int side) const {
  switch (kind) {
    case Kind::causal:
      return (x > 0.0 || (x == 0.0 && side > 0)) ? std::exp(-rate * x) : 0.0;
    case Kind::anticausal:
      return (x < 0.0 || (x == 0.0 && side < 0)) ? std::exp(rate * x) : 0.0;
    case Kind::two_sided:
      return std::exp(-rate * std::abs(x));
  }
  return 0.0;
}

cplx ClosedFormPair::H(double w) const {
  const cplx iw(0.0, w);
  switch (kind) {
    case Kind::causal:
      return 1.0 / (rate + iw);
    case Kind::anticausal:
      return 1.0 / (rate - iw);
    case Kind::two_sided:
      return 2.0 * rate / (rate * rate + w * w);
  }
  return 0.0;
}

void ClosedFormPair::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("closed-form pair needs a positive decay rate");
}

std::string to_string(ClosedFormPair::Kind k) {
  switch (k) {
    case ClosedFormPair::Kind::causal:
      return "causal-exponential";
    case ClosedFormPair::Kind::anticausal:
      return "anticausal-exponential";
    case ClosedFormPair::Kind::two_sided:
      return "two-sided-exponential";
  }
  return "";
}

ClosedFormPair::Kind pair_kind_from_string(const std::string& s) {
  if (s == "causal-exponential") return ClosedFormPair::Kind::causal;
  if (s == "anticausal-exponential") return ClosedFormPair::Kind::anticausal;
  if (s == "two-sided-exponential") return ClosedFormPair::Kind::two_sided;
  throw InputError("unknown closed-form pair '" + s + "'");
}

double smooth_bump(double t, double a) {
  const double u = (2.0 * t - a) / (0.8 * a);
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

EquivalenceLevel equivalence_level(const std::vector<ClosedFormPair>& pairs, const RealVecFn& k, double a, int M,
                                   double L) {
  if (pairs.empty()) throw InputError("equivalence check needs at least one pair");
  for (const auto& p : pairs) p.validate();
  if (!(a > 0.0)) throw InputError("interval length must be positive");
  if (L < 8.0 * a * (1.0 - 1e-12)) throw InputError("periodization half-width L must be >= 8a");
  if (M < 16) throw InputError("DFT size too small");
  const double dx = 2.0 * L / M;
  const double nq = a / dx;
  const int N = static_cast<int>(std::lround(nq));
  if (std::abs(nq - N) > 1e-9 * std::max(1.0, nq) || N < 8) {
    throw InputError("interval [0, a] must contain an integral number (>= 8) of DFT steps");
  }
  const Index n = static_cast<Index>(pairs.size());

  FunctionKernel fk;
  fk.n = n;
  fk.jump_at_zero = true;
  fk.eval = [pairs, n](double s, int side) {
    Mat g = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) g(i, i) = pairs[static_cast<std::size_t>(i)].G(s, side);
    return g;
  };
  const IntervalKernel G(fk, a, a);
  const auto quad = wh_apply(G, k, N);

  Eigen::FFT<double> fft;
  double num = 0.0;
  double den = 0.0;
  for (Index i = 0; i < n; ++i) {
    std::vector<cplx> samples(static_cast<std::size_t>(M), 0.0);
    for (int m = 0; m <= N; ++m) samples[static_cast<std::size_t>(m)] = k(m * dx)(i);
    std::vector<cplx> spec;
    fft.fwd(spec, samples);
    for (int m = 0; m < M; ++m) {
      const int f = m < M / 2 ? m : m - M;
      const double w = 2.0 * std::numbers::pi * f / (M * dx);
      spec[static_cast<std::size_t>(m)] *= pairs[static_cast<std::size_t>(i)].H(w);
    }
    std::vector<cplx> back;
    fft.inv(back, spec);
    for (int m = 0; m <= N; ++m) {
      const cplx q = quad.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
      num += std::norm(q - back[static_cast<std::size_t>(m)]);
      den += std::norm(q);
    }
  }
  return {M, L, dx, den > 0.0 ? std::sqrt(num / den) : std::sqrt(num)};
}

EquivalenceReport unitary_equivalence_check(const std::vector<ClosedFormPair>& pairs, const RealVecFn& k, double a,
                                            int M, double L, int refinements, double threshold) {
  EquivalenceReport r;
  r.threshold = threshold;
  int m = M;
  double l = L;
  for (int step = 0; step <= refinements; ++step) {
    r.levels.push_back(equivalence_level(pairs, k, a, m, l));
    m *= 4;
    l *= 2;
  }
  r.decreasing = true;
  for (std::size_t i = 1; i < r.levels.size(); ++i) {
    if (!(r.levels[i].discrepancy < r.levels[i - 1].discrepancy)) r.decreasing = false;
  }
  r.pass = r.levels.front().discrepancy < threshold && r.decreasing;
  return r;
}

}  // namespace mttokit
