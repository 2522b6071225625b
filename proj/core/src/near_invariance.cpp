#include "mttokit/near_invariance.hpp"

#include <algorithm>
#include <cmath>

#include "mttokit/eae.hpp"
#include "mttokit/mtto.hpp"

namespace mttokit {

namespace {

/// Coordinates of S* f for f in a [0, hi] window (same window).
Vec divide_by_z(const Vec& c, Index n) {
  Vec out = Vec::Zero(c.size());
  out.head(c.size() - n) = c.tail(c.size() - n);
  return out;
}

TrigPoly combine(const std::vector<TrigPoly>& fs, const Vec& c, Index dim) {
  TrigPoly out(dim);
  for (std::size_t i = 0; i < fs.size(); ++i) out += scale(fs[i], c(static_cast<Index>(i)));
  return out;
}

}  // namespace

TrigPoly backward_shift(const TrigPoly& f) {
  if (negative_mass(f) > 0.0) throw InputError("backward_shift: input has negative Fourier coefficients");
  return riesz_plus(shift(f, -1));
}

Mat embed(const PolySubspace& s, const PolyWindow& w) {
  Mat out(w.size(), s.dim());
  const auto fs = s.functions();
  for (Index j = 0; j < s.dim(); ++j) out.col(j) = w.coords(fs[static_cast<std::size_t>(j)]);
  return out;
}

PolyWindow common_window(const PolySubspace& a, const PolySubspace& b) {
  if (a.window.n != b.window.n) throw InputError("subspaces of different vector dimension");
  return {a.window.n, 0, std::max({0, a.window.hi, b.window.hi})};
}

DefectSpace defect_space(const ModelSpace& ms, const MatrixSymbol& G, std::optional<int> N_in) {
  const Index n = ms.n();
  const auto op = assemble_T_G(ms, G, N_in);
  const auto ker = kernel_T_G(op, ms.tail());
  DefectSpace d;
  d.kernel_dim = ker.dim();
  const PolyWindow out_window{n, 0, std::max(0, op.N_in() - 1)};
  d.space = {out_window, {Mat(out_window.size(), 0), 1e-10}};
  if (ker.dim() == 0) return d;

  const Mat w0 = ker.space.basis.topRows(2 * n);
  Eigen::ColPivHouseholderQR<Mat> qr(w0);
  qr.setThreshold(1e-10);
  d.w_dim = qr.rank();
  if (d.w_dim == 0) return d;
  const auto perm = qr.colsPermutation().indices();
  Mat chosen(ker.space.basis.rows(), d.w_dim);
  for (Index i = 0; i < d.w_dim; ++i) {
    d.selected.push_back(perm(i));
    chosen.col(i) = ker.space.basis.col(perm(i));
  }
  const Mat p0 = chosen.topRows(n);
  const double scale = std::max(1.0, p0.size() > 0 ? singular_system(p0).values(0) : 0.0);
  const auto s = null_space(p0, 1e-10 * scale);
  std::vector<TrigPoly> fs;
  for (Index l = 0; l < s.dim(); ++l) {
    const TrigPoly w = op.domain.poly(chosen * s.basis.col(l));
    const TrigPoly p = split(w, {n, n})[0];
    fs.push_back(riesz_plus(shift(p, -1)));
  }
  d.space = PolySubspace::from_functions(out_window, fs);
  return d;
}

PolySubspace vanishing_part(const PolySubspace& M) {
  const Index n = M.window.n;
  if (M.dim() == 0) return M;
  const Mat e = M.space.basis.topRows(n);
  const auto z = null_space(e, 1e-10 * std::max(1.0, singular_system(e).values(0)));
  Mat b = M.space.basis * z.basis;
  return {M.window, {canonical_basis(range_space(b).basis), 1e-10}};
}

double certify_near_invariance(const PolySubspace& M, const PolySubspace& D) {
  const auto w = common_window(M, D);
  const auto m0 = vanishing_part(M);
  if (m0.dim() == 0) return 0.0;
  const Mat u = orthonormal_union(embed(M, w), embed(D, w));
  const Mat v = embed(m0, w);
  double worst = 0.0;
  for (Index j = 0; j < v.cols(); ++j) worst = std::max(worst, distance_to_span(u, divide_by_z(v.col(j), w.n)));
  return worst;
}

std::string to_string(KernelCase c) {
  return c == KernelCase::has_nonvanishing ? "has-nonvanishing" : "all-vanish-at-0";
}

NearInvarianceReport decompose_kernel(const PolySubspace& M, const PolySubspace& D, std::optional<int> max_terms) {
  NearInvarianceReport rep;
  const PolyWindow w = common_window(M, D);
  const Index n = w.n;
  rep.M = M;
  rep.raw_defect = D;
  rep.raw_defect_dim = D.dim();
  rep.certification_residual = certify_near_invariance(M, D);
  if (rep.certification_residual > kCertifyThreshold) {
    throw InputError("decompose_kernel: near-invariance certification failed (residual " +
                     std::to_string(rep.certification_residual) + ")");
  }

  const Mat mb = embed(M, w);
  const Mat eb = orthogonal_complement_in(mb, embed(D, w));
  rep.defect = {w, {eb, 1e-10}};
  rep.defect_dim = eb.cols();
  const Index m = rep.defect_dim;

  const Mat ev = mb.topRows(n);
  Mat f0 = Mat(w.size(), 0);
  if (M.dim() > 0) {
    const auto sv = singular_system(ev.adjoint());
    const double floor = 1e-10 * std::max(1.0, sv.values.size() > 0 ? sv.values(0) : 0.0);
    Index rank = 0;
    while (rank < sv.values.size() && sv.values(rank) > floor) ++rank;
    f0 = canonical_basis(mb * sv.U.leftCols(rank));
  }
  rep.r = f0.cols();
  const Index r = rep.r;
  rep.kernel_case = r > 0 ? KernelCase::has_nonvanishing : KernelCase::all_vanish_at_zero;
  for (Index j = 0; j < r; ++j) rep.F0.push_back(w.poly(f0.col(j)));
  for (Index j = 0; j < m; ++j) rep.e.push_back(w.poly(eb.col(j)));

  const int cap = max_terms.value_or(4 * (w.hi + 1) + 64);
  const Index dim = M.dim();
  std::vector<std::vector<Vec>> tuples(static_cast<std::size_t>(dim));
  int terms = 0;
  for (Index col = 0; col < dim; ++col) {
    Vec cur = mb.col(col);
    const double scale = cur.norm();
    auto& seq = tuples[static_cast<std::size_t>(col)];
    bool converged = false;
    for (int t = 0; t < cap; ++t) {
      if (cur.norm() <= 1e-13 * scale) {
        converged = true;
        break;
      }
      Vec a = f0.adjoint() * cur;
      Vec g = cur - f0 * a;
      if (g.head(n).norm() > 1e-8 * scale) {
        rep.degenerate = true;
        rep.degenerate_degree = std::max(rep.degenerate_degree, t);
        break;
      }
      const Vec h = divide_by_z(g, n);
      Vec d = eb.adjoint() * h;
      Vec tuple(r + m);
      tuple << a, d;
      seq.push_back(tuple);
      cur = mb * (mb.adjoint() * h);
    }
    if (!converged && !rep.degenerate) {
      rep.degenerate = true;
      rep.degenerate_degree = std::max(rep.degenerate_degree, cap);
    }
    terms = std::max(terms, static_cast<int>(seq.size()));
  }
  rep.terms = terms;

  const PolyWindow kw{r + m, 0, std::max(0, terms - 1)};
  Mat kc = Mat::Zero(kw.size(), dim);
  for (Index col = 0; col < dim; ++col) {
    const auto& seq = tuples[static_cast<std::size_t>(col)];
    for (std::size_t t = 0; t < seq.size(); ++t) kc.block(static_cast<Index>(t) * (r + m), col, r + m, 1) = seq[t];
  }

  double recon = 0.0;
  for (Index col = 0; col < dim; ++col) {
    const auto& seq = tuples[static_cast<std::size_t>(col)];
    TrigPoly rebuilt(n);
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const Vec& tup = seq[t];
      if (r > 0) rebuilt += shift(combine(rep.F0, tup.head(r), n), static_cast<int>(t));
      if (m > 0) rebuilt += shift(combine(rep.e, tup.tail(m), n), static_cast<int>(t) + 1);
    }
    recon = std::max(recon, l2_norm(w.poly(mb.col(col)) - rebuilt));
  }
  rep.reconstruction_residual = recon;
  if (dim > 0) {
    const Mat gram = kc.adjoint() * kc - mb.adjoint() * mb;
    rep.norm_identity_residual = singular_system(gram).values(0);
  }

  rep.K = {kw, {Mat(kw.size(), 0), 1e-10}};
  if (dim > 0 && r + m > 0) rep.K = {kw, range_space(kc, 1e-10)};
  double inv = 0.0;
  for (Index j = 0; j < rep.K.dim(); ++j) {
    inv = std::max(inv, distance_to_span(rep.K.space.basis, divide_by_z(rep.K.space.basis.col(j), r + m)));
  }
  rep.k_invariance_residual = inv;
  rep.pass = !rep.degenerate && rep.reconstruction_residual < kDecompositionThreshold &&
             rep.norm_identity_residual < kDecompositionThreshold && rep.k_invariance_residual < kDecompositionThreshold &&
             rep.K.dim() == dim;
  return rep;
}

NearInvarianceAnalysis analyze_near_invariance(const ModelSpace& ms, const MatrixSymbol& G, std::optional<int> N_in) {
  NearInvarianceAnalysis a;
  a.n = ms.n();
  const auto op = assemble_mtto(ms, G);
  const auto M = kernel_subspace(ms, kernel(op));
  a.defect = defect_space(ms, G, N_in);
  const double cert = certify_near_invariance(M, a.defect.space);
  if (cert > kCertifyThreshold) {
    throw NumericalError("near-invariance certification failed (residual " + std::to_string(cert) + ")");
  }
  a.report = decompose_kernel(M, a.defect.space);
  a.defect_bound_holds = a.defect.space.dim() <= a.n && a.report.defect_dim <= a.n;
  a.report.pass = a.report.pass && a.defect_bound_holds;
  return a;
}

}  // namespace mttokit
