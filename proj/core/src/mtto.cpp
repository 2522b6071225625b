#include "mttokit/mtto.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mttokit/parallel.hpp"

namespace mttokit {

BasisDescriptor BasisDescriptor::model(const ModelSpace& ms) {
  const auto w = ms.window();
  return {Kind::model, ms.dim(), ms.n(), w.lo, w.hi, "model"};
}

BasisDescriptor BasisDescriptor::window(const PolyWindow& w, std::string label) {
  return {Kind::window, w.size(), w.n, w.lo, w.hi, std::move(label)};
}

OperatorMatrix assemble_mtto(const ModelSpace& ms, const MatrixSymbol& G, ExponentPair exponents) {
  if (G.rows() != ms.n() || G.cols() != ms.n()) {
    throw InputError("assemble_mtto: symbol must be " + std::to_string(ms.n()) + "x" + std::to_string(ms.n()));
  }
  const Index d = ms.dim();
  Mat a = Mat::Zero(d, d);
  parallel_for(static_cast<std::size_t>(d), [&](std::size_t j) {
    const TrigPoly image = ms.project(mul(G, ms.basis().vectors[j]));
    a.col(static_cast<Index>(j)) = ms.basis_coords(image);
  });
  const auto basis = BasisDescriptor::model(ms);
  return {std::move(a), basis, basis, ms.N(), exponents, ms.tail()};
}

OperatorMatrix assemble_mtto(const MatrixInner& theta, const MatrixSymbol& G, int N) {
  return assemble_mtto(ModelSpace(theta, N), G);
}

Subspace kernel(const OperatorMatrix& op, std::optional<double> tol) {
  return null_space(op.matrix, tol ? *tol : truncated_rank_tol(op.matrix, op.tail));
}

PolySubspace kernel_subspace(const ModelSpace& ms, const Subspace& ker) {
  const auto fs = kernel_functions(ms, ker);
  int hi = 0;
  for (const auto& f : fs) hi = std::max(hi, f.hi());
  return PolySubspace::from_functions(PolyWindow{ms.n(), 0, hi}, fs);
}

std::vector<TrigPoly> kernel_functions(const ModelSpace& ms, const Subspace& ker) {
  std::vector<TrigPoly> out;
  out.reserve(static_cast<std::size_t>(ker.dim()));
  for (Index j = 0; j < ker.dim(); ++j) out.push_back(ms.from_basis_coords(ker.basis.col(j)));
  return out;
}

TrigPoly lift_kernel_witness(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& f1, double tol) {
  const TrigPoly gf = mul(G, f1);
  const double residual = l2_norm(ms.project(gf));
  if (residual > tol * l2_norm(f1)) {
    std::ostringstream msg;
    msg << "lift_kernel_witness: f1 is not in ker A (residual " << residual << ")";
    throw InputError(msg.str());
  }
  return scale(ms.apply_theta_adjoint(riesz_plus(gf)), -1.0);
}

WitnessCheck check_kernel_witness(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& f1, const TrigPoly& f2) {
  WitnessCheck c;
  const TrigPoly gf = mul(G, f1);
  c.negative_mass = negative_mass(f2);
  c.analytic_mass = l2_norm(riesz_plus(gf + ms.apply_theta(f2)));
  c.bound = ms.tail() * (1.0 + l2_norm(gf)) + 1e-8 * l2_norm(f1);
  c.pass = c.negative_mass <= c.bound && c.analytic_mass <= c.bound;
  return c;
}

HankelReport hankel_relation_check(const ModelSpace& ms, const MatrixSymbol& psi) {
  if (!psi.is_analytic()) throw InputError("hankel_relation_check: Psi has negative Fourier coefficients");
  const Index d = ms.dim();
  std::vector<TrigPoly> diffs(static_cast<std::size_t>(d), TrigPoly(ms.n()));
  parallel_for(static_cast<std::size_t>(d), [&](std::size_t j) {
    const TrigPoly pf = mul(psi, ms.basis().vectors[j]);
    const TrigPoly lhs = ms.project(pf);
    const TrigPoly rhs = ms.apply_theta(riesz_minus0(ms.apply_theta_adjoint(pf)));
    diffs[j] = lhs - rhs;
  });
  HankelReport r;
  r.tail = ms.tail();
  if (d > 0) {
    int lo = 0;
    int hi = 0;
    for (const auto& f : diffs) {
      lo = std::min(lo, f.lo());
      hi = std::max(hi, f.hi());
    }
    const PolyWindow w{ms.n(), lo, hi};
    Mat m(w.size(), d);
    for (Index j = 0; j < d; ++j) m.col(j) = w.coords(diffs[static_cast<std::size_t>(j)]);
    r.residual = singular_system(m).values(0);
  }
  r.pass = r.residual <= r.tail * (1.0 + l2_norm(riesz_plus(psi.entry(0, 0)))) + 1e-9;
  return r;
}

OperatorMatrix rank_one_tto(const ScalarInner& theta, cplx zeta, int N) {
  const ModelSpace ms(MatrixInner({theta}), N);
  const TrigPoly k = reproducing_kernel(theta, zeta, ms.N());
  const Vec c = ms.basis_coords(k);
  const auto basis = BasisDescriptor::model(ms);
  return {c * c.adjoint(), basis, basis, ms.N(), {}, ms.tail()};
}

namespace {

void finish_growth(GrowthReport& r) {
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    const double prev = r.points[i - 1].sigma_max;
    r.ratios.push_back(prev > 0.0 ? r.points[i].sigma_max / prev : (r.points[i].sigma_max > 0.0 ? INFINITY : 1.0));
  }
  if (r.ratios.empty()) {
    r.verdict = "inconclusive";
    return;
  }
  r.saturated = r.ratios.back() < kSaturationRatio;
  r.verdict = r.saturated ? "bounded at this scale" : "no bounded extension at this scale";
}

}  // namespace

GrowthReport boundedness_growth_diagnostic(const std::vector<MatrixInner>& family, const MatrixSymbol& G,
                                           ExponentPair exponents) {
  GrowthReport r;
  for (const auto& theta : family) {
    const ModelSpace ms(theta);
    const auto op = assemble_mtto(ms, G, exponents);
    GrowthPoint pt;
    pt.dim = ms.dim();
    pt.truncation = ms.N();
    if (ms.dim() > 0) {
      const auto s = singular_system(op.matrix);
      pt.sigma_max = s.values(0);
      const TrigPoly image = ms.project(mul(G, ms.from_basis_coords(s.V.col(0))));
      pt.image_l2 = l2_norm(image);
      pt.image_lq = lp_norm_grid(image, exponents.q());
    }
    r.points.push_back(pt);
  }
  finish_growth(r);
  return r;
}

GrowthReport boundedness_growth_diagnostic(const std::vector<OperatorMatrix>& ops) {
  GrowthReport r;
  for (const auto& op : ops) {
    GrowthPoint pt;
    pt.dim = op.matrix.cols();
    pt.truncation = op.truncation;
    if (op.matrix.size() > 0) {
      const auto s = singular_system(op.matrix);
      pt.sigma_max = s.values(0);
      pt.image_l2 = (op.matrix * s.V.col(0)).norm();
    }
    r.points.push_back(pt);
  }
  finish_growth(r);
  return r;
}

}  // namespace mttokit
