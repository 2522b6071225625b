#include "mttokit/eae.hpp"

#include <algorithm>
#include <sstream>

#include "mttokit/mtto.hpp"
#include "mttokit/parallel.hpp"

namespace mttokit {

namespace {

struct Halves {
  TrigPoly a;
  TrigPoly b;
};

Halves halves(const TrigPoly& f, Index n) {
  auto parts = split(f, {n, n});
  return {std::move(parts[0]), std::move(parts[1])};
}

TrigPoly join(const TrigPoly& a, const TrigPoly& b) { return stack({a, b}); }

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return singular_system(m).values(0);
}

double smallest_singular_value(const Mat& m) {
  if (m.cols() == 0) return 0.0;
  const auto s = singular_system(m);
  return s.values.size() < m.cols() ? 0.0 : s.values(m.cols() - 1);
}

PolyWindow block_window(Index n, int N) { return {2 * n, 0, N}; }

void check_sizes(const ModelSpace& ms, const MatrixSymbol& G) {
  if (G.rows() != ms.n() || G.cols() != ms.n()) {
    throw InputError("symbol must be " + std::to_string(ms.n()) + "x" + std::to_string(ms.n()));
  }
}

}  // namespace

Mat assemble_window_map(const WindowMap& map, const PolyWindow& in, const PolyWindow& out) {
  const Index cols = in.size();
  Mat a = Mat::Zero(out.size(), cols);
  std::vector<int> needed(static_cast<std::size_t>(cols), out.hi);
  std::vector<int> below(static_cast<std::size_t>(cols), 0);
  parallel_for(static_cast<std::size_t>(cols), [&](std::size_t j) {
    Vec e = Vec::Zero(cols);
    e(static_cast<Index>(j)) = 1.0;
    const TrigPoly image = map(in.poly(e));
    if (image.is_zero()) return;
    if (image.lo() < out.lo) {
      below[j] = 1;
      return;
    }
    if (image.hi() > out.hi) {
      needed[j] = image.hi();
      return;
    }
    a.col(static_cast<Index>(j)) = out.coords(image);
  });
  if (std::any_of(below.begin(), below.end(), [](int b) { return b != 0; })) {
    throw InputError("window map produced negative frequencies");
  }
  const int need = *std::max_element(needed.begin(), needed.end());
  if (need > out.hi) {
    throw InputError("window budget violated; need N_out >= " + std::to_string(need));
  }
  return a;
}

Mat BlockOperator::block(int i, int j) const {
  const Index nn = n();
  auto indices = [nn](const PolyWindow& w, int half) {
    std::vector<Index> idx;
    for (int k = 0; k <= w.hi - w.lo; ++k) {
      for (Index c = 0; c < nn; ++c) idx.push_back(static_cast<Index>(k) * 2 * nn + half * nn + c);
    }
    return idx;
  };
  const auto rows = indices(codomain, i);
  const auto cols = indices(domain, j);
  Mat out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out(static_cast<Index>(r), static_cast<Index>(c)) = matrix(rows[r], cols[c]);
  }
  return out;
}

int analytic_degree(const MatrixSymbol& G) { return G.is_zero() ? 0 : std::max(0, G.hi()); }

int default_input_degree(const ModelSpace& ms, const MatrixSymbol& G) { return ms.N() + analytic_degree(G); }

int required_output_degree(const ModelSpace& ms, const MatrixSymbol& G, int N_in) {
  return N_in + analytic_degree(G) + ms.N();
}

TrigPoly apply_T_G(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& f) {
  const auto [f1, f2] = halves(f, ms.n());
  return join(riesz_plus(ms.apply_theta_adjoint(f1)), riesz_plus(mul(G, f1) + ms.apply_theta(f2)));
}

BlockOperator assemble_T_G(const ModelSpace& ms, const MatrixSymbol& G, std::optional<int> N_in,
                           std::optional<int> N_out, ExponentPair exponents) {
  check_sizes(ms, G);
  const int nin = N_in.value_or(default_input_degree(ms, G));
  if (nin < 0) throw InputError("N_in must be nonnegative");
  const int nout = N_out.value_or(required_output_degree(ms, G, nin));
  const auto in = block_window(ms.n(), nin);
  const auto out = block_window(ms.n(), nout);
  Mat m = assemble_window_map([&](const TrigPoly& f) { return apply_T_G(ms, G, f); }, in, out);
  return {std::move(m), in, out, exponents};
}

PolySubspace kernel_T_G(const BlockOperator& op, double tail, std::optional<double> tol) {
  const double t = tol ? *tol : truncated_rank_tol(op.matrix, tail);
  return {op.domain, null_space(op.matrix, t)};
}

std::vector<TrigPoly> first_block(const std::vector<TrigPoly>& fs, Index n) {
  std::vector<TrigPoly> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(halves(f, n).a);
  return out;
}

KernelProjectionReport verify_kernel_projection(const ModelSpace& ms, const MatrixSymbol& G, std::optional<int> N_in) {
  KernelProjectionReport r;
  const auto op_a = assemble_mtto(ms, G);
  const auto ker_a = kernel_functions(ms, kernel(op_a));
  const auto op_g = assemble_T_G(ms, G, N_in);
  const auto ker_g = kernel_T_G(op_g, ms.tail());
  r.dim_ker_A = static_cast<Index>(ker_a.size());
  r.dim_ker_T_G = ker_g.dim();
  const auto proj = first_block(ker_g.functions(), ms.n());
  int hi = std::max(op_g.N_in(), ms.window().hi);
  for (const auto& f : ker_a) hi = std::max(hi, f.hi());
  const PolyWindow w{ms.n(), 0, hi};
  const auto sa = PolySubspace::from_functions(w, ker_a);
  const auto sg = PolySubspace::from_functions(w, proj);
  r.principal_angle = max_principal_angle(sa.space.basis, sg.space.basis);
  r.pass = r.dim_ker_A == r.dim_ker_T_G && sg.dim() == r.dim_ker_T_G && r.principal_angle < r.threshold;
  return r;
}

std::vector<int> factorization_degrees(const ModelSpace& ms, const MatrixSymbol& G, int N_in) {
  const int g = analytic_degree(G);
  const int t = ms.N();
  const int n2 = N_in + g;
  const int n3 = n2 + std::max(g, t);
  const int n4 = n3 + t;
  return {N_in, n2, n3, n4};
}

TrigPoly apply_T2_inverse(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& f) {
  const auto [f1, f2] = halves(f, ms.n());
  const TrigPoly x = riesz_plus(ms.apply_theta_adjoint(riesz_plus(mul(G, f1)))) -
                     riesz_plus(ms.apply_theta_adjoint(f1));
  return join(f1, f2 + x);
}

TrigPoly apply_T1_inverse(const ModelSpace& ms, const TrigPoly& y) {
  const auto [y1, y2] = halves(y, ms.n());
  const TrigPoly u1 = riesz_plus(ms.apply_theta_adjoint(y1));
  const TrigPoly u2 = ms.project(y1) + ms.apply_theta(y2 + u1);
  return join(u1, u2);
}

FactorizationReport factor_operators(const ModelSpace& ms, const MatrixSymbol& G, std::optional<int> N_in,
                                     std::optional<int> N_out, double abs_tol) {
  check_sizes(ms, G);
  const Index n = ms.n();
  const int nin = N_in.value_or(default_input_degree(ms, G));
  const auto deg = factorization_degrees(ms, G, nin);
  const int need = deg[3];
  if (N_out && *N_out < need) {
    throw InputError("window budget violated; need N_out >= " + std::to_string(need));
  }
  const int nout = N_out.value_or(need);
  const auto w_in = block_window(n, nin);
  const auto w2 = block_window(n, deg[1]);
  const auto w3 = block_window(n, deg[2]);
  const auto w4 = block_window(n, nout);

  const WindowMap t2 = [&](const TrigPoly& f) {
    const auto [f1, f2] = halves(f, n);
    const TrigPoly x = riesz_plus(ms.apply_theta_adjoint(f1)) -
                       riesz_plus(ms.apply_theta_adjoint(riesz_plus(mul(G, f1))));
    return join(f1, f2 + x);
  };
  const WindowMap t1 = [&](const TrigPoly& u) {
    const auto [u1, u2] = halves(u, n);
    return join(ms.apply_theta(u1) + ms.project(u2), riesz_plus(ms.apply_theta_adjoint(u2)) - u1);
  };
  const WindowMap t = [&](const TrigPoly& y) {
    const auto [y1, y2] = halves(y, n);
    return join(y1 - ms.project(mul(G, ms.project_theta_h2(y1))), y2);
  };
  const WindowMap lhs = [&](const TrigPoly& f) {
    const auto [f1, f2] = halves(f, n);
    return join(ms.project(mul(G, ms.project(f1))) + ms.project_theta_h2(f1), f2);
  };

  FactorizationReport r;
  r.N_in = nin;
  r.N_out = nout;
  r.tail = ms.tail();
  r.threshold = r.tail + abs_tol;
  r.T2 = {assemble_window_map(t2, w_in, w2), w_in, w2, {}};
  r.T_G = {assemble_window_map([&](const TrigPoly& f) { return apply_T_G(ms, G, f); }, w2, w3), w2, w3, {}};
  r.T1 = {assemble_window_map(t1, w3, w4), w3, w4, {}};
  r.T = {assemble_window_map(t, w4, w4), w4, w4, {}};
  const Mat left = assemble_window_map(lhs, w_in, w4);
  const Mat chain = r.T.matrix * (r.T1.matrix * (r.T_G.matrix * r.T2.matrix));
  r.residual = spectral_norm(left - chain);

  const PolyWindow wl{n, 0, nout};
  const Mat L = assemble_window_map([&](const TrigPoly& y) { return ms.project(mul(G, ms.project_theta_h2(y))); }, wl, wl);
  const Mat id = Mat::Identity(wl.size(), wl.size());
  r.lemma_residual = spectral_norm((id - L) * (id + L) - id);
  r.nilpotency_residual = spectral_norm(L * L);

  const int g = analytic_degree(G);
  const PolyWindow w_wide = block_window(n, nin + 2 * g + ms.N());
  const Mat a = assemble_window_map([&](const TrigPoly& f) { return t2(apply_T2_inverse(ms, G, f)) - f; }, w_in, w_wide);
  const Mat b = assemble_window_map([&](const TrigPoly& f) { return apply_T2_inverse(ms, G, t2(f)) - f; }, w_in, w_wide);
  r.t2_inverse_residual = std::max(spectral_norm(a), spectral_norm(b));
  const PolyWindow w_t1 = block_window(n, nout + 2 * ms.N());
  const Mat c = assemble_window_map([&](const TrigPoly& u) { return apply_T1_inverse(ms, t1(u)) - u; }, w3, w_t1);
  r.t1_inverse_residual = spectral_norm(c);

  r.sigma_min_T1 = smallest_singular_value(r.T1.matrix);
  r.sigma_min_T2 = smallest_singular_value(r.T2.matrix);
  r.pass = r.residual < r.threshold && r.lemma_residual < r.threshold && r.nilpotency_residual < r.threshold &&
           r.t2_inverse_residual < r.threshold && r.t1_inverse_residual < r.threshold && r.sigma_min_T1 > 1e-6 &&
           r.sigma_min_T2 > 1e-6;
  return r;
}

CodomainSplit decompose_codomain(const ModelSpace& ms, const MatrixSymbol& G, const TrigPoly& v, ExponentPair exponents) {
  check_sizes(ms, G);
  if (v.dim() != 2 * ms.n()) throw InputError("decompose_codomain: v must have dimension 2n");
  if (negative_mass(v) > 0.0) throw InputError("decompose_codomain: v has negative Fourier coefficients");
  const auto [va, vb] = halves(v, ms.n());
  CodomainSplit s;
  s.p3 = va;
  const TrigPoly graph = riesz_plus(mul(G, ms.apply_theta(s.p3)));
  const TrigPoly rest = vb - graph;
  s.p2 = ms.project(rest);
  s.p1 = riesz_plus(ms.apply_theta_adjoint(rest));
  const TrigPoly theta_p1 = ms.apply_theta(s.p1);
  const TrigPoly back = join(s.p3, theta_p1 + s.p2 + graph);
  s.reassembly_residual = l2_norm(v - back);
  s.co_d_norm = lp_norm_grid(theta_p1, exponents.q()) + l2_norm(s.p2) + l2_norm(s.p3);
  s.threshold = ms.tail() * (1.0 + l2_norm(v)) + 1e-9;
  s.pass = s.reassembly_residual < s.threshold;
  return s;
}

EaeReport eae_consequences_report(const ModelSpace& ms, const MatrixSymbol& G, std::optional<int> N_in) {
  EaeReport r;
  const auto op_a = assemble_mtto(ms, G);
  r.dim_ker_A = kernel(op_a).dim();
  r.dim_coker_A = null_space(op_a.matrix.adjoint(), truncated_rank_tol(op_a.matrix, ms.tail())).dim();

  const auto op_g = assemble_T_G(ms, G, N_in);
  const auto ker_g = kernel_T_G(op_g, ms.tail());
  r.dim_ker_T_G = ker_g.dim();
  r.kernel_dims_equal = r.dim_ker_A == r.dim_ker_T_G;

  const Index n = ms.n();
  const int nin = op_g.N_in();
  const PolyWindow w1{n, 0, nin};
  std::vector<TrigPoly> gens;
  for (Index j = 0; j < w1.size(); ++j) {
    Vec e = Vec::Zero(w1.size());
    e(j) = 1.0;
    const TrigPoly u = w1.poly(e);
    const TrigPoly p3 = riesz_plus(ms.apply_theta_adjoint(u));
    gens.push_back(join(p3, riesz_plus(mul(G, ms.apply_theta(p3)))));
    gens.push_back(join(TrigPoly(n), ms.apply_theta(u)));
  }
  for (const auto& b : ms.basis().vectors) gens.push_back(join(TrigPoly(n), b));
  int hi = op_g.N_out();
  for (const auto& f : gens) hi = std::max(hi, f.hi());
  const auto span = PolySubspace::from_functions(block_window(n, hi), gens);
  const Index rank_g = op_g.matrix.cols() - r.dim_ker_T_G;
  r.dim_coker_T_G = std::max<Index>(0, span.dim() - rank_g);
  r.cokernel_dims_equal = r.dim_coker_T_G == r.dim_coker_A;

  r.projection = verify_kernel_projection(ms, G, N_in);
  r.factorization = factor_operators(ms, G, N_in);
  r.pass = r.kernel_dims_equal && r.projection.pass && r.factorization.pass;
  return r;
}

}  // namespace mttokit
