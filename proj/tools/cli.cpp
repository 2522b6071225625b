#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "mttokit/eae.hpp"
#include "mttokit/model_space.hpp"
#include "mttokit/mtto.hpp"
#include "mttokit/near_invariance.hpp"
#include "mttokit/wiener_hopf.hpp"

namespace mttokit::cli {

namespace {

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {"mtto-kernel", "near-invariance", "eae-verify", "lp-diagnose",
                                                 "wh-solve",    "mimo-sim",        "paper-examples"};
  return names;
}

/// Uniform pass-bar bookkeeping.  Residual bars are replaced by the tolerance override.
class Checks {
 public:
  explicit Checks(std::optional<double> override_tol) : override_(override_tol) {}

  void below(const std::string& name, double value, double threshold) {
    const double thr = override_.value_or(threshold);
    add(name, value, "<", thr, std::isfinite(value) && value < thr);
  }
  void above(const std::string& name, double value, double threshold) {
    add(name, value, ">", threshold, std::isfinite(value) && value > threshold);
  }
  void holds(const std::string& name, bool ok, json detail = nullptr) {
    json c{{"name", name}, {"kind", "exact"}, {"pass", ok}};
    if (!detail.is_null()) c["detail"] = std::move(detail);
    all_ = all_ && ok;
    list_.push_back(std::move(c));
  }
  bool all() const { return all_; }
  const json& list() const { return list_; }

 private:
  void add(const std::string& name, double value, const char* rel, double thr, bool ok) {
    all_ = all_ && ok;
    list_.push_back(json{{"name", name}, {"kind", rel}, {"value", value}, {"threshold", thr}, {"pass", ok}});
  }

  std::optional<double> override_;
  json list_ = json::array();
  bool all_ = true;
};

struct Context {
  const ProblemFile& problem;
  const Flags& flags;
  json resolved;  // payload with defaults filled in
  json result = json::object();
  Checks checks;
  std::optional<std::string> csv;
};

/// Deterministic uniform numbers in [-1, 1) from the raw 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0; }
  cplx complex() {
    const double re = uniform();
    return {re, uniform()};
  }

 private:
  std::mt19937_64 engine_;
};

const json& payload_field(const json& p, const char* key, const std::string& task) { return io::field(p, key, task); }

std::optional<int> opt_int(const json& p, const char* key, const std::string& where) {
  if (!p.contains(key)) return std::nullopt;
  return io::integer(p.at(key), where + "." + key);
}

double opt_number(const json& p, const char* key, double fallback, const std::string& where) {
  return p.contains(key) ? io::number(p.at(key), where + "." + key) : fallback;
}

ExponentPair exponents_from(const json& p, const std::string& where) {
  if (!p.contains("p")) return {};
  const auto& v = p.at("p");
  if (v.is_string() && (v == "inf" || v == "infinity")) return ExponentPair::bounded();
  return ExponentPair::from_p(io::number(v, where + ".p"));
}

json exponents_json(const ExponentPair& e) {
  return json{{"p", e.is_bounded_symbol() ? json("inf") : json(e.p())}, {"q", e.q()}};
}

struct SymbolProblem {
  ModelSpace ms;
  MatrixSymbol G;
};

SymbolProblem symbol_problem(const json& p, const std::string& task) {
  auto theta = io::inner_from_json(payload_field(p, "theta", task));
  auto G = io::symbol_from_json(payload_field(p, "G", task));
  if (G.rows() != theta.n() || G.cols() != theta.n()) throw InputError(task + ": G must be n x n with n = theta.n");
  return {ModelSpace(std::move(theta), opt_int(p, "N", task)), std::move(G)};
}

int resolved_grid(const Context& ctx, const char* key, int fallback) {
  if (ctx.flags.grid) return *ctx.flags.grid;
  if (auto g = opt_int(ctx.problem.payload, key, ctx.problem.task)) return *g;
  return fallback;
}

std::optional<Convention> resolved_convention(const Context& ctx) {
  if (ctx.flags.convention) return convention_from_string(*ctx.flags.convention);
  if (ctx.problem.payload.contains("convention")) {
    const auto& c = ctx.problem.payload.at("convention");
    if (!c.is_string()) throw InputError(ctx.problem.task + ".convention: expected a string");
    return convention_from_string(c.get<std::string>());
  }
  return std::nullopt;
}

std::string csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// Input functions on [0, c_i].

RealVecFn function_from_json(const json& j, Index n, const std::vector<double>& lengths) {
  const std::string where = "input";
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const auto& kind = io::field(j, "kind", where);
  auto per_component = [&](const char* key) {
    const auto& arr = io::field(j, key, where);
    if (!arr.is_array() || static_cast<Index>(arr.size()) != n) {
      throw InputError(where + "." + key + ": expected " + std::to_string(n) + " entries");
    }
    return arr;
  };
  if (kind == "constant") {
    io::require_keys(j, {"kind", "value"}, where);
    const Vec v = io::vector_from_json(per_component("value"));
    return [v](double) { return v; };
  }
  if (kind == "polynomial") {
    io::require_keys(j, {"kind", "coeffs"}, where);
    std::vector<std::vector<cplx>> cs;
    for (const auto& comp : per_component("coeffs")) {
      if (!comp.is_array()) throw InputError(where + ".coeffs: expected arrays");
      std::vector<cplx> c;
      for (const auto& x : comp) c.push_back(io::complex_from_json(x));
      cs.push_back(std::move(c));
    }
    return [cs, n](double x) {
      Vec v(n);
      for (Index i = 0; i < n; ++i) {
        cplx s = 0.0;
        const auto& c = cs[static_cast<std::size_t>(i)];
        for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
        v(i) = s;
      }
      return v;
    };
  }
  if (kind == "sinusoid") {
    io::require_keys(j, {"kind", "amplitude", "frequency", "phase"}, where);
    const Vec amp = io::vector_from_json(per_component("amplitude"));
    std::vector<double> freq;
    std::vector<double> phase(static_cast<std::size_t>(n), 0.0);
    for (const auto& f : per_component("frequency")) freq.push_back(io::number(f, where + ".frequency"));
    if (j.contains("phase")) {
      std::size_t i = 0;
      for (const auto& f : per_component("phase")) phase[i++] = io::number(f, where + ".phase");
    }
    return [amp, freq, phase, n](double x) {
      Vec v(n);
      for (Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        v(i) = amp(i) * std::sin(freq[k] * x + phase[k]);
      }
      return v;
    };
  }
  if (kind == "bump") {
    io::require_keys(j, {"kind", "scale"}, where);
    const Vec scale = j.contains("scale") ? io::vector_from_json(per_component("scale")) : Vec::Ones(n);
    return [scale, lengths, n](double x) {
      Vec v(n);
      for (Index i = 0; i < n; ++i) v(i) = scale(i) * smooth_bump(x, lengths[static_cast<std::size_t>(i)]);
      return v;
    };
  }
  if (kind == "samples") {
    io::require_keys(j, {"kind", "values"}, where);
    std::vector<std::vector<cplx>> vals;
    for (const auto& comp : per_component("values")) {
      if (!comp.is_array() || comp.size() < 2) throw InputError(where + ".values: need >= 2 samples per component");
      std::vector<cplx> c;
      for (const auto& x : comp) c.push_back(io::complex_from_json(x));
      vals.push_back(std::move(c));
    }
    return [vals, lengths, n](double x) {
      Vec v(n);
      for (Index i = 0; i < n; ++i) {
        const auto& c = vals[static_cast<std::size_t>(i)];
        const double last = static_cast<double>(c.size() - 1);
        const double pos = std::clamp(x / lengths[static_cast<std::size_t>(i)] * last, 0.0, last);
        const auto l = std::min(static_cast<std::size_t>(pos), c.size() - 2);
        const double w = pos - static_cast<double>(l);
        v(i) = (1.0 - w) * c[l] + w * c[l + 1];
      }
      return v;
    };
  }
  throw InputError(where + ": kind must be constant, polynomial, sinusoid, bump or samples");
}

std::vector<ClosedFormPair> pairs_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": pairs must be a nonempty array");
  std::vector<ClosedFormPair> out;
  for (const auto& p : j) {
    io::require_keys(p, {"kind", "rate"}, where);
    const auto& k = io::field(p, "kind", where);
    if (!k.is_string()) throw InputError(where + ".kind: expected a string");
    ClosedFormPair pair{pair_kind_from_string(k.get<std::string>()), opt_number(p, "rate", 1.0, where)};
    pair.validate();
    out.push_back(pair);
  }
  return out;
}

json pairs_json(const std::vector<ClosedFormPair>& pairs) {
  json out = json::array();
  for (const auto& p : pairs) out.push_back(json{{"kind", to_string(p.kind)}, {"rate", p.rate}});
  return out;
}

IntervalKernel kernel_from_json(const json& j, std::optional<Convention> convention) {
  const std::string where = "kernel";
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const auto& form = io::field(j, "form", where);
  const double a = io::number(io::field(j, "a", where), where + ".a");
  const double b = opt_number(j, "b", a, where);
  std::optional<Index> n_a;
  if (auto v = opt_int(j, "n_a", where)) n_a = *v;
  if (form != "exp-indicator" && convention) {
    throw InputError("--convention applies only to exp-indicator kernels");
  }
  if (form == "exp-indicator") {
    io::require_keys(j, {"form", "a", "b", "n_a", "A", "B", "side"}, where);
    ExpIndicator e{io::matrix_from_json(io::field(j, "A", where)), io::matrix_from_json(io::field(j, "B", where)),
                   ExpIndicator::Side::positive};
    if (j.contains("side")) {
      const auto& s = j.at("side");
      if (s == "positive") {
        e.side = ExpIndicator::Side::positive;
      } else if (s == "nonpositive") {
        e.side = ExpIndicator::Side::nonpositive;
      } else {
        throw InputError(where + ".side: expected positive or nonpositive");
      }
    }
    if (convention) {
      e.side = *convention == Convention::causal ? ExpIndicator::Side::positive : ExpIndicator::Side::nonpositive;
    }
    return {e, a, b, n_a};
  }
  if (form == "polynomial") {
    io::require_keys(j, {"form", "a", "b", "n_a", "coeffs"}, where);
    PolynomialKernel pk;
    const auto& cs = io::field(j, "coeffs", where);
    if (!cs.is_array() || cs.empty()) throw InputError(where + ".coeffs: expected a nonempty array of matrices");
    for (const auto& c : cs) pk.coeffs.push_back(io::matrix_from_json(c));
    return {pk, a, b, n_a};
  }
  if (form == "sampled") {
    io::require_keys(j, {"form", "a", "b", "n_a", "s0", "ds", "values"}, where);
    SampledKernel sk;
    sk.s0 = io::number(io::field(j, "s0", where), where + ".s0");
    sk.ds = io::number(io::field(j, "ds", where), where + ".ds");
    const auto& vs = io::field(j, "values", where);
    if (!vs.is_array()) throw InputError(where + ".values: expected an array of matrices");
    for (const auto& v : vs) sk.values.push_back(io::matrix_from_json(v));
    return {sk, a, b, n_a};
  }
  if (form == "closed-form") {
    io::require_keys(j, {"form", "a", "b", "n_a", "pairs"}, where);
    const auto pairs = pairs_from_json(io::field(j, "pairs", where), where + ".pairs");
    FunctionKernel fk;
    fk.n = static_cast<Index>(pairs.size());
    fk.jump_at_zero = std::any_of(pairs.begin(), pairs.end(),
                                  [](const ClosedFormPair& p) { return p.kind != ClosedFormPair::Kind::two_sided; });
    fk.eval = [pairs](double s, int side) {
      const auto n = static_cast<Index>(pairs.size());
      Mat g = Mat::Zero(n, n);
      for (Index i = 0; i < n; ++i) g(i, i) = pairs[static_cast<std::size_t>(i)].G(s, side);
      return g;
    };
    return {fk, a, b, n_a};
  }
  throw InputError(where + ": form must be exp-indicator, polynomial, sampled or closed-form");
}

json grid_json(const GridFunction& g) {
  json xs = json::array();
  json vs = json::array();
  for (Index i = 0; i < g.n(); ++i) {
    json x = json::array();
    json v = json::array();
    for (int l = 0; l <= g.M; ++l) {
      x.push_back(g.node(i, l));
      v.push_back(io::to_json(g.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)]));
    }
    xs.push_back(std::move(x));
    vs.push_back(std::move(v));
  }
  return json{{"x", std::move(xs)}, {"values", std::move(vs)}};
}

// ---------------------------------------------------------------------------
// Tasks.

void task_mtto_kernel(Context& ctx) {
  const auto& p = ctx.problem.payload;
  const std::string task = "mtto-kernel";
  io::require_keys(p, {"theta", "G", "N", "tol", "p", "grid"}, task);
  const auto [ms, G] = symbol_problem(p, task);
  const auto exps = exponents_from(p, task);
  const auto op = assemble_mtto(ms, G, exps);
  const double rank_tol = p.contains("tol") ? io::number(p.at("tol"), task + ".tol")
                                            : truncated_rank_tol(op.matrix, op.tail);
  const auto ker = kernel(op, rank_tol);
  const auto fs = kernel_functions(ms, ker);
  const auto sv = singular_system(op.matrix);

  json witnesses = json::array();
  double worst = 0.0;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const TrigPoly f2 = lift_kernel_witness(ms, G, fs[j], std::max(1e-8, 2.0 * rank_tol));
    const auto chk = check_kernel_witness(ms, G, fs[j], f2);
    const double r = std::max(chk.negative_mass, chk.analytic_mass);
    worst = std::max(worst, r - chk.bound);
    witnesses.push_back(json{{"f2", io::to_json(f2)},
                             {"negative_mass", chk.negative_mass},
                             {"analytic_mass", chk.analytic_mass},
                             {"bound", chk.bound}});
    ctx.checks.below("witness_residual[" + std::to_string(j) + "]", r, chk.bound);
  }

  json image = nullptr;
  if (op.matrix.size() > 0 && sv.values.size() > 0) {
    const Vec top = sv.V.col(0);
    const TrigPoly img = ms.from_basis_coords(op.matrix * top);
    const int M = resolved_grid(ctx, "grid", default_grid_size(img.width()));
    image = json{{"sigma_max", sv.values(0)},
                 {"l2", l2_norm(img)},
                 {"lq", lp_norm_grid(img, exps.q(), M)},
                 {"q", exps.q()},
                 {"grid", M}};
    ctx.resolved["grid"] = M;
  }

  ctx.resolved["N"] = ms.N();
  ctx.resolved["tol"] = rank_tol;
  ctx.result = json{{"model_dim", ms.dim()},
                    {"truncation", ms.N()},
                    {"tail_bound", ms.tail()},
                    {"exponents", exponents_json(exps)},
                    {"matrix", io::to_json(op.matrix)},
                    {"dim_ker", ker.dim()},
                    {"kernel_coordinates", io::to_json(ker.basis)},
                    {"kernel_basis", io::to_json(fs)},
                    {"singular_values", io::to_json(sv.values)},
                    {"witness_residuals", witnesses},
                    {"top_image_norms", image}};
}

json near_invariance_json(const NearInvarianceAnalysis& a) {
  const auto& r = a.report;
  return json{{"n", a.n},
              {"kernel_dim", r.M.dim()},
              {"kernel_basis", io::to_json(r.M)},
              {"dim_ker_T_G", a.defect.kernel_dim},
              {"w_dim", a.defect.w_dim},
              {"w_selected", a.defect.selected},
              {"raw_defect_dim", r.raw_defect_dim},
              {"raw_defect_basis", io::to_json(r.raw_defect)},
              {"defect_dim", r.defect_dim},
              {"defect_basis", io::to_json(r.e)},
              {"case", to_string(r.kernel_case)},
              {"r", r.r},
              {"F0", io::to_json(r.F0)},
              {"K_dim", r.K.dim()},
              {"K_basis", io::to_json(r.K)},
              {"terms", r.terms},
              {"certification_residual", r.certification_residual},
              {"reconstruction_residual", r.reconstruction_residual},
              {"norm_identity_residual", r.norm_identity_residual},
              {"k_invariance_residual", r.k_invariance_residual},
              {"degenerate", r.degenerate},
              {"degenerate_degree", r.degenerate ? json(r.degenerate_degree) : json(nullptr)},
              {"defect_bound_holds", a.defect_bound_holds}};
}

void near_invariance_checks(Checks& c, const NearInvarianceAnalysis& a) {
  const auto& r = a.report;
  c.below("certification_residual", r.certification_residual, kCertifyThreshold);
  c.below("reconstruction_residual", r.reconstruction_residual, kDecompositionThreshold);
  c.below("norm_identity_residual", r.norm_identity_residual, kDecompositionThreshold);
  c.below("k_invariance_residual", r.k_invariance_residual, kDecompositionThreshold);
  c.holds("defect_dim_at_most_n", a.defect_bound_holds, json{{"defect_dim", r.defect_dim}, {"n", a.n}});
  c.holds("dim_K_equals_dim_M", r.K.dim() == r.M.dim(), json{{"dim_K", r.K.dim()}, {"dim_M", r.M.dim()}});
  c.holds("nondegenerate", !r.degenerate);
}

void task_near_invariance(Context& ctx) {
  const auto& p = ctx.problem.payload;
  const std::string task = "near-invariance";
  io::require_keys(p, {"theta", "G", "N", "N_in"}, task);
  const auto [ms, G] = symbol_problem(p, task);
  const auto a = analyze_near_invariance(ms, G, opt_int(p, "N_in", task));
  ctx.resolved["N"] = ms.N();
  ctx.result = near_invariance_json(a);
  near_invariance_checks(ctx.checks, a);
}

json factorization_json(const FactorizationReport& f) {
  return json{{"N_in", f.N_in},
              {"N_out", f.N_out},
              {"residual", f.residual},
              {"lemma_residual", f.lemma_residual},
              {"nilpotency_residual", f.nilpotency_residual},
              {"t2_inverse_residual", f.t2_inverse_residual},
              {"t1_inverse_residual", f.t1_inverse_residual},
              {"sigma_min_T1", f.sigma_min_T1},
              {"sigma_min_T2", f.sigma_min_T2},
              {"tail", f.tail},
              {"threshold", f.threshold}};
}

void factorization_checks(Checks& c, const FactorizationReport& f) {
  c.below("factorization_residual", f.residual, f.threshold);
  c.below("lemma_residual", f.lemma_residual, f.threshold);
  c.below("nilpotency_residual", f.nilpotency_residual, f.threshold);
  c.below("t2_inverse_residual", f.t2_inverse_residual, f.threshold);
  c.below("t1_inverse_residual", f.t1_inverse_residual, f.threshold);
  c.above("sigma_min_T1", f.sigma_min_T1, 1e-6);
  c.above("sigma_min_T2", f.sigma_min_T2, 1e-6);
}

void task_eae_verify(Context& ctx) {
  const auto& p = ctx.problem.payload;
  const std::string task = "eae-verify";
  io::require_keys(p, {"theta", "G", "N", "N_in", "seeds", "p", "grid"}, task);
  const auto [ms, G] = symbol_problem(p, task);
  const auto exps = exponents_from(p, task);
  const auto N_in = opt_int(p, "N_in", task);
  const int probes = opt_int(p, "seeds", task).value_or(8);
  if (probes < 0 || probes > 10000) throw InputError(task + ".seeds: expected a count in [0, 10000]");

  const auto rep = eae_consequences_report(ms, G, N_in);
  const auto op = assemble_T_G(ms, G, N_in, std::nullopt, exps);

  Rng rng(ctx.problem.seed);
  json splits = json::array();
  double worst = 0.0;
  double threshold = 0.0;
  std::optional<int> grid = ctx.flags.grid ? ctx.flags.grid : opt_int(p, "grid", task);
  for (int s = 0; s < probes; ++s) {
    Vec x(op.domain.size());
    for (Index i = 0; i < x.size(); ++i) x(i) = rng.complex();
    const TrigPoly v = apply_T_G(ms, G, op.domain.poly(x));
    const auto split = decompose_codomain(ms, G, v, exps);
    double norm = split.co_d_norm;
    if (grid) norm = lp_norm_grid(ms.apply_theta(split.p1), exps.q(), *grid) + l2_norm(split.p2) + l2_norm(split.p3);
    worst = std::max(worst, split.reassembly_residual);
    threshold = std::max(threshold, split.threshold);
    splits.push_back(json{{"co_d_norm", norm}, {"reassembly_residual", split.reassembly_residual}});
  }
  if (grid) ctx.resolved["grid"] = *grid;
  ctx.resolved["seeds"] = probes;
  ctx.resolved["N"] = ms.N();

  ctx.result = json{
      {"exponents", exponents_json(exps)},
      {"exact_consequences",
       json{{"dim_ker_A", rep.dim_ker_A},
            {"dim_ker_T_G", rep.dim_ker_T_G},
            {"kernel_dims_equal", rep.kernel_dims_equal},
            {"kernel_projection",
             json{{"principal_angle", rep.projection.principal_angle},
                  {"dim_ker_T_G", rep.projection.dim_ker_T_G},
                  {"dim_ker_A", rep.projection.dim_ker_A}}}}},
      {"truncation_heuristics",
       json{{"dim_coker_A", rep.dim_coker_A},
            {"dim_coker_T_G", rep.dim_coker_T_G},
            {"cokernel_dims_equal", rep.cokernel_dims_equal},
            {"note", "cokernel and index comparisons depend on the truncation and are not pass criteria"}}},
      {"factorization", factorization_json(rep.factorization)},
      {"codomain_probes", splits}};

  ctx.checks.holds("kernel_dims_equal", rep.kernel_dims_equal,
                   json{{"dim_ker_A", rep.dim_ker_A}, {"dim_ker_T_G", rep.dim_ker_T_G}});
  ctx.checks.below("kernel_projection_angle", rep.projection.principal_angle, rep.projection.threshold);
  factorization_checks(ctx.checks, rep.factorization);
  if (probes > 0) ctx.checks.below("codomain_reassembly_residual", worst, threshold);
}

void task_lp_diagnose(Context& ctx) {
  const auto& p = ctx.problem.payload;
  const std::string task = "lp-diagnose";
  io::require_keys(p, {"zeros", "zeta", "p", "K", "expect"}, task);
  const auto& zj = payload_field(p, "zeros", task);
  io::require_keys(zj, {"kind", "values"}, task + ".zeros");
  const auto& kind = io::field(zj, "kind", task + ".zeros");
  const cplx zeta = io::complex_from_json(payload_field(p, "zeta", task));
  const int K = opt_int(p, "K", task).value_or(1000000);

  std::vector<double> ps;
  const auto& pj = payload_field(p, "p", task);
  if (pj.is_array()) {
    for (const auto& x : pj) ps.push_back(io::number(x, task + ".p"));
  } else {
    ps.push_back(io::number(pj, task + ".p"));
  }
  if (ps.empty()) throw InputError(task + ".p: need at least one exponent");
  std::vector<std::string> expect;
  if (p.contains("expect")) {
    const auto& ej = p.at("expect");
    if (!ej.is_array() || ej.size() != ps.size()) throw InputError(task + ".expect: one verdict per exponent");
    for (const auto& e : ej) {
      if (!e.is_string()) throw InputError(task + ".expect: verdicts are strings");
      expect.push_back(e.get<std::string>());
    }
  }

  json runs = json::array();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    LpDiagnostic d;
    if (kind == "critical") {
      if (K < 10) throw InputError(task + ".K: need K >= 10");
      d = lp_membership_diagnostic(critical_zero_sequence(), zeta, ps[i], static_cast<std::size_t>(K));
    } else if (kind == "dyadic") {
      if (K < 10 || K > 1000) throw InputError(task + ".K: the dyadic sequence needs 10 <= K <= 1000");
      ZeroSequence seq = [](std::size_t k) { return PolarZero{std::ldexp(1.0, -static_cast<int>(k)), 0.0}; };
      d = lp_membership_diagnostic(seq, zeta, ps[i], static_cast<std::size_t>(K));
    } else if (kind == "finite") {
      std::vector<cplx> zs;
      const auto& vs = io::field(zj, "values", task + ".zeros");
      if (!vs.is_array()) throw InputError(task + ".zeros.values: expected an array");
      for (const auto& z : vs) zs.push_back(io::complex_from_json(z));
      d = lp_membership_diagnostic(zs, zeta, ps[i]);
    } else {
      throw InputError(task + ".zeros.kind: expected critical, dyadic or finite");
    }
    json cps = json::array();
    for (auto c : d.checkpoints) cps.push_back(c);
    runs.push_back(json{{"p", ps[i]},
                        {"checkpoints", cps},
                        {"partial_sums", d.partial_sums},
                        {"growth_ratios", d.growth_ratios},
                        {"tail_estimate", d.tail_estimate ? json(*d.tail_estimate) : json("unbounded-trend")},
                        {"decay_exponent", d.decay_exponent},
                        {"monotone_tail", d.monotone_tail},
                        {"verdict", to_string(d.verdict)}});
    if (!expect.empty()) {
      ctx.checks.holds("verdict[p=" + csv_number(ps[i]) + "]", to_string(d.verdict) == expect[i],
                       json{{"expected", expect[i]}, {"actual", to_string(d.verdict)}});
    }
  }
  ctx.resolved["K"] = K;
  ctx.result = json{{"runs", runs},
                    {"note", "divergence is reported only as a growth trend, never as a proven fact"}};
}

void task_wh_solve(Context& ctx) {
  const auto& p = ctx.problem.payload;
  const std::string task = "wh-solve";
  io::require_keys(p, {"kernel", "input", "grid", "convergence", "equivalence", "convention"}, task);
  if (!p.contains("kernel") && !p.contains("equivalence")) {
    throw InputError(task + ": payload needs a kernel or an equivalence block");
  }
  const auto convention = resolved_convention(ctx);
  if (convention && !p.contains("kernel")) throw InputError("--convention needs a kernel");
  if (ctx.flags.csv && !p.contains("kernel")) throw InputError("--csv needs a kernel");
  if (convention) ctx.resolved["convention"] = to_string(*convention);

  if (p.contains("kernel")) {
    const auto G = kernel_from_json(p.at("kernel"), convention);
    const int M = resolved_grid(ctx, "grid", 200);
    std::vector<double> lengths;
    for (Index i = 0; i < G.n(); ++i) lengths.push_back(G.length(i));
    const auto k = function_from_json(payload_field(p, "input", task), G.n(), lengths);
    const auto w = wh_apply(G, k, M);
    ctx.resolved["grid"] = M;
    ctx.result["solution"] = grid_json(w);
    ctx.result["solution"]["M"] = M;
    bool convergence = false;
    if (p.contains("convergence")) {
      if (!p.at("convergence").is_boolean()) throw InputError(task + ".convergence: expected a boolean");
      convergence = p.at("convergence").get<bool>();
    }
    if (convergence) {
      const auto c = wh_self_convergence(G, k, M);
      ctx.result["convergence"] =
          json{{"M", c.M}, {"error_M", c.error_M}, {"error_2M", c.error_2M}, {"ratio", c.ratio}};
      ctx.checks.above("convergence_ratio", c.ratio, 3.5);
    }
    if (ctx.flags.csv) {
      std::ostringstream s;
      s << "component,x,re,im\n";
      for (Index i = 0; i < w.n(); ++i) {
        for (int l = 0; l <= w.M; ++l) {
          const cplx v = w.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
          s << i << ',' << csv_number(w.node(i, l)) << ',' << csv_number(v.real()) << ',' << csv_number(v.imag())
            << '\n';
        }
      }
      ctx.csv = s.str();
    }
  } else if (p.contains("input")) {
    throw InputError(task + ": input given without a kernel");
  }

  if (p.contains("equivalence")) {
    const auto& e = p.at("equivalence");
    const std::string where = task + ".equivalence";
    io::require_keys(e, {"pairs", "a", "M", "L", "refinements", "threshold", "input"}, where);
    const auto pairs = pairs_from_json(io::field(e, "pairs", where), where + ".pairs");
    const double a = opt_number(e, "a", 1.0, where);
    const int M = opt_int(e, "M", where).value_or(1 << 14);
    const double L = opt_number(e, "L", 8.0 * a, where);
    const int refinements = opt_int(e, "refinements", where).value_or(2);
    const double threshold = opt_number(e, "threshold", 1e-3, where);
    if (refinements < 0 || refinements > 4) throw InputError(where + ".refinements: expected 0..4");
    const auto n = static_cast<Index>(pairs.size());
    const json input = e.contains("input") ? e.at("input") : json{{"kind", "bump"}};
    const auto k = function_from_json(input, n, std::vector<double>(static_cast<std::size_t>(n), a));
    const auto r = unitary_equivalence_check(pairs, k, a, M, L, refinements, threshold);
    json levels = json::array();
    for (const auto& l : r.levels) {
      levels.push_back(json{{"M", l.M}, {"L", l.L}, {"dx", l.dx}, {"discrepancy", l.discrepancy}});
    }
    ctx.resolved["equivalence"] = json{{"pairs", pairs_json(pairs)}, {"a", a},         {"M", M},
                                       {"L", L},                    {"refinements", refinements},
                                       {"threshold", threshold},    {"input", input}};
    ctx.result["equivalence"] = json{{"levels", levels}, {"decreasing", r.decreasing}};
    ctx.checks.below("equivalence_discrepancy", r.levels.front().discrepancy, threshold);
    ctx.checks.holds("equivalence_decreasing", r.decreasing);
  }
}

StateSpaceSystem system_from_json(const json& j) {
  const std::string where = "system";
  io::require_keys(j, {"A", "B", "C", "D", "v0", "horizon"}, where);
  StateSpaceSystem s;
  s.A = io::matrix_from_json(io::field(j, "A", where));
  const Index n = s.A.rows();
  s.B = j.contains("B") ? io::matrix_from_json(j.at("B")) : Mat::Identity(n, n);
  s.C = j.contains("C") ? io::matrix_from_json(j.at("C")) : Mat::Identity(n, n);
  s.D = j.contains("D") ? io::matrix_from_json(j.at("D")) : Mat::Zero(n, n);
  s.v0 = j.contains("v0") ? io::vector_from_json(j.at("v0")) : Vec::Zero(n);
  s.horizon = opt_number(j, "horizon", 1.0, where);
  s.validate();
  return s;
}

json system_json(const StateSpaceSystem& s) {
  return json{{"A", io::to_json(s.A)}, {"B", io::to_json(s.B)},   {"C", io::to_json(s.C)},
              {"D", io::to_json(s.D)}, {"v0", io::to_json(s.v0)}, {"horizon", s.horizon}};
}

void task_mimo_sim(Context& ctx) {
  const auto& p = ctx.problem.payload;
  const std::string task = "mimo-sim";
  io::require_keys(p, {"system", "input", "grid", "rk4_steps", "convention", "tolerance"}, task);
  const auto sys = system_from_json(payload_field(p, "system", task));
  const Index n = sys.A.rows();
  const auto u = function_from_json(payload_field(p, "input", task), n,
                                    std::vector<double>(static_cast<std::size_t>(n), sys.horizon));
  const int M = resolved_grid(ctx, "grid", 1000);
  const int steps = opt_int(p, "rk4_steps", task).value_or(10000);
  const double tol = opt_number(p, "tolerance", kMimoTolerance, task);
  const auto requested = resolved_convention(ctx);

  const auto rep = mimo_report(sys, u, M, steps, requested, tol);
  const auto& sol = rep.solution;

  const auto zero = [n](double) -> Vec { return Vec::Zero(n); };
  const auto hom = mimo_solve(sys, zero, M, sol.convention);
  const auto hom_rk = ode_oracle(sys, zero, steps);
  double num = 0.0;
  double den = 0.0;
  for (int l = 0; l <= M; ++l) {
    const Vec& ref = hom_rk[static_cast<std::size_t>(l * (steps / M))];
    num += (hom.v[static_cast<std::size_t>(l)] - ref).squaredNorm();
    den += ref.squaredNorm();
  }
  const double hom_err = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);

  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(json{{"convention", to_string(c.convention)},
                          {"rk4_relative_error", c.rk4_relative_error},
                          {"state_residual", c.state_residual},
                          {"satisfies_state_equation", c.satisfies_state_equation}});
  }
  json xs = json::array();
  json vs = json::array();
  json ys = json::array();
  for (std::size_t l = 0; l < sol.x.size(); ++l) {
    xs.push_back(sol.x[l]);
    vs.push_back(io::to_json(sol.v[l]));
    ys.push_back(io::to_json(sol.y[l]));
  }

  ctx.resolved["system"] = system_json(sys);
  ctx.resolved["grid"] = M;
  ctx.resolved["rk4_steps"] = steps;
  ctx.resolved["tolerance"] = tol;
  ctx.resolved["convention"] = requested ? json(to_string(*requested)) : json("adjudicated");
  ctx.result = json{{"conventions", checks},
                    {"adjudicated", rep.adjudicated ? json(to_string(*rep.adjudicated)) : json(nullptr)},
                    {"solution_convention", to_string(sol.convention)},
                    {"homogeneous_relative_error", hom_err},
                    {"solution", json{{"x", xs}, {"v", vs}, {"y", ys}}}};

  const auto& chosen = rep.checks[sol.convention == Convention::causal ? 0 : 1];
  ctx.checks.holds("state_equation_adjudicated", rep.adjudicated.has_value());
  ctx.checks.below("rk4_relative_error", chosen.rk4_relative_error, tol);
  ctx.checks.below("homogeneous_relative_error", hom_err, 1e-8);

  if (ctx.flags.csv) {
    std::ostringstream s;
    s << 'x';
    for (Index i = 0; i < n; ++i) s << ",v" << i << "_re,v" << i << "_im";
    for (Index i = 0; i < n; ++i) s << ",y" << i << "_re,y" << i << "_im";
    s << '\n';
    for (std::size_t l = 0; l < sol.x.size(); ++l) {
      s << csv_number(sol.x[l]);
      for (Index i = 0; i < n; ++i) s << ',' << csv_number(sol.v[l](i).real()) << ',' << csv_number(sol.v[l](i).imag());
      for (Index i = 0; i < n; ++i) s << ',' << csv_number(sol.y[l](i).real()) << ',' << csv_number(sol.y[l](i).imag());
      s << '\n';
    }
    ctx.csv = s.str();
  }
}

/// Theta = diag(z^2, z^2), G = diag(z, z).
json section3_example(Checks& c) {
  const ModelSpace ms(MatrixInner::diagonal_monomials({2, 2}));
  const MatrixSymbol G = MatrixSymbol::monomial(Mat::Identity(2, 2), 1);
  const Index n = 2;

  // Action on the model basis: e_i z^j -> e_i z^{j+1} for j = 0, zero for j = 1.
  const auto op = assemble_mtto(ms, G);
  Mat expected(ms.dim(), ms.dim());
  for (Index j = 0; j < ms.dim(); ++j) {
    const TrigPoly& e = ms.basis().vectors[static_cast<std::size_t>(j)];
    TrigPoly img(n);
    if (e.hi() == 0) img = shift(e, 1);
    expected.col(j) = ms.basis_coords(img);
  }
  const double action = (op.matrix - expected).norm();

  const auto ker = kernel(op);
  const auto M = kernel_subspace(ms, ker);
  const PolyWindow w{n, 0, 2};
  const auto analytic = PolySubspace::from_functions(w, {TrigPoly::unit(n, 0, 1), TrigPoly::unit(n, 1, 1)});
  const double angle = M.dim() == 2 ? max_principal_angle(embed(M, w), analytic.space.basis) : std::numbers::pi / 2;

  const TrigPoly f1 = TrigPoly::unit(n, 0, 1);
  const TrigPoly f2 = lift_kernel_witness(ms, G, f1);
  const double witness = l2_norm(f2 + TrigPoly::unit(n, 0, 0)) + l2_norm(mul(G, f1) + ms.apply_theta(f2));

  const auto a = analyze_near_invariance(ms, G);
  const auto expected_defect =
      PolySubspace::from_functions({n, 0, 0}, {TrigPoly::unit(n, 0, 0), TrigPoly::unit(n, 1, 0)});
  const double expected_cert = certify_near_invariance(M, expected_defect);
  const auto& r = a.report;
  const PolyWindow dw = common_window(r.defect, expected_defect);
  const double defect_angle =
      r.defect_dim == 2 ? max_principal_angle(embed(r.defect, dw), embed(expected_defect, dw)) : std::numbers::pi / 2;

  // F = (lambda z, mu z) -> (k1, k2) = coordinates of (lambda, mu) in the defect basis.
  const cplx lambda(0.6, -0.2);
  const cplx mu(-0.3, 0.7);
  Vec lm(2);
  lm << lambda, mu;
  const TrigPoly F = TrigPoly::monomial(lm, 1);
  double coeff_residual = 0.0;
  if (r.defect_dim == 2) {
    Vec k(2);
    for (Index j = 0; j < 2; ++j) k(j) = inner_product(TrigPoly::monomial(lm, 0), r.e[static_cast<std::size_t>(j)]);
    TrigPoly rebuilt(n);
    for (Index j = 0; j < 2; ++j) rebuilt += shift(scale(r.e[static_cast<std::size_t>(j)], k(j)), 1);
    coeff_residual = l2_norm(rebuilt - F) + std::abs(k.squaredNorm() - l2_norm(F) * l2_norm(F));
  }

  const auto proj = verify_kernel_projection(ms, G);

  c.below("section3.mtto_action_residual", action, 1e-12);
  c.holds("section3.kernel_dim_is_2", ker.dim() == 2, json{{"dim", ker.dim()}});
  c.below("section3.kernel_angle_to_analytic", angle, 1e-10);
  c.below("section3.witness_residual", witness, 1e-12);
  c.holds("section3.defect_dim_is_2", a.defect.space.dim() == 2 && r.defect_dim == 2,
          json{{"raw", a.defect.space.dim()}, {"orthogonalized", r.defect_dim}});
  c.below("section3.defect_angle_to_constants", defect_angle, 1e-10);
  c.below("section3.expected_defect_certification", expected_cert, 1e-12);
  c.holds("section3.case_all_vanish_at_0", r.kernel_case == KernelCase::all_vanish_at_zero,
          json{{"case", to_string(r.kernel_case)}});
  c.holds("section3.K_is_constant_pairs", r.K.dim() == 2 && r.terms == 1, json{{"dim_K", r.K.dim()}, {"terms", r.terms}});
  c.below("section3.norm_identity_residual", r.norm_identity_residual, 1e-10);
  c.below("section3.case2_coefficients_residual", coeff_residual, 1e-12);
  c.holds("section3.projection_dims", proj.dim_ker_T_G == 2 && proj.dim_ker_A == 2,
          json{{"dim_ker_T_G", proj.dim_ker_T_G}, {"dim_ker_A", proj.dim_ker_A}});
  c.below("section3.projection_angle", proj.principal_angle, 1e-10);

  return json{{"theta", io::to_json(ms.theta())},
              {"G", io::to_json(G)},
              {"matrix", io::to_json(op.matrix)},
              {"kernel_basis", io::to_json(M)},
              {"witness_f2", io::to_json(f2)},
              {"near_invariance", near_invariance_json(a)},
              {"kernel_projection",
               json{{"principal_angle", proj.principal_angle},
                    {"dim_ker_T_G", proj.dim_ker_T_G},
                    {"dim_ker_A", proj.dim_ker_A}}}};
}

void task_paper_examples(Context& ctx) {
  const auto& p = ctx.problem.payload;
  const std::string task = "paper-examples";
  io::require_keys(p, {"examples"}, task);
  const auto& ex = payload_field(p, "examples", task);
  if (!ex.is_array() || ex.empty()) throw InputError(task + ".examples: expected a nonempty array");
  for (const auto& e : ex) {
    if (e == "section3-example") {
      ctx.result[e.get<std::string>()] = section3_example(ctx.checks);
    } else {
      throw InputError(task + ".examples: unknown example " + e.dump());
    }
  }
}

void check_flag_conflicts(const std::string& task, const Flags& f) {
  if (f.convention && task != "mimo-sim" && task != "wh-solve") {
    throw InputError("--convention is only valid for mimo-sim and wh-solve");
  }
  if (f.grid && (task == "near-invariance" || task == "lp-diagnose" || task == "paper-examples")) {
    throw InputError("--grid is not valid for " + task);
  }
  if (f.grid && *f.grid < 8) throw InputError("--grid must be at least 8");
  if (f.csv && task != "mimo-sim" && task != "wh-solve") throw InputError("--csv is only valid for mimo-sim and wh-solve");
  if (f.tol && !(*f.tol > 0.0)) throw InputError("--tol must be positive");
  if (f.json_indent < -1 || f.json_indent > 16) throw InputError("--json-indent must lie in [-1, 16]");
}

json error_object(const char* kind, const std::string& message, int code) {
  return json{{"error", json{{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

std::string dump(const json& j, int indent) { return j.dump(indent < 0 ? -1 : indent) + "\n"; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("problem file is not valid JSON: " + std::string(e.what()));
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

bool is_task(const std::string& name) {
  const auto& t = task_names();
  return std::find(t.begin(), t.end(), name) != t.end();
}

ProblemFile ProblemFile::parse(const json& j) {
  const std::string where = "problem";
  io::require_keys(j, {"schema_version", "task", "seed", "payload", "tolerances"}, where);
  ProblemFile pf;
  const auto& v = io::field(j, "schema_version", where);
  if (!v.is_string() || v.get<std::string>() != kSchemaVersion) {
    throw InputError(where + ": unsupported schema_version (expected \"" + std::string(kSchemaVersion) + "\")");
  }
  const auto& t = io::field(j, "task", where);
  if (!t.is_string() || !is_task(t.get<std::string>())) throw InputError(where + ": unknown task");
  pf.task = t.get<std::string>();
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw InputError(where + ".seed: expected an unsigned integer");
    pf.seed = j.at("seed").get<std::uint64_t>();
  }
  pf.payload = io::field(j, "payload", where);
  if (!pf.payload.is_object() || pf.payload.empty()) throw InputError(where + ".payload: must be a nonempty object");
  if (j.contains("tolerances")) {
    const auto& tj = j.at("tolerances");
    io::require_keys(tj, {"pass"}, where + ".tolerances");
    if (tj.contains("pass")) {
      const double t = io::number(tj.at("pass"), where + ".tolerances.pass");
      if (!(t > 0.0)) throw InputError(where + ".tolerances.pass: must be positive");
      pf.pass_tolerance = t;
    }
  }
  return pf;
}

ProblemFile default_paper_examples() {
  ProblemFile pf;
  pf.task = "paper-examples";
  pf.payload = json{{"examples", json::array({"section3-example"})}};
  return pf;
}

json run(const ProblemFile& problem, const Flags& flags) {
  check_flag_conflicts(problem.task, flags);
  ProblemFile pf = problem;
  if (flags.seed) pf.seed = *flags.seed;
  const std::optional<double> tol = flags.tol ? flags.tol : pf.pass_tolerance;

  Context ctx{pf, flags, pf.payload, json::object(), Checks(tol), std::nullopt};
  const auto start = std::chrono::steady_clock::now();
  const auto& t = pf.task;
  if (t == "mtto-kernel") {
    task_mtto_kernel(ctx);
  } else if (t == "near-invariance") {
    task_near_invariance(ctx);
  } else if (t == "eae-verify") {
    task_eae_verify(ctx);
  } else if (t == "lp-diagnose") {
    task_lp_diagnose(ctx);
  } else if (t == "wh-solve") {
    task_wh_solve(ctx);
  } else if (t == "mimo-sim") {
    task_mimo_sim(ctx);
  } else if (t == "paper-examples") {
    task_paper_examples(ctx);
  } else {
    throw InputError("unknown task " + t);
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (ctx.csv) write_file(*flags.csv, *ctx.csv);

  json report{{"tool", json{{"name", kToolName}, {"version", kToolVersion}}},
              {"task", t},
              {"config",
               json{{"schema_version", pf.schema_version},
                    {"seed", pf.seed},
                    {"pass_tolerance_override", tol ? json(*tol) : json(nullptr)},
                    {"json_indent", flags.json_indent},
                    {"csv", flags.csv ? json(*flags.csv) : json(nullptr)},
                    {"payload", ctx.resolved}}},
              {"result", ctx.result},
              {"checks", ctx.checks.list()},
              {"pass", ctx.checks.all()}};
  if (flags.timings) report["timings"] = json{{"wall_seconds", elapsed}};
  return report;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical workbench for matrix-valued truncated Toeplitz operators"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Flags flags;
  std::string out_path;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int grid = 0;
  std::string convention;
  std::string csv_path;
  auto* o_out = app.add_option("--out", out_path, "Write the report to PATH instead of standard output");
  auto* o_seed = app.add_option("--seed", seed, "Random seed (overrides the problem file)");
  auto* o_tol = app.add_option("--tol", tol, "Replace every residual pass bar by this value");
  auto* o_grid = app.add_option("--grid", grid, "Grid size M");
  app.add_option("--json-indent", flags.json_indent, "JSON indentation (-1 for compact)")->capture_default_str();
  auto* o_conv = app.add_option("--convention", convention, "Indicator convention")
                     ->check(CLI::IsMember({"causal", "paper-literal"}));
  auto* o_csv = app.add_option("--csv", csv_path, "CSV sidecar with grid data (mimo-sim, wh-solve)");
  app.add_flag("--timings", flags.timings, "Include wall-clock timings in the report");
  app.fallthrough();

  std::string problem_path;
  std::string subcommand;
  for (const auto& name : task_names()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " task");
    auto* pos = sub->add_option("problem", problem_path, "Problem file (JSON)");
    if (name != "paper-examples") pos->required();
    sub->fallthrough();
    sub->callback([&subcommand, name] { subcommand = name; });
  }
  auto* run_cmd = app.add_subcommand("run", "Run the task named in the problem file");
  run_cmd->add_option("problem", problem_path, "Problem file (JSON)")->required();
  run_cmd->fallthrough();
  run_cmd->callback([&subcommand] { subcommand = "run"; });

  auto emit_error = [&](const char* kind, const std::string& msg, int code) {
    out << dump(error_object(kind, msg, code), flags.json_indent < 0 ? -1 : flags.json_indent);
    err << kToolName << ": " << kind << " error: " << msg << '\n';
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return emit_error("input", e.what(), kExitInput);
  }

  if (o_out->count() > 0) flags.out = out_path;
  if (o_seed->count() > 0) flags.seed = seed;
  if (o_tol->count() > 0) flags.tol = tol;
  if (o_grid->count() > 0) flags.grid = grid;
  if (o_conv->count() > 0) flags.convention = convention;
  if (o_csv->count() > 0) flags.csv = csv_path;

  try {
    ProblemFile pf;
    if (problem_path.empty()) {
      pf = default_paper_examples();
    } else {
      pf = ProblemFile::parse(read_json_file(problem_path));
    }
    if (subcommand != "run" && pf.task != subcommand) {
      throw InputError("problem file task '" + pf.task + "' does not match subcommand '" + subcommand + "'");
    }
    const std::string text = dump(run(pf, flags), flags.json_indent);
    if (flags.out) {
      write_file(*flags.out, text);
    } else {
      out << text;
    }
    return kExitOk;
  } catch (const InputError& e) {
    return emit_error("input", e.what(), kExitInput);
  } catch (const NumericalError& e) {
    return emit_error("numerical", e.what(), kExitNumerical);
  } catch (const json::exception& e) {
    return emit_error("input", e.what(), kExitInput);
  } catch (const std::exception& e) {
    return emit_error("numerical", e.what(), kExitNumerical);
  }
}

}  // namespace mttokit::cli
