#include "mttokit/io.hpp"

#include <algorithm>
#include <cmath>

namespace mttokit::io {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InputError(where + ": unknown field '" + key + "'");
    }
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(where + ": non-finite number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<int>();
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return number(j, "complex");
  if (j.is_array() && j.size() == 2) return {number(j[0], "complex re"), number(j[1], "complex im")};
  throw InputError("complex: expected a number or [re, im]");
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json complex_compact(cplx z) { return z.imag() == 0.0 ? json(z.real()) : to_json(z); }

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix: expected a nonempty array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw InputError("matrix: rows must be nonempty arrays");
  const auto cols = static_cast<Index>(j[0].size());
  Mat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw InputError("matrix: ragged rows");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json to_json(const Mat& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Vec vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("vector: expected a nonempty array");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

namespace {

std::vector<cplx> flat_coeffs(const json& j, std::size_t expected, const std::string& where) {
  if (!j.is_array() || j.size() != expected) {
    throw InputError(where + ": coeffs must hold " + std::to_string(expected) + " entries");
  }
  std::vector<cplx> out;
  out.reserve(expected);
  for (const auto& c : j) out.push_back(complex_from_json(c));
  return out;
}

void check_window(int lo, int hi, const std::string& where) {
  if (lo > hi) throw InputError(where + ": lo must not exceed hi");
  if (static_cast<long long>(hi) - lo > 100000) throw InputError(where + ": window too wide");
}

}  // namespace

TrigPoly trigpoly_from_json(const json& j) {
  const std::string where = "TrigPoly";
  require_keys(j, {"dim", "lo", "hi", "coeffs"}, where);
  const int n = integer(field(j, "dim", where), where + ".dim");
  const int lo = integer(field(j, "lo", where), where + ".lo");
  const int hi = integer(field(j, "hi", where), where + ".hi");
  if (n <= 0) throw InputError(where + ": dim must be positive");
  check_window(lo, hi, where);
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  const auto c = flat_coeffs(field(j, "coeffs", where), width * static_cast<std::size_t>(n), where);
  std::vector<Vec> coeffs(width, Vec(n));
  for (std::size_t k = 0; k < width; ++k) {
    for (int i = 0; i < n; ++i) coeffs[k](i) = c[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
  }
  return {lo, std::move(coeffs)};
}

json to_json(const TrigPoly& f) {
  json c = json::array();
  for (const auto& v : f.coeffs()) {
    for (Index i = 0; i < v.size(); ++i) c.push_back(to_json(v(i)));
  }
  return json{{"dim", f.dim()}, {"lo", f.lo()}, {"hi", f.hi()}, {"coeffs", std::move(c)}};
}

MatrixSymbol symbol_from_json(const json& j) {
  const std::string where = "MatrixSymbol";
  require_keys(j, {"rows", "cols", "dim", "lo", "hi", "coeffs"}, where);
  int rows = 0;
  int cols = 0;
  if (j.contains("dim")) {
    if (j.contains("rows") || j.contains("cols")) throw InputError(where + ": give either dim or rows/cols");
    rows = cols = integer(j.at("dim"), where + ".dim");
  } else {
    rows = integer(field(j, "rows", where), where + ".rows");
    cols = integer(field(j, "cols", where), where + ".cols");
  }
  if (rows <= 0 || cols <= 0) throw InputError(where + ": sizes must be positive");
  const int lo = integer(field(j, "lo", where), where + ".lo");
  const int hi = integer(field(j, "hi", where), where + ".hi");
  check_window(lo, hi, where);
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  const auto per = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  const auto c = flat_coeffs(field(j, "coeffs", where), width * per, where);
  std::vector<Mat> coeffs(width, Mat(rows, cols));
  for (std::size_t k = 0; k < width; ++k) {
    for (int r = 0; r < rows; ++r) {
      for (int q = 0; q < cols; ++q) {
        coeffs[k](r, q) = c[k * per + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(q)];
      }
    }
  }
  return {lo, std::move(coeffs)};
}

json to_json(const MatrixSymbol& m) {
  json c = json::array();
  for (const auto& mk : m.coeffs()) {
    for (Index r = 0; r < mk.rows(); ++r) {
      for (Index q = 0; q < mk.cols(); ++q) c.push_back(to_json(mk(r, q)));
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"lo", m.lo()}, {"hi", m.hi()}, {"coeffs", std::move(c)}};
}

ScalarInner scalar_inner_from_json(const json& j) {
  const std::string where = "ScalarInner";
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const auto& kind = field(j, "kind", where);
  if (kind == "monomial") {
    require_keys(j, {"kind", "k"}, where);
    const int k = integer(field(j, "k", where), where + ".k");
    if (k < 0) throw InputError(where + ": monomial power must be nonnegative");
    return ScalarInner::monomial(k);
  }
  if (kind == "blaschke") {
    require_keys(j, {"kind", "zeros", "rotation"}, where);
    const auto& zj = field(j, "zeros", where);
    if (!zj.is_array()) throw InputError(where + ": zeros must be an array");
    std::vector<cplx> zeros;
    for (const auto& z : zj) zeros.push_back(complex_from_json(z));
    const cplx rot = j.contains("rotation") ? complex_from_json(j.at("rotation")) : cplx(1.0);
    return ScalarInner::blaschke(std::move(zeros), rot);
  }
  throw InputError(where + ": kind must be 'monomial' or 'blaschke'");
}

json to_json(const ScalarInner& s) {
  if (s.kind() == ScalarInner::Kind::monomial) return json{{"kind", "monomial"}, {"k", s.power()}};
  json zeros = json::array();
  for (const auto z : s.zeros()) zeros.push_back(to_json(z));
  return json{{"kind", "blaschke"}, {"zeros", std::move(zeros)}, {"rotation", to_json(s.rotation())}};
}

MatrixInner inner_from_json(const json& j) {
  const std::string where = "MatrixInner";
  require_keys(j, {"n", "left", "right", "diag"}, where);
  const auto& dj = field(j, "diag", where);
  if (!dj.is_array() || dj.empty()) throw InputError(where + ": diag must be a nonempty array");
  std::vector<ScalarInner> diag;
  for (const auto& d : dj) diag.push_back(scalar_inner_from_json(d));
  const auto n = static_cast<Index>(diag.size());
  if (j.contains("n") && integer(j.at("n"), where + ".n") != n) throw InputError(where + ": n does not match diag");
  const Mat left = j.contains("left") ? matrix_from_json(j.at("left")) : Mat::Identity(n, n);
  const Mat right = j.contains("right") ? matrix_from_json(j.at("right")) : Mat::Identity(n, n);
  return {left, std::move(diag), right};
}

json to_json(const MatrixInner& theta) {
  json diag = json::array();
  for (const auto& d : theta.diag()) diag.push_back(to_json(d));
  return json{{"n", theta.n()}, {"left", to_json(theta.left())}, {"right", to_json(theta.right())}, {"diag", diag}};
}

json to_json(const std::vector<TrigPoly>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(to_json(f));
  return out;
}

json to_json(const PolySubspace& s) { return to_json(s.functions()); }

}  // namespace mttokit::io
