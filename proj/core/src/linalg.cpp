#include "mttokit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace mttokit {

std::vector<TrigPoly> PolySubspace::functions() const {
  std::vector<TrigPoly> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (Index j = 0; j < dim(); ++j) out.push_back(window.poly(space.basis.col(j)));
  return out;
}

PolySubspace PolySubspace::from_functions(const PolyWindow& window, const std::vector<TrigPoly>& fs, double rel_tol) {
  Mat a(window.size(), static_cast<Index>(fs.size()));
  for (std::size_t j = 0; j < fs.size(); ++j) a.col(static_cast<Index>(j)) = window.coords(fs[j]);
  if (fs.empty()) return {window, {Mat(window.size(), 0), rel_tol}};
  return {window, range_space(a, rel_tol)};
}

SingularSystem singular_system(const Mat& a) {
  SingularSystem s;
  if (a.rows() == 0 || a.cols() == 0) {
    s.values = Eigen::VectorXd::Zero(0);
    s.V = Mat::Identity(a.cols(), a.cols());
    s.U = Mat(a.rows(), 0);
    return s;
  }
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV | Eigen::ComputeThinU);
  Eigen::VectorXd raw = svd.singularValues();
  Mat V = svd.matrixV();
  Mat U = svd.matrixU();
  // BDCSVD can return wrong vectors after deflation; fall back to one-sided Jacobi.
  const Index p = raw.size();
  const double smax = p > 0 ? raw.maxCoeff() : 0.0;
  const double v_err = (V.adjoint() * V - Mat::Identity(V.cols(), V.cols())).norm();
  const double r_err = (a * V.leftCols(p) - U * raw.asDiagonal()).norm() + (a * V.rightCols(V.cols() - p)).norm();
  if (!(v_err < 1e-10) || !(r_err <= 1e-10 * std::max(smax, 1e-300))) {
    Eigen::JacobiSVD<Mat> jac(a, Eigen::ComputeFullV | Eigen::ComputeThinU);
    raw = jac.singularValues();
    V = jac.matrixV();
    U = jac.matrixU();
  }
  std::vector<Index> order(static_cast<std::size_t>(raw.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return raw(i) > raw(j); });
  s.values.resize(raw.size());
  s.V = V;
  s.U.resize(U.rows(), U.cols());
  for (Index k = 0; k < raw.size(); ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    s.values(k) = raw(src);
    s.V.col(k) = V.col(src);
    s.U.col(k) = U.col(src);
  }
  return s;
}

double default_rank_tol(const Mat& a, double sigma_max) {
  return static_cast<double>(std::max(a.rows(), a.cols())) * std::numeric_limits<double>::epsilon() * sigma_max;
}

double truncated_rank_tol(const Mat& a, double tail) {
  if (a.size() == 0) return 0.0;
  const double smax = singular_system(a).values(0);
  return default_rank_tol(a, smax) + 100.0 * tail * smax;
}

Subspace null_space(const Mat& a, std::optional<double> tol) {
  const auto s = singular_system(a);
  const double smax = s.values.size() > 0 ? s.values(0) : 0.0;
  const double t = tol.value_or(default_rank_tol(a, smax));
  Index rank = 0;
  while (rank < s.values.size() && s.values(rank) > t) ++rank;
  Mat z = s.V.rightCols(a.cols() - rank);
  return {canonical_basis(z), t};
}

Subspace range_space(const Mat& a, double rel_tol) {
  if (a.cols() == 0) return {Mat(a.rows(), 0), rel_tol};
  const auto s = singular_system(a);
  const double smax = s.values.size() > 0 ? s.values(0) : 0.0;
  Index rank = 0;
  while (rank < s.values.size() && s.values(rank) > rel_tol * smax && s.values(rank) > 0.0) ++rank;
  return {canonical_basis(s.U.leftCols(rank)), rel_tol};
}

void fix_phase(Eigen::Ref<Vec> v, double tol) {
  const double scale = v.norm();
  for (Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > tol * std::max(1.0, scale)) {
      v *= std::conj(v(i)) / m;
      v(i) = m;
      return;
    }
  }
}

Mat canonical_basis(const Mat& q) {
  const Index d = q.cols();
  const Index m = q.rows();
  if (d == 0) return q;
  // Columns of c are the coordinate axes projected onto span(q), in q-coordinates.
  Mat c = q.adjoint();
  Mat u(d, d);
  for (Index step = 0; step < d; ++step) {
    Index pivot = 0;
    double best = -1.0;
    for (Index j = 0; j < m; ++j) {
      const double nrm = c.col(j).norm();
      if (nrm > best * (1.0 + 1e-9)) {
        best = nrm;
        pivot = j;
      }
    }
    Vec w = c.col(pivot) / best;
    for (Index k = 0; k < step; ++k) w -= u.col(k) * u.col(k).dot(w);
    w.normalize();
    u.col(step) = w;
    c -= w * (w.adjoint() * c);
  }
  Mat out = q * u;
  for (Index j = 0; j < d; ++j) fix_phase(out.col(j));
  return out;
}

double max_principal_angle(const Mat& q1, const Mat& q2) {
  if (q1.cols() != q2.cols()) return std::numbers::pi / 2;
  if (q1.cols() == 0) return 0.0;
  const Mat r1 = q2 - q1 * (q1.adjoint() * q2);
  const Mat r2 = q1 - q2 * (q2.adjoint() * q1);
  const double s = std::max(singular_system(r1).values(0), singular_system(r2).values(0));
  return std::asin(std::min(1.0, s));
}

std::vector<double> principal_angles(const Mat& q1, const Mat& q2) {
  const Index k = std::min(q1.cols(), q2.cols());
  std::vector<double> out;
  if (k == 0) return out;
  const auto s = singular_system(q1.adjoint() * q2);
  for (Index i = 0; i < k; ++i) out.push_back(std::acos(std::clamp(s.values(i), 0.0, 1.0)));
  std::sort(out.begin(), out.end());
  return out;
}

double distance_to_span(const Mat& q, const Vec& v) {
  if (q.cols() == 0) return v.norm();
  return (v - q * (q.adjoint() * v)).norm();
}

Mat orthonormal_union(const Mat& a, const Mat& b, double rel_tol) {
  Mat ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return range_space(ab, rel_tol).basis;
}

Mat orthogonal_complement_in(const Mat& q, const Mat& a, double rel_tol) {
  if (a.cols() == 0) return a;
  Mat r = q.cols() > 0 ? Mat(a - q * (q.adjoint() * a)) : a;
  // Relative to the input scale so that vectors already inside span(q) drop out.
  const double scale = std::max(1.0, singular_system(a).values(0));
  const auto s = singular_system(r);
  Index rank = 0;
  while (rank < s.values.size() && s.values(rank) > rel_tol * scale) ++rank;
  return canonical_basis(s.U.leftCols(rank));
}

}  // namespace mttokit
