#pragma once

// Dense subspace utilities shared by the operator modules: rank decisions,
// orthonormal bases in a canonical gauge, and principal angles.

#include <optional>
#include <vector>

#include "mttokit/fourier.hpp"

namespace mttokit {

/// Orthonormal column basis together with the rank tolerance it was computed at.
struct Subspace {
  Mat basis;
  double tol = 0.0;

  Index dim() const { return basis.cols(); }
  Index ambient() const { return basis.rows(); }
};

/// Subspace of an analytic polynomial window; columns are PolyWindow coordinates.
struct PolySubspace {
  PolyWindow window;
  Subspace space;

  Index dim() const { return space.dim(); }
  std::vector<TrigPoly> functions() const;
  static PolySubspace from_functions(const PolyWindow& window, const std::vector<TrigPoly>& fs, double rel_tol = 1e-10);
};

struct SingularSystem {
  Eigen::VectorXd values;  // descending
  Mat V;                   // right singular vectors (full)
  Mat U;                   // left singular vectors (thin)
};
SingularSystem singular_system(const Mat& a);

/// max(rows, cols) * eps * sigma_max.
double default_rank_tol(const Mat& a, double sigma_max);

/// Rank tolerance for matrices built from a truncated symbol:
/// max(rows, cols) eps sigma_max + 100 tail sigma_max.
double truncated_rank_tol(const Mat& a, double tail);

/// Null space: right singular vectors with sigma <= tol (default rank tolerance when unset).
Subspace null_space(const Mat& a, std::optional<double> tol = std::nullopt);

/// Column space with singular values above rel_tol * sigma_max.
Subspace range_space(const Mat& a, double rel_tol = 1e-10);

/// Re-expresses an orthonormal basis in the canonical gauge: pivoted
/// Gram-Schmidt against the coordinate axes (largest projected axis first,
/// lowest index on ties), first nonzero coordinate of each vector real-positive.
Mat canonical_basis(const Mat& q);

/// Makes the first coordinate with modulus above tol real and positive.
void fix_phase(Eigen::Ref<Vec> v, double tol = 1e-12);

/// Largest principal angle (radians).  Subspaces of different dimension give pi/2.
double max_principal_angle(const Mat& q1, const Mat& q2);

/// All principal angles in ascending order (min(dim1, dim2) values).
std::vector<double> principal_angles(const Mat& q1, const Mat& q2);

/// Distance from v to the column span of an orthonormal q.
double distance_to_span(const Mat& q, const Vec& v);

/// Orthonormal basis of span(a) + span(b).
Mat orthonormal_union(const Mat& a, const Mat& b, double rel_tol = 1e-10);

/// Component of the columns of a orthogonal to the orthonormal q, re-orthonormalized.
Mat orthogonal_complement_in(const Mat& q, const Mat& a, double rel_tol = 1e-10);

}  // namespace mttokit
