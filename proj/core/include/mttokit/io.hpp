#pragma once

// JSON encodings of the core value types.
//
//   complex       : number or [re, im]
//   matrix        : [[entry, ...], ...] (rows)
//   TrigPoly      : {"dim": n, "lo": l, "hi": h, "coeffs": [c_l[0], ..., c_l[n-1], c_{l+1}[0], ...]}
//   MatrixSymbol  : {"rows": r, "cols": c, "lo": l, "hi": h, "coeffs": [...]}, k-major, entries
//                   row-major within each coefficient; "dim": n abbreviates rows = cols = n
//   MatrixInner   : {"n": n, "left": matrix, "right": matrix,
//                    "diag": [{"kind": "monomial", "k": 2} |
//                             {"kind": "blaschke", "zeros": [...], "rotation": complex}]}
//
// Readers reject unknown keys and malformed values with InputError.

#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "mttokit/fourier.hpp"
#include "mttokit/linalg.hpp"
#include "mttokit/model_space.hpp"

namespace mttokit::io {

using json = nlohmann::ordered_json;

/// Throws InputError naming `where` if j has keys outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where);
/// Throws InputError if `key` is missing.
const json& field(const json& j, const char* key, const std::string& where);

cplx complex_from_json(const json& j);
json to_json(cplx z);
/// Real numbers are written as plain numbers, others as [re, im].
json complex_compact(cplx z);

Mat matrix_from_json(const json& j);
json to_json(const Mat& m);
Vec vector_from_json(const json& j);
json to_json(const Vec& v);
json to_json(const Eigen::VectorXd& v);

TrigPoly trigpoly_from_json(const json& j);
json to_json(const TrigPoly& f);

MatrixSymbol symbol_from_json(const json& j);
json to_json(const MatrixSymbol& m);

ScalarInner scalar_inner_from_json(const json& j);
json to_json(const ScalarInner& s);
MatrixInner inner_from_json(const json& j);
json to_json(const MatrixInner& theta);

/// Subspace as a list of functions.
json to_json(const PolySubspace& s);
json to_json(const std::vector<TrigPoly>& fs);

double number(const json& j, const std::string& where);
int integer(const json& j, const std::string& where);

}  // namespace mttokit::io
