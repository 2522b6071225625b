#pragma once

// Deterministic random instances shared by the unit and acceptance tests.

#include <cstdint>
#include <random>
#include <vector>

#include "mttokit/fourier.hpp"
#include "mttokit/linalg.hpp"
#include "mttokit/model_space.hpp"

namespace mttokit::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0; }
  cplx complex() {
    const double re = uniform();
    return {re, uniform()};
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Vec vec(Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex();
    return v;
  }
  Mat mat(Index r, Index c) {
    Mat m(r, c);
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j < c; ++j) m(i, j) = complex();
    }
    return m;
  }
  Mat unitary(Index n) {
    Eigen::HouseholderQR<Mat> qr(mat(n, n));
    return qr.householderQ() * Mat::Identity(n, n);
  }
  TrigPoly poly(Index n, int lo, int hi) {
    std::vector<Vec> c;
    for (int k = lo; k <= hi; ++k) c.push_back(vec(n));
    return {lo, std::move(c)};
  }
  MatrixSymbol symbol(Index n, int lo, int hi) {
    std::vector<Mat> c;
    for (int k = lo; k <= hi; ++k) c.push_back(mat(n, n));
    return {lo, std::move(c)};
  }

 private:
  std::mt19937_64 engine_;
};

struct Instance {
  std::uint64_t seed = 0;
  std::vector<int> powers;
  MatrixInner theta;
  MatrixSymbol G;
  int family = 0;
};

/// n in {1,2,3}, monomial Theta with sum k_i in [1, 12], G of degree <= 4 drawn from
/// four families: general Laurent, shifted analytic, rank one, anti-analytic.
inline Instance random_instance(std::uint64_t seed) {
  Rng rng(seed * 7919 + 17);
  const Index n = 1 + static_cast<Index>(seed % 3);
  std::vector<int> powers(static_cast<std::size_t>(n));
  int total = 0;
  for (auto& k : powers) {
    k = rng.integer(0, 4);
    total += k;
  }
  if (total == 0) powers[0] = 1 + rng.integer(0, 3);
  const int family = static_cast<int>((seed / 3) % 4);
  MatrixSymbol G;
  switch (family) {
    case 0: {
      const int d1 = rng.integer(0, 2);
      const int d2 = rng.integer(0, 4 - d1);
      G = rng.symbol(n, -d1, d2);
      break;
    }
    case 1: {
      const int s = rng.integer(1, 3);
      G = rng.symbol(n, s, s + rng.integer(0, 4 - s));
      break;
    }
    case 2: {
      const Vec u = rng.vec(n);
      const Vec v = rng.vec(n);
      const int lo = -rng.integer(0, 2);
      const TrigPoly p = rng.poly(1, lo, lo + rng.integer(0, 2));
      std::vector<Mat> c;
      for (const auto& pk : p.coeffs()) c.push_back(pk(0) * u * v.adjoint());
      G = MatrixSymbol(p.lo(), std::move(c));
      break;
    }
    default: {
      const int s = rng.integer(1, 3);
      G = rng.symbol(n, -s - rng.integer(0, 4 - s), -s);
      break;
    }
  }
  return {seed, powers, MatrixInner::diagonal_monomials(powers), G, family};
}

/// M = {F0 k0 + z E (k1..km) : (k0, k1..km) in K} with constant orthonormal columns
/// F0 (n x r) and E (n x m), and K = U K_{diag(z^{d_i})} for a random unitary U.
struct SyntheticNearlyInvariant {
  Index n = 1;
  Index r = 0;
  Index m = 0;
  Mat E;
  PolySubspace M;
  PolySubspace D;
  std::vector<TrigPoly> K;  // basis tuples of dimension r + m
};

inline SyntheticNearlyInvariant synthetic_nearly_invariant(std::uint64_t seed) {
  Rng rng(seed * 104729 + 3);
  SyntheticNearlyInvariant s;
  s.n = 1 + static_cast<Index>(seed % 3);
  s.m = rng.integer(0, static_cast<int>(s.n));
  s.r = rng.integer(0, static_cast<int>(s.n - s.m));
  if (s.r + s.m == 0) s.m = 1;
  const Index c = s.r + s.m;
  const Mat Q = rng.unitary(s.n);
  const Mat F0 = Q.leftCols(s.r);
  s.E = Q.middleCols(s.r, s.m);
  std::vector<int> d(static_cast<std::size_t>(c));
  int total = 0;
  for (auto& di : d) {
    di = rng.integer(0, 3);
    total += di;
  }
  if (total == 0) d[0] = 2;
  const Mat U = rng.unitary(c);
  std::vector<TrigPoly> fs;
  for (Index i = 0; i < c; ++i) {
    for (int j = 0; j < d[static_cast<std::size_t>(i)]; ++j) {
      const TrigPoly k = TrigPoly::monomial(U.col(i), j);
      s.K.push_back(k);
      TrigPoly F(s.n);
      if (s.r == 0) {
        F = shift(mul(s.E, k), 1);
      } else if (s.m == 0) {
        F = mul(F0, k);
      } else {
        const auto parts = split(k, {s.r, s.m});
        F = mul(F0, parts[0]) + shift(mul(s.E, parts[1]), 1);
      }
      fs.push_back(F);
    }
  }
  s.M = PolySubspace::from_functions({s.n, 0, 4}, fs);
  std::vector<TrigPoly> es;
  for (Index j = 0; j < s.m; ++j) es.push_back(TrigPoly::monomial(s.E.col(j), 0));
  s.D = PolySubspace::from_functions({s.n, 0, 0}, es);
  return s;
}

}  // namespace mttokit::testing
