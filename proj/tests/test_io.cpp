#include <gtest/gtest.h>

#include "mttokit/io.hpp"
#include "support.hpp"

namespace mttokit {
namespace {

using io::json;
using testing::Rng;

TEST(Io, ComplexForms) {
  EXPECT_EQ(io::complex_from_json(json(2.5)), cplx(2.5, 0));
  EXPECT_EQ(io::complex_from_json(json::parse("[1, -2]")), cplx(1, -2));
  EXPECT_THROW(io::complex_from_json(json::parse("[1, 2, 3]")), InputError);
  EXPECT_THROW(io::complex_from_json(json("x")), InputError);
  EXPECT_EQ(io::complex_compact(cplx(3, 0)).dump(), "3.0");
}

TEST(Io, TrigPolyRoundTripIsBinaryExact) {
  Rng rng(1);
  const TrigPoly f = rng.poly(3, -2, 4);
  const json j = json::parse(io::to_json(f).dump());
  const TrigPoly g = io::trigpoly_from_json(j);
  EXPECT_EQ(g.lo(), f.lo());
  EXPECT_EQ(g.hi(), f.hi());
  for (int k = f.lo(); k <= f.hi(); ++k) EXPECT_EQ(g.coeff(k), f.coeff(k));
}

TEST(Io, SymbolRoundTripIsBinaryExact) {
  Rng rng(2);
  const MatrixSymbol m = rng.symbol(2, -1, 2);
  const MatrixSymbol r = io::symbol_from_json(json::parse(io::to_json(m).dump()));
  for (int k = m.lo(); k <= m.hi(); ++k) EXPECT_EQ(r.coeff(k), m.coeff(k));
}

TEST(Io, SymbolEntriesAreRowMajor) {
  const MatrixSymbol m = io::symbol_from_json(json::parse(R"({"rows":2,"cols":2,"lo":0,"hi":0,"coeffs":[1,2,3,4]})"));
  EXPECT_EQ(m.coeff(0)(0, 1), cplx(2.0));
  EXPECT_EQ(m.coeff(0)(1, 0), cplx(3.0));
}

TEST(Io, InnerFunction) {
  const MatrixInner t = io::inner_from_json(json::parse(
      R"({"n":2,"diag":[{"kind":"monomial","k":2},{"kind":"blaschke","zeros":[0.5,[0,0.3]],"rotation":[0,1]}]})"));
  EXPECT_EQ(t.n(), 2);
  EXPECT_EQ(t.model_dim(), 4);
  EXPECT_EQ(t.diag()[1].rotation(), cplx(0, 1));
  const MatrixInner back = io::inner_from_json(json::parse(io::to_json(t).dump()));
  EXPECT_EQ(back.diag()[1].zeros(), t.diag()[1].zeros());
}

TEST(Io, UnknownKeysRejected) {
  EXPECT_THROW(io::trigpoly_from_json(json::parse(R"({"dim":1,"lo":0,"hi":0,"coeffs":[1],"extra":1})")), InputError);
  EXPECT_THROW(io::inner_from_json(json::parse(R"({"n":1,"diag":[{"kind":"monomial","k":1,"zeros":[]}]})")),
               InputError);
}

TEST(Io, MalformedShapesRejected) {
  EXPECT_THROW(io::trigpoly_from_json(json::parse(R"({"dim":2,"lo":0,"hi":1,"coeffs":[1,2,3]})")), InputError);
  EXPECT_THROW(io::matrix_from_json(json::parse("[[1,2],[3]]")), InputError);
  EXPECT_THROW(io::inner_from_json(json::parse(R"({"n":2,"diag":[{"kind":"monomial","k":1}]})")), InputError);
}

}  // namespace
}  // namespace mttokit
