#include <catch2/catch_amalgamated.hpp>

#include "ksineq/linalg.hpp"
#include "ksineq/rational.hpp"

using ksineq::ParseError;
using ksineq::Rational;
using ksineq::RationalMatrix;
using ksineq::RationalVector;

TEST_CASE("parse_rational accepts integers and fractions") {
  CHECK(ksineq::parse_rational("5/6") == Rational(5, 6));
  CHECK(ksineq::parse_rational("7") == Rational(7));
  CHECK(ksineq::parse_rational("0") == Rational(0));
  CHECK(ksineq::parse_rational("-1/2") == Rational(-1, 2));
  CHECK(ksineq::parse_rational("+3/9") == Rational(1, 3));
}

TEST_CASE("parse_rational normalizes a negative denominator") {
  CHECK(ksineq::parse_rational("1/-2") == Rational(-1, 2));
  CHECK(ksineq::parse_rational("-4/-6") == Rational(2, 3));
}

TEST_CASE("parse_rational rejects malformed input") {
  CHECK_THROWS_AS(ksineq::parse_rational(""), ParseError);
  CHECK_THROWS_AS(ksineq::parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(ksineq::parse_rational("a"), ParseError);
  CHECK_THROWS_AS(ksineq::parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(ksineq::parse_rational("1/"), ParseError);
}

TEST_CASE("to_string round-trips through parse_rational") {
  for (const char* text : {"5/6", "-7/9", "0", "12", "-3"}) {
    CHECK(ksineq::to_string(ksineq::parse_rational(text)) == text);
  }
}

TEST_CASE("to_double converts exactly representable values") {
  CHECK(ksineq::to_double(Rational(1, 2)) == 0.5);
  CHECK(ksineq::to_double(Rational(-3, 4)) == -0.75);
}

TEST_CASE("reduced_row_echelon finds pivots and normalizes rows") {
  RationalMatrix a(2, 3);
  a << Rational(2), Rational(4), Rational(6),
       Rational(1), Rational(2), Rational(4);
  const std::vector<Eigen::Index> pivots = ksineq::reduced_row_echelon(a);
  REQUIRE(pivots == std::vector<Eigen::Index>{0, 2});
  CHECK(a(0, 0) == 1);
  CHECK(a(0, 1) == 2);
  CHECK(a(0, 2) == 0);
  CHECK(a(1, 0) == 0);
  CHECK(a(1, 2) == 1);
}

TEST_CASE("rank handles dependent rows") {
  RationalMatrix a(3, 3);
  a << Rational(1), Rational(2), Rational(3),
       Rational(2), Rational(4), Rational(6),
       Rational(0), Rational(1), Rational(1);
  CHECK(ksineq::rank(a) == 2);
}

TEST_CASE("null_space vectors satisfy Av = 0") {
  RationalMatrix a(2, 3);
  a << Rational(1), Rational(1), Rational(0),
       Rational(0), Rational(0), Rational(1);
  const RationalMatrix n = ksineq::null_space(a);
  REQUIRE(n.cols() == 1);
  CHECK(n(0, 0) == -1);
  CHECK(n(1, 0) == 1);
  CHECK(n(2, 0) == 0);
  const RationalVector residual = a * n.col(0);
  for (Eigen::Index i = 0; i < residual.size(); ++i) CHECK(residual(i) == 0);
}

TEST_CASE("null_space of a full-column-rank matrix is empty") {
  RationalMatrix a(2, 2);
  a << Rational(1), Rational(0), Rational(0), Rational(1);
  CHECK(ksineq::null_space(a).cols() == 0);
}

TEST_CASE("solve_affine returns a particular solution and kernel basis") {
  RationalMatrix a(1, 2);
  a << Rational(1), Rational(1);
  RationalVector b(1);
  b << Rational(1);
  const ksineq::AffineSolution sol = ksineq::solve_affine(a, b);
  REQUIRE(sol.consistent);
  CHECK(sol.particular(0) == 1);
  CHECK(sol.particular(1) == 0);
  REQUIRE(sol.basis.cols() == 1);
  CHECK(sol.basis(0, 0) == -1);
  CHECK(sol.basis(1, 0) == 1);
}

TEST_CASE("solve_affine flags inconsistent systems") {
  RationalMatrix a(2, 2);
  a << Rational(1), Rational(1), Rational(1), Rational(1);
  RationalVector b(2);
  b << Rational(1), Rational(2);
  CHECK_FALSE(ksineq::solve_affine(a, b).consistent);
}

TEST_CASE("solve_affine parameterizes every solution") {
  RationalMatrix a(2, 4);
  a << Rational(1), Rational(0), Rational(2), Rational(-1),
       Rational(0), Rational(1), Rational(1), Rational(1);
  RationalVector b(2);
  b << Rational(3), Rational(2);
  const ksineq::AffineSolution sol = ksineq::solve_affine(a, b);
  REQUIRE(sol.consistent);
  REQUIRE(sol.basis.cols() == 2);
  RationalVector t(2);
  t << Rational(5, 3), Rational(-7, 2);
  const RationalVector x = sol.particular + sol.basis * t;
  const RationalVector residual = a * x - b;
  for (Eigen::Index i = 0; i < residual.size(); ++i) CHECK(residual(i) == 0);
}
