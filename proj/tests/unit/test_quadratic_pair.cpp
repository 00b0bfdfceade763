#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cfjlas/polyroots.hpp"

using namespace cfjlas;

namespace {

std::vector<RootPair> sorted_by_x(std::vector<RootPair> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const RootPair& a, const RootPair& b) { return a.x < b.x; });
  return pairs;
}

}  // namespace

TEST_CASE("unit circle meets the diagonal") {
  QuadraticCoefficients circle;  // x^2 + y^2 - 1 = 0
  circle.a = 1.0;
  circle.c = 1.0;
  circle.f = -1.0;
  QuadraticCoefficients line;  // x - y = 0
  line.d = 1.0;
  line.e = -1.0;

  const auto pairs = sorted_by_x(solve_quadratic_pair(circle, line));
  REQUIRE(pairs.size() == 2);
  const double half_sqrt2 = std::sqrt(2.0) / 2.0;
  CHECK(pairs[0].x == doctest::Approx(-half_sqrt2).epsilon(1e-9));
  CHECK(pairs[0].y == doctest::Approx(-half_sqrt2).epsilon(1e-9));
  CHECK(pairs[1].x == doctest::Approx(half_sqrt2).epsilon(1e-9));
  CHECK(pairs[1].y == doctest::Approx(half_sqrt2).epsilon(1e-9));
}

TEST_CASE("coincident empty conics have no real solution") {
  QuadraticCoefficients eq;  // x^2 + y^2 + 1 = 0
  eq.a = 1.0;
  eq.c = 1.0;
  eq.f = 1.0;
  CHECK_THROWS_AS(solve_quadratic_pair(eq, eq), NoRealSolution);
}

TEST_CASE("hyperbola meets the diagonal") {
  QuadraticCoefficients hyperbola;  // xy - 1 = 0
  hyperbola.b = 1.0;
  hyperbola.f = -1.0;
  QuadraticCoefficients line;  // x - y = 0
  line.d = 1.0;
  line.e = -1.0;

  const auto pairs = sorted_by_x(solve_quadratic_pair(hyperbola, line));
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].x == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(pairs[0].y == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(pairs[1].x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pairs[1].y == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two circles, four-way symmetric intersection") {
  // x^2 + y^2 = 25 and (x-3)^2 + y^2 = 16 meet at x = 3, y = +-4
  QuadraticCoefficients big;
  big.a = 1.0;
  big.c = 1.0;
  big.f = -25.0;
  QuadraticCoefficients small;
  small.a = 1.0;
  small.c = 1.0;
  small.d = -6.0;
  small.f = -7.0;  // 9 - 16
  const auto pairs = solve_quadratic_pair(big, small);
  REQUIRE(pairs.size() == 2);
  for (const RootPair& p : pairs) {
    CHECK(p.x == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(std::abs(p.y) == doctest::Approx(4.0).epsilon(1e-9));
  }
}

TEST_CASE("ellipse and hyperbola, generic quartic path") {
  // x^2 + 4y^2 = 8 and x y = 2: substitute y = 2/x -> x^4 - 8x^2 + 16 = 0,
  // so x = +-2 (double), y = +-1.
  QuadraticCoefficients ellipse;
  ellipse.a = 1.0;
  ellipse.c = 4.0;
  ellipse.f = -8.0;
  QuadraticCoefficients hyper;
  hyper.b = 1.0;
  hyper.f = -2.0;
  const auto pairs = sorted_by_x(solve_quadratic_pair(ellipse, hyper));
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].x == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(pairs[0].y == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(pairs[1].x == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(pairs[1].y == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("divisor root that satisfies the eliminated equation is kept") {
  // circle x^2 + y^2 - 1 = 0 against (x - 1/2) y = 0, a line pair. The
  // divisor zero x0 = 1/2 carries two circle points and the y = 0 branch
  // two more; all four must come back.
  QuadraticCoefficients circle;
  circle.a = 1.0;
  circle.c = 1.0;
  circle.f = -1.0;
  QuadraticCoefficients line_pair;  // xy - y/2 = 0
  line_pair.b = 1.0;
  line_pair.e = -0.5;
  const auto pairs = sorted_by_x(solve_quadratic_pair(circle, line_pair));
  REQUIRE(pairs.size() == 4);
  CHECK(pairs[0].x == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(pairs[0].y == doctest::Approx(0.0).scale(1.0));
  CHECK(pairs[1].x == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pairs[2].x == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(pairs[1].y) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
  CHECK(std::abs(pairs[2].y) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
  CHECK(pairs[3].x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pairs[3].y == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("wider real-root tolerance rescues a near-tangent geometry") {
  // line just past tangency with the unit circle: the intersection pair has
  // an imaginary part of ~1e-7 relative, which the default filter rejects
  // and the widened retry tolerance accepts.
  QuadraticCoefficients circle;
  circle.a = 1.0;
  circle.c = 1.0;
  circle.f = -1.0;
  QuadraticCoefficients line;  // x - y - sqrt(2)(1 + 1e-13) = 0
  line.d = 1.0;
  line.e = -1.0;
  line.f = -std::sqrt(2.0) * (1.0 + 1e-13);

  CHECK_THROWS_AS(solve_quadratic_pair(circle, line, 1e-9), NoRealSolution);
  const auto pairs = solve_quadratic_pair(circle, line, 1e-6);
  REQUIRE(!pairs.empty());
  const double half_sqrt2 = std::sqrt(2.0) / 2.0;
  CHECK(pairs[0].x == doctest::Approx(half_sqrt2).epsilon(1e-5));
  CHECK(pairs[0].y == doctest::Approx(-half_sqrt2).epsilon(1e-5));
}

TEST_CASE("tangent divisor line degenerates the resolvent") {
  // circle against (x - 1) y = 0: the divisor zero x0 = 1 is tangent to the
  // circle, which piles a triple root onto the eliminated quartic; the
  // radical solution cannot separate it.
  QuadraticCoefficients circle;
  circle.a = 1.0;
  circle.c = 1.0;
  circle.f = -1.0;
  QuadraticCoefficients tangent;  // xy - y = 0
  tangent.b = 1.0;
  tangent.e = -1.0;
  CHECK_THROWS_AS(solve_quadratic_pair(circle, tangent), DegenerateResolvent);
}

TEST_CASE("every returned pair satisfies both equations") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  int solved = 0;
  for (int trial = 0; trial < 400; ++trial) {
    QuadraticCoefficients eq1{coeff(rng), coeff(rng), coeff(rng),
                              coeff(rng), coeff(rng), coeff(rng)};
    QuadraticCoefficients eq2{coeff(rng), coeff(rng), coeff(rng),
                              coeff(rng), coeff(rng), coeff(rng)};
    double scale = 0.0;
    for (double v : {eq1.a, eq1.b, eq1.c, eq1.d, eq1.e, eq1.f, eq2.a, eq2.b,
                     eq2.c, eq2.d, eq2.e, eq2.f}) {
      scale = std::max(scale, std::abs(v));
    }
    try {
      const auto pairs = solve_quadratic_pair(eq1, eq2);
      for (const RootPair& p : pairs) {
        const double res = std::max(std::abs(eq1.eval(p.x, p.y)),
                                    std::abs(eq2.eval(p.x, p.y)));
        CHECK(res <= p.back_substitution_residual + 1e-15);
        CHECK(p.back_substitution_residual <= 1e-6 * std::max(1.0, scale));
      }
      ++solved;
    } catch (const NoRealSolution&) {
      // legitimate: the two conics may simply not intersect in the reals
    }
  }
  CHECK(solved > 200);
}

TEST_CASE("parabola and horizontal line, no y^2 in either equation") {
  // x^2 - y = 0 and y - 4 = 0 meet at x = +-2, y = 4.
  QuadraticCoefficients parabola;
  parabola.a = 1.0;
  parabola.e = -1.0;
  QuadraticCoefficients line;
  line.e = 1.0;
  line.f = -4.0;
  const auto pairs = sorted_by_x(solve_quadratic_pair(parabola, line));
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].x == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(pairs[0].y == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(pairs[1].x == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(pairs[1].y == doctest::Approx(4.0).epsilon(1e-9));
}
