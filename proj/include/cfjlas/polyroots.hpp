#pragma once

#include <complex>
#include <vector>

#include "cfjlas/types.hpp"

namespace cfjlas {

// One bivariate quadratic a x^2 + b xy + c y^2 + d x + e y + f = 0.
struct QuadraticCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double f = 0.0;

  double eval(double x, double y) const {
    return (a * x + b * y + d) * x + (c * y + e) * y + f;
  }
};

// A real solution of the pair, with the worse of the two back-substitution
// residuals recorded.
struct RootPair {
  double x = 0.0;
  double y = 0.0;
  double back_substitution_residual = 0.0;
};

// Roots of a2 x^2 + a1 x + a0 = 0 over the complex numbers; degrades to
// linear when a2 is negligible. Zero polynomial yields no roots.
std::vector<std::complex<double>> solve_quadratic(double a2, double a1,
                                                  double a0);

// Roots of a3 x^3 + a2 x^2 + a1 x + a0 = 0 via the depressed-cubic radical
// formula; degrades in degree when the leading coefficient is negligible.
std::vector<std::complex<double>> solve_cubic(double a3, double a2, double a1,
                                              double a0);

// The four roots of a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0 = 0 from the
// closed-form radical expressions, each polished by one Newton step.
// Requires a4 != 0; callers degrade the degree themselves.
// Throws DegenerateResolvent when no cube-root branch of the resolvent
// yields a usable auxiliary value and the polynomial is not a fourth power.
std::vector<std::complex<double>> solve_quartic(double a4, double a3,
                                                double a2, double a1,
                                                double a0);

// Keeps roots whose imaginary part is negligible relative to the real part
// and returns the real parts.
std::vector<double> real_filter(const std::vector<std::complex<double>>& roots,
                                double tol_rel = 1e-9);

// All real solutions of the pair {eq1 = 0, eq2 = 0}, found by eliminating
// the y^2 term, reducing to a quartic in x, and recovering y. Every returned
// pair satisfies both equations within 1e-6 times the coefficient scale.
// Throws NoRealSolution when no candidate survives that gate.
std::vector<RootPair> solve_quadratic_pair(const QuadraticCoefficients& eq1,
                                           const QuadraticCoefficients& eq2,
                                           double real_tol = 1e-9);

}  // namespace cfjlas
