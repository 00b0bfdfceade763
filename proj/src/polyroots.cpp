#include "cfjlas/polyroots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace cfjlas {

namespace {

using cplx = std::complex<double>;

// A computed value is indistinguishable from zero when it sits below the
// round-off floor of the terms that formed it.
constexpr double kCancelRel = 1e-12;

bool cancelled_to_zero(double value, double formation_magnitude) {
  return std::abs(value) <= kCancelRel * formation_magnitude;
}

bool all_finite(std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double max_abs(std::initializer_list<double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

// Horner evaluation; coefficients highest degree first.
cplx eval_poly(const std::vector<double>& coeffs, cplx x) {
  cplx acc(0.0, 0.0);
  for (double c : coeffs) acc = acc * x + c;
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
  const int degree = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> d;
  d.reserve(degree);
  for (int i = 0; i < degree; ++i) {
    d.push_back(coeffs[i] * static_cast<double>(degree - i));
  }
  return d;
}

// One Newton step; the radical formulas lose roughly half the digits near
// clustered roots and a single step restores them.
cplx polish_root(const std::vector<double>& coeffs,
                 const std::vector<double>& deriv, cplx x) {
  const cplx df = eval_poly(deriv, x);
  if (std::abs(df) == 0.0) return x;
  const cplx step = eval_poly(coeffs, x) / df;
  if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return x;
  return x - step;
}

}  // namespace

std::vector<cplx> solve_quadratic(double a2, double a1, double a0) {
  if (!all_finite({a2, a1, a0})) {
    throw InvalidInput("solve_quadratic: non-finite coefficient");
  }
  if (a2 == 0.0) {
    if (a1 == 0.0) return {};
    return {cplx(-a0 / a1, 0.0)};
  }
  const cplx sq = std::sqrt(cplx(a1 * a1 - 4.0 * a2 * a0, 0.0));
  // Sign chosen so a1 and the radical add instead of cancel.
  const cplx u = (a1 >= 0.0) ? cplx(-a1, 0.0) - sq : cplx(-a1, 0.0) + sq;
  if (std::abs(u) == 0.0) {
    const cplx r(-a1 / (2.0 * a2), 0.0);
    return {r, r};
  }
  std::vector<cplx> roots;
  const cplx r1 = u / (2.0 * a2);
  const cplx r2 = (2.0 * a0) / u;
  if (std::isfinite(r1.real()) && std::isfinite(r1.imag())) roots.push_back(r1);
  if (std::isfinite(r2.real()) && std::isfinite(r2.imag())) roots.push_back(r2);
  return roots;
}

std::vector<cplx> solve_cubic(double a3, double a2, double a1, double a0) {
  if (!all_finite({a3, a2, a1, a0})) {
    throw InvalidInput("solve_cubic: non-finite coefficient");
  }
  if (a3 == 0.0) return solve_quadratic(a2, a1, a0);

  // Monic coefficients and a root-magnitude scale x = R z that balances
  // them, so every zero test below is scale invariant.
  const double b = a2 / a3;
  const double c = a1 / a3;
  const double d = a0 / a3;
  const double R = std::max(
      {std::abs(b), std::sqrt(std::abs(c)), std::cbrt(std::abs(d))});
  if (R == 0.0) return {cplx(0, 0), cplx(0, 0), cplx(0, 0)};
  const double B = b / R;
  const double C = c / (R * R);
  const double D = d / (R * R * R);

  // Depress: z = t - B/3 leaves t^3 + p t + q.
  const double p = C - B * B / 3.0;
  const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;

  const cplx disc = std::sqrt(cplx(q * q / 4.0 + p * p * p / 27.0, 0.0));
  cplx u3 = cplx(-q / 2.0, 0.0) + disc;
  if (std::abs(u3) <= kCancelRel * std::abs(q)) {
    u3 = cplx(-q / 2.0, 0.0) - disc;  // other square-root branch
  }

  const std::vector<double> monic{1.0, b, c, d};
  const std::vector<double> deriv = poly_derivative(monic);
  std::vector<cplx> roots;
  roots.reserve(3);
  if (std::abs(u3) == 0.0) {
    // p = q = 0: triple root at the depression shift.
    roots.assign(3, cplx(-R * B / 3.0, 0.0));
  } else {
    const cplx u = std::pow(u3, 1.0 / 3.0);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    cplx uk = u;
    for (int k = 0; k < 3; ++k) {
      const cplx t = uk - p / (3.0 * uk);
      roots.push_back(polish_root(monic, deriv, R * (t - B / 3.0)));
      uk *= w;
    }
  }
  return roots;
}

std::vector<cplx> solve_quartic(double a4, double a3, double a2, double a1,
                                double a0) {
  if (!all_finite({a4, a3, a2, a1, a0})) {
    throw InvalidInput("solve_quartic: non-finite coefficient");
  }
  if (a4 == 0.0) {
    throw InvalidInput("solve_quartic: leading coefficient is zero");
  }
  // Monic coefficients, then the substitution x = R z with the classic
  // root-magnitude bound R. The closed-form expressions are covariant, so
  // working on the balanced z-polynomial costs nothing and keeps the
  // auxiliary quantities near unit scale whatever the input scaling.
  const double b = a3 / a4;
  const double c = a2 / a4;
  const double d = a1 / a4;
  const double e = a0 / a4;
  const double R =
      std::max({std::abs(b), std::sqrt(std::abs(c)), std::cbrt(std::abs(d)),
                std::pow(std::abs(e), 0.25)});
  if (R == 0.0) {
    return {cplx(0, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)};
  }
  const double B = b / R;
  const double C = c / (R * R);
  const double D = d / (R * R * R);
  const double E = e / (R * R * R * R);

  const double p = C - 3.0 * B * B / 8.0;
  const double q0 = (B * B * B - 4.0 * B * C + 8.0 * D) / 8.0;
  // The resolvent discriminants decide the branch structure; clamp them to
  // zero when they are pure cancellation dust so repeated-root cases are
  // recognized instead of amplified.
  double d0 = 0.0, d0_mag = 0.0;
  for (double term : {C * C, -3.0 * B * D, 12.0 * E}) {
    d0 += term;
    d0_mag += std::abs(term);
  }
  if (cancelled_to_zero(d0, d0_mag)) d0 = 0.0;
  double d1 = 0.0, d1_mag = 0.0;
  for (double term : {2.0 * C * C * C, -9.0 * B * C * D, 27.0 * B * B * E,
                      27.0 * D * D, -72.0 * C * E}) {
    d1 += term;
    d1_mag += std::abs(term);
  }
  if (cancelled_to_zero(d1, d1_mag)) d1 = 0.0;

  const std::vector<double> monic{1.0, b, c, d, e};
  const std::vector<double> deriv = poly_derivative(monic);

  const cplx inner = std::sqrt(cplx(d1 * d1 - 4.0 * d0 * d0 * d0, 0.0));
  const std::array<cplx, 2> bases = {0.5 * (cplx(d1, 0.0) + inner),
                                     0.5 * (cplx(d1, 0.0) - inner)};
  const double base_floor =
      kCancelRel * std::max(std::abs(d1), std::pow(std::abs(d0), 1.5));

  // The resolvent cube root can land on a branch where s vanishes; scan both
  // square-root signs and all three cube-root branches for a usable s.
  cplx s(0.0, 0.0);
  bool found = false;
  const cplx w(-0.5, std::sqrt(3.0) / 2.0);
  for (const cplx& base : bases) {
    if (std::abs(base) <= base_floor) continue;
    cplx q1 = std::pow(base, 1.0 / 3.0);
    for (int k = 0; k < 3 && !found; ++k) {
      const cplx s_sq = -2.0 * p / 3.0 + (q1 + cplx(d0, 0.0) / q1) / 3.0;
      const cplx s_try = 0.5 * std::sqrt(s_sq);
      if (std::abs(s_try) > 1e-12) {
        s = s_try;
        found = true;
      }
      q1 *= w;
    }
    if (found) break;
  }

  if (!found) {
    // s vanishes on every branch only when the quartic collapses to a
    // perfect fourth power (z - r)^4 with r = -B/4.
    const cplx r(-B / 4.0, 0.0);
    const cplx check = (((r + B) * r + C) * r + D) * r + E;
    if (std::abs(check) <= 1e-8 * std::max(1.0, std::abs(E))) {
      const cplx root(R * r.real(), 0.0);
      return {root, root, root, root};
    }
    std::ostringstream msg;
    msg << "solve_quartic: resolvent s below 1e-12 on all branches "
        << "(d0=" << d0 << ", d1=" << d1 << ")";
    throw DegenerateResolvent(msg.str());
  }

  const cplx offset(-B / 4.0, 0.0);
  const cplx base_term = -4.0 * s * s - 2.0 * p;
  const cplx rad_first = 0.5 * std::sqrt(base_term + cplx(q0, 0.0) / s);
  const cplx rad_second = 0.5 * std::sqrt(base_term - cplx(q0, 0.0) / s);
  std::vector<cplx> roots = {offset - s + rad_first, offset - s - rad_first,
                             offset + s + rad_second, offset + s - rad_second};
  for (cplx& root : roots) root = polish_root(monic, deriv, R * root);
  return roots;
}

std::vector<double> real_filter(const std::vector<cplx>& roots,
                                double tol_rel) {
  if (tol_rel < 0.0) throw InvalidInput("real_filter: tol_rel must be >= 0");
  std::vector<double> real;
  real.reserve(roots.size());
  for (const cplx& r : roots) {
    if (std::abs(r.imag()) <= tol_rel * std::max(1.0, std::abs(r.real()))) {
      real.push_back(r.real());
    }
  }
  return real;
}

namespace {

// Real y roots of eq treated as a quadratic in y at fixed x.
std::vector<double> solve_for_y(const QuadraticCoefficients& eq, double x,
                                double real_tol) {
  const double qa = eq.c;
  const double qb = eq.b * x + eq.e;
  const double qc = (eq.a * x + eq.d) * x + eq.f;
  return real_filter(solve_quadratic(qa, qb, qc), real_tol);
}

// Univariate polynomial in x obtained by substituting the rational
// expression y = (n2 x^2 + n1 x + n0)/(g1 x + g0) into eq. Each coefficient
// carries the magnitude of the products it was assembled from, which is the
// only sound yardstick for calling it zero.
struct SubstitutedPoly {
  std::array<double, 5> coeff;  // highest degree first
  std::array<double, 5> mag;
};

SubstitutedPoly substitute_rational(const QuadraticCoefficients& eq, double g1,
                                    double g0, double n2, double n1,
                                    double n0) {
  SubstitutedPoly out;
  auto assemble = [](std::initializer_list<double> terms, double& value,
                     double& mag) {
    value = 0.0;
    mag = 0.0;
    for (double t : terms) {
      value += t;
      mag += std::abs(t);
    }
  };
  assemble({eq.a * g1 * g1, eq.b * g1 * n2, eq.c * n2 * n2}, out.coeff[0],
           out.mag[0]);
  assemble({eq.d * g1 * g1, 2.0 * eq.a * g1 * g0, eq.b * g1 * n1,
            eq.b * g0 * n2, 2.0 * eq.c * n2 * n1, eq.e * g1 * n2},
           out.coeff[1], out.mag[1]);
  assemble({eq.c * n1 * n1, 2.0 * eq.c * n2 * n0, eq.a * g0 * g0,
            eq.f * g1 * g1, eq.b * g1 * n0, eq.b * g0 * n1,
            2.0 * eq.d * g1 * g0, eq.e * g1 * n1, eq.e * g0 * n2},
           out.coeff[2], out.mag[2]);
  assemble({eq.d * g0 * g0, eq.b * g0 * n0, 2.0 * eq.c * n1 * n0,
            eq.e * g1 * n0, eq.e * g0 * n1, 2.0 * eq.f * g1 * g0},
           out.coeff[3], out.mag[3]);
  assemble({eq.f * g0 * g0, eq.e * g0 * n0, eq.c * n0 * n0}, out.coeff[4],
           out.mag[4]);
  return out;
}

// Solves the substituted polynomial, dropping leading coefficients that are
// pure cancellation noise before picking the degree.
std::vector<cplx> solve_substituted(const SubstitutedPoly& poly) {
  std::array<double, 5> c = poly.coeff;
  for (int i = 0; i < 5; ++i) {
    if (cancelled_to_zero(c[i], poly.mag[i])) c[i] = 0.0;
  }
  if (c[0] != 0.0) return solve_quartic(c[0], c[1], c[2], c[3], c[4]);
  if (c[1] != 0.0) return solve_cubic(c[1], c[2], c[3], c[4]);
  return solve_quadratic(c[2], c[3], c[4]);
}

}  // namespace

std::vector<RootPair> solve_quadratic_pair(const QuadraticCoefficients& eq1,
                                           const QuadraticCoefficients& eq2,
                                           double real_tol) {
  if (!all_finite({eq1.a, eq1.b, eq1.c, eq1.d, eq1.e, eq1.f}) ||
      !all_finite({eq2.a, eq2.b, eq2.c, eq2.d, eq2.e, eq2.f})) {
    throw InvalidInput("solve_quadratic_pair: non-finite coefficient");
  }
  const double coeff_scale = max_abs({eq1.a, eq1.b, eq1.c, eq1.d, eq1.e, eq1.f,
                                      eq2.a, eq2.b, eq2.c, eq2.d, eq2.e,
                                      eq2.f});
  const double gate = 1e-6 * std::max(1.0, coeff_scale);

  std::vector<RootPair> pairs;
  auto consider = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    const double res = std::max(std::abs(eq1.eval(x, y)),
                                std::abs(eq2.eval(x, y)));
    if (res > gate) return;
    for (const RootPair& seen : pairs) {
      const double tol =
          1e-9 * std::max({1.0, std::abs(x), std::abs(y), std::abs(seen.x),
                           std::abs(seen.y)});
      if (std::abs(seen.x - x) <= tol && std::abs(seen.y - y) <= tol) return;
    }
    pairs.push_back({x, y, res});
  };
  auto back_substitute = [&](double x) {
    std::vector<double> ys = solve_for_y(eq2, x, real_tol);
    if (ys.empty()) ys = solve_for_y(eq1, x, real_tol);
    for (double y : ys) consider(x, y);
  };
  // Substitution route: x from the univariate polynomial, y from the
  // rational expression, away from the divisor's zero.
  auto eliminate = [&](const QuadraticCoefficients& target, double g1,
                       double g0, double n2, double n1, double n0) {
    const SubstitutedPoly poly =
        substitute_rational(target, g1, g0, n2, n1, n0);
    for (double x : real_filter(solve_substituted(poly), real_tol)) {
      const double den = g1 * x + g0;
      const double den_floor =
          kCancelRel * std::max(std::abs(g1 * x), std::abs(g0));
      if (std::abs(den) <= den_floor) continue;  // pole; handled by back-substitution
      consider(x, ((n2 * x + n1) * x + n0) / den);
    }
  };

  // Eliminate y^2 between the two equations: (t1 x + t2) y = t3 x^2 + t4 x + t5.
  // Each t carries the magnitude of its two products.
  const double t1 = eq1.b * eq2.c - eq2.b * eq1.c;
  const double t2 = eq1.e * eq2.c - eq2.e * eq1.c;
  const double t3 = -eq1.a * eq2.c + eq2.a * eq1.c;
  const double t4 = -eq1.d * eq2.c + eq2.d * eq1.c;
  const double t5 = -eq1.f * eq2.c + eq2.f * eq1.c;
  const bool t1z = cancelled_to_zero(
      t1, std::abs(eq1.b * eq2.c) + std::abs(eq2.b * eq1.c));
  const bool t2z = cancelled_to_zero(
      t2, std::abs(eq1.e * eq2.c) + std::abs(eq2.e * eq1.c));
  const bool t3z = cancelled_to_zero(
      t3, std::abs(eq1.a * eq2.c) + std::abs(eq2.a * eq1.c));
  const bool t4z = cancelled_to_zero(
      t4, std::abs(eq1.d * eq2.c) + std::abs(eq2.d * eq1.c));
  const bool t5z = cancelled_to_zero(
      t5, std::abs(eq1.f * eq2.c) + std::abs(eq2.f * eq1.c));

  if (t1z && t2z && t3z && t4z && t5z) {
    // The elimination vanished identically. Either both equations lack the
    // y^2 term (then one of them is linear in y and can substitute into the
    // other directly), or the two conics are proportional and there is no
    // isolated intersection to report.
    const double c_zero = kCancelRel * std::max(1.0, coeff_scale);
    if (std::abs(eq1.c) <= c_zero && std::abs(eq2.c) <= c_zero) {
      if (max_abs({eq2.b, eq2.e}) > c_zero) {
        eliminate(eq1, eq2.b, eq2.e, -eq2.a, -eq2.d, -eq2.f);
      } else if (max_abs({eq1.b, eq1.e}) > c_zero) {
        eliminate(eq2, eq1.b, eq1.e, -eq1.a, -eq1.d, -eq1.f);
      }
      // else: y is absent from both equations; no isolated pair exists.
    }
  } else if (t1z && t2z) {
    // The divisor polynomial is identically zero: x is pinned by the
    // eliminated equation alone, y recovered by back-substitution.
    for (double x : real_filter(
             solve_quadratic(t3z ? 0.0 : t3, t4z ? 0.0 : t4, t5z ? 0.0 : t5),
             real_tol)) {
      back_substitute(x);
    }
  } else {
    if (!t1z) {
      // Divisor zero x0 = -t2/t1 solves the pair only if it also satisfies
      // the eliminated equation; test and recover y directly.
      const double x0 = -t2 / t1;
      const double val = (t3 * x0 + t4) * x0 + t5;
      const double val_scale = std::max(
          {1.0, std::abs(t3 * x0 * x0), std::abs(t4 * x0), std::abs(t5)});
      if (std::abs(val) <= 1e-6 * val_scale) back_substitute(x0);
    }
    eliminate(eq1, t1z ? 0.0 : t1, t2z ? 0.0 : t2, t3z ? 0.0 : t3,
              t4z ? 0.0 : t4, t5z ? 0.0 : t5);
  }

  if (pairs.empty()) {
    throw NoRealSolution(
        "solve_quadratic_pair: no real pair passed the residual gate");
  }
  return pairs;
}

}  // namespace cfjlas
