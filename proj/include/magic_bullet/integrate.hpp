#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "magic_bullet/errors.hpp"

namespace magic_bullet {

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod error estimate summed over segments
};

struct QuadratureTolerance {
  double relative = 1e-9;
  double absolute_floor = 1e-15;
  unsigned max_depth = 20;  // bisection levels per segment; bounds the worst-case cost
};

/// Adaptive Gauss-Kronrod over [lo, hi], split at every breakpoint strictly inside.
/// Breakpoints should mark narrow features (kernel centres, edges) so bisection
/// never has to discover them. Throws IntegrationError if the summed error
/// estimate exceeds max(relative * L1, absolute_floor).
template <class F>
IntegralResult adaptive_integral(F&& f, double lo, double hi,
                                 std::vector<double> breakpoints,
                                 const QuadratureTolerance& tol = {},
                                 const std::string& what = "integral") {
  using boost::math::quadrature::gauss_kronrod;
  breakpoints.push_back(lo);
  breakpoints.push_back(hi);
  std::erase_if(breakpoints, [&](double b) { return !(b >= lo && b <= hi); });
  std::sort(breakpoints.begin(), breakpoints.end());
  // Merge near-coincident points: a sliver segment holds no mass to resolve, and
  // rounding noise on it never meets a relative tolerance.
  const double merge = 1e-9 * (hi - lo);
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                [&](double a, double b) { return b - a <= merge; }),
                    breakpoints.end());
  breakpoints.back() = hi;

  IntegralResult out;
  double l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double err = 0.0;
    double seg_l1 = 0.0;
    out.value += gauss_kronrod<double, 31>::integrate(f, breakpoints[i], breakpoints[i + 1],
                                                      tol.max_depth, tol.relative, &err,
                                                      &seg_l1);
    out.error += err;
    l1 += seg_l1;
  }
  const double allowed = std::max(tol.relative * l1, tol.absolute_floor);
  if (!(out.error <= allowed)) {
    throw IntegrationError(what + " did not converge", out.error, allowed);
  }
  return out;
}

}  // namespace magic_bullet
