#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <string>

#include "ptwell/error.hpp"
#include "ptwell/oracle.hpp"

namespace ptwell {

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("quadrature tolerance must be positive");
  if (a == b) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr unsigned max_depth = 30;
  double err = 0.0;
  double l1 = 0.0;
  GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  // Boost refines against a tolerance relative to the L1 norm.
  const double rel = l1 > 0.0 ? std::max(0.25 * tol / l1, 1e-15) : 1e-15;
  const double value = GK::integrate(f, a, b, max_depth, rel, &err, &l1);
  if (!std::isfinite(value) || err > tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "quadrature error estimate %.3e exceeds tolerance %.3e", err, tol);
    throw QuadratureDepthExceeded(buf);
  }
  return value;
}

}  // namespace ptwell
