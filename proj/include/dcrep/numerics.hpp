#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "dcrep/error.hpp"

namespace dcrep::numerics {

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (G15/K31) on [lo, hi]; either bound may be infinite.
/// Throws NumericalError unless the error estimate is within abs_tol or
/// rel_tol * |value|.
template <class F>
Integral integrate(F&& f, double lo, double hi, double abs_tol = 1e-10, double rel_tol = 1e-12,
                   unsigned max_depth = 20) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  double l1 = 0.0;
  const double v = gauss_kronrod<double, 31>::integrate(f, lo, hi, max_depth, rel_tol, &err, &l1);
  if (!std::isfinite(v) || err > std::max(abs_tol, 1e4 * rel_tol * std::abs(v))) {
    throw NumericalError("quadrature did not converge (estimate " + std::to_string(v) + ", error " +
                         std::to_string(err) + ")");
  }
  return {v, err};
}

/// Double-exponential quadrature for integrands with endpoint singularities.
template <class F>
Integral integrate_singular(F&& f, double lo, double hi, double rel_tol = 1e-12, double accept = 1e-8) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  double l1 = 0.0;
  const double v = ts.integrate(f, lo, hi, rel_tol, &err, &l1);
  if (!std::isfinite(v) || err > accept * std::max(1.0, std::abs(l1))) {
    std::ostringstream os;
    os << "tanh-sinh quadrature did not converge (error " << err << ")";
    throw NumericalError(os.str());
  }
  return {v, err};
}

/// Root of a continuous f with f(lo), f(hi) of opposite sign.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol = 1e-15, int max_iter = 400) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw NumericalError("bisect: root not bracketed");
  for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dcrep::numerics
