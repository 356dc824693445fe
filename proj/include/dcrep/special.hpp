#pragma once

// Normal distribution and gamma-family functions.

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

namespace dcrep::special {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

inline double erfc(double x) { return boost::math::erfc(x); }

inline double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// P(Z <= x).
inline double normal_cdf(double x) { return 0.5 * erfc(-x * kInvSqrt2); }

/// P(Z > x), accurate in the far upper tail.
inline double normal_sf(double x) { return 0.5 * erfc(x * kInvSqrt2); }

inline double gamma(double x) { return boost::math::tgamma(x); }

inline double lgamma(double x) { return boost::math::lgamma(x); }

inline double digamma(double x) { return boost::math::digamma(x); }

}  // namespace dcrep::special
