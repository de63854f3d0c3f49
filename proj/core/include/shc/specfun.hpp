#pragma once

#include "shc/stable_index.hpp"

namespace shc::specfun {

// Gamma function via a Lanczos approximation (g=7, 9 terms), reflection for
// x < 0.5. Relative accuracy ~1e-13 on [-10, 30] away from poles.
// Throws std::domain_error at non-positive integers.
double gamma(double x);

// log|Gamma(x)| for x > 0; used where Gamma itself would overflow.
double log_gamma(double x);

// P(sup of the Brownian motion over [0,1] > u) = erfc(u/2) under the
// variance-2t normalization used throughout. Defined for u >= 0.
double erfc_halved(double u);

// Amplitude of the stable Levy density j(x) = A / |x|^{1+alpha}:
// A = alpha 2^{alpha-1} Gamma((1+alpha)/2) / (sqrt(pi) Gamma(1-alpha/2)).
double levy_constant(const StableIndex& alpha);

// Mean of the Brownian supremum run to an independent stable time,
// E[sup_{u<=S_1} W_u] = 2 Gamma(1-1/alpha)/pi. Requires alpha in (1,2);
// diverges as alpha -> 1+ where the logarithmic regime takes over.
double skbm_second_coeff(const StableIndex& alpha);

// Positive magnitude of the linear-in-t expansion coefficient for the killed
// stable process on an interval of the given length:
// 2^alpha Gamma((1+alpha)/2) / ((alpha-1) sqrt(pi) Gamma(1-alpha/2) length^{alpha-1}).
// Requires alpha in (1,2).
double ksbm_third_coeff(const StableIndex& alpha, double length);

// I(x) = \int_0^{1/x} ln(v)/(1+v^2) dv, x > 0. I(1) = -Catalan,
// I(x) -> 0 as x -> inf. The log singularity at v=0 is handled by the
// substitution v = e^{-s}.
double catalan_exponent(double x);

} // namespace shc::specfun
