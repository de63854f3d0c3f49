#pragma once

#include <functional>

namespace shc::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;   // accumulated Kronrod error estimate
    long long evaluations = 0;
    bool converged = true;
};

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval. Splits the worst
// subinterval until the summed error estimate meets abs_tol + rel_tol*|I|.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12,
                 int max_intervals = 4000);

// \int_a^inf f, mapped onto (0,1] via x = a + s/(1-s).
Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol = 1e-12, double rel_tol = 1e-12,
                        int max_intervals = 4000);

} // namespace shc::quad
