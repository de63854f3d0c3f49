#include "shc/specfun.hpp"

#include "shc/quadrature.hpp"

#include <cmath>

namespace shc::specfun {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kSqrtPi = 1.772453850905516027298167483341145;

// Lanczos g=7, n=9 coefficients (Godfrey's set).
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_gamma_positive(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double s = kLanczos[0];
    for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * s;
}

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

} // namespace

double gamma(double x) {
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma: pole at non-positive integer");
    if (x >= 0.5) return lanczos_gamma_positive(x);
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return kPi / (std::sin(kPi * x) * lanczos_gamma_positive(1.0 - x));
}

double log_gamma(double x) {
    if (x <= 0.0) throw std::domain_error("log_gamma: requires x > 0");
    if (x < 0.5) return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
    const double z = x - 1.0;
    double s = kLanczos[0];
    for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
    const double t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(s);
}

double erfc_halved(double u) {
    return std::erfc(0.5 * u);
}

double levy_constant(const StableIndex& idx) {
    const double a = idx.alpha();
    return a * std::pow(2.0, a - 1.0) * gamma(0.5 * (1.0 + a)) /
           (kSqrtPi * gamma(1.0 - 0.5 * a));
}

double skbm_second_coeff(const StableIndex& idx) {
    const double a = idx.alpha();
    if (!(a > 1.0))
        throw std::domain_error("skbm_second_coeff: requires alpha in (1,2)");
    return 2.0 * gamma(1.0 - 1.0 / a) / kPi;
}

double ksbm_third_coeff(const StableIndex& idx, double length) {
    const double a = idx.alpha();
    if (!(a > 1.0))
        throw std::domain_error("ksbm_third_coeff: requires alpha in (1,2)");
    if (!(length > 0.0))
        throw std::domain_error("ksbm_third_coeff: requires length > 0");
    return std::pow(2.0, a) * gamma(0.5 * (1.0 + a)) /
           ((a - 1.0) * kSqrtPi * gamma(1.0 - 0.5 * a) * std::pow(length, a - 1.0));
}

double catalan_exponent(double x) {
    if (!(x > 0.0)) throw std::domain_error("catalan_exponent: requires x > 0");
    const double c = 1.0 / x;
    const double lo = std::min(1.0, c);
    // \int_0^lo ln v/(1+v^2) dv with v = e^{-s}:  -\int_{-ln lo}^inf s e^{-s}/(1+e^{-2s}) ds
    auto singular = quad::integrate_to_inf(
        [](double s) { const double v = std::exp(-s); return s * v / (1.0 + v * v); },
        -std::log(lo), 1e-14, 1e-13);
    double value = -singular.value;
    if (c > 1.0) {
        auto smooth = quad::integrate(
            [](double v) { return std::log(v) / (1.0 + v * v); }, 1.0, c, 1e-14, 1e-13);
        value += smooth.value;
    }
    return value;
}

} // namespace shc::specfun
