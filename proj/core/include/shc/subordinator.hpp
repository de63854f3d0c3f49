#pragma once

#include "shc/rng.hpp"
#include "shc/stable_index.hpp"

#include <stdexcept>
#include <vector>

namespace shc::subord {

// Controls the series evaluation of the subordinator density at time 1.
// crossover == 0 requests the calibrated per-alpha value: the smallest x at
// which the truncated series and the power-law tail agree to 1e-6.
struct DensityEvalConfig {
    int series_terms = 60;
    double crossover = 0.0;
    double target_tol = 1e-6;
    bool allow_fallback = true;  // integral-representation fallback at small x

    void validate() const {
        if (series_terms < 1) throw std::invalid_argument("series_terms >= 1");
        if (crossover < 0.0) throw std::invalid_argument("crossover > 0 when set");
        if (!(target_tol > 0.0) || target_tol > 1e-3)
            throw std::invalid_argument("target_tol in (0, 1e-3]");
    }
};

// Raised when the alternating series loses too many digits to cancellation at
// small x and no fallback was allowed. Carries the smallest x at which the
// series meets the requested tolerance.
class SeriesDivergence : public std::runtime_error {
public:
    SeriesDivergence(double smallest_usable, std::string what)
        : std::runtime_error(std::move(what)), smallest_usable_x(smallest_usable) {}
    double smallest_usable_x;
};

enum class DensityMethod { Series, TailAsymptote, Integral };

// One draw of S_t for the stable subordinator with Laplace exponent
// lambda^{alpha/2}, by Kanter's exact representation plus t^{2/alpha} scaling.
double sample(const StableIndex& alpha, double t, rng::Sequence& rng);

// n independent increments, each distributed as S_{t/n}.
std::vector<double> sample_increments(const StableIndex& alpha, double t, long long n,
                                      rng::Sequence& rng);

// Kanter kernel: draw of S_1 from a uniform and a unit exponential.
double kanter_draw(double rho, double uniform, double exponential);

// Density of S_1 at x > 0. Dispatches: power-law tail above the calibrated
// crossover, the alternating series on the usable mid range, and (when
// allowed) an integral-representation fallback at small x.
double density(const StableIndex& alpha, double x, const DensityEvalConfig& cfg = {});

// Which evaluation route density() takes at x.
DensityMethod density_method(const StableIndex& alpha, double x,
                             const DensityEvalConfig& cfg = {});

// Density of S_t via the exact scaling g_t(x) = t^{-2/alpha} g_1(x t^{-2/alpha}).
double density_scaled(const StableIndex& alpha, double t, double x,
                      const DensityEvalConfig& cfg = {});

// lim_{x->inf} g_1(x) x^{1+alpha/2} = (alpha/2) / Gamma(1-alpha/2).
double density_tail_constant(const StableIndex& alpha);

// Calibrated series/tail crossover for the given truncation depth.
double series_crossover(const StableIndex& alpha, int series_terms = 60);

// Smallest x at which the series meets tol for the given truncation depth.
double smallest_series_x(const StableIndex& alpha, int series_terms, double tol);

// Series evaluation alone; throws SeriesDivergence below the usable range.
double density_series(const StableIndex& alpha, double x, int series_terms, double tol);

// Integral (Zolotarev-Kanter) representation; accurate at small and moderate
// x, independent of the series route.
double density_integral(const StableIndex& alpha, double x);

} // namespace shc::subord
