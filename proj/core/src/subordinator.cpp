#include "shc/subordinator.hpp"

#include "shc/quadrature.hpp"
#include "shc/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace shc::subord {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

struct SeriesEval {
    double value = 0.0;
    double rel_error = 0.0;  // truncation + cancellation estimate
};

// g_1(x) = (1/pi) sum_{n>=1} (-1)^{n+1} Gamma(1+rho n)/n! sin(pi rho n) x^{-rho n - 1}
SeriesEval eval_series(double rho, double x, int terms) {
    const double lx = std::log(x);
    double sum = 0.0, comp = 0.0;  // Kahan
    double max_abs = 0.0, last_abs = 0.0;
    for (int n = 1; n <= terms; ++n) {
        const double rn = rho * n;
        if (std::fabs(rn - std::round(rn)) < 1e-9) continue;  // sin of an integer multiple of pi
        const double s = std::sin(kPi * std::fmod(rn, 2.0));
        const double lt = specfun::log_gamma(1.0 + rho * n) - specfun::log_gamma(n + 1.0) -
                          (rho * n + 1.0) * lx;
        double term = ((n % 2 == 1) ? 1.0 : -1.0) * s * std::exp(lt);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        last_abs = std::fabs(term);
        max_abs = std::max(max_abs, last_abs);
        if (last_abs < 1e-18 * std::fabs(sum) && n > 4) {
            last_abs = 0.0;
            break;
        }
    }
    SeriesEval out;
    out.value = sum / kPi;
    const double denom = std::max(std::fabs(sum), 1e-300);
    out.rel_error = (last_abs + max_abs * 1e-16) / denom;
    if (sum <= 0.0) out.rel_error = 1.0;  // cancellation destroyed the sign
    return out;
}

double kanter_log_a(double rho, double u) {
    return (rho * std::log(std::sin(rho * u)) +
            (1.0 - rho) * std::log(std::sin((1.0 - rho) * u)) -
            std::log(std::sin(u))) / (1.0 - rho);
}

struct CacheKey {
    long long alpha_q;  // alpha quantized to 1e-12
    int terms;
    long long tol_q;
    bool operator<(const CacheKey& o) const {
        return std::tie(alpha_q, terms, tol_q) < std::tie(o.alpha_q, o.terms, o.tol_q);
    }
};

CacheKey make_key(double alpha, int terms, double tol) {
    return CacheKey{static_cast<long long>(std::llround(alpha * 1e12)), terms,
                    static_cast<long long>(std::llround(std::log10(tol) * 1e6))};
}

std::mutex g_cache_mutex;
std::map<CacheKey, double> g_crossover_cache;
std::map<CacheKey, double> g_usable_cache;

} // namespace

double kanter_draw(double rho, double uniform, double exponential) {
    const double u = kPi * uniform;
    const double log_s = (1.0 / rho) * (rho * std::log(std::sin(rho * u)) +
                                        (1.0 - rho) * std::log(std::sin((1.0 - rho) * u)) -
                                        std::log(std::sin(u))) -
                         ((1.0 - rho) / rho) * std::log(exponential);
    return std::exp(log_s);
}

double sample(const StableIndex& alpha, double t, rng::Sequence& rng) {
    if (!(t > 0.0)) throw std::domain_error("sample: requires t > 0");
    const double u = rng.uniform();
    const double e = -std::log(rng.uniform());
    return std::pow(t, 2.0 / alpha.alpha()) * kanter_draw(alpha.subordinator_index(), u, e);
}

std::vector<double> sample_increments(const StableIndex& alpha, double t, long long n,
                                      rng::Sequence& rng) {
    if (n < 1) throw std::domain_error("sample_increments: requires n >= 1");
    std::vector<double> out(static_cast<size_t>(n));
    for (auto& v : out) v = sample(alpha, t / static_cast<double>(n), rng);
    return out;
}

double density_tail_constant(const StableIndex& alpha) {
    const double rho = alpha.subordinator_index();
    return rho / specfun::gamma(1.0 - rho);
}

double density_series(const StableIndex& alpha, double x, int series_terms, double tol) {
    if (!(x > 0.0)) throw std::domain_error("density: requires x > 0");
    const SeriesEval e = eval_series(alpha.subordinator_index(), x, series_terms);
    if (e.rel_error > tol) {
        throw SeriesDivergence(smallest_series_x(alpha, series_terms, tol),
                               "subordinator density series unusable at this x");
    }
    return std::max(e.value, 0.0);
}

double density_integral(const StableIndex& alpha, double x) {
    if (!(x > 0.0)) throw std::domain_error("density: requires x > 0");
    const double rho = alpha.subordinator_index();
    const double z = std::pow(x, -rho / (1.0 - rho));
    // g(x) = rho/(1-rho) x^{-1/(1-rho)} (1/pi) \int_0^pi a(u) e^{-a(u) z} du,
    // computed as e^{-a0 z} \int a(u) e^{-(a(u)-a0) z} du to dodge underflow.
    const double log_a0 = (rho * std::log(rho) + (1.0 - rho) * std::log1p(-rho)) / (1.0 - rho);
    const double a0 = std::exp(log_a0);
    if (a0 * z > 700.0) return 0.0;  // below double range
    auto integrand = [&](double u) {
        if (u <= 0.0 || u >= kPi) return 0.0;
        const double a = std::exp(kanter_log_a(rho, u));
        const double arg = (a - a0) * z;
        if (arg > 700.0) return 0.0;
        return a * std::exp(-arg);
    };
    auto q = quad::integrate(integrand, 0.0, kPi, 1e-13, 1e-11, 6000);
    const double pref = rho / (1.0 - rho) * std::pow(x, -1.0 / (1.0 - rho)) / kPi;
    return pref * q.value * std::exp(-a0 * z);
}

double smallest_series_x(const StableIndex& alpha, int series_terms, double tol) {
    const CacheKey key = make_key(alpha.alpha(), series_terms, tol);
    {
        std::lock_guard lk(g_cache_mutex);
        auto it = g_usable_cache.find(key);
        if (it != g_usable_cache.end()) return it->second;
    }
    const double rho = alpha.subordinator_index();
    auto usable = [&](double x) {
        return eval_series(rho, x, series_terms).rel_error <= tol;
    };
    double hi = 1.0;
    while (!usable(hi) && hi < 1e6) hi *= 2.0;
    double lo = hi * 0.5;
    while (usable(lo) && lo > 1e-8) {
        hi = lo;
        lo *= 0.5;
    }
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (usable(mid) ? hi : lo) = mid;
    }
    {
        std::lock_guard lk(g_cache_mutex);
        g_usable_cache[key] = hi;
    }
    return hi;
}

double series_crossover(const StableIndex& alpha, int series_terms) {
    const CacheKey key = make_key(alpha.alpha(), series_terms, 1e-6);
    {
        std::lock_guard lk(g_cache_mutex);
        auto it = g_crossover_cache.find(key);
        if (it != g_crossover_cache.end()) return it->second;
    }
    const double rho = alpha.subordinator_index();
    const double tail_c = density_tail_constant(alpha);
    auto agree = [&](double x) {
        const SeriesEval e = eval_series(rho, x, series_terms);
        const double tail = tail_c * std::pow(x, -1.0 - rho);
        return std::fabs(e.value - tail) <= 1e-6 * tail;
    };
    double hi = 4.0;
    while (!agree(hi) && hi < 1e14) hi *= 2.0;
    double lo = hi * 0.5;
    for (int i = 0; i < 60; ++i) {
        const double mid = std::sqrt(lo * hi);
        (agree(mid) ? hi : lo) = mid;
    }
    {
        std::lock_guard lk(g_cache_mutex);
        g_crossover_cache[key] = hi;
    }
    return hi;
}

DensityMethod density_method(const StableIndex& alpha, double x, const DensityEvalConfig& cfg) {
    cfg.validate();
    if (!(x > 0.0)) throw std::domain_error("density: requires x > 0");
    const double xo = cfg.crossover > 0.0 ? cfg.crossover
                                          : series_crossover(alpha, cfg.series_terms);
    if (x >= xo) return DensityMethod::TailAsymptote;
    if (x >= smallest_series_x(alpha, cfg.series_terms, cfg.target_tol))
        return DensityMethod::Series;
    return DensityMethod::Integral;
}

double density(const StableIndex& alpha, double x, const DensityEvalConfig& cfg) {
    switch (density_method(alpha, x, cfg)) {
        case DensityMethod::TailAsymptote: {
            const double rho = alpha.subordinator_index();
            return density_tail_constant(alpha) * std::pow(x, -1.0 - rho);
        }
        case DensityMethod::Series:
            return density_series(alpha, x, cfg.series_terms, cfg.target_tol);
        case DensityMethod::Integral:
            if (!cfg.allow_fallback)
                throw SeriesDivergence(
                    smallest_series_x(alpha, cfg.series_terms, cfg.target_tol),
                    "subordinator density series unusable at this x (fallback disabled)");
            return density_integral(alpha, x);
    }
    return 0.0;  // unreachable
}

double density_scaled(const StableIndex& alpha, double t, double x,
                      const DensityEvalConfig& cfg) {
    if (!(t > 0.0)) throw std::domain_error("density_scaled: requires t > 0");
    const double scale = std::pow(t, -2.0 / alpha.alpha());
    return scale * density(alpha, x * scale, cfg);
}

} // namespace shc::subord
