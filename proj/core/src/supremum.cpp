#include "shc/supremum.hpp"

#include "engine.hpp"
#include "shc/quadrature.hpp"
#include "shc/specfun.hpp"
#include "shc/subordinator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shc::sup {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kSqrtPi = 1.772453850905516027298167483341145;
constexpr double kCatalan = 0.915965594177219015054603514932384;

std::atomic<double> g_arctan_tamper{0.0};

// F(y) = \int_0^y ln v/(1+v^2) dv for y in (0,1].  The log-kernel integral
// I(x) appearing in the supremum density satisfies I(x) = F(min(x, 1/x)).
double log_kernel_small(double y) {
    // sum_k (-1)^k y^{2k+1} ((2k+1) ln y - 1) / (2k+1)^2
    const double ly = std::log(y);
    const double y2 = y * y;
    double pw = y, sum = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double m = 2.0 * k + 1.0;
        const double term = pw * (m * ly - 1.0) / (m * m);
        sum += (k % 2 == 0) ? term : -term;
        pw *= y2;
        if (pw * (m + 2.0) * (std::fabs(ly) + 1.0) < 1e-18) break;
    }
    return sum;
}

double log_kernel(double x) {
    const double y = std::min(x, 1.0 / x);
    if (y <= 0.9) return log_kernel_small(y);
    auto edge = quad::integrate(
        [](double v) { return std::log(v) / (1.0 + v * v); }, 1.0, y, 1e-15, 1e-14);
    return -kCatalan + edge.value;
}

void validate(const SupSampleConfig& cfg) {
    if (cfg.n_steps < 1) throw std::invalid_argument("SupSampleConfig: n_steps >= 1");
    if (cfg.paths < 1) throw std::invalid_argument("SupSampleConfig: paths >= 1");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("SupSampleConfig: horizon > 0");
}

} // namespace

TailFunction TailFunction::closed_form(std::function<double(double)> fn, double tail_amp,
                                       double tail_exp) {
    TailFunction t;
    t.method_ = TailMethod::ClosedForm;
    t.fn_ = std::move(fn);
    t.domain_hi_ = std::numeric_limits<double>::infinity();
    t.tail_amp_ = tail_amp;
    t.tail_exp_ = tail_exp;
    return t;
}

TailFunction TailFunction::quadrature(std::function<double(double)> fn, double domain_hi,
                                      double tail_amp, double tail_exp) {
    TailFunction t;
    t.method_ = TailMethod::Quadrature;
    t.fn_ = std::move(fn);
    t.domain_hi_ = domain_hi;
    t.tail_amp_ = tail_amp;
    t.tail_exp_ = tail_exp;
    return t;
}

TailFunction TailFunction::table(std::vector<double> u, std::vector<double> survival,
                                 std::vector<double> se, double tail_amp, double tail_exp) {
    if (u.size() != survival.size() || u.size() < 2)
        throw std::invalid_argument("TailFunction::table: malformed table");
    TailFunction t;
    t.method_ = TailMethod::MonteCarloTable;
    t.domain_lo_ = u.front();
    t.domain_hi_ = u.back();
    t.log_u_.reserve(u.size());
    for (double v : u) t.log_u_.push_back(std::log(v));
    t.val_ = std::move(survival);
    t.se_ = std::move(se);
    t.tail_amp_ = tail_amp;
    t.tail_exp_ = tail_exp;
    return t;
}

double TailFunction::survival(double u) const {
    if (u <= 0.0) return method_ == TailMethod::MonteCarloTable ? 1.0 : fn_ ? fn_(0.0) : 1.0;
    if (u > domain_hi_ && tail_amp_ > 0.0)
        return tail_amp_ * std::pow(u, -tail_exp_);
    if (method_ != TailMethod::MonteCarloTable) return fn_(u);
    if (u <= domain_lo_) {
        // linear in u down to survival(0) = 1
        const double w = u / domain_lo_;
        return (1.0 - w) + w * val_.front();
    }
    const double lu = std::log(u);
    auto it = std::upper_bound(log_u_.begin(), log_u_.end(), lu);
    const size_t i = std::min(log_u_.size() - 1,
                              static_cast<size_t>(std::max<std::ptrdiff_t>(1, it - log_u_.begin())));
    const double w = (lu - log_u_[i - 1]) / (log_u_[i] - log_u_[i - 1]);
    return val_[i - 1] + w * (val_[i] - val_[i - 1]);
}

std::optional<double> TailFunction::stderr_at(double u) const {
    if (method_ != TailMethod::MonteCarloTable || se_.empty()) return std::nullopt;
    if (u <= domain_lo_) return se_.front();
    if (u >= domain_hi_) return se_.back();
    const double lu = std::log(u);
    auto it = std::upper_bound(log_u_.begin(), log_u_.end(), lu);
    const size_t i = std::min(log_u_.size() - 1,
                              static_cast<size_t>(std::max<std::ptrdiff_t>(1, it - log_u_.begin())));
    const double w = (lu - log_u_[i - 1]) / (log_u_[i] - log_u_[i - 1]);
    return se_[i - 1] + w * (se_[i] - se_[i - 1]);
}

TailFunction bm_sup_tail() {
    return TailFunction::closed_form([](double u) { return specfun::erfc_halved(u); });
}

double cauchy_sup_density(double x) {
    if (!(x > 0.0)) throw std::domain_error("cauchy_sup_density: requires x > 0");
    return std::exp(-log_kernel(x) / kPi) /
           (kPi * std::sqrt(x) * std::pow(1.0 + x * x, 0.75));
}

namespace {

// survival of the Cauchy supremum for u >= 1 via the reciprocal substitution:
// P(M > u) = (1/pi) \int_0^{1/u} (1+y^2)^{-3/4} e^{-F(y)/pi} dy
double cauchy_tail_hi(double u) {
    auto q = quad::integrate(
        [](double y) {
            if (y <= 0.0) return 1.0 / kPi;
            return std::pow(1.0 + y * y, -0.75) * std::exp(-log_kernel(y) / kPi) / kPi;
        },
        0.0, 1.0 / u, 1e-12, 1e-11);
    return q.value;
}

} // namespace

TailFunction cauchy_sup_tail() {
    auto survival = [](double u) -> double {
        if (u <= 0.0) return 1.0;
        if (u >= 1.0) return cauchy_tail_hi(u);
        // \int_u^1 f + P(M > 1), the sqrt singularity flattened by x = s^2
        auto lo = quad::integrate(
            [](double s) { return 2.0 * s * cauchy_sup_density(s * s); }, std::sqrt(u), 1.0,
            1e-12, 1e-11);
        return lo.value + cauchy_tail_hi(1.0);
    };
    return TailFunction::quadrature(survival, 1e6, 1.0 / kPi, 1.0);
}

double skbm_sup_survival_quadrature(const StableIndex& alpha, double u) {
    if (u <= 0.0) return 1.0;
    if (alpha.is_cauchy()) {
        // subordinator density in closed form collapses the subordination
        // integral to (1/sqrt(pi)) \int_0^inf erfc(u r / 2) e^{-r^2/4} dr
        auto q = quad::integrate_to_inf(
            [u](double r) { return std::erfc(0.5 * u * r) * std::exp(-0.25 * r * r); }, 0.0,
            1e-13, 1e-12);
        return q.value / kSqrtPi;
    }
    const subord::DensityEvalConfig cfg{60, 0.0, 1e-6, true};
    // near part of the time integral, then v = 1/r^2 for the heavy tail
    auto near = quad::integrate(
        [&](double v) {
            if (v <= 0.0) return 0.0;
            const double e = specfun::erfc_halved(u / std::sqrt(v));
            return e > 0.0 ? e * subord::density(alpha, v, cfg) : 0.0;
        },
        0.0, 1.0, 1e-11, 1e-10);
    auto far = quad::integrate(
        [&](double r) {
            if (r <= 0.0) return 0.0;
            const double v = 1.0 / (r * r);
            return specfun::erfc_halved(u * r) * subord::density(alpha, v, cfg) * 2.0 /
                   (r * r * r);
        },
        0.0, 1.0, 1e-11, 1e-10);
    return near.value + far.value;
}

double skbm_sup_survival(const StableIndex& alpha, double u) {
    if (u <= 0.0) return 1.0;
    if (alpha.is_cauchy() && u > 1.0)
        return 2.0 / kPi * std::atan(1.0 / u) + g_arctan_tamper.load(std::memory_order_relaxed);
    return skbm_sup_survival_quadrature(alpha, u);
}

void set_arctan_fast_path_tamper(double delta) {
    g_arctan_tamper.store(delta, std::memory_order_relaxed);
}

TailFunction skbm_sup_tail(const StableIndex& alpha) {
    const double a = alpha.alpha();
    // tail amplitude: P ~ A_tail J u^{-alpha} with J = 2\int erfc(r/2) r^{2rho-1} dr
    const double rho = alpha.subordinator_index();
    auto j = quad::integrate_to_inf(
        [rho](double r) {
            return r > 0.0 ? 2.0 * std::erfc(0.5 * r) * std::pow(r, 2.0 * rho - 1.0) : 0.0;
        },
        0.0, 1e-12, 1e-11);
    const double amp = subord::density_tail_constant(alpha) * j.value;
    StableIndex idx = alpha;
    return TailFunction::quadrature(
        [idx](double u) { return skbm_sup_survival(idx, u); }, 1e6, amp, a);
}

std::vector<double> sample_stable_sup(const StableIndex& alpha, const SupSampleConfig& cfg) {
    validate(cfg);
    auto r = engine::sample_sup(alpha.alpha(), cfg.horizon, cfg.n_steps, cfg.paths, cfg.seed,
                                cfg.threads, false);
    return std::move(r.stable_sup);
}

std::vector<double> sample_subordinate_sup(const StableIndex& alpha,
                                           const SupSampleConfig& cfg) {
    validate(cfg);
    if (!cfg.bridge_correction)
        throw std::invalid_argument(
            "sample_subordinate_sup: bridge_correction must be enabled");
    auto r = engine::sample_sup(alpha.alpha(), cfg.horizon, cfg.n_steps, cfg.paths, cfg.seed,
                                cfg.threads, true);
    return std::move(r.subordinate_sup);
}

SupPair sample_sup_pair(const StableIndex& alpha, const SupSampleConfig& cfg) {
    validate(cfg);
    auto r = engine::sample_sup(alpha.alpha(), cfg.horizon, cfg.n_steps, cfg.paths, cfg.seed,
                                cfg.threads, true);
    return SupPair{std::move(r.stable_sup), std::move(r.subordinate_sup),
                   std::move(r.endpoint)};
}

MeanResult mean_stable_sup(const StableIndex& alpha, const SupSampleConfig& cfg) {
    validate(cfg);
    if (alpha.alpha() <= 1.0)
        throw std::domain_error("mean_stable_sup: mean finite only for alpha in (1,2)");
    auto r = engine::skeleton_sup_mean(alpha.alpha(), cfg.n_steps, cfg.paths, cfg.seed,
                                       cfg.threads);
    return MeanResult{r.full.mean, r.full.stderr_, r.full.mean - r.half_mean, r.full.n};
}

MeanResult mean_subordinate_sup(const StableIndex& alpha, const SupSampleConfig& cfg) {
    validate(cfg);
    if (!cfg.bridge_correction)
        throw std::invalid_argument("mean_subordinate_sup: bridge_correction must be enabled");
    auto r = engine::bridged_sup_mean(alpha.alpha(), cfg.horizon, cfg.n_steps, cfg.paths,
                                      cfg.seed, cfg.threads);
    return MeanResult{r.mean, r.stderr_, 0.0, r.n};
}

MeanResult subordinate_sup_survival(const StableIndex& alpha, double t, double threshold,
                                    const SupSampleConfig& cfg) {
    validate(cfg);
    auto r = engine::bridged_sup_survival(alpha.alpha(), t, threshold, cfg.n_steps, cfg.paths,
                                          cfg.seed, cfg.threads);
    return MeanResult{r.mean, r.stderr_, 0.0, r.n};
}

MeanResult brownian_bridged_sup_survival(double total_time, double threshold,
                                         const SupSampleConfig& cfg) {
    validate(cfg);
    auto r = engine::brownian_bridged_sup_survival(total_time, threshold, cfg.n_steps,
                                                   cfg.paths, cfg.seed, cfg.threads);
    return MeanResult{r.mean, r.stderr_, 0.0, r.n};
}

TailFunction stable_sup_tail_table(const StableIndex& alpha, const SupSampleConfig& cfg,
                                   double u_lo, double u_hi, int n_abscissae) {
    auto samples = sample_stable_sup(alpha, cfg);
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<double> us(static_cast<size_t>(n_abscissae)), sv(us.size()), se(us.size());
    const double step = std::log(u_hi / u_lo) / (n_abscissae - 1);
    for (int i = 0; i < n_abscissae; ++i) {
        const double u = u_lo * std::exp(step * i);
        const auto above =
            samples.end() - std::upper_bound(samples.begin(), samples.end(), u);
        const double p = static_cast<double>(above) / n;
        us[static_cast<size_t>(i)] = u;
        sv[static_cast<size_t>(i)] = p;
        se[static_cast<size_t>(i)] = std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n);
    }
    const double amp = specfun::levy_constant(alpha) / alpha.alpha();
    return TailFunction::table(std::move(us), std::move(sv), std::move(se), amp,
                               alpha.alpha());
}

} // namespace shc::sup
