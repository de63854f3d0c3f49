#include "shc/validation.hpp"

#include "shc/asymptotics.hpp"
#include "shc/heatcontent.hpp"
#include "shc/quadrature.hpp"
#include "shc/specfun.hpp"
#include "shc/stable_index.hpp"
#include "shc/subordinator.hpp"
#include "shc/supremum.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace shc::validation {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kSqrtPi = 1.772453850905516027298167483341145;

struct Clause {
    std::string name;
    double measured;
    double tolerance;
};

struct Builder {
    std::string id, description;
    std::vector<Clause> clauses;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double budget_seconds = 0.0;

    void add(std::string name, double measured, double tolerance) {
        clauses.push_back(Clause{std::move(name), measured, tolerance});
    }
    CriterionResult finish() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budget_seconds > 0.0) clauses.push_back(Clause{"runtime_s", secs, budget_seconds});
        CriterionResult r;
        r.id = id;
        r.description = description;
        r.seconds = secs;
        r.pass = true;
        double worst = -1.0;
        for (const auto& c : clauses) {
            const bool ok = c.measured <= c.tolerance;
            r.pass = r.pass && ok;
            const double ratio = c.tolerance > 0.0 ? c.measured / c.tolerance
                                                   : (ok ? 0.0 : 2.0);
            if (ratio > worst) {
                worst = ratio;
                r.measured = c.measured;
                r.tolerance = c.tolerance;
            }
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s%s=%.6g (tol %.6g)",
                          r.detail.empty() ? "" : "; ", c.name.c_str(), c.measured,
                          c.tolerance);
            r.detail += buf;
        }
        return r;
    }
};

double closed_half_density(double x) {
    return std::pow(x, -1.5) * std::exp(-0.25 / x) / (2.0 * kSqrtPi);
}

double catalan_by_series() {
    // paired alternating terms of sum (-1)^k/(2k+1)^2
    double g = 0.0;
    for (long long k = 200000; k-- > 0;) {
        const double a = 4.0 * static_cast<double>(k) + 1.0;
        const double b = a + 2.0;
        g += 1.0 / (a * a) - 1.0 / (b * b);
    }
    return g;
}

CriterionResult a1(int) {
    Builder b;
    b.id = "A1";
    b.description = "subordinator density series matches the alpha=1 closed form on [0.5,50]";
    b.budget_seconds = 5.0;
    const StableIndex idx(1.0);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = 0.5 * std::pow(100.0, i / 400.0);
        const double got = subord::density(idx, x);
        const double want = closed_half_density(x);
        worst = std::max(worst, std::fabs(got - want) / want);
    }
    b.add("max_rel_err", worst, 1e-8);
    return b.finish();
}

CriterionResult a2(int threads) {
    Builder b;
    b.id = "A2";
    b.description = "arctan law: quadrature vs fast path, and bridge-corrected MC at u=2";
    b.budget_seconds = 60.0;
    const StableIndex idx(1.0);
    double worst = 0.0;
    for (double u : {1.1, 2.0, 5.0, 10.0}) {
        const double fast = sup::skbm_sup_survival(idx, u);
        const double quad = sup::skbm_sup_survival_quadrature(idx, u);
        worst = std::max(worst, std::fabs(fast - quad));
    }
    b.add("quad_vs_fast_abs", worst, 1e-9);

    sup::SupSampleConfig cfg;
    cfg.paths = 1'000'000;
    cfg.n_steps = 256;
    cfg.bridge_correction = true;
    cfg.seed = 20260809;
    cfg.threads = threads;
    auto mc = sup::subordinate_sup_survival(idx, 1.0, 2.0, cfg);
    const double want = sup::skbm_sup_survival(idx, 2.0);
    b.add("mc_vs_arctan_sigmas", std::fabs(mc.estimate - want) / mc.stderr_, 3.0);
    return b.finish();
}

CriterionResult a3(int threads) {
    Builder b;
    b.id = "A3";
    b.description = "mean of the bridged supremum at alpha=1.5 matches 2*Gamma(1/3)/pi";
    b.budget_seconds = 300.0;
    const StableIndex idx(1.5);
    sup::SupSampleConfig cfg;
    cfg.paths = 1'000'000;
    cfg.n_steps = 10'000;
    cfg.bridge_correction = true;
    cfg.seed = 31415926;
    cfg.threads = threads;
    auto mc = sup::mean_subordinate_sup(idx, cfg);
    const double want = specfun::skbm_second_coeff(idx);
    b.add("mc_vs_constant_sigmas", std::fabs(mc.estimate - want) / mc.stderr_, 3.0);
    return b.finish();
}

CriterionResult a4(int) {
    Builder b;
    b.id = "A4";
    b.description = "third coefficient, subordinate killed, alpha=1.5, via the eigenseries";
    b.budget_seconds = 10.0;
    const StableIndex idx(1.5);
    const heat::Interval D(0.0, 1.0);
    auto e = asym::theorem_expansion(heat::ProcessKind::SubordinateKilled, idx, D);
    heat::HeatCurve curve = heat::heat_curve_series(idx, D, {1e-5});
    auto res = asym::residual_curve(curve, e);
    b.add("residual_rel_err", std::fabs(res[0].second - e.c3) / std::fabs(e.c3), 0.05);
    return b.finish();
}

CriterionResult a5(int) {
    Builder b;
    b.id = "A5";
    b.description = "third coefficient, subordinate killed, alpha=1, log term removed";
    b.budget_seconds = 30.0;
    const StableIndex idx(1.0);
    const heat::Interval D(0.0, 1.0);
    auto e = asym::theorem_expansion(heat::ProcessKind::SubordinateKilled, idx, D);
    heat::HeatCurve curve = heat::heat_curve_series(idx, D, {1e-4, 1e-5, 1e-6});
    auto res = asym::residual_curve(curve, e);
    const double err4 = std::fabs(res[0].second - e.c3);
    const double err5 = std::fabs(res[1].second - e.c3);
    const double err6 = std::fabs(res[2].second - e.c3);
    b.add("residual_rel_err_at_1e-6", err6 / std::fabs(e.c3), 0.05);
    b.add("monotone_improvement", (err5 <= err4 && err6 <= err5) ? 0.0 : 1.0, 0.5);
    return b.finish();
}

CriterionResult a6(int) {
    Builder b;
    b.id = "A6";
    b.description = "log coefficient, killed subordinate, alpha=1, via the 1-dim reduction";
    b.budget_seconds = 60.0;
    const StableIndex idx(1.0);
    const heat::Interval D(0.0, 1.0);
    auto tail = sup::cauchy_sup_tail();
    auto red = heat::ks_reduction(idx, D, 1e-6, tail);
    const double t = 1e-6;
    const double ratio = red.main_term / (t * std::log(1.0 / t));
    b.add("main_over_tlog_rel_err", std::fabs(ratio - 2.0 / kPi) / (2.0 / kPi), 0.02);

    // the linear-coefficient constant is finite: the excess integral converges
    // and the integrand is inside the (4/pi^2) ln(u)/u^2 envelope past U_emp
    double u_emp = -1.0;
    double worst_env = 0.0;
    for (int i = 60; i >= 0; --i) {
        const double u = 2.0 * std::pow(1e4 / 2.0, i / 60.0);
        const double excess = std::fabs(tail.survival(u) - 1.0 / (kPi * u));
        const double envelope = 4.0 / (kPi * kPi) * std::log(u) / (u * u);
        if (excess <= envelope) u_emp = u;
        else break;
    }
    if (u_emp < 0.0) worst_env = 1.0;
    b.add("envelope_holds_past_u_emp", worst_env, 0.5);

    auto partial = [&](double m) {
        auto q = quad::integrate(
            [&](double u) { return tail.survival(u) - 1.0 / (kPi * u); }, 1.0, m, 1e-10,
            1e-9, 20000);
        return q.value;
    };
    const double p4 = partial(1e4), p6 = partial(1e6);
    const double tail_bound = 4.0 / (kPi * kPi) * (std::log(1e4) + 1.0) / 1e4;
    b.add("excess_integral_cauchy_diff", std::fabs(p6 - p4), tail_bound);
    const double finite = std::isfinite(p6) ? 0.0 : 1.0;
    b.add("constant_finite", finite, 0.5);
    char extra[96];
    std::snprintf(extra, sizeof extra, "u_emp=%.3g", u_emp);
    auto r = b.finish();
    r.detail += std::string("; ") + extra;
    return r;
}

CriterionResult a7(int threads) {
    Builder b;
    b.id = "A7";
    b.description = "third coefficient, killed subordinate, alpha=1.5, from Monte Carlo data";
    b.budget_seconds = 1800.0;
    const StableIndex idx(1.5);
    const heat::Interval D(0.0, 1.0);
    const long long n_steps = 512;

    heat::McConfig cfg;
    cfg.paths = 10'000'000;
    cfg.n_steps = n_steps;
    cfg.seed = 777;
    cfg.threads = threads;
    auto grid = heat::log_grid(1e-4, 1e-2, 9);
    auto curve = heat::heat_curve_mc(heat::ProcessKind::KilledSubordinate, idx, D, grid, cfg);

    const asym::BasisTerm basis[] = {asym::BasisTerm::PowerInvAlpha, asym::BasisTerm::Linear};
    auto fit = asym::fit_coefficients(curve, basis, 1e-4, 1e-2);

    sup::SupSampleConfig scfg;
    scfg.paths = 4'000'000;
    scfg.n_steps = n_steps;
    scfg.seed = 778;
    scfg.threads = threads;
    auto mean = sup::mean_stable_sup(idx, scfg);

    const double c2_ref = 2.0 * mean.estimate;
    const double joint = std::sqrt(fit.coeff_stderr[0] * fit.coeff_stderr[0] +
                                   4.0 * mean.stderr_ * mean.stderr_);
    b.add("c2_vs_mean_sigmas", std::fabs(fit.coeff[0] - c2_ref) / joint, 3.0);

    const double c3_mag = specfun::ksbm_third_coeff(idx, D.length());
    b.add("c3_sign", fit.coeff[1] < 0.0 ? 0.0 : 1.0, 0.5);
    b.add("c3_rel_err", std::fabs(-fit.coeff[1] - c3_mag) / c3_mag, 0.2);
    return b.finish();
}

CriterionResult a8(int threads) {
    Builder b;
    b.id = "A8";
    b.description = "pathwise coupling order and series agreement for the subordinate killed flavor";
    b.budget_seconds = 300.0;
    long long violations = 0;
    double worst_sigma = 0.0;
    int combo = 0;
    for (double alpha : {1.0, 1.5}) {
        for (double t : {0.01, 0.1}) {
            const StableIndex idx(alpha);
            const heat::Interval D(0.0, 1.0);
            heat::McConfig cfg;
            cfg.paths = 100'000;
            cfg.n_steps = 512;
            cfg.seed = 9000 + combo++;
            cfg.threads = threads;
            auto r = heat::coupled_mc(idx, D, t, cfg);
            violations += r.order_violations;
            const double series = heat::sk_series_auto(idx, D, t);
            worst_sigma =
                std::max(worst_sigma, std::fabs(series - r.sk.estimate) / r.sk.stderr_);
        }
    }
    b.add("order_violations", static_cast<double>(violations), 0.5);
    b.add("series_vs_mc_sigmas", worst_sigma, 3.0);
    return b.finish();
}

double fitted_slope(const std::vector<double>& ts, const std::vector<double>& ps) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        const double x = std::log(ts[i]), y = std::log(ps[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CriterionResult a9(int threads) {
    Builder b;
    b.id = "A9";
    b.description = "crossing-term and single-barrier exponents";
    b.budget_seconds = 900.0;
    const heat::Interval D(0.0, 1.0);
    const std::vector<double> ts{1e-3, 3e-3, 1e-2};
    const long long path_budget[3] = {20'000'000, 8'000'000, 4'000'000};

    auto slope_for = [&](heat::ProcessKind kind, double alpha) {
        const StableIndex idx(alpha);
        std::vector<double> ps;
        for (size_t i = 0; i < ts.size(); ++i) {
            heat::McConfig cfg;
            cfg.paths = path_budget[i];
            cfg.n_steps = 512;
            cfg.seed = 4200 + static_cast<std::uint64_t>(i) +
                       (kind == heat::ProcessKind::SubordinateKilled ? 50 : 0) +
                       (alpha > 1.0 ? 100 : 0);
            cfg.threads = threads;
            ps.push_back(heat::crossing_mc(kind, idx, D, ts[i], cfg).estimate);
        }
        return fitted_slope(ts, ps);
    };

    const double s_ks15 = slope_for(heat::ProcessKind::KilledSubordinate, 1.5);
    b.add("ks_alpha1.5_slope_deficit", std::max(0.0, (1.0 + 1.0 / 1.5 - 0.1) - s_ks15), 0.0);
    const double s_ks1 = slope_for(heat::ProcessKind::KilledSubordinate, 1.0);
    b.add("ks_alpha1_slope_deficit", std::max(0.0, 1.8 - s_ks1), 0.0);
    const double s_sk1 = slope_for(heat::ProcessKind::SubordinateKilled, 1.0);
    b.add("sk_alpha1_slope_deficit", std::max(0.0, 1.8 - s_sk1), 0.0);

    // single-barrier tail P(sup over [0, S_t] > |D|) is O(t)
    std::vector<double> ts2{1e-3, 1e-2, 1e-1}, ps2;
    for (size_t i = 0; i < ts2.size(); ++i) {
        sup::SupSampleConfig cfg;
        cfg.paths = 2'000'000;
        cfg.n_steps = 256;
        cfg.bridge_correction = true;
        cfg.seed = 4300 + static_cast<std::uint64_t>(i);
        cfg.threads = threads;
        ps2.push_back(sup::subordinate_sup_survival(StableIndex(1.5), ts2[i], D.length(), cfg)
                          .estimate);
    }
    b.add("single_barrier_slope_deficit", std::max(0.0, 0.95 - fitted_slope(ts2, ps2)), 0.0);
    return b.finish();
}

CriterionResult a10(int) {
    Builder b;
    b.id = "A10";
    b.description = "Cauchy supremum density: normalization and the value at 1";
    b.budget_seconds = 5.0;
    auto low = quad::integrate(
        [](double s) { return 2.0 * s * sup::cauchy_sup_density(s * s); }, 0.0, 1.0, 1e-10,
        1e-10);
    auto tail = sup::cauchy_sup_tail();
    const double mass = low.value + tail.survival(1.0);
    b.add("normalization_err", std::fabs(mass - 1.0), 1e-6);

    const double g = catalan_by_series();
    const double want = std::exp(g / kPi) / (kPi * std::pow(2.0, 0.75));
    b.add("f1_abs_err", std::fabs(sup::cauchy_sup_density(1.0) - want), 1e-6);
    return b.finish();
}

} // namespace

std::vector<std::string> criteria_ids(const std::string& suite) {
    if (suite == "fast") return {"A1", "A2", "A4", "A5", "A6", "A10"};
    if (suite == "full")
        return {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"};
    throw std::invalid_argument("criteria_ids: suite must be 'fast' or 'full'");
}

CriterionResult run_criterion(const std::string& id, int threads) {
    if (id == "A1") return a1(threads);
    if (id == "A2") return a2(threads);
    if (id == "A3") return a3(threads);
    if (id == "A4") return a4(threads);
    if (id == "A5") return a5(threads);
    if (id == "A6") return a6(threads);
    if (id == "A7") return a7(threads);
    if (id == "A8") return a8(threads);
    if (id == "A9") return a9(threads);
    if (id == "A10") return a10(threads);
    throw std::invalid_argument("run_criterion: unknown id " + id);
}

std::vector<CriterionResult> run_suite(const std::string& suite, int threads) {
    std::vector<CriterionResult> out;
    for (const auto& id : criteria_ids(suite)) out.push_back(run_criterion(id, threads));
    return out;
}

std::vector<ArctanEvidenceRow> arctan_below_one_table() {
    std::vector<ArctanEvidenceRow> rows;
    const StableIndex idx(1.0);
    for (int i = 1; i <= 9; ++i) {
        const double u = 0.1 * i;
        const double q = sup::skbm_sup_survival_quadrature(idx, u);
        const double a = 2.0 / kPi * std::atan(1.0 / u);
        rows.push_back(ArctanEvidenceRow{u, q, a, q - a});
    }
    return rows;
}

} // namespace shc::validation
