#pragma once

#include "shc/stable_index.hpp"
#include "shc/supremum.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace shc::heat {

// Open interval D = (a,b); |D| = b-a, two boundary points.
struct Interval {
    double a = 0.0, b = 1.0;
    Interval() = default;
    Interval(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw std::invalid_argument("Interval: requires a < b");
    }
    double length() const { return b - a; }
    static constexpr int boundary_count = 2;
};

enum class ProcessKind { KilledSubordinate, SubordinateKilled };
enum class Provenance { Series, Quadrature, MonteCarlo };

struct HeatPoint {
    double t = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
    double bias_diag = 0.0;  // grid-refinement diagnostic; 0 for exact methods
};

struct HeatCurve {
    ProcessKind kind = ProcessKind::SubordinateKilled;
    double alpha = 1.0;
    Interval interval;
    Provenance provenance = Provenance::Series;
    std::vector<HeatPoint> points;
};

struct McConfig {
    long long paths = 100000;
    long long n_steps = 1000;
    int x_strata = 64;
    std::uint64_t seed = 0;
    int threads = 0;  // 0: hardware default

    void validate() const {
        if (paths < 1 || n_steps < 1 || x_strata < 1)
            throw std::invalid_argument("McConfig: paths, n_steps, x_strata must be positive");
    }
};

// Heat content of the subordinate killed process by its Dirichlet
// eigenfunction series: sum over odd n of (8|D|/(n pi)^2) exp(-t (n pi/|D|)^alpha).
// Exact up to truncation; the truncation error is bounded by 8|D|/(pi^2 n_terms).
double sk_series(const StableIndex& alpha, Interval D, double t, long long n_terms);

// Same series truncated adaptively so the dropped mass is below tol.
double sk_series_auto(const StableIndex& alpha, Interval D, double t, double tol = 1e-14);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double bias_diag = 0.0;
    long long paths = 0;
};

// Monte Carlo heat content of the subordinate killed process: survival of the
// Brownian path inside D over all Brownian time up to S_t, with exact bridge
// extrema on every subordinator segment (no grid bias).
McEstimate sk_mc(const StableIndex& alpha, Interval D, double t, const McConfig& cfg);

// Monte Carlo heat content of the killed subordinate process: survival of the
// jump process read at the n_steps grid only. One-sided grid bias
// (overestimates), reported via bias_diag = estimate(n/2 grid) - estimate(n grid).
McEstimate ks_mc(const StableIndex& alpha, Interval D, double t, const McConfig& cfg);

// Both flavors from shared randomness, with pathwise-order bookkeeping.
struct CoupledResult {
    McEstimate sk, ks;
    long long order_violations = 0;  // sk survival indicator exceeded ks (never expected)
    long long strict_gap = 0;        // paths where ks survived but sk did not
};
CoupledResult coupled_mc(const StableIndex& alpha, Interval D, double t, const McConfig& cfg);

// One-dimensional reduction of the killed-process defect:
//   main_term = 2 t^{1/alpha} \int_0^{|D| t^{-1/alpha}} tail(u) du,
//   crossing_bound = calibrated bound on the two-sided crossing correction, so
//   |D| - Q(t) lies in [main_term - crossing_bound, main_term].
struct ReductionResult {
    double main_term = 0.0;
    double crossing_bound = 0.0;
};
ReductionResult ks_reduction(const StableIndex& alpha, Interval D, double t,
                             const sup::TailFunction& tail);

// MC estimate of \int_a^b P_x(path exceeds b and drops below a by time t) dx.
McEstimate crossing_mc(ProcessKind kind, const StableIndex& alpha, Interval D, double t,
                       const McConfig& cfg);

// Curves over a log-spaced t grid.
std::vector<double> log_grid(double t_min, double t_max, int points);
HeatCurve heat_curve_series(const StableIndex& alpha, Interval D,
                            const std::vector<double>& t_grid);
HeatCurve heat_curve_mc(ProcessKind kind, const StableIndex& alpha, Interval D,
                        const std::vector<double>& t_grid, const McConfig& cfg);

} // namespace shc::heat
