#pragma once

#include "shc/rng.hpp"
#include "shc/stable_index.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace shc::sup {

enum class TailMethod { ClosedForm, Quadrature, MonteCarloTable };

// Survival function u -> P(M > u) of a supremum functional on [domain_lo,
// domain_hi], with an optional power-law continuation A u^{-k} past
// domain_hi. Monte Carlo tables interpolate linearly in log u and carry a
// standard error per abscissa.
class TailFunction {
public:
    TailMethod method() const { return method_; }
    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }

    double survival(double u) const;
    std::optional<double> stderr_at(double u) const;

    bool has_asymptote() const { return tail_amp_ > 0.0; }
    double asymptote_amplitude() const { return tail_amp_; }
    double asymptote_exponent() const { return tail_exp_; }

    static TailFunction closed_form(std::function<double(double)> fn,
                                    double tail_amp = 0.0, double tail_exp = 0.0);
    static TailFunction quadrature(std::function<double(double)> fn, double domain_hi,
                                   double tail_amp = 0.0, double tail_exp = 0.0);
    static TailFunction table(std::vector<double> u, std::vector<double> survival,
                              std::vector<double> se, double tail_amp, double tail_exp);

private:
    TailMethod method_ = TailMethod::ClosedForm;
    double domain_lo_ = 0.0, domain_hi_ = 0.0;
    std::function<double(double)> fn_;
    std::vector<double> log_u_, val_, se_;
    double tail_amp_ = 0.0, tail_exp_ = 0.0;
};

// P(sup_{s<=1} W_s > u) = erfc(u/2); closed form, continuation-free.
TailFunction bm_sup_tail();

// Density of the running maximum at time 1 of the Cauchy process
// (Darling's law): f(x) = exp(-I(x)/pi) / (pi sqrt(x) (1+x^2)^{3/4}).
double cauchy_sup_density(double x);

// Its survival function by quadrature; absolute accuracy <= 1e-9 on [0, 1e6],
// continued by 1/(pi u) beyond.
TailFunction cauchy_sup_tail();

// P(sup of W over the whole random time interval [0, S_1^{(alpha/2)}] > u) by
// quadrature of erfc(u/(2 sqrt(v))) against the subordinator density. For
// alpha = 1 and u > 1 the exact closed form (2/pi) arctan(1/u) is used.
TailFunction skbm_sup_tail(const StableIndex& alpha);

// Direct evaluations behind skbm_sup_tail, exposed for cross-checks.
double skbm_sup_survival_quadrature(const StableIndex& alpha, double u);
double skbm_sup_survival(const StableIndex& alpha, double u);

// Test hook: additively perturbs the alpha=1 arctan fast path. Used by the
// validation suite's mutation smoke test. Always reset to 0 afterwards.
void set_arctan_fast_path_tamper(double delta);

struct SupSampleConfig {
    long long n_steps = 1;
    bool bridge_correction = false;
    long long paths = 1;
    std::uint64_t seed = 0;
    int threads = 0;      // 0: hardware default
    double horizon = 1.0; // operational time
};

// Skeleton supremum of the stable process: max over the n-step grid of W read
// at the subordinator's running sums. Negative bias shrinking in n_steps.
std::vector<double> sample_stable_sup(const StableIndex& alpha, const SupSampleConfig& cfg);

// Supremum of W over all Brownian time up to S_horizon: the same skeleton
// plus an exact bridge-maximum draw on every segment. Exact in law for any
// n_steps. Requires cfg.bridge_correction.
std::vector<double> sample_subordinate_sup(const StableIndex& alpha,
                                           const SupSampleConfig& cfg);

// Both functionals from shared randomness; subordinate_sup[i] >= stable_sup[i]
// pathwise. endpoint[i] is the final skeleton value W_{S_horizon}.
struct SupPair {
    std::vector<double> stable_sup, subordinate_sup, endpoint;
};
SupPair sample_sup_pair(const StableIndex& alpha, const SupSampleConfig& cfg);

struct MeanResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double bias_diag = 0.0;  // estimate minus the half-resolution estimate
    long long paths = 0;
};

// Monte Carlo mean of the skeleton supremum of the stable process at time 1.
// Finite only for alpha in (1,2).
MeanResult mean_stable_sup(const StableIndex& alpha, const SupSampleConfig& cfg);

// Monte Carlo mean of the bridge-corrected Brownian supremum up to S_1.
MeanResult mean_subordinate_sup(const StableIndex& alpha, const SupSampleConfig& cfg);

// P(sup of W over [0, S_t] > threshold), bridge-corrected (unbiased).
MeanResult subordinate_sup_survival(const StableIndex& alpha, double t, double threshold,
                                    const SupSampleConfig& cfg);

// Bridge sampler validation: P(max of the bridge-augmented skeleton of a
// plain Brownian path on total time v > u); should match erfc(u/(2 sqrt(v))).
MeanResult brownian_bridged_sup_survival(double total_time, double threshold,
                                         const SupSampleConfig& cfg);

// Monte Carlo tail table of the stable-process supremum on 512 log-spaced
// abscissae, continued by the stable tail A u^{-alpha}/alpha.
TailFunction stable_sup_tail_table(const StableIndex& alpha, const SupSampleConfig& cfg,
                                   double u_lo = 1e-3, double u_hi = 1e3, int n_abscissae = 512);

} // namespace shc::sup
