#pragma once

#include "shc/heatcontent.hpp"
#include "shc/stable_index.hpp"
#include "shc/supremum.hpp"

#include <span>
#include <string>
#include <vector>

namespace shc::asym {

enum class CoeffProvenance { NotApplicable, ClosedForm, Quadrature, MonteCarlo };

// Small-time expansion of the heat content defect,
//   |D| - Q(t) ~ c2 t^{1/alpha} + c2log t ln(1/t) + c3 t,
// c3 being the signed coefficient of t in the defect: negative for
// alpha in (1,2), positive (for unit-order intervals) at alpha = 1.
struct Expansion {
    heat::ProcessKind kind = heat::ProcessKind::SubordinateKilled;
    double alpha = 1.5;
    heat::Interval interval;
    double c1 = 1.0;      // |D|
    double c2 = 0.0;      // coefficient of t^{1/alpha}; 0 at alpha = 1
    double c2log = 0.0;   // coefficient of t ln(1/t); 0 for alpha in (1,2)
    double c3 = 0.0;
    double c2_stderr = 0.0;  // nonzero only when c2 is Monte Carlo
    CoeffProvenance c2_prov = CoeffProvenance::NotApplicable;
    CoeffProvenance c3_prov = CoeffProvenance::NotApplicable;
};

struct ExpansionResources {
    sup::SupSampleConfig mc;  // budget for constants that need sampling
    ExpansionResources() {
        mc.paths = 2'000'000;
        mc.n_steps = 2048;
        mc.seed = 0xA5A5A5A5ULL;
    }
};

// Expansion coefficients from the limit theorems: closed forms and
// quadratures where available, Monte Carlo for E[sup X] when alpha in (1,2).
// alpha in (0,1) is unsupported (third terms unknown there).
Expansion theorem_expansion(heat::ProcessKind kind, const StableIndex& alpha,
                            heat::Interval D, const ExpansionResources& res = {});

// Predicted Q(t) = c1 - c2 t^{1/alpha} - c2log t ln(1/t) - c3 t.
double eval_expansion(const Expansion& e, double t);

// residual(t) = (c1 - value(t) - c2 t^{1/alpha} - c2log t ln(1/t)) / t -> c3.
std::vector<std::pair<double, double>> residual_curve(const heat::HeatCurve& curve,
                                                      const Expansion& e);

enum class BasisTerm { PowerInvAlpha, TLogInvT, Linear };

std::string basis_name(BasisTerm b);

struct FitResult {
    std::vector<BasisTerm> basis;
    std::vector<double> coeff;
    std::vector<double> coeff_stderr;
    double residual_norm = 0.0;
    double t_min = 0.0, t_max = 0.0;
    double condition = 0.0;
    long long points_used = 0;
};

// Weighted least squares of the defect c1 - value(t) on the chosen basis over
// [t_min, t_max]; weights 1/stderr^2 for Monte Carlo curves, unit otherwise.
// Throws if fewer than 2x|basis| points fall in the window or the design is
// ill-conditioned (condition number > 1e12).
FitResult fit_coefficients(const heat::HeatCurve& curve, std::span<const BasisTerm> basis,
                           double t_min, double t_max);

} // namespace shc::asym
