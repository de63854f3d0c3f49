#include "shc/asymptotics.hpp"

#include "shc/quadrature.hpp"
#include "shc/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shc::asym {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kSqrtPi = 1.772453850905516027298167483341145;

// \int_0^z erfc(w/2) dw = z erfc(z/2) + (2/sqrt(pi))(1 - e^{-z^2/4})
double erfc_halved_antiderivative(double z) {
    return z * std::erfc(0.5 * z) + 2.0 / kSqrtPi * (-std::expm1(-0.25 * z * z));
}

// \int_1^inf (arctan(1/u) - 1/u) du = \int_0^1 (arctan y - y)/y^2 dy
double arctan_excess_integral() {
    auto q = quad::integrate(
        [](double y) {
            if (y < 1e-4) return -y / 3.0 + y * y * y / 5.0;  // series near 0
            return (std::atan(y) - y) / (y * y);
        },
        0.0, 1.0, 1e-14, 1e-13);
    return q.value;
}

// Expansion constant for the killed Cauchy process:
// \int_0^1 P(sup X > u) du + ln|D|/pi + \int_1^inf (P(sup X > u) - 1/(pi u)) du
double cauchy_ks_bracket(double len, const sup::TailFunction& tail) {
    // \int_0^1 P du = \int_0^1 x f(x) dx + P(1); sqrt substitution flattens f
    auto q1 = quad::integrate(
        [](double s) { return 2.0 * s * s * s * sup::cauchy_sup_density(s * s); }, 0.0, 1.0,
        1e-12, 1e-11);
    const double p1 = tail.survival(1.0);
    // \int_1^inf (P - 1/(pi u)) du = \int_1^inf (x-1)(f(x) - 1/(pi x^2)) dx,
    // mapped through x = 1/y and then y = e^{-s} for the log endpoint
    auto excess = [](double y) {
        const double fy = std::pow(1.0 + y * y, -0.75) *
                          std::exp(-shc::specfun::catalan_exponent(1.0 / y) / kPi);
        return (1.0 - y) / y * (fy - 1.0) / kPi;
    };
    auto q2 = quad::integrate_to_inf(
        [&](double s) {
            const double y = std::exp(-s);
            return excess(y) * y;
        },
        0.0, 1e-12, 1e-11);
    return q1.value + p1 + std::log(len) / kPi + q2.value;
}

// Same constant for the subordinate killed flavor:
// \int_0^1 P(sup W_{[0,S_1]} > u) du + 2 ln|D|/pi + \int_1^inf (P - 2/(pi u)) du
double cauchy_sk_bracket(double len) {
    // \int_0^1 P du = (1/sqrt(pi)) \int_0^inf (A(r)/r) e^{-r^2/4} dr with
    // A(z) the erfc antiderivative above
    auto q1 = quad::integrate_to_inf(
        [](double r) {
            const double ratio = r < 1e-6 ? 1.0 : erfc_halved_antiderivative(r) / r;
            return ratio * std::exp(-0.25 * r * r);
        },
        0.0, 1e-13, 1e-12);
    // the u > 1 integrand uses the exact arctan form
    const double q2 = 2.0 / kPi * arctan_excess_integral();
    return q1.value / kSqrtPi + 2.0 * std::log(len) / kPi + q2;
}

} // namespace

Expansion theorem_expansion(heat::ProcessKind kind, const StableIndex& alpha,
                            heat::Interval D, const ExpansionResources& res) {
    const double a = alpha.alpha();
    if (a < 1.0)
        throw std::domain_error(
            "theorem_expansion: third-order coefficients unknown for alpha in (0,1)");
    Expansion e;
    e.kind = kind;
    e.alpha = a;
    e.interval = D;
    e.c1 = D.length();
    const double boundary = heat::Interval::boundary_count;

    if (kind == heat::ProcessKind::KilledSubordinate) {
        if (alpha.is_cauchy()) {
            e.c2 = 0.0;
            e.c2log = boundary / kPi;
            e.c3 = boundary * cauchy_ks_bracket(D.length(), sup::cauchy_sup_tail());
            e.c2_prov = CoeffProvenance::ClosedForm;
            e.c3_prov = CoeffProvenance::Quadrature;
        } else {
            auto mean = sup::mean_stable_sup(alpha, res.mc);
            e.c2 = boundary * mean.estimate;
            e.c2_stderr = boundary * mean.stderr_;
            e.c3 = -specfun::ksbm_third_coeff(alpha, D.length());
            e.c2_prov = CoeffProvenance::MonteCarlo;
            e.c3_prov = CoeffProvenance::ClosedForm;
        }
    } else {
        if (alpha.is_cauchy()) {
            e.c2 = 0.0;
            e.c2log = 2.0 * boundary / kPi;
            e.c3 = boundary * cauchy_sk_bracket(D.length());
            e.c2_prov = CoeffProvenance::ClosedForm;
            e.c3_prov = CoeffProvenance::Quadrature;
        } else {
            e.c2 = boundary * specfun::skbm_second_coeff(alpha);
            // c3 magnitude: 2 alpha \int_0^inf P(sup W_1 >= u) u^{alpha-1} du
            //               / ((alpha-1) Gamma(1-alpha/2) |D|^{alpha-1})
            auto moment = quad::integrate_to_inf(
                [a](double u) {
                    return u > 0.0 ? specfun::erfc_halved(u) * std::pow(u, a - 1.0) : 0.0;
                },
                0.0, 1e-12, 1e-11);
            const double closed = std::pow(2.0, a) * specfun::gamma(0.5 * (a + 1.0)) /
                                  (a * kSqrtPi);
            if (std::fabs(moment.value - closed) > 1e-8 * closed)
                throw std::runtime_error(
                    "theorem_expansion: supremum moment quadrature disagrees with closed form");
            e.c3 = -2.0 * a * moment.value /
                   ((a - 1.0) * specfun::gamma(1.0 - 0.5 * a) * std::pow(D.length(), a - 1.0));
            e.c2_prov = CoeffProvenance::ClosedForm;
            e.c3_prov = CoeffProvenance::Quadrature;
        }
    }
    return e;
}

double eval_expansion(const Expansion& e, double t) {
    if (!(t > 0.0)) throw std::domain_error("eval_expansion: requires t > 0");
    return e.c1 - e.c2 * std::pow(t, 1.0 / e.alpha) - e.c2log * t * std::log(1.0 / t) -
           e.c3 * t;
}

std::vector<std::pair<double, double>> residual_curve(const heat::HeatCurve& curve,
                                                      const Expansion& e) {
    if (curve.kind != e.kind || curve.alpha != e.alpha ||
        curve.interval.a != e.interval.a || curve.interval.b != e.interval.b)
        throw std::invalid_argument("residual_curve: curve and expansion metadata mismatch");
    std::vector<std::pair<double, double>> out;
    out.reserve(curve.points.size());
    for (const auto& p : curve.points) {
        const double defect = e.c1 - p.value;
        const double r = (defect - e.c2 * std::pow(p.t, 1.0 / e.alpha) -
                          e.c2log * p.t * std::log(1.0 / p.t)) /
                         p.t;
        out.emplace_back(p.t, r);
    }
    return out;
}

std::string basis_name(BasisTerm b) {
    switch (b) {
        case BasisTerm::PowerInvAlpha: return "t^(1/alpha)";
        case BasisTerm::TLogInvT: return "t*ln(1/t)";
        case BasisTerm::Linear: return "t";
    }
    return "?";
}

namespace {

double basis_eval(BasisTerm b, double t, double alpha) {
    switch (b) {
        case BasisTerm::PowerInvAlpha: return std::pow(t, 1.0 / alpha);
        case BasisTerm::TLogInvT: return t * std::log(1.0 / t);
        case BasisTerm::Linear: return t;
    }
    return 0.0;
}

// eigenvalues of a symmetric p x p matrix (p <= 3) by cyclic Jacobi
std::array<double, 3> sym_eigenvalues(std::array<std::array<double, 3>, 3> m, int p) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) off += m[i][j] * m[i][j];
        if (off < 1e-300) break;
        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j) {
                if (m[i][j] == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * m[i][j], m[j][j] - m[i][i]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < p; ++k) {
                    const double mik = m[i][k], mjk = m[j][k];
                    m[i][k] = c * mik - s * mjk;
                    m[j][k] = s * mik + c * mjk;
                }
                for (int k = 0; k < p; ++k) {
                    const double mki = m[k][i], mkj = m[k][j];
                    m[k][i] = c * mki - s * mkj;
                    m[k][j] = s * mki + c * mkj;
                }
            }
        }
    }
    return {m[0][0], m[1][1], m[2][2]};
}

} // namespace

FitResult fit_coefficients(const heat::HeatCurve& curve, std::span<const BasisTerm> basis,
                           double t_min, double t_max) {
    const int p = static_cast<int>(basis.size());
    if (p < 1 || p > 3) throw std::invalid_argument("fit_coefficients: 1..3 basis terms");
    if (!(t_min < t_max)) throw std::invalid_argument("fit_coefficients: t_min < t_max");

    const bool weighted = curve.provenance == heat::Provenance::MonteCarlo;
    std::vector<std::array<double, 3>> rows;
    std::vector<double> ys, ws;
    for (const auto& pt : curve.points) {
        if (pt.t < t_min || pt.t > t_max) continue;
        std::array<double, 3> row{0.0, 0.0, 0.0};
        for (int j = 0; j < p; ++j) row[static_cast<size_t>(j)] = basis_eval(basis[j], pt.t, curve.alpha);
        rows.push_back(row);
        ys.push_back(curve.interval.length() - pt.value);
        ws.push_back(weighted && pt.stderr_ > 0.0 ? 1.0 / (pt.stderr_ * pt.stderr_) : 1.0);
    }
    const long long m = static_cast<long long>(rows.size());
    if (m < 2 * p)
        throw std::invalid_argument("fit_coefficients: need at least 2x|basis| points in window");

    std::array<std::array<double, 3>, 3> gram{};
    std::array<double, 3> rhs{0.0, 0.0, 0.0};
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int r = 0; r < p; ++r) {
            rhs[static_cast<size_t>(r)] += ws[i] * rows[i][static_cast<size_t>(r)] * ys[i];
            for (int c = 0; c < p; ++c)
                gram[static_cast<size_t>(r)][static_cast<size_t>(c)] +=
                    ws[i] * rows[i][static_cast<size_t>(r)] * rows[i][static_cast<size_t>(c)];
        }
    }

    const auto eig = sym_eigenvalues(gram, p);
    double lo = eig[0], hi = eig[0];
    for (int i = 1; i < p; ++i) {
        lo = std::min(lo, eig[static_cast<size_t>(i)]);
        hi = std::max(hi, eig[static_cast<size_t>(i)]);
    }
    const double condition = lo > 0.0 ? std::sqrt(hi / lo) : std::numeric_limits<double>::infinity();
    if (!(condition <= 1e12))
        throw std::runtime_error(
            "fit_coefficients: ill-conditioned design (condition > 1e12); widen the window");

    // solve gram x = rhs by Gaussian elimination with partial pivoting
    std::array<std::array<double, 4>, 3> aug{};
    for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) aug[static_cast<size_t>(r)][static_cast<size_t>(c)] = gram[static_cast<size_t>(r)][static_cast<size_t>(c)];
        aug[static_cast<size_t>(r)][3] = rhs[static_cast<size_t>(r)];
    }
    for (int c = 0; c < p; ++c) {
        int piv = c;
        for (int r = c + 1; r < p; ++r)
            if (std::fabs(aug[static_cast<size_t>(r)][static_cast<size_t>(c)]) >
                std::fabs(aug[static_cast<size_t>(piv)][static_cast<size_t>(c)]))
                piv = r;
        std::swap(aug[static_cast<size_t>(c)], aug[static_cast<size_t>(piv)]);
        for (int r = 0; r < p; ++r) {
            if (r == c) continue;
            const double f = aug[static_cast<size_t>(r)][static_cast<size_t>(c)] /
                             aug[static_cast<size_t>(c)][static_cast<size_t>(c)];
            for (int k = c; k <= 3; ++k)
                aug[static_cast<size_t>(r)][static_cast<size_t>(k)] -=
                    f * aug[static_cast<size_t>(c)][static_cast<size_t>(k)];
        }
    }
    std::array<double, 3> coef{0.0, 0.0, 0.0};
    for (int r = 0; r < p; ++r)
        coef[static_cast<size_t>(r)] = aug[static_cast<size_t>(r)][3] /
                                       aug[static_cast<size_t>(r)][static_cast<size_t>(r)];

    // inverse of the gram for coefficient covariance
    std::array<std::array<double, 3>, 3> inv{};
    for (int col = 0; col < p; ++col) {
        std::array<std::array<double, 4>, 3> a2{};
        for (int r = 0; r < p; ++r) {
            for (int c = 0; c < p; ++c) a2[static_cast<size_t>(r)][static_cast<size_t>(c)] = gram[static_cast<size_t>(r)][static_cast<size_t>(c)];
            a2[static_cast<size_t>(r)][3] = (r == col) ? 1.0 : 0.0;
        }
        for (int c = 0; c < p; ++c) {
            int piv = c;
            for (int r = c + 1; r < p; ++r)
                if (std::fabs(a2[static_cast<size_t>(r)][static_cast<size_t>(c)]) >
                    std::fabs(a2[static_cast<size_t>(piv)][static_cast<size_t>(c)]))
                    piv = r;
            std::swap(a2[static_cast<size_t>(c)], a2[static_cast<size_t>(piv)]);
            for (int r = 0; r < p; ++r) {
                if (r == c) continue;
                const double f = a2[static_cast<size_t>(r)][static_cast<size_t>(c)] /
                                 a2[static_cast<size_t>(c)][static_cast<size_t>(c)];
                for (int k = c; k <= 3; ++k)
                    a2[static_cast<size_t>(r)][static_cast<size_t>(k)] -=
                        f * a2[static_cast<size_t>(c)][static_cast<size_t>(k)];
            }
        }
        for (int r = 0; r < p; ++r)
            inv[static_cast<size_t>(r)][static_cast<size_t>(col)] =
                a2[static_cast<size_t>(r)][3] / a2[static_cast<size_t>(r)][static_cast<size_t>(r)];
    }

    double wrss = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        double pred = 0.0;
        for (int j = 0; j < p; ++j) pred += coef[static_cast<size_t>(j)] * rows[i][static_cast<size_t>(j)];
        const double r = ys[i] - pred;
        wrss += ws[i] * r * r;
    }
    // known-variance weights for MC data; residual-scaled covariance otherwise
    const double sigma2 = weighted ? 1.0
                                   : (m > p ? wrss / static_cast<double>(m - p) : 0.0);

    FitResult out;
    out.basis.assign(basis.begin(), basis.end());
    out.coeff.assign(coef.begin(), coef.begin() + p);
    out.coeff_stderr.resize(static_cast<size_t>(p));
    for (int j = 0; j < p; ++j)
        out.coeff_stderr[static_cast<size_t>(j)] =
            std::sqrt(std::max(0.0, sigma2 * inv[static_cast<size_t>(j)][static_cast<size_t>(j)]));
    out.residual_norm = std::sqrt(wrss);
    out.t_min = t_min;
    out.t_max = t_max;
    out.condition = condition;
    out.points_used = m;
    return out;
}

} // namespace shc::asym
