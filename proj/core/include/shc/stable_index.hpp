#pragma once

#include <stdexcept>

namespace shc {

// Stability regime of the index alpha. The expansion machinery treats the
// three ranges differently: finite-mean suprema above 1, a logarithmic term
// exactly at 1, and second-order-only support below 1.
enum class Regime { HighStable, Cauchy, LowStable };

// Index alpha of a symmetric stable process together with the index alpha/2
// of the subordinator that generates it from Brownian motion.
class StableIndex {
public:
    explicit StableIndex(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0) || !(alpha < 2.0))
            throw std::domain_error("StableIndex: alpha must lie in (0,2)");
    }

    double alpha() const { return alpha_; }
    double subordinator_index() const { return 0.5 * alpha_; }

    Regime regime() const {
        if (alpha_ > 1.0) return Regime::HighStable;
        if (alpha_ == 1.0) return Regime::Cauchy;
        return Regime::LowStable;
    }
    bool is_cauchy() const { return alpha_ == 1.0; }

private:
    double alpha_;
};

} // namespace shc
