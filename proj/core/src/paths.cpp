// Monte Carlo path engines. This translation unit is compiled with
// vectorization-friendly flags; all hot loops are written lane-wise so the
// transcendental calls map onto the vector math library.

#include "engine.hpp"

#include "shc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace shc::engine {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kTwoPi = 6.283185307179586476925286766559006;

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

enum Purpose : std::uint32_t {
    kSub = 0,
    kGauss = 1,
    kBridge = 2,
    kRefine = 4,
};

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

// Lane count only sets the processing granularity; every draw is keyed by the
// absolute path index, so results are identical for any width.
#if defined(__GNUC__) && defined(__x86_64__) && defined(__AVX512F__)
constexpr int L = 16;
typedef std::uint32_t vecu32 __attribute__((vector_size(64)));
typedef std::uint64_t vecu64 __attribute__((vector_size(64)));
#define SHC_VECTOR_PHILOX 1
#elif defined(__GNUC__) && defined(__x86_64__) && defined(__AVX2__)
constexpr int L = 8;
typedef std::uint32_t vecu32 __attribute__((vector_size(32)));
typedef std::uint64_t vecu64 __attribute__((vector_size(32)));
#define SHC_VECTOR_PHILOX 1
#else
constexpr int L = 8;
#endif

#if SHC_VECTOR_PHILOX

// L x (32x32 -> 64) multiply via the even/odd u64-lane split.
inline void mulhilo(vecu32 a, std::uint32_t b, vecu32& hi, vecu32& lo) {
    const vecu64 av = reinterpret_cast<vecu64>(a);
    const vecu64 even = (av & 0xffffffffull) * b;
    const vecu64 odd = (av >> 32) * b;
    lo = reinterpret_cast<vecu32>((even & 0xffffffffull) | (odd << 32));
    hi = reinterpret_cast<vecu32>((even >> 32) | (odd & 0xffffffff00000000ull));
}

// Counter-based draws for L contiguous paths: Philox4x32-10 with counter
// (block, path_lo, path_hi, purpose) and the seed as key. Any draw is a pure
// function of those four words, so consumption order never matters.
struct LaneRng {
    vecu32 path_lo, path_hi;
    std::uint32_t k0, k1;

    LaneRng(std::uint64_t seed, std::uint64_t path0) {
        for (int l = 0; l < L; ++l) {
            const std::uint64_t p = path0 + static_cast<std::uint64_t>(l);
            path_lo[l] = static_cast<std::uint32_t>(p);
            path_hi[l] = static_cast<std::uint32_t>(p >> 32);
        }
        k0 = static_cast<std::uint32_t>(seed);
        k1 = static_cast<std::uint32_t>(seed >> 32);
    }

    inline void draw(std::uint32_t ctr, std::uint32_t purpose, double* u0, double* u1) const {
        vecu32 c1 = path_lo, c2 = path_hi;
        vecu32 c0 = c1 ^ c1;  // zero, then broadcast
        c0 += ctr;
        vecu32 c3 = c1 ^ c1;
        c3 += purpose;
        std::uint32_t key0 = k0, key1 = k1;
        for (int r = 0; r < 10; ++r) {
            vecu32 hi0, lo0, hi1, lo1;
            mulhilo(c0, kMul0, hi0, lo0);
            mulhilo(c2, kMul1, hi1, lo1);
            c0 = hi1 ^ c1 ^ key0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ key1;
            c3 = lo0;
            key0 += kWeyl0;
            key1 += kWeyl1;
        }
        #pragma omp simd
        for (int l = 0; l < L; ++l) {
            u0[l] = to_unit(c0[l], c1[l]);
            u1[l] = to_unit(c2[l], c3[l]);
        }
    }
};

#else

struct LaneRng {
    std::uint32_t path_lo[L], path_hi[L];
    std::uint32_t k0, k1;

    LaneRng(std::uint64_t seed, std::uint64_t path0) {
        for (int l = 0; l < L; ++l) {
            const std::uint64_t p = path0 + static_cast<std::uint64_t>(l);
            path_lo[l] = static_cast<std::uint32_t>(p);
            path_hi[l] = static_cast<std::uint32_t>(p >> 32);
        }
        k0 = static_cast<std::uint32_t>(seed);
        k1 = static_cast<std::uint32_t>(seed >> 32);
    }

    inline void draw(std::uint32_t ctr, std::uint32_t purpose, double* u0, double* u1) const {
        for (int l = 0; l < L; ++l) {
            std::uint32_t c0 = ctr, c1 = path_lo[l], c2 = path_hi[l], c3 = purpose;
            std::uint32_t key0 = k0, key1 = k1;
            for (int r = 0; r < 10; ++r) {
                const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
                const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
                const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ key0;
                const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ key1;
                c1 = static_cast<std::uint32_t>(p1);
                c3 = static_cast<std::uint32_t>(p0);
                c0 = n0;
                c2 = n2;
                key0 += kWeyl0;
                key1 += kWeyl1;
            }
            u0[l] = to_unit(c0, c1);
            u1[l] = to_unit(c2, c3);
        }
    }
};

#endif

// One subordinator increment per lane: dS = scale * S_1 via Kanter's
// representation, S_1 = (a(pi U)/E)^{(1-rho)/rho}.
inline void kanter8(const LaneRng& rng, std::uint32_t step, double rho, double scale,
                    double* ds) {
    double uu[L], ue[L];
    rng.draw(step, kSub, uu, ue);
    #pragma omp simd
    for (int l = 0; l < L; ++l) {
        const double u = kPi * uu[l];
        const double ln_e = std::log(-std::log(ue[l]));
        const double ln_s = (rho * std::log(std::sin(rho * u)) +
                             (1.0 - rho) * std::log(std::sin((1.0 - rho) * u)) -
                             std::log(std::sin(u))) / rho -
                            (1.0 - rho) / rho * ln_e;
        ds[l] = scale * std::exp(ln_s);
    }
}

inline void normal8(const LaneRng& rng, std::uint32_t step, double* z) {
    double a[L], b[L];
    rng.draw(step, kGauss, a, b);
    #pragma omp simd
    for (int l = 0; l < L; ++l)
        z[l] = std::sqrt(-2.0 * std::log(a[l])) * std::cos(kTwoPi * b[l]);
}

inline double bridge_max(double w0, double w1, double ds, double u) {
    return 0.5 * (w0 + w1 + std::sqrt((w1 - w0) * (w1 - w0) - 4.0 * ds * std::log(u)));
}
inline double bridge_min(double w0, double w1, double ds, double u) {
    return 0.5 * (w0 + w1 - std::sqrt((w1 - w0) * (w1 - w0) - 4.0 * ds * std::log(u)));
}

struct Acc {
    double s1 = 0.0, s2 = 0.0;
    long long n = 0;
    void add(double x) {
        s1 += x;
        s2 += x * x;
        ++n;
    }
    void merge(const Acc& o) {
        s1 += o.s1;
        s2 += o.s2;
        n += o.n;
    }
    MeanStderr finish() const {
        MeanStderr m;
        m.n = n;
        if (n == 0) return m;
        m.mean = s1 / static_cast<double>(n);
        if (n > 1) {
            const double var =
                std::max(0.0, (s2 - s1 * s1 / static_cast<double>(n)) / static_cast<double>(n - 1));
            m.stderr_ = std::sqrt(var / static_cast<double>(n));
        }
        return m;
    }
};

constexpr long long kBlock = 8192;

// Sequential draws for the rare segment-refinement path. The counter lives
// with the caller so one path's refinements never reuse a block index.
class RefineDraws {
public:
    RefineDraws(std::uint64_t seed, std::uint64_t path, std::uint32_t& next)
        : k0_(static_cast<std::uint32_t>(seed)),
          k1_(static_cast<std::uint32_t>(seed >> 32)),
          path_(path),
          next_(next) {}
    double uniform() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        philox1(next_++);
        have_ = true;
        return out0_;
    }
    double normal() {
        const double u0 = uniform(), u1 = uniform();
        return std::sqrt(-2.0 * std::log(u0)) * std::cos(kTwoPi * u1);
    }

private:
    void philox1(std::uint32_t ctr) {
        std::uint32_t c0 = ctr, c1 = static_cast<std::uint32_t>(path_),
                      c2 = static_cast<std::uint32_t>(path_ >> 32), c3 = kRefine;
        std::uint32_t k0 = k0_, k1 = k1_;
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
            const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
            c1 = static_cast<std::uint32_t>(p1);
            c3 = static_cast<std::uint32_t>(p0);
            c0 = n0;
            c2 = n2;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        out0_ = to_unit(c0, c1);
        spare_ = to_unit(c2, c3);
    }
    std::uint32_t k0_, k1_;
    std::uint64_t path_;
    std::uint32_t& next_;
    double out0_ = 0.0, spare_ = 0.0;
    bool have_ = false;
};

int pick_threads(int threads) { return threads <= 0 ? par::default_threads() : threads; }

} // namespace

SupSamples sample_sup(double alpha, double horizon, long long n_steps, long long paths,
                      std::uint64_t seed, int threads, bool want_bridge) {
    const double rho = 0.5 * alpha;
    const double scale = std::pow(horizon / static_cast<double>(n_steps), 1.0 / rho);

    SupSamples out;
    out.stable_sup.resize(static_cast<size_t>(paths));
    out.endpoint.resize(static_cast<size_t>(paths));
    if (want_bridge) out.subordinate_sup.resize(static_cast<size_t>(paths));

    struct Nil {};
    par::map_reduce_blocks<Nil>(
        paths, kBlock, pick_threads(threads),
        [&](long long, long long lo, long long hi) {
            double ds[L], z[L], wn[L], w[L], xmax[L], wmax[L], ub0[L], ub1[L];
            for (long long p0 = lo; p0 < hi; p0 += L) {
                const LaneRng rng(seed, static_cast<std::uint64_t>(p0));
                const int nl = static_cast<int>(std::min<long long>(L, hi - p0));
                for (int l = 0; l < L; ++l) w[l] = xmax[l] = wmax[l] = 0.0;
                for (long long s = 0; s < n_steps; ++s) {
                    const auto sc = static_cast<std::uint32_t>(s);
                    kanter8(rng, sc, rho, scale, ds);
                    normal8(rng, sc, z);
                    if (want_bridge) {
                        rng.draw(sc, kBridge, ub0, ub1);
                        #pragma omp simd
                        for (int l = 0; l < L; ++l) {
                            wn[l] = w[l] + std::sqrt(2.0 * ds[l]) * z[l];
                            wmax[l] = std::max(wmax[l], bridge_max(w[l], wn[l], ds[l], ub0[l]));
                            xmax[l] = std::max(xmax[l], wn[l]);
                            w[l] = wn[l];
                        }
                    } else {
                        #pragma omp simd
                        for (int l = 0; l < L; ++l) {
                            wn[l] = w[l] + std::sqrt(2.0 * ds[l]) * z[l];
                            xmax[l] = std::max(xmax[l], wn[l]);
                            w[l] = wn[l];
                        }
                    }
                }
                for (int l = 0; l < nl; ++l) {
                    out.stable_sup[static_cast<size_t>(p0 + l)] = xmax[l];
                    out.endpoint[static_cast<size_t>(p0 + l)] = w[l];
                    if (want_bridge)
                        out.subordinate_sup[static_cast<size_t>(p0 + l)] = wmax[l];
                }
            }
            return Nil{};
        },
        [](Nil&, const Nil&) {});
    return out;
}

SkeletonMean skeleton_sup_mean(double alpha, long long n_steps, long long paths,
                               std::uint64_t seed, int threads) {
    const double rho = 0.5 * alpha;
    const double scale = std::pow(1.0 / static_cast<double>(n_steps), 1.0 / rho);

    struct St {
        Acc full;
        double half_sum = 0.0;
        void merge(const St& o) {
            full.merge(o.full);
            half_sum += o.half_sum;
        }
    };
    St total = par::map_reduce_blocks<St>(
        paths, kBlock, pick_threads(threads),
        [&](long long, long long lo, long long hi) {
            St st;
            double ds[L], z[L], w[L], xmax[L], xmax_h[L];
            for (long long p0 = lo; p0 < hi; p0 += L) {
                const LaneRng rng(seed, static_cast<std::uint64_t>(p0));
                const int nl = static_cast<int>(std::min<long long>(L, hi - p0));
                for (int l = 0; l < L; ++l) w[l] = xmax[l] = xmax_h[l] = 0.0;
                for (long long s = 0; s < n_steps; ++s) {
                    const auto sc = static_cast<std::uint32_t>(s);
                    kanter8(rng, sc, rho, scale, ds);
                    normal8(rng, sc, z);
                    if (s % 2 == 1) {
                        #pragma omp simd
                        for (int l = 0; l < L; ++l) {
                            const double wn = w[l] + std::sqrt(2.0 * ds[l]) * z[l];
                            xmax[l] = std::max(xmax[l], wn);
                            xmax_h[l] = std::max(xmax_h[l], wn);
                            w[l] = wn;
                        }
                    } else {
                        #pragma omp simd
                        for (int l = 0; l < L; ++l) {
                            const double wn = w[l] + std::sqrt(2.0 * ds[l]) * z[l];
                            xmax[l] = std::max(xmax[l], wn);
                            w[l] = wn;
                        }
                    }
                }
                for (int l = 0; l < nl; ++l) {
                    st.full.add(xmax[l]);
                    st.half_sum += xmax_h[l];
                }
            }
            return st;
        },
        [](St& a, const St& b) { a.merge(b); });

    SkeletonMean out;
    out.full = total.full.finish();
    out.half_mean = total.full.n ? total.half_sum / static_cast<double>(total.full.n) : 0.0;
    return out;
}

namespace {

// Shared kernel for the two bridged single-functional engines.
template <class PerPath>
void bridged_walk(double rho, double scale, long long n_steps, long long paths,
                  std::uint64_t seed, int threads, PerPath per_path) {
    struct Nil {};
    par::map_reduce_blocks<Nil>(
        paths, kBlock, pick_threads(threads),
        [&](long long, long long lo, long long hi) {
            double ds[L], z[L], ub0[L], ub1[L], w[L], wmax[L];
            for (long long p0 = lo; p0 < hi; p0 += L) {
                const LaneRng rng(seed, static_cast<std::uint64_t>(p0));
                const int nl = static_cast<int>(std::min<long long>(L, hi - p0));
                for (int l = 0; l < L; ++l) w[l] = wmax[l] = 0.0;
                for (long long s = 0; s < n_steps; ++s) {
                    const auto sc = static_cast<std::uint32_t>(s);
                    kanter8(rng, sc, rho, scale, ds);
                    normal8(rng, sc, z);
                    rng.draw(sc, kBridge, ub0, ub1);
                    #pragma omp simd
                    for (int l = 0; l < L; ++l) {
                        const double wn = w[l] + std::sqrt(2.0 * ds[l]) * z[l];
                        wmax[l] = std::max(wmax[l], bridge_max(w[l], wn, ds[l], ub0[l]));
                        w[l] = wn;
                    }
                }
                per_path(p0, nl, wmax);
            }
            return Nil{};
        },
        [](Nil&, const Nil&) {});
}

} // namespace

MeanStderr bridged_sup_mean(double alpha, double horizon, long long n_steps, long long paths,
                            std::uint64_t seed, int threads) {
    const double rho = 0.5 * alpha;
    const double scale = std::pow(horizon / static_cast<double>(n_steps), 1.0 / rho);
    const int nt = pick_threads(threads);
    std::vector<Acc> partial(static_cast<size_t>((paths + kBlock - 1) / kBlock));
    bridged_walk(rho, scale, n_steps, paths, seed, nt,
                 [&](long long p0, int nl, const double* wmax) {
                     Acc& a = partial[static_cast<size_t>(p0 / kBlock)];
                     for (int l = 0; l < nl; ++l) a.add(wmax[l]);
                 });
    Acc total;
    for (const auto& a : partial) total.merge(a);
    return total.finish();
}

MeanStderr bridged_sup_survival(double alpha, double horizon, double threshold,
                                long long n_steps, long long paths, std::uint64_t seed,
                                int threads) {
    const double rho = 0.5 * alpha;
    const double scale = std::pow(horizon / static_cast<double>(n_steps), 1.0 / rho);
    const int nt = pick_threads(threads);
    std::vector<Acc> partial(static_cast<size_t>((paths + kBlock - 1) / kBlock));
    bridged_walk(rho, scale, n_steps, paths, seed, nt,
                 [&](long long p0, int nl, const double* wmax) {
                     Acc& a = partial[static_cast<size_t>(p0 / kBlock)];
                     for (int l = 0; l < nl; ++l) a.add(wmax[l] > threshold ? 1.0 : 0.0);
                 });
    Acc total;
    for (const auto& a : partial) total.merge(a);
    return total.finish();
}

MeanStderr brownian_bridged_sup_survival(double total_time, double threshold,
                                         long long n_steps, long long paths,
                                         std::uint64_t seed, int threads) {
    const double ds_const = total_time / static_cast<double>(n_steps);
    Acc total = par::map_reduce_blocks<Acc>(
        paths, kBlock, pick_threads(threads),
        [&](long long, long long lo, long long hi) {
            Acc acc;
            double z[L], ub0[L], ub1[L], w[L], wmax[L];
            for (long long p0 = lo; p0 < hi; p0 += L) {
                const LaneRng rng(seed, static_cast<std::uint64_t>(p0));
                const int nl = static_cast<int>(std::min<long long>(L, hi - p0));
                for (int l = 0; l < L; ++l) w[l] = wmax[l] = 0.0;
                for (long long s = 0; s < n_steps; ++s) {
                    const auto sc = static_cast<std::uint32_t>(s);
                    normal8(rng, sc, z);
                    rng.draw(sc, kBridge, ub0, ub1);
                    #pragma omp simd
                    for (int l = 0; l < L; ++l) {
                        const double wn = w[l] + std::sqrt(2.0 * ds_const) * z[l];
                        wmax[l] = std::max(wmax[l], bridge_max(w[l], wn, ds_const, ub0[l]));
                        w[l] = wn;
                    }
                }
                for (int l = 0; l < nl; ++l) acc.add(wmax[l] > threshold ? 1.0 : 0.0);
            }
            return acc;
        },
        [](Acc& a, const Acc& b) { a.merge(b); });
    return total.finish();
}

namespace {

// Extrema of the continuum path over one segment, refined until each piece
// has variance at most (|D|/8)^2. Pieces are scanned left to right; once the
// running extrema pass stop_hi/stop_lo nothing downstream can change, so the
// scan stops early and the expected work stays bounded even for the huge
// segments the heavy-tailed subordinator occasionally produces.
void refine_segment(double w0, double w1, double ds, double piece_cap, double stop_hi,
                    double stop_lo, RefineDraws& draws, double& smax, double& smin) {
    const double want = std::ceil(ds / piece_cap);
    const long long pieces = want < 2.0 ? 2
                             : want > 1e15 ? 1'000'000'000'000'000LL
                                           : static_cast<long long>(want);
    const double dsub = ds / static_cast<double>(pieces);
    double v = w0;
    double remaining = ds;
    for (long long j = 1; j <= pieces; ++j) {
        double vn;
        if (j == pieces) {
            vn = w1;
        } else {
            const double mean = v + (w1 - v) * dsub / remaining;
            const double var = 2.0 * dsub * (remaining - dsub) / remaining;
            vn = mean + std::sqrt(var) * draws.normal();
        }
        smax = std::max(smax, bridge_max(v, vn, dsub, draws.uniform()));
        smin = std::min(smin, bridge_min(v, vn, dsub, draws.uniform()));
        if (smax >= stop_hi && smin <= stop_lo) return;
        v = vn;
        remaining -= dsub;
    }
}

} // namespace

IntervalResult interval_mc(double alpha, double a, double b, double t, long long n_steps,
                           long long paths, int x_strata, std::uint64_t seed, int threads,
                           const IntervalOptions& opt) {
    const double rho = 0.5 * alpha;
    const double scale = std::pow(t / static_cast<double>(n_steps), 1.0 / rho);
    const double len = b - a;
    const double piece_var_cap = (len / 8.0) * (len / 8.0);  // cap on 2*ds per piece
    const double piece_cap = 0.5 * piece_var_cap;
    const bool want_bridge = opt.want_sk || opt.want_cross_sk;

    struct St {
        Acc ks, sk, cks, csk;
        double ks_half_sum = 0.0;
        long long violations = 0, strict = 0;
        void merge(const St& o) {
            ks.merge(o.ks);
            sk.merge(o.sk);
            cks.merge(o.cks);
            csk.merge(o.csk);
            ks_half_sum += o.ks_half_sum;
            violations += o.violations;
            strict += o.strict;
        }
    };

    St total = par::map_reduce_blocks<St>(
        paths, kBlock, pick_threads(threads),
        [&](long long, long long lo, long long hi) {
            St st;
            double ds[L], z[L], ub0[L], ub1[L], bmax[L], bmin[L];
            double w[L], wp[L], gmax[L], gmin[L], hmax[L], hmin[L], smax[L], smin[L];
            double up1[L], dn1[L], up2[L], dn2[L], stop_hi[L], stop_lo[L];
            std::uint32_t refine_ctr[L];
            bool need[L];
            for (long long p0 = lo; p0 < hi; p0 += L) {
                const LaneRng rng(seed, static_cast<std::uint64_t>(p0));
                const int nl = static_cast<int>(std::min<long long>(L, hi - p0));
                for (int l = 0; l < L; ++l) {
                    const long long p = p0 + l;
                    const double frac =
                        (static_cast<double>(p % x_strata) + 0.5) / static_cast<double>(x_strata);
                    up1[l] = len * (1.0 - frac);  // b - x
                    dn1[l] = -len * frac;         // a - x
                    up2[l] = len * frac;          // mirrored start
                    dn2[l] = -len * (1.0 - frac);
                    stop_hi[l] = std::max(up1[l], up2[l]);
                    stop_lo[l] = std::min(dn1[l], dn2[l]);
                    w[l] = gmax[l] = gmin[l] = hmax[l] = hmin[l] = smax[l] = smin[l] = 0.0;
                    refine_ctr[l] = 0;
                    need[l] = want_bridge;
                }
                for (long long s = 0; s < n_steps; ++s) {
                    const auto sc = static_cast<std::uint32_t>(s);
                    kanter8(rng, sc, rho, scale, ds);
                    normal8(rng, sc, z);
                    const bool on_half_grid = (s % 2 == 1);
                    #pragma omp simd
                    for (int l = 0; l < L; ++l) {
                        wp[l] = w[l];
                        w[l] = w[l] + std::sqrt(2.0 * ds[l]) * z[l];
                        gmax[l] = std::max(gmax[l], w[l]);
                        gmin[l] = std::min(gmin[l], w[l]);
                    }
                    if (on_half_grid) {
                        #pragma omp simd
                        for (int l = 0; l < L; ++l) {
                            hmax[l] = std::max(hmax[l], w[l]);
                            hmin[l] = std::min(hmin[l], w[l]);
                        }
                    }
                    if (want_bridge) {
                        bool group_needs = false;
                        for (int l = 0; l < L; ++l) group_needs |= need[l];
                        if (group_needs) {
                            rng.draw(sc, kBridge, ub0, ub1);
                            #pragma omp simd
                            for (int l = 0; l < L; ++l) {
                                bmax[l] = bridge_max(wp[l], w[l], ds[l], ub0[l]);
                                bmin[l] = bridge_min(wp[l], w[l], ds[l], ub1[l]);
                            }
                            for (int l = 0; l < L; ++l) {
                                if (!need[l]) continue;
                                if (2.0 * ds[l] <= piece_var_cap) {
                                    smax[l] = std::max(smax[l], bmax[l]);
                                    smin[l] = std::min(smin[l], bmin[l]);
                                } else {
                                    RefineDraws draws(seed, static_cast<std::uint64_t>(p0 + l),
                                                      refine_ctr[l]);
                                    refine_segment(wp[l], w[l], ds[l], piece_cap, stop_hi[l],
                                                   stop_lo[l], draws, smax[l], smin[l]);
                                }
                                if (smax[l] >= stop_hi[l] && smin[l] <= stop_lo[l])
                                    need[l] = false;  // every consumer settled
                            }
                        }
                    }
                }
                for (int l = 0; l < nl; ++l) {
                    // bridge extrema dominate the skeleton extrema by construction
                    const double cmax = want_bridge ? std::max(smax[l], gmax[l]) : 0.0;
                    const double cmin = want_bridge ? std::min(smin[l], gmin[l]) : 0.0;
                    const bool ks1 = gmax[l] < up1[l] && gmin[l] > dn1[l];
                    const bool ks2 = gmax[l] < up2[l] && gmin[l] > dn2[l];
                    const bool kh1 = hmax[l] < up1[l] && hmin[l] > dn1[l];
                    const bool kh2 = hmax[l] < up2[l] && hmin[l] > dn2[l];
                    if (opt.want_ks) {
                        st.ks.add(0.5 * (ks1 + ks2));
                        st.ks_half_sum += 0.5 * (kh1 + kh2);
                    }
                    if (opt.want_sk || opt.want_cross_sk) {
                        const bool sk1 = cmax < up1[l] && cmin > dn1[l];
                        const bool sk2 = cmax < up2[l] && cmin > dn2[l];
                        if (opt.want_sk) {
                            st.sk.add(0.5 * (sk1 + sk2));
                            st.violations += (sk1 && !ks1) + (sk2 && !ks2);
                            st.strict += (ks1 && !sk1) + (ks2 && !sk2);
                        }
                        if (opt.want_cross_sk) {
                            const bool c1 = cmax >= up1[l] && cmin <= dn1[l];
                            const bool c2 = cmax >= up2[l] && cmin <= dn2[l];
                            st.csk.add(0.5 * (c1 + c2));
                        }
                    }
                    if (opt.want_cross_ks) {
                        const bool c1 = gmax[l] >= up1[l] && gmin[l] <= dn1[l];
                        const bool c2 = gmax[l] >= up2[l] && gmin[l] <= dn2[l];
                        st.cks.add(0.5 * (c1 + c2));
                    }
                }
            }
            return st;
        },
        [](St& x, const St& y) { x.merge(y); });

    IntervalResult out;
    out.ks = total.ks.finish();
    out.ks_half_mean = total.ks.n ? total.ks_half_sum / static_cast<double>(total.ks.n) : 0.0;
    out.sk = total.sk.finish();
    out.cross_ks = total.cks.finish();
    out.cross_sk = total.csk.finish();
    out.order_violations = total.violations;
    out.strict_gap = total.strict;
    out.paths = paths;
    return out;
}

} // namespace shc::engine
