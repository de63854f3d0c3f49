#pragma once

#include <cstdint>

namespace shc::rng {

// Purpose tags keep the random draws of one path on disjoint substreams, so
// adding or removing one kind of draw never shifts another.
enum class Stream : std::uint32_t {
    Subordinator = 0,
    Gauss = 1,
    Bridge = 2,
    Scalar = 3,   // miscellaneous per-task draws
};

struct Quad {
    std::uint32_t w[4];
};

// Philox4x32-10 block cipher: counter (c0..c3) x key (k0,k1) -> 4x32 bits.
Quad philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                std::uint32_t c3, std::uint32_t k0, std::uint32_t k1);

// Random-access substream keyed by (seed, path, purpose). Draw i is a pure
// function of (seed, path, purpose, i): workers can consume any path in any
// order and still reproduce identical values.
class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t path, Stream purpose)
        : k0_(static_cast<std::uint32_t>(seed)),
          k1_(static_cast<std::uint32_t>(seed >> 32)),
          c1_(static_cast<std::uint32_t>(path)),
          c2_(static_cast<std::uint32_t>(path >> 32)),
          c3_(static_cast<std::uint32_t>(purpose)) {}

    // Two uniforms in (0,1) from block index i.
    void uniform_pair(std::uint64_t i, double& u0, double& u1) const {
        const Quad q = philox4x32(static_cast<std::uint32_t>(i),
                                  c1_, c2_,
                                  c3_ ^ (static_cast<std::uint32_t>(i >> 32) << 8),
                                  k0_, k1_);
        u0 = to_unit(q.w[0], q.w[1]);
        u1 = to_unit(q.w[2], q.w[3]);
    }

    double uniform(std::uint64_t i) const {
        double a, b;
        uniform_pair(i, a, b);
        return a;
    }

    // Standard normal pair (Box-Muller) from block index i.
    void normal_pair(std::uint64_t i, double& z0, double& z1) const;

    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
        // (0,1): 53-bit mantissa, offset by half an ulp so 0 and 1 are excluded
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
    }

private:
    std::uint32_t k0_, k1_, c1_, c2_, c3_;
};

// Convenience sequential wrapper over a PathStream.
class Sequence {
public:
    Sequence(std::uint64_t seed, std::uint64_t path, Stream purpose)
        : s_(seed, path, purpose) {}

    double uniform() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double a;
        s_.uniform_pair(next_++, a, spare_);
        have_ = true;
        return a;
    }

    double normal() {
        if (have_n_) {
            have_n_ = false;
            return spare_n_;
        }
        double a;
        s_.normal_pair(next_++, a, spare_n_);
        have_n_ = true;
        return a;
    }

private:
    PathStream s_;
    std::uint64_t next_ = 0;
    double spare_ = 0, spare_n_ = 0;
    bool have_ = false, have_n_ = false;
};

} // namespace shc::rng
