#include "shc/rng.hpp"

#include <cmath>

namespace shc::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c[1] ^ k0;
    const std::uint32_t n2 = hi0 ^ c[3] ^ k1;
    c[0] = n0;
    c[1] = lo1;
    c[2] = n2;
    c[3] = lo0;
}

} // namespace

Quad philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
    std::uint32_t c[4] = {c0, c1, c2, c3};
    for (int r = 0; r < 10; ++r) {
        round_once(c, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return Quad{{c[0], c[1], c[2], c[3]}};
}

void PathStream::normal_pair(std::uint64_t i, double& z0, double& z1) const {
    double u0, u1;
    uniform_pair(i, u0, u1);
    const double r = std::sqrt(-2.0 * std::log(u0));
    const double a = 2.0 * 3.141592653589793238462643383279503 * u1;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
}

} // namespace shc::rng
