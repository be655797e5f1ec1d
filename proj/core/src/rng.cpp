#include "cnet/rng.hpp"

#include <cmath>
#include <numbers>

namespace cnet {

double SplitMix64::next_gaussian() {
    // Box-Muller; only the cosine branch is used so one draw consumes two
    // uniforms, keeping the stream layout simple and reproducible.
    double u1 = next_double();
    const double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace cnet
