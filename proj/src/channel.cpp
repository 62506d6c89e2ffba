#include "jscc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace jscc {

ChannelOutput transmit(std::span<const double> x, double noise_var, RngStream& rng, bool keep_noise)
{
    if (!(noise_var >= 0.0))
        throw std::invalid_argument("transmit: noise variance must be non-negative");

    ChannelOutput out;
    out.y.assign(x.begin(), x.end());
    if (keep_noise)
        out.z.assign(x.size(), 0.0);
    if (noise_var == 0.0)
        return out;

    const double sigma = std::sqrt(noise_var);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = sigma * rng.normal();
        out.y[i] += z;
        if (keep_noise)
            out.z[i] = z;
    }
    return out;
}

} // namespace jscc
