#pragma once

#include "jscc/rng.hpp"

#include <span>
#include <vector>

namespace jscc {

struct ChannelOutput {
    std::vector<double> y;
    std::vector<double> z; // empty unless noise retention was requested
};

/// Memoryless AWGN: Y_i = X_i + Z_i with Z_i iid N(0, noise_var). Throws
/// std::invalid_argument when noise_var < 0.
ChannelOutput transmit(std::span<const double> x, double noise_var, RngStream& rng,
                       bool keep_noise = false);

} // namespace jscc
