#pragma once

#include <cstdint>
#include <vector>

#include "mdgi/dem.hpp"

namespace mdgi::detail {

/// V(f o nB) for n = 0, 1, ... up to and including the first zero.
std::vector<std::uint64_t> square_volumes(const Dem& dem);

}  // namespace mdgi::detail
