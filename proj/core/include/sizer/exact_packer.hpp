#pragma once

#include <cstddef>
#include <span>

namespace sizer {

inline constexpr std::size_t kExactPackMaxItems = 14;

// Minimum number of machines such that every machine's CPU sum is strictly
// below `cpu_cap`, by exhaustive search over subsets with memoization.
// CPU only. Reference for checking the greedy packer; not used in sizing.
// Throws SizingError: instance_too_large (> 14 items), oversized_service.
int exact_min_machines(std::span<const double> cpu_demands, double cpu_cap);

}  // namespace sizer
