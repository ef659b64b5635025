#include "sizer/exact_packer.hpp"

#include <utility>
#include <vector>

#include "sizer/error.hpp"

namespace sizer {

// Subset DP: for every set of already-packed items keep the lexicographically
// smallest (machines used, load of the last open machine). Extending with one
// more item either joins the open machine (strictly under the cap) or opens a
// new one. Over all insertion orders this enumerates every partition, so the
// value at the full set is the optimum.
int exact_min_machines(std::span<const double> cpu_demands, double cpu_cap) {
  const std::size_t n = cpu_demands.size();
  if (n > kExactPackMaxItems)
    throw SizingError("instance_too_large", std::to_string(n), "exact packing is limited to 14 items");
  for (std::size_t i = 0; i < n; ++i)
    if (!(cpu_demands[i] < cpu_cap) || cpu_demands[i] < 0.0)
      throw SizingError("oversized_service", std::to_string(i), "item does not fit an empty machine");
  if (n == 0) return 0;

  using State = std::pair<int, double>;
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<State> best(full + 1, State{static_cast<int>(n) + 1, 0.0});
  best[0] = {1, 0.0};
  for (std::size_t mask = 0; mask < full; ++mask) {
    const auto [machines, load] = best[mask];
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) continue;
      const State next = load + cpu_demands[i] < cpu_cap ? State{machines, load + cpu_demands[i]}
                                                         : State{machines + 1, cpu_demands[i]};
      State& slot = best[mask | (std::size_t{1} << i)];
      if (next < slot) slot = next;
    }
  }
  return best[full].first;
}

}  // namespace sizer
