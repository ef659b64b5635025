#pragma once

#include <string>
#include <vector>

#include "sizer/domain.hpp"

namespace sizer {

struct RunStamp {
  std::string run_id;
  std::string created_at;  // ISO-8601 UTC
};

// Sizes a validated request on every requested tier. Per-tier failures
// (oversized service, single machine infeasible) are recorded in
// tier_errors plus a recommendation; they never abort other tiers.
// Throws only for request-wide problems (unknown reference tier).
SizingResult size(const SizingRequest& request, const ModelCoefficients& coeffs,
                  const RunStamp& stamp,
                  const std::vector<HardwareTier>& catalog = standard_tiers());

struct RecommendThresholds {
  int machine_count_threshold = 10;
  double near_degradation_fraction = 0.9;
};

// Advisories for a result whose per-tier topologies and errors are filled in:
//   switch_tier      machine count above threshold and a larger tier is requested
//   use_distributed  single architecture infeasible on a tier
//   infeasible       any other per-tier error
//   near_degradation machine at or above 0.9 W
std::vector<Recommendation> recommend(const SizingResult& result, const RecommendThresholds& thresholds);

// Feasible tiers ordered by deployed capacity (machines x capacity units),
// then fewer machines, then request order. Throws SizingError{no_feasible_tier}.
std::vector<std::string> compare_tiers(const SizingResult& result);

bool all_tiers_infeasible(const SizingResult& result);

}  // namespace sizer
