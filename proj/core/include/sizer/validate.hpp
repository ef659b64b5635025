#pragma once

#include <vector>

#include "sizer/domain.hpp"
#include "sizer/error.hpp"

namespace sizer {

// Normalizes a request: fills the default tier catalog when no tiers are
// given and, at runtime level, copies default_profile into services that
// carry none. Throws ValidationError listing every violation found.
// Idempotent: validating a validated request returns it unchanged.
//
// `coeffs` is the resolved coefficient set the request will be sized with;
// `default_tiers` is the catalog used when request.tiers is empty, and also
// where the coefficients' reference tier may be found.
SizingRequest validate_request(const SizingRequest& request, const ModelCoefficients& coeffs,
                               const std::vector<HardwareTier>& default_tiers = standard_tiers());

std::vector<Violation> check_tier(const HardwareTier& tier);
std::vector<Violation> check_profile(const RuntimeProfile& profile, const std::string& subject);

}  // namespace sizer
