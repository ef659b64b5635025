#pragma once

#include <vector>

#include "sizer/domain.hpp"

namespace sizer {

// Converts CPU% measured on `reference` into CPU% on `tier`:
// reference capacity / tier capacity, capacity = processors x cores x GHz.
// Computed as a core ratio times a frequency ratio so that tiers differing
// only in core count give exact factors (perflab/medium = 3, perflab/large = 1.5).
double tier_scale_factor(const HardwareTier& tier, const HardwareTier& reference);

// The parametric per-service demand model bound to one coefficient set and
// its resolved reference tier.
class DemandModel {
 public:
  // Throws SizingError{unknown_reference_tier} when the reference tier is
  // not in `catalog`.
  DemandModel(ModelCoefficients coeffs, const std::vector<HardwareTier>& catalog);

  const ModelCoefficients& coefficients() const noexcept { return coeffs_; }
  const HardwareTier& reference_tier() const noexcept { return reference_; }

  // Runtime demand of `service` under `profile`, CPU expressed against `tier`.
  // Memory does not depend on the tier. workload_type carries no modifier.
  ResourceDemand estimate(const ServiceSpec& service, const RuntimeProfile& profile,
                          const HardwareTier& tier) const;

  // Static footprint of a deployed service: cpu 0, memory deploy_mem_mb,
  // tagged with the reference tier.
  ResourceDemand deployment(const ServiceSpec& service) const;

 private:
  ModelCoefficients coeffs_;
  HardwareTier reference_;
};

// Curve of n identical services, n = 1..max_services, at `per_service_cpu_pct` each.
PerformanceCurve curve_for_demand(const std::string& tier, double per_service_cpu_pct,
                                  double cpu_cap_pct, int max_services);

PerformanceCurve performance_curve(const RuntimeProfile& profile, const ServiceSpec& service_template,
                                   const DemandModel& model, const HardwareTier& tier,
                                   const PackerConfig& packer, int max_services);

}  // namespace sizer
