#include "sizer/perfmodel.hpp"

#include "sizer/error.hpp"

namespace sizer {

double tier_scale_factor(const HardwareTier& tier, const HardwareTier& reference) {
  if (tier.total_cores() <= 0 || !(tier.frequency_ghz > 0.0) || reference.total_cores() <= 0 ||
      !(reference.frequency_ghz > 0.0))
    throw SizingError("invalid_tier", tier.name, "cannot scale between tiers with non-positive capacity");
  const double core_ratio = static_cast<double>(reference.total_cores()) / tier.total_cores();
  const double freq_ratio = reference.frequency_ghz / tier.frequency_ghz;
  return core_ratio * freq_ratio;
}

DemandModel::DemandModel(ModelCoefficients coeffs, const std::vector<HardwareTier>& catalog)
    : coeffs_(std::move(coeffs)) {
  const HardwareTier* ref = find_tier(catalog, coeffs_.reference_tier);
  if (!ref)
    throw SizingError("unknown_reference_tier", coeffs_.reference_tier,
                      "coefficient reference tier " + coeffs_.reference_tier + " is not a known tier");
  reference_ = *ref;
}

ResourceDemand DemandModel::estimate(const ServiceSpec& service, const RuntimeProfile& profile,
                                     const HardwareTier& tier) const {
  const PairCoefficients& c = coeffs_.at(service.implementation_type, service.binding_type);
  const double users = profile.concurrency;
  const double rps = profile.throughput;
  const double kb = profile.payload_total_kb();

  const double reference_cpu = c.c0_cpu_pct + c.c1_cpu_per_user * users + c.c2_cpu_per_rps * rps +
                               c.c3_cpu_per_rps_kb * rps * kb;
  ResourceDemand d;
  d.cpu_pct = reference_cpu * tier_scale_factor(tier, reference_);
  d.memory_mb = c.m0_mem_mb + c.m1_mem_per_user_mb * users + c.m2_mem_per_kb_mb * kb;
  d.tier = tier.name;
  return d;
}

ResourceDemand DemandModel::deployment(const ServiceSpec& service) const {
  const PairCoefficients& c = coeffs_.at(service.implementation_type, service.binding_type);
  return {0.0, c.deploy_mem_mb, reference_.name};
}

PerformanceCurve curve_for_demand(const std::string& tier, double per_service_cpu_pct, double cpu_cap_pct,
                                  int max_services) {
  if (max_services < 1)
    throw SizingError("invalid_threshold", "max_services", "a performance curve needs at least one point");
  PerformanceCurve curve;
  curve.tier = tier;
  curve.points.reserve(static_cast<std::size_t>(max_services));
  for (int n = 1; n <= max_services; ++n) {
    const double cpu = n * per_service_cpu_pct;
    curve.points.push_back({n, cpu});
    if (cpu < cpu_cap_pct) curve.degradation_threshold = n;
  }
  return curve;
}

PerformanceCurve performance_curve(const RuntimeProfile& profile, const ServiceSpec& service_template,
                                   const DemandModel& model, const HardwareTier& tier,
                                   const PackerConfig& packer, int max_services) {
  const ResourceDemand d = model.estimate(service_template, profile, tier);
  return curve_for_demand(tier.name, d.cpu_pct, packer.cpu_cap_pct, max_services);
}

}  // namespace sizer
