#include "sizer/engine.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <numeric>

#include "sizer/error.hpp"
#include "sizer/packer.hpp"
#include "sizer/perfmodel.hpp"

namespace sizer {

namespace {

std::vector<HardwareTier> merged_catalog(const std::vector<HardwareTier>& requested,
                                         const std::vector<HardwareTier>& catalog) {
  std::vector<HardwareTier> out = requested;
  for (const auto* source : {&catalog, &standard_tiers()})
    for (const auto& t : *source)
      if (!find_tier(out, t.name)) out.push_back(t);
  return out;
}

std::vector<ServiceDemand> tier_demands(const SizingRequest& request, const DemandModel& model,
                                        const HardwareTier& tier) {
  std::vector<ServiceDemand> out;
  out.reserve(request.services.size());
  for (const auto& s : request.services) {
    ResourceDemand d;
    if (request.level == SizingLevel::deployment) {
      d = model.deployment(s);
      d.cpu_pct *= tier_scale_factor(tier, model.reference_tier());
      d.tier = tier.name;
    } else {
      const auto& profile = s.profile ? s.profile : request.default_profile;
      if (!profile)
        throw SizingError("missing_profile", s.id, "service " + s.id + " has no runtime profile");
      d = model.estimate(s, *profile, tier);
      d.memory_mb += model.coefficients().at(s.implementation_type, s.binding_type).deploy_mem_mb;
    }
    out.push_back({s.id, std::move(d)});
  }
  return out;
}

// All services on one machine, or nothing.
PackingOutcome place_single(const std::vector<ServiceDemand>& demands, const HardwareTier& tier,
                            const PackerConfig& config) {
  PackingOutcome out;
  out.topology.tier = tier.name;
  if (demands.empty()) return out;

  double cpu = 0.0;
  double mem = 0.0;
  std::vector<std::string> ids;
  for (const auto& d : demands) {
    cpu += d.demand.cpu_pct;
    mem += d.demand.memory_mb;
    ids.push_back(d.service_id);
  }
  mem += config.node_overhead_mb * node_count_for(ids.size(), config);
  const double mem_cap = memory_cap_mb(tier, config);
  if (!(cpu < config.cpu_cap_pct) || mem > mem_cap)
    throw SizingError("single_infeasible", tier.name,
                      fmt::format("{} services need {:.1f}% cpu and {:.1f} MB on one {} machine "
                                  "(cap {:.1f}% cpu, {:.1f} MB)",
                                  ids.size(), cpu, mem, tier.name, config.cpu_cap_pct, mem_cap));

  for (const auto& id : ids) out.trace.events.push_back({PackingEvent::Kind::place, id, 1, PlacementReason::first_fit});
  out.trace.events.push_back({PackingEvent::Kind::close_machine, "", 1, PlacementReason::first_fit});

  MachinePlan plan;
  plan.index = 1;
  plan.tier = tier.name;
  plan.total_cpu_pct = cpu;
  plan.total_memory_mb = mem;
  plan.hosts = distribute_to_nodes(ids, config);
  out.topology.machines.push_back(std::move(plan));
  return out;
}

const HardwareTier* next_larger(const std::vector<HardwareTier>& tiers, const HardwareTier& tier) {
  const HardwareTier* best = nullptr;
  for (const auto& t : tiers) {
    if (t.capacity_units() > tier.capacity_units() && (!best || t.capacity_units() < best->capacity_units()))
      best = &t;
  }
  return best;
}

}  // namespace

SizingResult size(const SizingRequest& request, const ModelCoefficients& coeffs, const RunStamp& stamp,
                  const std::vector<HardwareTier>& catalog) {
  const DemandModel model(coeffs, merged_catalog(request.tiers, catalog));

  SizingResult result;
  result.request_echo = request;
  result.run_id = stamp.run_id;
  result.created_at = stamp.created_at;

  for (const auto& tier : request.tiers) {
    try {
      const auto demands = tier_demands(request, model, tier);
      if (!demands.empty()) {
        const double total = std::accumulate(demands.begin(), demands.end(), 0.0,
                                             [](double acc, const ServiceDemand& d) { return acc + d.demand.cpu_pct; });
        result.curves[tier.name] = curve_for_demand(tier.name, total / static_cast<double>(demands.size()),
                                                    request.packer.cpu_cap_pct, request.curve_max_services);
      }
      PackingOutcome placed = request.architecture == Architecture::single
                                  ? place_single(demands, tier, request.packer)
                                  : pack(demands, tier, request.packer);
      result.per_tier[tier.name] = std::move(placed.topology);
      result.traces[tier.name] = std::move(placed.trace);
    } catch (const SizingError& e) {
      result.tier_errors[tier.name] = {e.code(), e.what()};
    }
  }

  RecommendThresholds thresholds;
  thresholds.machine_count_threshold = request.machine_count_threshold;
  for (auto& r : recommend(result, thresholds)) {
    if (r.kind == RecommendationKind::near_degradation)
      result.warnings.push_back(std::move(r));
    else
      result.recommendations.push_back(std::move(r));
  }
  return result;
}

std::vector<Recommendation> recommend(const SizingResult& result, const RecommendThresholds& thresholds) {
  std::vector<Recommendation> out;
  const auto& tiers = result.request_echo.tiers;
  const double cap = result.request_echo.packer.cpu_cap_pct;

  for (const auto& tier : tiers) {
    if (auto err = result.tier_errors.find(tier.name); err != result.tier_errors.end()) {
      Recommendation r;
      r.tier = tier.name;
      if (err->second.code == "single_infeasible") {
        r.kind = RecommendationKind::use_distributed;
        r.message = err->second.message + "; use the distributed architecture";
      } else {
        r.kind = RecommendationKind::infeasible;
        r.message = tier.name + " is infeasible: " + err->second.message;
      }
      out.push_back(std::move(r));
      continue;
    }
    auto topo = result.per_tier.find(tier.name);
    if (topo == result.per_tier.end()) continue;

    const auto machines = static_cast<int>(topo->second.machines.size());
    if (machines > thresholds.machine_count_threshold) {
      if (const HardwareTier* target = next_larger(tiers, tier)) {
        Recommendation r;
        r.kind = RecommendationKind::switch_tier;
        r.tier = tier.name;
        r.target_tier = target->name;
        r.message = fmt::format("{} needs {} machines (more than {}); switch to the next larger configuration: {}",
                                tier.name, machines, thresholds.machine_count_threshold, target->name);
        out.push_back(std::move(r));
      }
    }
    for (const auto& m : topo->second.machines) {
      if (m.total_cpu_pct >= thresholds.near_degradation_fraction * cap) {
        Recommendation r;
        r.kind = RecommendationKind::near_degradation;
        r.tier = tier.name;
        r.machine_index = m.index;
        r.message = fmt::format("{} machine {} runs at {:.1f}% cpu, within {:.0f}% of the {:.1f}% cap", tier.name,
                                m.index, m.total_cpu_pct, (1.0 - thresholds.near_degradation_fraction) * 100.0, cap);
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<std::string> compare_tiers(const SizingResult& result) {
  struct Entry {
    std::string name;
    double units;
    std::size_t machines;
  };
  std::vector<Entry> entries;
  for (const auto& tier : result.request_echo.tiers) {
    if (!result.feasible(tier.name)) continue;
    const std::size_t machines = result.per_tier.at(tier.name).machines.size();
    // Integer core count first so equal deployed core counts compare equal.
    const double units = static_cast<double>(machines * static_cast<std::size_t>(tier.total_cores())) * tier.frequency_ghz;
    entries.push_back({tier.name, units, machines});
  }
  if (entries.empty()) throw SizingError("no_feasible_tier", "", "no tier produced a feasible plan");

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.units != b.units) return a.units < b.units;
    return a.machines < b.machines;
  });
  std::vector<std::string> out;
  for (auto& e : entries) out.push_back(std::move(e.name));
  return out;
}

bool all_tiers_infeasible(const SizingResult& result) {
  const auto& tiers = result.request_echo.tiers;
  return !tiers.empty() && std::all_of(tiers.begin(), tiers.end(),
                                       [&](const HardwareTier& t) { return !result.feasible(t.name); });
}

}  // namespace sizer
