#include "sizer/packer.hpp"

#include <cmath>
#include <fmt/format.h>

#include "sizer/error.hpp"

namespace sizer {

int node_count_for(std::size_t services, const PackerConfig& config) noexcept {
  const auto cap = static_cast<std::size_t>(config.services_per_node_cap);
  return static_cast<int>((services + cap - 1) / cap);
}

double memory_cap_mb(const HardwareTier& tier, const PackerConfig& config) noexcept {
  return config.mem_cap_fraction * tier.ram_mb();
}

std::vector<Host> distribute_to_nodes(const std::vector<std::string>& service_ids, const PackerConfig& config) {
  std::vector<Host> hosts;
  if (service_ids.empty()) return hosts;

  const int node_count = node_count_for(service_ids.size(), config);
  std::vector<Node> nodes(static_cast<std::size_t>(node_count));
  for (int i = 0; i < node_count; ++i) nodes[static_cast<std::size_t>(i)].id = fmt::format("node-{}", i + 1);
  for (std::size_t k = 0; k < service_ids.size(); ++k)
    nodes[k % static_cast<std::size_t>(node_count)].service_ids.push_back(service_ids[k]);

  const auto per_host = static_cast<std::size_t>(config.max_nodes_per_host);
  for (std::size_t first = 0; first < nodes.size(); first += per_host) {
    Host h;
    h.id = fmt::format("host-{}", hosts.size() + 1);
    for (std::size_t i = first; i < std::min(nodes.size(), first + per_host); ++i) h.nodes.push_back(std::move(nodes[i]));
    hosts.push_back(std::move(h));
  }
  return hosts;
}

PackingOutcome pack(std::span<const ServiceDemand> demands, const HardwareTier& tier, const PackerConfig& config) {
  const double cpu_cap = config.cpu_cap_pct;
  const double mem_cap = memory_cap_mb(tier, config);
  const double overhead = config.node_overhead_mb;

  for (const auto& sd : demands) {
    const auto& d = sd.demand;
    if (d.tier != tier.name)
      throw SizingError("tier_mismatch", sd.service_id,
                        fmt::format("demand of {} is expressed against tier '{}', packing on '{}'", sd.service_id,
                                    d.tier, tier.name));
    if (!std::isfinite(d.cpu_pct) || !std::isfinite(d.memory_mb) || d.cpu_pct < 0.0 || d.memory_mb < 0.0)
      throw SizingError("invalid_demand", sd.service_id, "demand of " + sd.service_id + " is negative or not finite");
    if (!(d.cpu_pct < cpu_cap) || d.memory_mb + overhead * node_count_for(1, config) > mem_cap)
      throw SizingError("oversized_service", sd.service_id,
                        fmt::format("service {} (cpu {}%, memory {} MB) does not fit an empty {} machine "
                                    "(cpu < {}%, memory <= {} MB)",
                                    sd.service_id, d.cpu_pct, d.memory_mb, tier.name, cpu_cap, mem_cap));
  }

  PackingOutcome out;
  out.topology.tier = tier.name;

  std::vector<std::size_t> unplaced(demands.size());
  for (std::size_t i = 0; i < unplaced.size(); ++i) unplaced[i] = i;

  while (!unplaced.empty()) {
    const int machine_index = static_cast<int>(out.topology.machines.size()) + 1;
    std::vector<std::string> ids;
    double cpu = 0.0;
    double mem = 0.0;

    for (;;) {
      std::size_t pick = unplaced.size();
      for (std::size_t k = 0; k < unplaced.size(); ++k) {
        const ResourceDemand& d = demands[unplaced[k]].demand;
        const double mem_after = mem + d.memory_mb + overhead * node_count_for(ids.size() + 1, config);
        if (cpu + d.cpu_pct < cpu_cap && mem_after <= mem_cap) {
          pick = k;
          break;
        }
      }
      if (pick == unplaced.size()) break;

      const ServiceDemand& chosen = demands[unplaced[pick]];
      cpu += chosen.demand.cpu_pct;
      mem += chosen.demand.memory_mb;
      ids.push_back(chosen.service_id);
      out.trace.events.push_back({PackingEvent::Kind::place, chosen.service_id, machine_index,
                                  pick == 0 ? PlacementReason::first_fit : PlacementReason::lookahead});
      unplaced.erase(unplaced.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    MachinePlan plan;
    plan.index = machine_index;
    plan.tier = tier.name;
    plan.total_cpu_pct = cpu;
    plan.total_memory_mb = mem + overhead * node_count_for(ids.size(), config);
    plan.hosts = distribute_to_nodes(ids, config);
    out.topology.machines.push_back(std::move(plan));
    out.trace.events.push_back({PackingEvent::Kind::close_machine, "", machine_index, PlacementReason::first_fit});
  }
  return out;
}

}  // namespace sizer
