#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sizer/domain.hpp"

namespace sizer {

struct ServiceDemand {
  std::string service_id;
  ResourceDemand demand;
};

struct PackingOutcome {
  Topology topology;
  PackingTrace trace;
};

// Greedy placement onto machines of one tier. One machine is open at a time;
// the unplaced services are scanned in input order and the first one that
// keeps machine CPU strictly below W and machine memory (services plus node
// overhead) within the cap is placed, then the scan restarts. When nothing
// fits the machine is closed and its services spread over nodes and hosts.
// A closed machine is never revisited.
//
// Although often described as an unbounded knapsack, this is bin packing over
// distinct services (next-fit with lookahead).
//
// Throws SizingError: tier_mismatch when a demand is tagged with another tier,
// oversized_service when a service cannot fit an empty machine.
PackingOutcome pack(std::span<const ServiceDemand> demands, const HardwareTier& tier,
                    const PackerConfig& config);

// Round-robin spread: ceil(n / services_per_node_cap) nodes, service k goes to
// node k mod node_count, nodes chunked into hosts of max_nodes_per_host.
std::vector<Host> distribute_to_nodes(const std::vector<std::string>& service_ids,
                                      const PackerConfig& config);

int node_count_for(std::size_t services, const PackerConfig& config) noexcept;
double memory_cap_mb(const HardwareTier& tier, const PackerConfig& config) noexcept;

}  // namespace sizer
