#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sizer/coefficients.hpp"

namespace sizer {

inline constexpr std::size_t kMaxIdentifierLength = 64;

// Identifiers are case-sensitive, non-empty and at most 64 characters.
bool is_valid_identifier(std::string_view id) noexcept;

// A standard machine class. `cores_per_processor` is per socket, so the
// perflab box (2 x 12) is the 24-core reference machine.
struct HardwareTier {
  std::string name;
  int processors = 0;
  int cores_per_processor = 0;
  double frequency_ghz = 0.0;
  double ram_gb = 0.0;

  int total_cores() const noexcept { return processors * cores_per_processor; }
  double capacity_units() const noexcept { return total_cores() * frequency_ghz; }
  double ram_mb() const noexcept { return ram_gb * 1024.0; }

  bool operator==(const HardwareTier&) const = default;
};

// medium (2x4, 3.07 GHz, 32 GB), large (2x8, 3.07 GHz, 64 GB),
// perflab (2x12, 3.07 GHz, 64 GB).
const std::vector<HardwareTier>& standard_tiers();

const HardwareTier* find_tier(const std::vector<HardwareTier>& tiers, std::string_view name);

enum class WorkloadType { steady, burst };

struct RuntimeProfile {
  WorkloadType workload_type = WorkloadType::steady;
  double concurrency = 0.0;       // concurrent users
  double throughput = 0.0;        // requests per second
  double payload_request_kb = 0.0;
  double payload_response_kb = 0.0;

  double payload_total_kb() const noexcept { return payload_request_kb + payload_response_kb; }

  bool operator==(const RuntimeProfile&) const = default;
};

struct ServiceSpec {
  std::string id;
  std::string implementation_type = "java";
  std::string binding_type = "soap_http";
  std::optional<RuntimeProfile> profile;

  bool operator==(const ServiceSpec&) const = default;
};

// CPU is a percentage of ONE machine of `tier`; only meaningful with its tag.
struct ResourceDemand {
  double cpu_pct = 0.0;
  double memory_mb = 0.0;
  std::string tier;

  bool operator==(const ResourceDemand&) const = default;
};

struct PackerConfig {
  double cpu_cap_pct = 80.0;       // W, machine totals stay strictly below
  double mem_cap_fraction = 0.75;  // usable share of tier RAM
  int max_nodes_per_host = 5;
  int services_per_node_cap = 4;
  double node_overhead_mb = 512.0;

  bool operator==(const PackerConfig&) const = default;
};

struct Node {
  std::string id;
  std::vector<std::string> service_ids;

  bool operator==(const Node&) const = default;
};

struct Host {
  std::string id;
  std::vector<Node> nodes;

  bool operator==(const Host&) const = default;
};

struct MachinePlan {
  int index = 0;  // 1-based
  std::string tier;
  std::vector<Host> hosts;
  double total_cpu_pct = 0.0;
  double total_memory_mb = 0.0;

  std::size_t service_count() const noexcept;
  std::size_t node_count() const noexcept;

  bool operator==(const MachinePlan&) const = default;
};

struct Topology {
  std::string tier;
  std::vector<MachinePlan> machines;

  std::size_t service_count() const noexcept;

  bool operator==(const Topology&) const = default;
};

enum class PlacementReason { first_fit, lookahead };

struct PackingEvent {
  enum class Kind { place, close_machine };
  Kind kind = Kind::place;
  std::string service_id;  // empty for close_machine
  int machine_index = 0;
  PlacementReason reason = PlacementReason::first_fit;

  bool operator==(const PackingEvent&) const = default;
};

struct PackingTrace {
  std::vector<PackingEvent> events;

  bool operator==(const PackingTrace&) const = default;
};

enum class Architecture { single, distributed };
enum class SizingLevel { deployment, runtime };

// Where a request takes its model from: the caller's default (monostate), a
// stored calibration profile by name, or an inline coefficient set.
using CoefficientsSource = std::variant<std::monostate, std::string, ModelCoefficients>;

struct SizingRequest {
  std::vector<ServiceSpec> services;
  Architecture architecture = Architecture::distributed;
  SizingLevel level = SizingLevel::runtime;
  std::vector<HardwareTier> tiers;
  PackerConfig packer;
  CoefficientsSource coefficients;
  std::optional<RuntimeProfile> default_profile;
  int machine_count_threshold = 10;
  int curve_max_services = 20;

  bool operator==(const SizingRequest&) const = default;
};

struct CurvePoint {
  int service_count = 0;
  double predicted_cpu_pct = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

struct PerformanceCurve {
  std::string tier;
  std::vector<CurvePoint> points;
  int degradation_threshold = 0;  // largest n with points[n] < W

  bool operator==(const PerformanceCurve&) const = default;
};

enum class RecommendationKind { switch_tier, use_distributed, infeasible, near_degradation };

struct Recommendation {
  RecommendationKind kind = RecommendationKind::switch_tier;
  std::string tier;
  std::string target_tier;  // switch_tier only
  int machine_index = 0;    // near_degradation only
  std::string message;

  bool operator==(const Recommendation&) const = default;
};

struct TierError {
  std::string code;
  std::string message;

  bool operator==(const TierError&) const = default;
};

struct SizingResult {
  SizingRequest request_echo;
  std::map<std::string, Topology> per_tier;
  std::map<std::string, PackingTrace> traces;
  std::map<std::string, PerformanceCurve> curves;
  std::map<std::string, TierError> tier_errors;
  std::vector<Recommendation> recommendations;
  std::vector<Recommendation> warnings;
  std::string created_at;
  std::string run_id;

  bool feasible(std::string_view tier) const;

  bool operator==(const SizingResult&) const = default;
};

struct RunRecord {
  std::string run_id;
  SizingRequest request;
  SizingResult result;
  std::string created_at;

  bool operator==(const RunRecord&) const = default;
};

std::string_view to_string(WorkloadType v) noexcept;
std::string_view to_string(Architecture v) noexcept;
std::string_view to_string(SizingLevel v) noexcept;
std::string_view to_string(PlacementReason v) noexcept;
std::string_view to_string(RecommendationKind v) noexcept;

}  // namespace sizer
