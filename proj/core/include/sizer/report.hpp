#pragma once

#include <string>

#include "sizer/domain.hpp"

namespace sizer {

// Graphviz DOT, one cluster per machine with nested host clusters.
std::string emit_topology_graph(const Topology& topology);

// CSV: service_count,predicted_cpu_pct,region,threshold
std::string emit_performance_curve(const PerformanceCurve& curve, double cpu_cap_pct);

// Graphviz DOT of the top-ranked tier: load balancer -> machines -> hosts -> nodes,
// plus a monitoring vertex attached to every machine.
// Throws SizingError{no_feasible_tier}.
std::string emit_infrastructure_diagram(const SizingResult& result);

// CommonMark summary: inputs, topology tables, thresholds, recommendations,
// packing trace.
std::string emit_summary_report(const SizingResult& result);

}  // namespace sizer
