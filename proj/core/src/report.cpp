#include "sizer/report.hpp"

#include <fmt/format.h>

#include "sizer/engine.hpp"
#include "sizer/error.hpp"

namespace sizer {

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string md_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '|' || c == '\\' || c == '*' || c == '_' || c == '`') out += '\\';
    out += c;
  }
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string vertex(int machine, std::size_t host = 0, std::size_t node = 0) {
  std::string v = fmt::format("m{}", machine);
  if (host) v += fmt::format("_h{}", host);
  if (node) v += fmt::format("_n{}", node);
  return v;
}

}  // namespace

std::string emit_topology_graph(const Topology& topology) {
  std::string out;
  out += fmt::format("digraph \"topology_{}\" {{\n", dot_escape(topology.tier));
  out += "  graph [rankdir=TB, fontname=\"Helvetica\", labeljust=l];\n";
  out += "  node [shape=box, style=rounded, fontname=\"Helvetica\"];\n";
  for (const auto& m : topology.machines) {
    out += fmt::format("  subgraph cluster_{} {{\n", vertex(m.index));
    out += fmt::format("    label=\"{} machine {}\\ncpu {:.1f}% | memory {:.1f} MB\";\n", dot_escape(m.tier), m.index,
                       m.total_cpu_pct, m.total_memory_mb);
    for (std::size_t h = 0; h < m.hosts.size(); ++h) {
      const Host& host = m.hosts[h];
      out += fmt::format("    subgraph cluster_{} {{\n", vertex(m.index, h + 1));
      out += fmt::format("      label=\"{}\";\n", dot_escape(host.id));
      for (std::size_t n = 0; n < host.nodes.size(); ++n) {
        const Node& node = host.nodes[n];
        std::string label = dot_escape(node.id);
        for (const auto& id : node.service_ids) label += "\\n" + dot_escape(id);
        out += fmt::format("      {} [label=\"{}\"];\n", vertex(m.index, h + 1, n + 1), label);
      }
      out += "    }\n";
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

std::string emit_performance_curve(const PerformanceCurve& curve, double cpu_cap_pct) {
  std::string out = "service_count,predicted_cpu_pct,region,threshold\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{},{},{},{}\n", p.service_count, p.predicted_cpu_pct,
                       p.predicted_cpu_pct < cpu_cap_pct ? "safe" : "degraded",
                       p.service_count == curve.degradation_threshold ? 1 : 0);
  }
  return out;
}

std::string emit_infrastructure_diagram(const SizingResult& result) {
  const std::string tier = compare_tiers(result).front();
  const Topology& topology = result.per_tier.at(tier);

  std::string out;
  out += "digraph \"infrastructure\" {\n";
  out += "  graph [rankdir=LR, fontname=\"Helvetica\"];\n";
  out += "  node [fontname=\"Helvetica\"];\n";
  out += fmt::format("  lb [shape=diamond, label=\"load balancer\\n{}\"];\n", dot_escape(tier));
  out += "  monitor [shape=ellipse, label=\"management / monitoring\"];\n";
  for (const auto& m : topology.machines) {
    const std::string mv = vertex(m.index);
    out += fmt::format("  {} [shape=box3d, label=\"{} machine {}\"];\n", mv, dot_escape(m.tier), m.index);
    out += fmt::format("  lb -> {};\n", mv);
    out += fmt::format("  monitor -> {} [style=dashed, arrowhead=none];\n", mv);
    for (std::size_t h = 0; h < m.hosts.size(); ++h) {
      const std::string hv = vertex(m.index, h + 1);
      out += fmt::format("  {} [shape=box, label=\"{}\"];\n", hv, dot_escape(m.hosts[h].id));
      out += fmt::format("  {} -> {};\n", mv, hv);
      for (std::size_t n = 0; n < m.hosts[h].nodes.size(); ++n) {
        const Node& node = m.hosts[h].nodes[n];
        const std::string nv = vertex(m.index, h + 1, n + 1);
        out += fmt::format("  {} [shape=component, label=\"{} ({} services)\"];\n", nv, dot_escape(node.id),
                           node.service_ids.size());
        out += fmt::format("  {} -> {};\n", hv, nv);
      }
    }
  }
  out += "}\n";
  return out;
}

std::string emit_summary_report(const SizingResult& result) {
  const SizingRequest& req = result.request_echo;
  std::string out;

  out += "# Sizing summary\n\n";
  out += fmt::format("- Run: `{}`\n", result.run_id);
  out += fmt::format("- Created: {}\n\n", result.created_at);

  // 1. inputs
  out += "## 1. Inputs\n\n";
  out += fmt::format("- Architecture: {}\n", to_string(req.architecture));
  out += fmt::format("- Level: {}\n", to_string(req.level));
  out += fmt::format("- CPU cap (W): {:.1f}%\n", req.packer.cpu_cap_pct);
  out += fmt::format("- Usable memory: {:.0f}% of tier RAM\n", req.packer.mem_cap_fraction * 100.0);
  out += fmt::format("- Nodes per host: at most {}\n", req.packer.max_nodes_per_host);
  out += fmt::format("- Services per node: at most {}\n", req.packer.services_per_node_cap);
  out += fmt::format("- Node overhead: {:.1f} MB\n", req.packer.node_overhead_mb);
  out += fmt::format("- Tier-switch threshold: {} machines\n", req.machine_count_threshold);
  if (const auto* name = std::get_if<std::string>(&req.coefficients))
    out += fmt::format("- Coefficients: calibration profile `{}`\n", *name);
  else if (const auto* inl = std::get_if<ModelCoefficients>(&req.coefficients))
    out += fmt::format("- Coefficients: inline, {} pairs, reference tier {}\n", inl->pairs.size(),
                       md_escape(inl->reference_tier));
  else
    out += "- Coefficients: service default\n";
  out += fmt::format("- Services: {}\n\n", req.services.size());

  out += "### Services\n\n";
  if (req.services.empty()) {
    out += "_No services._\n\n";
  } else {
    out += "| id | implementation | binding | workload | concurrency | throughput (req/s) | request KB | response KB |\n";
    out += "|---|---|---|---|---|---|---|---|\n";
    for (const auto& s : req.services) {
      if (s.profile) {
        const auto& p = *s.profile;
        out += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} |\n", md_escape(s.id),
                           md_escape(s.implementation_type), md_escape(s.binding_type), to_string(p.workload_type),
                           p.concurrency, p.throughput, p.payload_request_kb, p.payload_response_kb);
      } else {
        out += fmt::format("| {} | {} | {} | - | - | - | - | - |\n", md_escape(s.id), md_escape(s.implementation_type),
                           md_escape(s.binding_type));
      }
    }
    out += "\n";
  }

  out += "### Tiers\n\n";
  out += "| tier | processors | cores per processor | frequency (GHz) | RAM (GB) |\n";
  out += "|---|---|---|---|---|\n";
  for (const auto& t : req.tiers)
    out += fmt::format("| {} | {} | {} | {} | {} |\n", md_escape(t.name), t.processors, t.cores_per_processor,
                       t.frequency_ghz, t.ram_gb);
  out += "\n";

  // 2. topology
  out += "## 2. Topology\n\n";
  for (const auto& t : req.tiers) {
    out += fmt::format("### {}\n\n", md_escape(t.name));
    if (auto err = result.tier_errors.find(t.name); err != result.tier_errors.end()) {
      out += fmt::format("Infeasible ({}): {}\n\n", err->second.code, md_escape(err->second.message));
      continue;
    }
    auto topo = result.per_tier.find(t.name);
    if (topo == result.per_tier.end() || topo->second.machines.empty()) {
      out += "_No machines required._\n\n";
      continue;
    }
    out += "| tier | machine | services | cpu % | memory MB | hosts | nodes |\n";
    out += "|---|---|---|---|---|---|---|\n";
    for (const auto& m : topo->second.machines)
      out += fmt::format("| {} | {} | {} | {:.1f} | {:.1f} | {} | {} |\n", md_escape(t.name), m.index,
                         m.service_count(), m.total_cpu_pct, m.total_memory_mb, m.hosts.size(), m.node_count());
    out += "\n";
    out += "| machine | host | node | service ids |\n";
    out += "|---|---|---|---|\n";
    for (const auto& m : topo->second.machines) {
      for (const auto& h : m.hosts) {
        for (const auto& n : h.nodes) {
          std::vector<std::string> ids;
          for (const auto& id : n.service_ids) ids.push_back(md_escape(id));
          out += fmt::format("| {} | {} | {} | {} |\n", m.index, md_escape(h.id), md_escape(n.id), join(ids, ", "));
        }
      }
    }
    out += "\n";
  }

  // 3. thresholds
  out += "## 3. Degradation thresholds\n\n";
  if (result.curves.empty()) {
    out += "_No performance curves._\n\n";
  } else {
    out += "| tier | per-service cpu % | services before degradation |\n";
    out += "|---|---|---|\n";
    for (const auto& t : req.tiers) {
      auto c = result.curves.find(t.name);
      if (c == result.curves.end()) continue;
      const double per_service = c->second.points.empty() ? 0.0 : c->second.points.front().predicted_cpu_pct;
      out += fmt::format("| {} | {:.2f} | {} |\n", md_escape(t.name), per_service, c->second.degradation_threshold);
    }
    out += "\n";
  }

  // 4. recommendations
  out += "## 4. Recommendations\n\n";
  auto describe = [](const Recommendation& r) {
    std::string where = r.tier;
    if (!r.target_tier.empty()) where += " -> " + r.target_tier;
    if (r.machine_index > 0) where += fmt::format(", machine {}", r.machine_index);
    return fmt::format("- **{}** ({}): {}\n", to_string(r.kind), md_escape(where), md_escape(r.message));
  };
  if (result.recommendations.empty()) out += "_None._\n";
  for (const auto& r : result.recommendations) out += describe(r);
  out += "\n### Warnings\n\n";
  if (result.warnings.empty()) out += "_None._\n";
  for (const auto& r : result.warnings) out += describe(r);
  out += "\n";

  // 5. trace
  out += "## 5. Appendix: packing trace\n";
  for (const auto& t : req.tiers) {
    auto tr = result.traces.find(t.name);
    if (tr == result.traces.end()) continue;
    out += fmt::format("\n### {}\n\n", md_escape(t.name));
    if (tr->second.events.empty()) {
      out += "_Nothing placed._\n";
      continue;
    }
    int step = 0;
    for (const auto& e : tr->second.events) {
      if (e.kind == PackingEvent::Kind::place)
        out += fmt::format("{}. place {} on machine {} ({})\n", ++step, md_escape(e.service_id), e.machine_index,
                           to_string(e.reason));
      else
        out += fmt::format("{}. close machine {}\n", ++step, e.machine_index);
    }
  }
  return out;
}

}  // namespace sizer
