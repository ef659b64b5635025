#include "sizer/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sizer/error.hpp"

namespace sizer {

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(violations.empty()
                             ? std::string("validation failed")
                             : "validation failed: " + violations.front().code +
                                   (violations.front().subject.empty() ? "" : " (" + violations.front().subject + ")") +
                                   (violations.size() > 1 ? " and " + std::to_string(violations.size() - 1) + " more"
                                                          : "")),
      violations_(std::move(violations)) {}

bool is_valid_identifier(std::string_view id) noexcept {
  return !id.empty() && id.size() <= kMaxIdentifierLength;
}

const std::vector<HardwareTier>& standard_tiers() {
  static const std::vector<HardwareTier> tiers = {
      {"medium", 2, 4, 3.07, 32.0},
      {"large", 2, 8, 3.07, 64.0},
      {"perflab", 2, 12, 3.07, 64.0},
  };
  return tiers;
}

const HardwareTier* find_tier(const std::vector<HardwareTier>& tiers, std::string_view name) {
  auto it = std::find_if(tiers.begin(), tiers.end(), [&](const HardwareTier& t) { return t.name == name; });
  return it == tiers.end() ? nullptr : &*it;
}

std::size_t MachinePlan::service_count() const noexcept {
  std::size_t n = 0;
  for (const auto& h : hosts)
    for (const auto& node : h.nodes) n += node.service_ids.size();
  return n;
}

std::size_t MachinePlan::node_count() const noexcept {
  std::size_t n = 0;
  for (const auto& h : hosts) n += h.nodes.size();
  return n;
}

std::size_t Topology::service_count() const noexcept {
  return std::accumulate(machines.begin(), machines.end(), std::size_t{0},
                         [](std::size_t acc, const MachinePlan& m) { return acc + m.service_count(); });
}

bool SizingResult::feasible(std::string_view tier) const {
  return per_tier.find(std::string(tier)) != per_tier.end() && tier_errors.find(std::string(tier)) == tier_errors.end();
}

// ---------------------------------------------------------------------------
// Coefficients

const std::vector<std::string>& default_implementation_types() {
  static const std::vector<std::string> v = {"java", "mediation", "webapp"};
  return v;
}

const std::vector<std::string>& default_binding_types() {
  static const std::vector<std::string> v = {"soap_http", "jms", "rest"};
  return v;
}

ModelCoefficients ModelCoefficients::defaults() {
  ModelCoefficients m;
  m.reference_tier = std::string(kDefaultReferenceTier);
  for (const auto& impl : default_implementation_types()) {
    for (const auto& binding : default_binding_types()) {
      PairCoefficients p;
      p.implementation_type = impl;
      p.binding_type = binding;
      p.c0_cpu_pct = 2.5;
      p.c1_cpu_per_user = 0.02;
      p.c2_cpu_per_rps = 0.01;
      p.c3_cpu_per_rps_kb = 1.5625e-4;
      p.m0_mem_mb = 256.0;
      p.m1_mem_per_user_mb = 0.5;
      p.m2_mem_per_kb_mb = 0.25;
      p.deploy_mem_mb = 192.0;
      m.pairs.push_back(std::move(p));
    }
  }
  return m;
}

const PairCoefficients* ModelCoefficients::find(std::string_view implementation_type,
                                                std::string_view binding_type) const {
  auto it = std::find_if(pairs.begin(), pairs.end(), [&](const PairCoefficients& p) {
    return p.implementation_type == implementation_type && p.binding_type == binding_type;
  });
  return it == pairs.end() ? nullptr : &*it;
}

const PairCoefficients& ModelCoefficients::at(std::string_view implementation_type,
                                              std::string_view binding_type) const {
  if (const auto* p = find(implementation_type, binding_type)) return *p;
  std::string key = std::string(implementation_type) + "/" + std::string(binding_type);
  throw SizingError("unknown_pair", key, "no coefficients for implementation/binding pair " + key);
}

std::vector<Violation> check_coefficients(const ModelCoefficients& coeffs) {
  std::vector<Violation> out;
  if (!is_valid_identifier(coeffs.reference_tier))
    out.push_back({"invalid_coefficients", "reference_tier", "reference_tier must be a valid identifier"});
  for (std::size_t i = 0; i < coeffs.pairs.size(); ++i) {
    const auto& p = coeffs.pairs[i];
    const std::string key = p.implementation_type + "/" + p.binding_type;
    if (!is_valid_identifier(p.implementation_type) || !is_valid_identifier(p.binding_type))
      out.push_back({"invalid_coefficients", key, "pair keys must be valid identifiers"});
    for (std::size_t j = 0; j < i; ++j) {
      if (coeffs.pairs[j].implementation_type == p.implementation_type &&
          coeffs.pairs[j].binding_type == p.binding_type) {
        out.push_back({"invalid_coefficients", key, "duplicate coefficient pair " + key});
        break;
      }
    }
    for (double v : {p.c0_cpu_pct, p.c1_cpu_per_user, p.c2_cpu_per_rps, p.c3_cpu_per_rps_kb, p.m0_mem_mb,
                     p.m1_mem_per_user_mb, p.m2_mem_per_kb_mb, p.deploy_mem_mb}) {
      if (!std::isfinite(v) || v < 0.0) {
        out.push_back({"invalid_coefficients", key, "coefficients must be finite and non-negative"});
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(WorkloadType v) noexcept {
  return v == WorkloadType::steady ? "steady" : "burst";
}

std::string_view to_string(Architecture v) noexcept {
  return v == Architecture::single ? "single" : "distributed";
}

std::string_view to_string(SizingLevel v) noexcept {
  return v == SizingLevel::deployment ? "deployment" : "runtime";
}

std::string_view to_string(PlacementReason v) noexcept {
  return v == PlacementReason::first_fit ? "first_fit" : "lookahead";
}

std::string_view to_string(RecommendationKind v) noexcept {
  switch (v) {
    case RecommendationKind::switch_tier: return "switch_tier";
    case RecommendationKind::use_distributed: return "use_distributed";
    case RecommendationKind::infeasible: return "infeasible";
    case RecommendationKind::near_degradation: return "near_degradation";
  }
  return "unknown";
}

}  // namespace sizer
