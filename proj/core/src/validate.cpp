#include "sizer/validate.hpp"

#include <cmath>
#include <set>

namespace sizer {

namespace {

bool nonneg_finite(double v) { return std::isfinite(v) && v >= 0.0; }

void check_packer(const PackerConfig& p, std::vector<Violation>& out) {
  if (!(p.cpu_cap_pct > 0.0 && p.cpu_cap_pct <= 100.0))
    out.push_back({"invalid_packer", "cpu_cap_pct", "cpu_cap_pct must lie in (0, 100]"});
  if (!(p.mem_cap_fraction > 0.0 && p.mem_cap_fraction <= 1.0))
    out.push_back({"invalid_packer", "mem_cap_fraction", "mem_cap_fraction must lie in (0, 1]"});
  if (p.max_nodes_per_host < 1)
    out.push_back({"invalid_packer", "max_nodes_per_host", "max_nodes_per_host must be at least 1"});
  if (p.services_per_node_cap < 1)
    out.push_back({"invalid_packer", "services_per_node_cap", "services_per_node_cap must be at least 1"});
  if (!nonneg_finite(p.node_overhead_mb))
    out.push_back({"invalid_packer", "node_overhead_mb", "node_overhead_mb must be non-negative"});
}

}  // namespace

std::vector<Violation> check_tier(const HardwareTier& tier) {
  std::vector<Violation> out;
  const std::string subject = tier.name.empty() ? "<unnamed>" : tier.name;
  if (!is_valid_identifier(tier.name))
    out.push_back({"invalid_tier", subject, "tier name must be 1-64 characters"});
  if (tier.processors <= 0 || tier.cores_per_processor <= 0 || !(tier.frequency_ghz > 0.0) ||
      !std::isfinite(tier.frequency_ghz) || !(tier.ram_gb > 0.0) || !std::isfinite(tier.ram_gb))
    out.push_back({"invalid_tier", subject, "tier " + subject + " has a non-positive field"});
  return out;
}

std::vector<Violation> check_profile(const RuntimeProfile& profile, const std::string& subject) {
  std::vector<Violation> out;
  if (!nonneg_finite(profile.concurrency) || !nonneg_finite(profile.throughput) ||
      !nonneg_finite(profile.payload_request_kb) || !nonneg_finite(profile.payload_response_kb))
    out.push_back({"invalid_profile", subject, "runtime profile of " + subject + " has a negative field"});
  return out;
}

SizingRequest validate_request(const SizingRequest& request, const ModelCoefficients& coeffs,
                               const std::vector<HardwareTier>& default_tiers) {
  std::vector<Violation> out;
  SizingRequest norm = request;

  if (norm.tiers.empty()) norm.tiers = default_tiers;
  std::set<std::string> tier_names;
  for (const auto& t : norm.tiers) {
    auto v = check_tier(t);
    out.insert(out.end(), v.begin(), v.end());
    if (!tier_names.insert(t.name).second)
      out.push_back({"duplicate_tier", t.name, "tier " + t.name + " listed twice"});
  }

  check_packer(norm.packer, out);
  if (norm.machine_count_threshold < 0)
    out.push_back({"invalid_threshold", "machine_count_threshold", "machine_count_threshold must be >= 0"});
  if (norm.curve_max_services < 1)
    out.push_back({"invalid_threshold", "curve_max_services", "curve_max_services must be >= 1"});

  {
    auto v = check_coefficients(coeffs);
    out.insert(out.end(), v.begin(), v.end());
    if (!find_tier(norm.tiers, coeffs.reference_tier) && !find_tier(default_tiers, coeffs.reference_tier) &&
        !find_tier(standard_tiers(), coeffs.reference_tier))
      out.push_back({"unknown_reference_tier", coeffs.reference_tier,
                     "coefficient reference tier " + coeffs.reference_tier + " is not a known tier"});
  }

  if (norm.default_profile) {
    auto v = check_profile(*norm.default_profile, "default_profile");
    out.insert(out.end(), v.begin(), v.end());
  }

  std::set<std::string> seen;
  std::set<std::string> reported;
  for (auto& s : norm.services) {
    if (!is_valid_identifier(s.id)) {
      out.push_back({"invalid_id", s.id, "service id must be 1-64 characters"});
    } else if (!seen.insert(s.id).second && reported.insert(s.id).second) {
      out.push_back({"duplicate_id", s.id, "service id " + s.id + " is used more than once"});
    }
    if (!is_valid_identifier(s.implementation_type) || !is_valid_identifier(s.binding_type)) {
      out.push_back({"invalid_type", s.id, "implementation and binding types must be 1-64 characters"});
    } else if (!coeffs.find(s.implementation_type, s.binding_type)) {
      out.push_back({"unknown_pair", s.id,
                     "service " + s.id + ": no coefficients for " + s.implementation_type + "/" + s.binding_type});
    }
    if (s.profile) {
      auto v = check_profile(*s.profile, s.id);
      out.insert(out.end(), v.begin(), v.end());
    } else if (norm.level == SizingLevel::runtime) {
      if (norm.default_profile)
        s.profile = norm.default_profile;
      else
        out.push_back({"missing_profile", s.id, "service " + s.id + " has no runtime profile and no default is declared"});
    }
  }

  if (!out.empty()) throw ValidationError(std::move(out));
  return norm;
}

}  // namespace sizer
