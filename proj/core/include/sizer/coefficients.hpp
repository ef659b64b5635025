#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sizer/error.hpp"

namespace sizer {

// Demand-model coefficients for one (implementation_type, binding_type) pair.
//
//   cpu_pct   = c0 + c1*U + c2*T + c3*T*P      (percent of one reference-tier machine)
//   memory_mb = m0 + m1*U + m2*P
//
// with U concurrent users, T requests/second and P total payload in KB.
// deploy_mem_mb is the static footprint of a deployed but idle service.
struct PairCoefficients {
  std::string implementation_type;
  std::string binding_type;
  double c0_cpu_pct = 0.0;
  double c1_cpu_per_user = 0.0;
  double c2_cpu_per_rps = 0.0;
  double c3_cpu_per_rps_kb = 0.0;
  double m0_mem_mb = 0.0;
  double m1_mem_per_user_mb = 0.0;
  double m2_mem_per_kb_mb = 0.0;
  double deploy_mem_mb = 0.0;

  bool operator==(const PairCoefficients&) const = default;
};

struct ModelCoefficients {
  std::string reference_tier;
  std::vector<PairCoefficients> pairs;

  const PairCoefficients* find(std::string_view implementation_type,
                               std::string_view binding_type) const;
  // Throws SizingError{unknown_pair}.
  const PairCoefficients& at(std::string_view implementation_type,
                             std::string_view binding_type) const;

  // The shipped uncalibrated model. Every default implementation/binding
  // pair carries the same values, referenced to the perflab tier. Chosen so
  // that 12 services at U=100, T=100, P=64 stay under an 80% cap on perflab
  // and 13 do not.
  static ModelCoefficients defaults();

  bool operator==(const ModelCoefficients&) const = default;
};

inline constexpr std::string_view kDefaultReferenceTier = "perflab";

const std::vector<std::string>& default_implementation_types();
const std::vector<std::string>& default_binding_types();

// Returns the list of problems (negative/non-finite coefficients, duplicate or
// empty pair keys); empty when the set is usable.
std::vector<Violation> check_coefficients(const ModelCoefficients& coeffs);

}  // namespace sizer
