#pragma once

// Canonical JSON form of the domain types. Field names are the snake_case
// names of the C++ members; doubles are written with round-trip precision
// and lists keep their order, so parse(dump(x)) == x and
// dump(parse(dump(x))) == dump(x) byte for byte.

#include <string>
#include <string_view>
#include <vector>

#include "sizer/calibration.hpp"
#include "sizer/domain.hpp"

namespace sizer {

// Malformed documents raise SizingError{code = "malformed_json"}.

std::string to_json(const HardwareTier& tier);
std::string to_json(const std::vector<HardwareTier>& tiers);
std::string to_json(const RuntimeProfile& profile);
std::string to_json(const SizingRequest& request);
std::string to_json(const Topology& topology);
std::string to_json(const PackingTrace& trace);
std::string to_json(const PerformanceCurve& curve);
std::string to_json(const SizingResult& result);
std::string to_json(const RunRecord& record);
std::string to_json(const ModelCoefficients& coeffs);
std::string to_json(const ValidationReport& report);
std::string to_json(const std::vector<Violation>& violations);

std::vector<HardwareTier> parse_tiers(std::string_view text);
RuntimeProfile parse_profile(std::string_view text);
SizingRequest parse_request(std::string_view text);
SizingResult parse_result(std::string_view text);
RunRecord parse_run_record(std::string_view text);
ModelCoefficients parse_coefficients(std::string_view text);

}  // namespace sizer
