#include "sizer/api.hpp"

#include "sizer/calibration.hpp"
#include "sizer/codec.hpp"
#include "sizer/engine.hpp"
#include "sizer/error.hpp"
#include "sizer/report.hpp"
#include "sizer/validate.hpp"

namespace sizer {

namespace {

ApiResponse errors(int status, std::vector<Violation> violations) {
  return {status, "application/json", to_json(violations), ""};
}

ApiResponse error(int status, const SizingError& e) { return errors(status, {e.violation()}); }

ApiResponse error(int status, std::string code, std::string subject, std::string message) {
  return errors(status, {{std::move(code), std::move(subject), std::move(message)}});
}

}  // namespace

SizingApi::SizingApi(ServiceConfig config)
    : config_(std::move(config)), runs_(config_.data_dir), profiles_(config_.data_dir) {}

ModelCoefficients SizingApi::resolve(const CoefficientsSource& source) const {
  if (const auto* name = std::get_if<std::string>(&source)) {
    auto found = profiles_.find(*name);
    if (!found) throw SizingError("unknown_profile", *name, "no calibration profile named " + *name);
    return *found;
  }
  if (const auto* inl = std::get_if<ModelCoefficients>(&source)) return *inl;
  return config_.default_coefficients;
}

ApiResponse SizingApi::post_size(std::string_view body) {
  SizingRequest request;
  ModelCoefficients coeffs;
  try {
    request = parse_request(body);
    coeffs = resolve(request.coefficients);
    request = validate_request(request, coeffs, config_.tiers);
  } catch (const ValidationError& e) {
    return errors(400, e.violations());
  } catch (const SizingError& e) {
    return error(400, e);
  }

  RunStamp stamp{RunStore::new_run_id(), utc_timestamp_iso8601()};
  SizingResult result;
  try {
    result = size(request, coeffs, stamp, config_.tiers);
  } catch (const SizingError& e) {
    return error(400, e);
  }

  try {
    runs_.commit({stamp.run_id, request, result, stamp.created_at});
  } catch (const SizingError& e) {
    return error(500, e);
  }
  return {all_tiers_infeasible(result) ? 422 : 200, "application/json", to_json(result), ""};
}

ApiResponse SizingApi::get_tiers() const { return {200, "application/json", to_json(config_.tiers), ""}; }

ApiResponse SizingApi::post_calibrate(std::string_view csv, std::string_view name, std::string_view reference) {
  const std::string ref = reference.empty() ? config_.default_coefficients.reference_tier : std::string(reference);
  std::vector<HardwareTier> table = config_.tiers;
  for (const auto& t : standard_tiers())
    if (!find_tier(table, t.name)) table.push_back(t);

  if (!name.empty() && !ProfileRegistry::is_valid_name(name))
    return error(400, "invalid_profile_name", std::string(name), "profile names use letters, digits, '-', '_' and '.'");
  if (!name.empty() && profiles_.find(name))
    return error(409, "profile_exists", std::string(name), "calibration profile " + std::string(name) + " exists");

  ModelCoefficients fitted;
  try {
    fitted = fit_coefficients(parse_calibration_csv(csv, table), ref, table, config_.default_coefficients);
  } catch (const SizingError& e) {
    return error(400, e);
  }

  if (!name.empty()) {
    try {
      profiles_.add(std::string(name), fitted);
    } catch (const SizingError& e) {
      return error(e.code() == "profile_exists" ? 409 : 500, e);
    }
  }
  return {200, "application/json", to_json(fitted), ""};
}

ApiResponse SizingApi::get_run(std::string_view run_id) const {
  auto doc = runs_.find_document(run_id);
  if (!doc) return error(404, "unknown_run", std::string(run_id), "no run with this id");
  return {200, "application/json", std::move(*doc), ""};
}

ApiResponse SizingApi::get_report(std::string_view run_id, std::string_view format, std::string_view tier) const {
  if (format != "markdown" && format != "dot" && format != "csv")
    return error(400, "unknown_format", std::string(format), "format must be markdown, dot or csv");

  std::optional<RunRecord> record;
  try {
    record = runs_.find(run_id);
  } catch (const SizingError& e) {
    return error(500, e);
  }
  if (!record) return error(404, "unknown_run", std::string(run_id), "no run with this id");
  const SizingResult& result = record->result;
  const std::string id(run_id);

  try {
    if (format == "markdown")
      return {200, "text/markdown; charset=utf-8", emit_summary_report(result), "report-" + id + ".md"};

    if (format == "dot") {
      if (tier.empty())
        return {200, "text/vnd.graphviz", emit_infrastructure_diagram(result), "infrastructure-" + id + ".dot"};
      auto topo = result.per_tier.find(std::string(tier));
      if (topo == result.per_tier.end())
        return error(400, "unknown_tier", std::string(tier), "run has no topology for this tier");
      return {200, "text/vnd.graphviz", emit_topology_graph(topo->second),
              "topology-" + std::string(tier) + "-" + id + ".dot"};
    }

    const std::string chosen = tier.empty() ? compare_tiers(result).front() : std::string(tier);
    auto curve = result.curves.find(chosen);
    if (curve == result.curves.end())
      return error(400, "unknown_tier", chosen, "run has no performance curve for this tier");
    return {200, "text/csv; charset=utf-8", emit_performance_curve(curve->second, result.request_echo.packer.cpu_cap_pct),
            "curve-" + chosen + "-" + id + ".csv"};
  } catch (const SizingError& e) {
    return error(e.code() == "no_feasible_tier" ? 422 : 500, e);
  }
}

}  // namespace sizer
