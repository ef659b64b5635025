#include "sizer/codec.hpp"

#include <json.hpp>

#include "sizer/error.hpp"

namespace sizer {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw SizingError("malformed_json", "", what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

const json* optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string get_string(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double get_number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) malformed(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double get_number_or(const json& j, const char* key, double fallback) {
  const json* v = optional_field(j, key);
  if (!v) return fallback;
  if (!v->is_number()) malformed(std::string("field '") + key + "' must be a number");
  return v->get<double>();
}

int get_int(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

int get_int_or(const json& j, const char* key, int fallback) {
  const json* v = optional_field(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
  return v->get<int>();
}

const json& get_array(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) malformed(std::string("field '") + key + "' must be an array");
  return v;
}

const json& get_object(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_object()) malformed(std::string("field '") + key + "' must be an object");
  return v;
}

template <typename E>
E enum_from(const json& j, const char* key, std::initializer_list<E> values) {
  const std::string s = get_string(j, key);
  for (E e : values)
    if (to_string(e) == s) return e;
  malformed(std::string("field '") + key + "' has unknown value '" + s + "'");
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    malformed(e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Type/range errors from the json library surface as malformed_json too.
template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

// --- writers ---------------------------------------------------------------

json tier_json(const HardwareTier& t) {
  return {{"name", t.name},
          {"processors", t.processors},
          {"cores_per_processor", t.cores_per_processor},
          {"frequency_ghz", t.frequency_ghz},
          {"ram_gb", t.ram_gb}};
}

json profile_json(const RuntimeProfile& p) {
  return {{"workload_type", to_string(p.workload_type)},
          {"concurrency", p.concurrency},
          {"throughput", p.throughput},
          {"payload_request_kb", p.payload_request_kb},
          {"payload_response_kb", p.payload_response_kb}};
}

json packer_json(const PackerConfig& c) {
  return {{"cpu_cap_pct", c.cpu_cap_pct},
          {"mem_cap_fraction", c.mem_cap_fraction},
          {"max_nodes_per_host", c.max_nodes_per_host},
          {"services_per_node_cap", c.services_per_node_cap},
          {"node_overhead_mb", c.node_overhead_mb}};
}

json pair_json(const PairCoefficients& p) {
  return {{"implementation_type", p.implementation_type},
          {"binding_type", p.binding_type},
          {"c0_cpu_pct", p.c0_cpu_pct},
          {"c1_cpu_per_user", p.c1_cpu_per_user},
          {"c2_cpu_per_rps", p.c2_cpu_per_rps},
          {"c3_cpu_per_rps_kb", p.c3_cpu_per_rps_kb},
          {"m0_mem_mb", p.m0_mem_mb},
          {"m1_mem_per_user_mb", p.m1_mem_per_user_mb},
          {"m2_mem_per_kb_mb", p.m2_mem_per_kb_mb},
          {"deploy_mem_mb", p.deploy_mem_mb}};
}

json coefficients_json(const ModelCoefficients& m) {
  json pairs = json::array();
  for (const auto& p : m.pairs) pairs.push_back(pair_json(p));
  return {{"reference_tier", m.reference_tier}, {"pairs", std::move(pairs)}};
}

json service_json(const ServiceSpec& s) {
  json j = {{"id", s.id}, {"implementation_type", s.implementation_type}, {"binding_type", s.binding_type}};
  if (s.profile) j["profile"] = profile_json(*s.profile);
  return j;
}

json request_json(const SizingRequest& r) {
  json services = json::array();
  for (const auto& s : r.services) services.push_back(service_json(s));
  json tiers = json::array();
  for (const auto& t : r.tiers) tiers.push_back(tier_json(t));
  json j = {{"services", std::move(services)},
            {"architecture", to_string(r.architecture)},
            {"level", to_string(r.level)},
            {"tiers", std::move(tiers)},
            {"packer", packer_json(r.packer)},
            {"machine_count_threshold", r.machine_count_threshold},
            {"curve_max_services", r.curve_max_services}};
  if (const auto* name = std::get_if<std::string>(&r.coefficients)) j["coefficients"] = *name;
  if (const auto* inl = std::get_if<ModelCoefficients>(&r.coefficients)) j["coefficients"] = coefficients_json(*inl);
  if (r.default_profile) j["default_profile"] = profile_json(*r.default_profile);
  return j;
}

json topology_json(const Topology& t) {
  json machines = json::array();
  for (const auto& m : t.machines) {
    json hosts = json::array();
    for (const auto& h : m.hosts) {
      json nodes = json::array();
      for (const auto& n : h.nodes) nodes.push_back({{"id", n.id}, {"service_ids", n.service_ids}});
      hosts.push_back({{"id", h.id}, {"nodes", std::move(nodes)}});
    }
    machines.push_back({{"index", m.index},
                        {"tier", m.tier},
                        {"hosts", std::move(hosts)},
                        {"total_cpu_pct", m.total_cpu_pct},
                        {"total_memory_mb", m.total_memory_mb}});
  }
  return {{"tier", t.tier}, {"machines", std::move(machines)}};
}

json trace_json(const PackingTrace& t) {
  json events = json::array();
  for (const auto& e : t.events) {
    if (e.kind == PackingEvent::Kind::place)
      events.push_back({{"event", "place"},
                        {"service_id", e.service_id},
                        {"machine_index", e.machine_index},
                        {"reason", to_string(e.reason)}});
    else
      events.push_back({{"event", "close_machine"}, {"machine_index", e.machine_index}});
  }
  return {{"events", std::move(events)}};
}

json curve_json(const PerformanceCurve& c) {
  json points = json::array();
  for (const auto& p : c.points)
    points.push_back({{"service_count", p.service_count}, {"predicted_cpu_pct", p.predicted_cpu_pct}});
  return {{"tier", c.tier}, {"points", std::move(points)}, {"degradation_threshold", c.degradation_threshold}};
}

json recommendation_json(const Recommendation& r) {
  json j = {{"kind", to_string(r.kind)}, {"tier", r.tier}, {"message", r.message}};
  if (!r.target_tier.empty()) j["target_tier"] = r.target_tier;
  if (r.machine_index > 0) j["machine_index"] = r.machine_index;
  return j;
}

json result_json(const SizingResult& r) {
  json per_tier = json::object();
  for (const auto& [k, v] : r.per_tier) per_tier[k] = topology_json(v);
  json traces = json::object();
  for (const auto& [k, v] : r.traces) traces[k] = trace_json(v);
  json curves = json::object();
  for (const auto& [k, v] : r.curves) curves[k] = curve_json(v);
  json errors = json::object();
  for (const auto& [k, v] : r.tier_errors) errors[k] = {{"code", v.code}, {"message", v.message}};
  json recs = json::array();
  for (const auto& x : r.recommendations) recs.push_back(recommendation_json(x));
  json warns = json::array();
  for (const auto& x : r.warnings) warns.push_back(recommendation_json(x));
  return {{"request_echo", request_json(r.request_echo)},
          {"per_tier", std::move(per_tier)},
          {"traces", std::move(traces)},
          {"curves", std::move(curves)},
          {"tier_errors", std::move(errors)},
          {"recommendations", std::move(recs)},
          {"warnings", std::move(warns)},
          {"created_at", r.created_at},
          {"run_id", r.run_id}};
}

// --- readers ---------------------------------------------------------------

HardwareTier tier_from(const json& j) {
  return {get_string(j, "name"), get_int(j, "processors"), get_int(j, "cores_per_processor"),
          get_number(j, "frequency_ghz"), get_number(j, "ram_gb")};
}

RuntimeProfile profile_from(const json& j) {
  if (!j.is_object()) malformed("runtime profile must be an object");
  RuntimeProfile p;
  if (optional_field(j, "workload_type"))
    p.workload_type = enum_from(j, "workload_type", {WorkloadType::steady, WorkloadType::burst});
  p.concurrency = get_number_or(j, "concurrency", 0.0);
  p.throughput = get_number_or(j, "throughput", 0.0);
  p.payload_request_kb = get_number_or(j, "payload_request_kb", 0.0);
  p.payload_response_kb = get_number_or(j, "payload_response_kb", 0.0);
  return p;
}

PackerConfig packer_from(const json& j) {
  if (!j.is_object()) malformed("packer must be an object");
  PackerConfig d;
  PackerConfig c;
  c.cpu_cap_pct = get_number_or(j, "cpu_cap_pct", d.cpu_cap_pct);
  c.mem_cap_fraction = get_number_or(j, "mem_cap_fraction", d.mem_cap_fraction);
  c.max_nodes_per_host = get_int_or(j, "max_nodes_per_host", d.max_nodes_per_host);
  c.services_per_node_cap = get_int_or(j, "services_per_node_cap", d.services_per_node_cap);
  c.node_overhead_mb = get_number_or(j, "node_overhead_mb", d.node_overhead_mb);
  return c;
}

PairCoefficients pair_from(const json& j) {
  PairCoefficients p;
  p.implementation_type = get_string(j, "implementation_type");
  p.binding_type = get_string(j, "binding_type");
  p.c0_cpu_pct = get_number(j, "c0_cpu_pct");
  p.c1_cpu_per_user = get_number(j, "c1_cpu_per_user");
  p.c2_cpu_per_rps = get_number(j, "c2_cpu_per_rps");
  p.c3_cpu_per_rps_kb = get_number(j, "c3_cpu_per_rps_kb");
  p.m0_mem_mb = get_number(j, "m0_mem_mb");
  p.m1_mem_per_user_mb = get_number(j, "m1_mem_per_user_mb");
  p.m2_mem_per_kb_mb = get_number(j, "m2_mem_per_kb_mb");
  p.deploy_mem_mb = get_number(j, "deploy_mem_mb");
  return p;
}

ModelCoefficients coefficients_from(const json& j) {
  ModelCoefficients m;
  m.reference_tier = get_string(j, "reference_tier");
  for (const auto& p : get_array(j, "pairs")) m.pairs.push_back(pair_from(p));
  return m;
}

SizingRequest request_from(const json& j) {
  if (!j.is_object()) malformed("sizing request must be an object");
  SizingRequest r;
  if (const json* services = optional_field(j, "services")) {
    if (!services->is_array()) malformed("field 'services' must be an array");
    for (const auto& s : *services) {
      ServiceSpec spec;
      spec.id = get_string(s, "id");
      if (optional_field(s, "implementation_type")) spec.implementation_type = get_string(s, "implementation_type");
      if (optional_field(s, "binding_type")) spec.binding_type = get_string(s, "binding_type");
      if (const json* p = optional_field(s, "profile")) spec.profile = profile_from(*p);
      r.services.push_back(std::move(spec));
    }
  }
  if (optional_field(j, "architecture"))
    r.architecture = enum_from(j, "architecture", {Architecture::single, Architecture::distributed});
  if (optional_field(j, "level"))
    r.level = enum_from(j, "level", {SizingLevel::deployment, SizingLevel::runtime});
  if (const json* tiers = optional_field(j, "tiers")) {
    if (!tiers->is_array()) malformed("field 'tiers' must be an array");
    for (const auto& t : *tiers) r.tiers.push_back(tier_from(t));
  }
  if (const json* p = optional_field(j, "packer")) r.packer = packer_from(*p);
  if (const json* c = optional_field(j, "coefficients")) {
    if (c->is_string())
      r.coefficients = c->get<std::string>();
    else if (c->is_object())
      r.coefficients = coefficients_from(*c);
    else
      malformed("field 'coefficients' must be a profile name or an object");
  }
  if (const json* p = optional_field(j, "default_profile")) r.default_profile = profile_from(*p);
  r.machine_count_threshold = get_int_or(j, "machine_count_threshold", r.machine_count_threshold);
  r.curve_max_services = get_int_or(j, "curve_max_services", r.curve_max_services);
  return r;
}

Topology topology_from(const json& j) {
  Topology t;
  t.tier = get_string(j, "tier");
  for (const auto& m : get_array(j, "machines")) {
    MachinePlan plan;
    plan.index = get_int(m, "index");
    plan.tier = get_string(m, "tier");
    plan.total_cpu_pct = get_number(m, "total_cpu_pct");
    plan.total_memory_mb = get_number(m, "total_memory_mb");
    for (const auto& h : get_array(m, "hosts")) {
      Host host;
      host.id = get_string(h, "id");
      for (const auto& n : get_array(h, "nodes")) {
        Node node;
        node.id = get_string(n, "id");
        for (const auto& s : get_array(n, "service_ids")) {
          if (!s.is_string()) malformed("service ids must be strings");
          node.service_ids.push_back(s.get<std::string>());
        }
        host.nodes.push_back(std::move(node));
      }
      plan.hosts.push_back(std::move(host));
    }
    t.machines.push_back(std::move(plan));
  }
  return t;
}

PackingTrace trace_from(const json& j) {
  PackingTrace t;
  for (const auto& e : get_array(j, "events")) {
    PackingEvent ev;
    const std::string kind = get_string(e, "event");
    ev.machine_index = get_int(e, "machine_index");
    if (kind == "place") {
      ev.kind = PackingEvent::Kind::place;
      ev.service_id = get_string(e, "service_id");
      ev.reason = enum_from(e, "reason", {PlacementReason::first_fit, PlacementReason::lookahead});
    } else if (kind == "close_machine") {
      ev.kind = PackingEvent::Kind::close_machine;
    } else {
      malformed("unknown packing event '" + kind + "'");
    }
    t.events.push_back(std::move(ev));
  }
  return t;
}

PerformanceCurve curve_from(const json& j) {
  PerformanceCurve c;
  c.tier = get_string(j, "tier");
  c.degradation_threshold = get_int(j, "degradation_threshold");
  for (const auto& p : get_array(j, "points"))
    c.points.push_back({get_int(p, "service_count"), get_number(p, "predicted_cpu_pct")});
  return c;
}

Recommendation recommendation_from(const json& j) {
  Recommendation r;
  r.kind = enum_from(j, "kind",
                     {RecommendationKind::switch_tier, RecommendationKind::use_distributed,
                      RecommendationKind::infeasible, RecommendationKind::near_degradation});
  r.tier = get_string(j, "tier");
  r.message = get_string(j, "message");
  if (optional_field(j, "target_tier")) r.target_tier = get_string(j, "target_tier");
  r.machine_index = get_int_or(j, "machine_index", 0);
  return r;
}

SizingResult result_from(const json& j) {
  SizingResult r;
  r.request_echo = request_from(field(j, "request_echo"));
  for (const auto& [k, v] : get_object(j, "per_tier").items()) r.per_tier[k] = topology_from(v);
  for (const auto& [k, v] : get_object(j, "traces").items()) r.traces[k] = trace_from(v);
  for (const auto& [k, v] : get_object(j, "curves").items()) r.curves[k] = curve_from(v);
  for (const auto& [k, v] : get_object(j, "tier_errors").items())
    r.tier_errors[k] = {get_string(v, "code"), get_string(v, "message")};
  for (const auto& x : get_array(j, "recommendations")) r.recommendations.push_back(recommendation_from(x));
  for (const auto& x : get_array(j, "warnings")) r.warnings.push_back(recommendation_from(x));
  r.created_at = get_string(j, "created_at");
  r.run_id = get_string(j, "run_id");
  return r;
}

}  // namespace

std::string to_json(const HardwareTier& tier) { return dump(tier_json(tier)); }

std::string to_json(const std::vector<HardwareTier>& tiers) {
  json a = json::array();
  for (const auto& t : tiers) a.push_back(tier_json(t));
  return dump(a);
}

std::string to_json(const RuntimeProfile& profile) { return dump(profile_json(profile)); }
std::string to_json(const SizingRequest& request) { return dump(request_json(request)); }
std::string to_json(const Topology& topology) { return dump(topology_json(topology)); }
std::string to_json(const PackingTrace& trace) { return dump(trace_json(trace)); }
std::string to_json(const PerformanceCurve& curve) { return dump(curve_json(curve)); }
std::string to_json(const SizingResult& result) { return dump(result_json(result)); }
std::string to_json(const ModelCoefficients& coeffs) { return dump(coefficients_json(coeffs)); }

std::string to_json(const RunRecord& record) {
  return dump({{"run_id", record.run_id},
               {"request", request_json(record.request)},
               {"result", result_json(record.result)},
               {"created_at", record.created_at}});
}

std::string to_json(const ValidationReport& report) {
  return dump({{"holdout_count", report.holdout_count},
               {"cpu_rmse_pct", report.cpu_rmse_pct},
               {"mem_rmse_mb", report.mem_rmse_mb},
               {"max_abs_cpu_err_pct", report.max_abs_cpu_err_pct},
               {"pass", report.pass}});
}

std::string to_json(const std::vector<Violation>& violations) {
  json errors = json::array();
  for (const auto& v : violations) {
    json e = {{"code", v.code}, {"message", v.message}};
    if (!v.subject.empty()) e["subject"] = v.subject;
    errors.push_back(std::move(e));
  }
  return dump({{"errors", std::move(errors)}});
}

namespace {

std::vector<HardwareTier> tiers_from(const json& j) {
  const json* arr = &j;
  if (j.is_object()) arr = &get_array(j, "tiers");
  if (!arr->is_array()) malformed("tier document must be an array or an object with 'tiers'");
  std::vector<HardwareTier> out;
  for (const auto& t : *arr) out.push_back(tier_from(t));
  return out;
}

}  // namespace

std::vector<HardwareTier> parse_tiers(std::string_view text) {
  return guarded([&] { return tiers_from(parse_text(text)); });
}

RuntimeProfile parse_profile(std::string_view text) {
  return guarded([&] { return profile_from(parse_text(text)); });
}

SizingRequest parse_request(std::string_view text) {
  return guarded([&] { return request_from(parse_text(text)); });
}

SizingResult parse_result(std::string_view text) {
  return guarded([&] { return result_from(parse_text(text)); });
}

ModelCoefficients parse_coefficients(std::string_view text) {
  return guarded([&] { return coefficients_from(parse_text(text)); });
}

RunRecord parse_run_record(std::string_view text) {
  return guarded([&] {
    json j = parse_text(text);
    RunRecord r;
    r.run_id = get_string(j, "run_id");
    r.request = request_from(field(j, "request"));
    r.result = result_from(field(j, "result"));
    r.created_at = get_string(j, "created_at");
    return r;
  });
}

}  // namespace sizer
