#include "cli.hpp"

#include <CLI11.hpp>
#include <csignal>
#include <ctime>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sizer/calibration.hpp"
#include "sizer/codec.hpp"
#include "sizer/engine.hpp"
#include "sizer/error.hpp"
#include "sizer/perfmodel.hpp"
#include "sizer/report.hpp"
#include "sizer/server.hpp"
#include "sizer/validate.hpp"

namespace sizer::cli {

namespace fs = std::filesystem;

namespace {

struct InputError {
  std::vector<Violation> violations;
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{{{"unreadable_file", path, "cannot read " + path}}};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_output(const fs::path& path, const std::string& content, std::ostream& err) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) {
    err << "cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

// "-" sends the document to stdout.
bool emit(const std::string& target, const std::string& content, std::ostream& out, std::ostream& err) {
  if (target == "-") {
    out << content;
    return static_cast<bool>(out);
  }
  return write_output(target, content, err);
}

std::vector<HardwareTier> load_catalog(const std::string& tiers_file) {
  if (tiers_file.empty()) return standard_tiers();
  auto tiers = parse_tiers(read_input(tiers_file));
  if (tiers.empty()) throw InputError{{{"config_error", tiers_file, "tier file declares no tiers"}}};
  for (const auto& t : tiers)
    if (auto v = check_tier(t); !v.empty()) throw InputError{v};
  return tiers;
}

std::vector<HardwareTier> with_standard(std::vector<HardwareTier> tiers) {
  for (const auto& t : standard_tiers())
    if (!find_tier(tiers, t.name)) tiers.push_back(t);
  return tiers;
}

int report_errors(const std::vector<Violation>& violations, std::ostream& err) {
  err << to_json(violations);
  return kExitInvalidInput;
}

// --- size ------------------------------------------------------------------

struct SizeArgs {
  std::string request;
  std::string out;
  std::string coeffs;
  std::string tiers;
};

int cmd_size(const SizeArgs& a, std::ostream& out, std::ostream& err) {
  const auto catalog = load_catalog(a.tiers);
  SizingRequest request = parse_request(read_input(a.request));

  ModelCoefficients coeffs = ModelCoefficients::defaults();
  if (!a.coeffs.empty()) {
    coeffs = parse_coefficients(read_input(a.coeffs));
  } else if (const auto* inl = std::get_if<ModelCoefficients>(&request.coefficients)) {
    coeffs = *inl;
  } else if (const auto* name = std::get_if<std::string>(&request.coefficients)) {
    throw InputError{{{"unknown_profile", *name,
                       "calibration profile " + *name + " is only resolvable by the server; pass --coeffs"}}};
  }

  request = validate_request(request, coeffs, catalog);
  const RunStamp stamp{"local-" + content_digest(to_json(request) + to_json(coeffs)), reproducible_timestamp()};
  const SizingResult result = size(request, coeffs, stamp, catalog);

  const std::string result_doc = to_json(result);
  if (a.out == "-") {
    out << result_doc;
  } else {
    const fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      err << "cannot create " << dir.string() << ": " << ec.message() << "\n";
      return kExitFailure;
    }
    bool ok = write_output(dir / "result.json", result_doc, err);
    for (const auto& [tier, topo] : result.per_tier)
      ok = write_output(dir / ("topology_" + tier + ".dot"), emit_topology_graph(topo), err) && ok;
    for (const auto& [tier, curve] : result.curves)
      ok = write_output(dir / ("curve_" + tier + ".csv"), emit_performance_curve(curve, request.packer.cpu_cap_pct),
                        err) && ok;
    if (!all_tiers_infeasible(result) && !request.tiers.empty())
      ok = write_output(dir / "infrastructure.dot", emit_infrastructure_diagram(result), err) && ok;
    ok = write_output(dir / "report.md", emit_summary_report(result), err) && ok;
    if (!ok) return kExitFailure;
  }
  return all_tiers_infeasible(result) ? kExitAllInfeasible : kExitOk;
}

// --- calibrate ---------------------------------------------------------------

struct CalibrateArgs {
  std::string samples;
  std::string out;
  std::string reference = std::string(kDefaultReferenceTier);
  std::string tiers;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  const auto table = with_standard(load_catalog(a.tiers));
  const auto samples = parse_calibration_csv(read_input(a.samples), table);
  const ModelCoefficients fitted = fit_coefficients(samples, a.reference, table);
  return emit(a.out, to_json(fitted), out, err) ? kExitOk : kExitFailure;
}

// --- curve -------------------------------------------------------------------

struct CurveArgs {
  std::string profile;
  std::string tier;
  int max = 20;
  std::string out;
  std::string coeffs;
  std::string tiers;
  std::string impl = "java";
  std::string binding = "soap_http";
  double cpu_cap = PackerConfig{}.cpu_cap_pct;
};

int cmd_curve(const CurveArgs& a, std::ostream& out, std::ostream& err) {
  const auto catalog = load_catalog(a.tiers);
  const HardwareTier* tier = find_tier(catalog, a.tier);
  if (!tier) throw InputError{{{"unknown_tier", a.tier, "unknown tier " + a.tier}}};
  if (a.max < 1) throw InputError{{{"invalid_threshold", "max", "--max must be at least 1"}}};
  if (!(a.cpu_cap > 0.0 && a.cpu_cap <= 100.0))
    throw InputError{{{"invalid_packer", "cpu_cap_pct", "--cpu-cap must lie in (0, 100]"}}};

  const RuntimeProfile profile = parse_profile(read_input(a.profile));
  if (auto v = check_profile(profile, "profile"); !v.empty()) throw InputError{v};
  const ModelCoefficients coeffs =
      a.coeffs.empty() ? ModelCoefficients::defaults() : parse_coefficients(read_input(a.coeffs));

  const DemandModel model(coeffs, with_standard(catalog));
  ServiceSpec templ;
  templ.id = "template";
  templ.implementation_type = a.impl;
  templ.binding_type = a.binding;
  PackerConfig packer;
  packer.cpu_cap_pct = a.cpu_cap;
  const PerformanceCurve curve = performance_curve(profile, templ, model, *tier, packer, a.max);
  return emit(a.out, emit_performance_curve(curve, packer.cpu_cap_pct), out, err) ? kExitOk : kExitFailure;
}

// --- serve -------------------------------------------------------------------

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const ServerOptions& options, std::ostream& err) {
  const ServiceConfig config = load_service_config(options);
  const auto [host, port] = parse_listen_address(options.listen);
  SizingApi api(config);
  HttpServer server(api, options.ui_dir);
  if (server.bind(host, port) < 0) {
    err << "cannot listen on " << options.listen << "\n";
    return kExitFailure;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  err << "sizer listening on " << host << ":" << port << "\n";
  const bool ok = server.listen_after_bind();
  g_server = nullptr;
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

std::string content_digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

std::string reproducible_timestamp() {
  std::time_t t = 0;
  if (const char* v = std::getenv("SOURCE_DATE_EPOCH"); v && *v) {
    try {
      t = static_cast<std::time_t>(std::stoll(v));
    } catch (const std::exception&) {
      t = 0;
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                     tm.tm_min, tm.tm_sec);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity sizing for service-oriented platforms"};
  app.name(args.empty() ? "sizer" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);

  SizeArgs size_args;
  auto* size_cmd = app.add_subcommand("size", "Size a request file and write all report artifacts");
  size_cmd->add_option("--request", size_args.request, "SizingRequest JSON")->required();
  size_cmd->add_option("--out", size_args.out, "Output directory, or - for result JSON on stdout")->required();
  size_cmd->add_option("--coeffs", size_args.coeffs, "ModelCoefficients JSON");
  size_cmd->add_option("--tiers", size_args.tiers, "Tier catalog JSON");

  CalibrateArgs cal_args;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit model coefficients from load-test samples");
  cal_cmd->add_option("--samples", cal_args.samples, "Calibration CSV")->required();
  cal_cmd->add_option("--out", cal_args.out, "Coefficient JSON output, or -")->required();
  cal_cmd->add_option("--reference", cal_args.reference, "Reference tier")->capture_default_str();
  cal_cmd->add_option("--tiers", cal_args.tiers, "Tier catalog JSON");

  CurveArgs curve_args;
  auto* curve_cmd = app.add_subcommand("curve", "Performance curve of n identical services on one machine");
  curve_cmd->add_option("--profile", curve_args.profile, "RuntimeProfile JSON")->required();
  curve_cmd->add_option("--tier", curve_args.tier, "Tier name")->required();
  curve_cmd->add_option("--max", curve_args.max, "Largest service count")->required();
  curve_cmd->add_option("--out", curve_args.out, "CSV output, or -")->required();
  curve_cmd->add_option("--coeffs", curve_args.coeffs, "ModelCoefficients JSON");
  curve_cmd->add_option("--tiers", curve_args.tiers, "Tier catalog JSON");
  curve_cmd->add_option("--impl", curve_args.impl, "Implementation type of the template service")->capture_default_str();
  curve_cmd->add_option("--binding", curve_args.binding, "Binding type of the template service")->capture_default_str();
  curve_cmd->add_option("--cpu-cap", curve_args.cpu_cap, "CPU cap W in percent")->capture_default_str();

  ServerOptions serve_opts = server_options_from_env();
  std::string tiers_file;
  std::string coeffs_file;
  std::string ui_dir;
  std::string data_dir = serve_opts.data_dir.string();
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--listen", serve_opts.listen, "host:port (SIZER_LISTEN)")->capture_default_str();
  serve_cmd->add_option("--data-dir", data_dir, "Run store directory (SIZER_DATA)")->capture_default_str();
  serve_cmd->add_option("--tiers-file", tiers_file, "Tier catalog JSON (SIZER_TIERS)");
  serve_cmd->add_option("--coeffs-file", coeffs_file, "Default coefficients JSON (SIZER_COEFFS)");
  serve_cmd->add_option("--ui-dir", ui_dir, "Static web UI directory (SIZER_UI)");

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitInvalidInput;
  }

  try {
    if (*size_cmd) return cmd_size(size_args, out, err);
    if (*cal_cmd) return cmd_calibrate(cal_args, out, err);
    if (*curve_cmd) return cmd_curve(curve_args, out, err);
    if (*serve_cmd) {
      serve_opts.data_dir = data_dir;
      if (!tiers_file.empty()) serve_opts.tiers_file = tiers_file;
      if (!coeffs_file.empty()) serve_opts.coeffs_file = coeffs_file;
      if (!ui_dir.empty()) serve_opts.ui_dir = ui_dir;
      return cmd_serve(serve_opts, err);
    }
  } catch (const InputError& e) {
    return report_errors(e.violations, err);
  } catch (const ValidationError& e) {
    return report_errors(e.violations(), err);
  } catch (const SizingError& e) {
    return report_errors({e.violation()}, err);
  }
  return kExitInvalidInput;
}

}  // namespace sizer::cli
