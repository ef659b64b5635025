#include "sizer/server.hpp"

#include <cstdlib>
#include <fstream>
#include <httplib.h>
#include <set>
#include <sstream>

#include "sizer/codec.hpp"
#include "sizer/error.hpp"
#include "sizer/validate.hpp"

namespace sizer {

namespace {

std::string read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SizingError("config_error", path.string(), "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void send(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  if (!api.attachment_name.empty())
    res.set_header("Content-Disposition", "attachment; filename=\"" + api.attachment_name + "\"");
  res.set_content(api.body, api.content_type);
}

}  // namespace

ServerOptions server_options_from_env() {
  ServerOptions o;
  if (const char* v = std::getenv("SIZER_LISTEN"); v && *v) o.listen = v;
  if (const char* v = std::getenv("SIZER_DATA"); v && *v) o.data_dir = v;
  if (const char* v = std::getenv("SIZER_TIERS"); v && *v) o.tiers_file = v;
  if (const char* v = std::getenv("SIZER_COEFFS"); v && *v) o.coeffs_file = v;
  if (const char* v = std::getenv("SIZER_UI"); v && *v) o.ui_dir = v;
  return o;
}

std::pair<std::string, int> parse_listen_address(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == listen.size())
    throw SizingError("config_error", listen, "listen address must be host:port");
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(listen.substr(colon + 1), &used);
    if (used != listen.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw SizingError("config_error", listen, "listen port is not a number");
  }
  if (port < 0 || port > 65535) throw SizingError("config_error", listen, "listen port out of range");
  return {listen.substr(0, colon), port};
}

ServiceConfig load_service_config(const ServerOptions& options) {
  ServiceConfig config;
  config.data_dir = options.data_dir;

  if (options.tiers_file) {
    try {
      config.tiers = parse_tiers(read_config_file(*options.tiers_file));
    } catch (const SizingError& e) {
      throw SizingError("config_error", options.tiers_file->string(), e.what());
    }
    if (config.tiers.empty())
      throw SizingError("config_error", options.tiers_file->string(), "tier file declares no tiers");
    std::set<std::string> names;
    for (const auto& t : config.tiers) {
      if (auto v = check_tier(t); !v.empty()) throw SizingError("config_error", t.name, v.front().message);
      if (!names.insert(t.name).second) throw SizingError("config_error", t.name, "tier " + t.name + " listed twice");
    }
  }

  if (options.coeffs_file) {
    try {
      config.default_coefficients = parse_coefficients(read_config_file(*options.coeffs_file));
    } catch (const SizingError& e) {
      throw SizingError("config_error", options.coeffs_file->string(), e.what());
    }
    if (auto v = check_coefficients(config.default_coefficients); !v.empty())
      throw SizingError("config_error", options.coeffs_file->string(), v.front().message);
  }
  const auto& ref = config.default_coefficients.reference_tier;
  if (!find_tier(config.tiers, ref) && !find_tier(standard_tiers(), ref))
    throw SizingError("config_error", ref, "coefficient reference tier " + ref + " is not a known tier");
  return config;
}

struct HttpServer::Impl {
  SizingApi& api;
  httplib::Server server;

  explicit Impl(SizingApi& a) : api(a) {}
};

HttpServer::HttpServer(SizingApi& api, std::optional<std::filesystem::path> ui_dir)
    : impl_(std::make_unique<Impl>(api)) {
  auto& svr = impl_->server;
  SizingApi* a = &impl_->api;

  svr.Post("/api/v1/size", [a](const httplib::Request& req, httplib::Response& res) { send(res, a->post_size(req.body)); });
  svr.Get("/api/v1/tiers", [a](const httplib::Request&, httplib::Response& res) { send(res, a->get_tiers()); });
  svr.Post("/api/v1/calibrate", [a](const httplib::Request& req, httplib::Response& res) {
    send(res, a->post_calibrate(req.body, req.get_param_value("name"), req.get_param_value("reference")));
  });
  svr.Get(R"(/api/v1/runs/([^/]+)/report)", [a](const httplib::Request& req, httplib::Response& res) {
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "markdown";
    send(res, a->get_report(req.matches[1].str(), format, req.get_param_value("tier")));
  });
  svr.Get(R"(/api/v1/runs/([^/]+))", [a](const httplib::Request& req, httplib::Response& res) {
    send(res, a->get_run(req.matches[1].str()));
  });
  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, {500, "application/json", to_json(std::vector<Violation>{{"internal_error", "", what}}), ""});
  });

  if (ui_dir) svr.set_mount_point("/", ui_dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& svr = impl_->server;
  if (port == 0) return svr.bind_to_any_port(host);
  return svr.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace sizer
