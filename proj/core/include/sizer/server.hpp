#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "sizer/api.hpp"

namespace sizer {

struct ServerOptions {
  std::string listen = "127.0.0.1:8080";
  std::filesystem::path data_dir = "sizer-data";
  std::optional<std::filesystem::path> tiers_file;
  std::optional<std::filesystem::path> coeffs_file;
  std::optional<std::filesystem::path> ui_dir;
};

// Reads SIZER_LISTEN, SIZER_DATA, SIZER_TIERS, SIZER_COEFFS, SIZER_UI into
// the fields they name. Explicit flags override afterwards.
ServerOptions server_options_from_env();

// Loads tier and coefficient files. An empty or invalid tier file is a
// startup error: SizingError{config_error}.
ServiceConfig load_service_config(const ServerOptions& options);

// host:port split; throws SizingError{config_error}.
std::pair<std::string, int> parse_listen_address(const std::string& listen);

class HttpServer {
 public:
  HttpServer(SizingApi& api, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // port 0 binds an ephemeral port; returns the bound port or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sizer
