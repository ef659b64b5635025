#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sizer/domain.hpp"
#include "sizer/run_store.hpp"

namespace sizer {

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::string attachment_name;  // non-empty: served with a download disposition
};

struct ServiceConfig {
  std::vector<HardwareTier> tiers = standard_tiers();
  ModelCoefficients default_coefficients = ModelCoefficients::defaults();
  std::filesystem::path data_dir = "sizer-data";
};

// Transport-independent handlers for the /api/v1 endpoints. Thread-safe.
class SizingApi {
 public:
  explicit SizingApi(ServiceConfig config);

  ApiResponse post_size(std::string_view body);
  ApiResponse get_tiers() const;
  ApiResponse post_calibrate(std::string_view csv, std::string_view name, std::string_view reference);
  ApiResponse get_run(std::string_view run_id) const;
  ApiResponse get_report(std::string_view run_id, std::string_view format, std::string_view tier) const;

  const ServiceConfig& config() const noexcept { return config_; }

 private:
  ModelCoefficients resolve(const CoefficientsSource& source) const;

  ServiceConfig config_;
  RunStore runs_;
  ProfileRegistry profiles_;
};

}  // namespace sizer
