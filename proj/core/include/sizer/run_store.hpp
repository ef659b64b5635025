#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "sizer/domain.hpp"

namespace sizer {

// Append-only store of RunRecords, one canonical JSON document per run under
// <dir>/runs/. A record is written to a temporary file and linked into place,
// so readers never observe a partial record and an existing id is never
// overwritten.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path dir);

  // Time-ordered id: UTC timestamp plus a random suffix, e.g.
  // 20261017T101500.123456Z-3f9a1c07.
  static std::string new_run_id();
  static bool is_well_formed_id(std::string_view run_id) noexcept;

  // Throws SizingError: run_exists, store_failure.
  void commit(const RunRecord& record);

  // Raw canonical document, byte-identical on every read.
  std::optional<std::string> find_document(std::string_view run_id) const;
  std::optional<RunRecord> find(std::string_view run_id) const;

 private:
  std::filesystem::path runs_dir_;
  std::mutex commit_mutex_;
};

// Named calibration profiles under <dir>/profiles/<name>.json.
class ProfileRegistry {
 public:
  explicit ProfileRegistry(std::filesystem::path dir);

  static bool is_valid_name(std::string_view name) noexcept;

  // Throws SizingError: profile_exists, invalid_profile_name, store_failure.
  void add(const std::string& name, const ModelCoefficients& coeffs);
  std::optional<ModelCoefficients> find(std::string_view name) const;

 private:
  std::filesystem::path profiles_dir_;
  mutable std::shared_mutex mutex_;
};

std::string utc_timestamp_iso8601();

}  // namespace sizer
