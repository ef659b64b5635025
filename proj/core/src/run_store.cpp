#include "sizer/run_store.hpp"

#include <chrono>
#include <ctime>
#include <fmt/format.h>
#include <fstream>
#include <random>
#include <sstream>

#include "sizer/codec.hpp"
#include "sizer/error.hpp"

namespace sizer {

namespace fs = std::filesystem;

namespace {

bool safe_file_stem(std::string_view s) noexcept {
  if (s.empty() || s.size() > kMaxIdentifierLength || s.front() == '.') return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes `content` beside `target` and hard-links it into place. Linking fails
// instead of replacing an existing file, which makes each commit atomic and
// write-once.
void write_once(const fs::path& target, const std::string& content, const char* exists_code) {
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SizingError("store_failure", target.string(), "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw SizingError("store_failure", target.string(), "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::create_hard_link(tmp, target, ec);
  std::error_code ignored;
  fs::remove(tmp, ignored);
  if (ec) {
    if (ec == std::errc::file_exists)
      throw SizingError(exists_code, target.stem().string(), target.stem().string() + " already exists");
    throw SizingError("store_failure", target.string(), "cannot commit " + target.string() + ": " + ec.message());
  }
}

std::tm utc_now(long& micros) {
  const auto now = std::chrono::system_clock::now();
  const auto since = now.time_since_epoch();
  micros = static_cast<long>(std::chrono::duration_cast<std::chrono::microseconds>(since).count() % 1000000);
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  return tm;
}

}  // namespace

std::string utc_timestamp_iso8601() {
  long micros = 0;
  const std::tm tm = utc_now(micros);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:06}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                     tm.tm_hour, tm.tm_min, tm.tm_sec, micros);
}

RunStore::RunStore(fs::path dir) : runs_dir_(std::move(dir) / "runs") {
  std::error_code ec;
  fs::create_directories(runs_dir_, ec);
  if (ec) throw SizingError("store_failure", runs_dir_.string(), "cannot create " + runs_dir_.string());
}

std::string RunStore::new_run_id() {
  thread_local std::mt19937 rng{std::random_device{}()};
  long micros = 0;
  const std::tm tm = utc_now(micros);
  return fmt::format("{:04}{:02}{:02}T{:02}{:02}{:02}.{:06}Z-{:08x}", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                     tm.tm_hour, tm.tm_min, tm.tm_sec, micros, rng());
}

bool RunStore::is_well_formed_id(std::string_view run_id) noexcept { return safe_file_stem(run_id); }

void RunStore::commit(const RunRecord& record) {
  if (!is_well_formed_id(record.run_id))
    throw SizingError("store_failure", record.run_id, "run id is not storable: " + record.run_id);
  const std::string doc = to_json(record);
  std::lock_guard lock(commit_mutex_);
  write_once(runs_dir_ / (record.run_id + ".json"), doc, "run_exists");
}

std::optional<std::string> RunStore::find_document(std::string_view run_id) const {
  if (!is_well_formed_id(run_id)) return std::nullopt;
  return read_file(runs_dir_ / (std::string(run_id) + ".json"));
}

std::optional<RunRecord> RunStore::find(std::string_view run_id) const {
  auto doc = find_document(run_id);
  if (!doc) return std::nullopt;
  return parse_run_record(*doc);
}

ProfileRegistry::ProfileRegistry(fs::path dir) : profiles_dir_(std::move(dir) / "profiles") {
  std::error_code ec;
  fs::create_directories(profiles_dir_, ec);
  if (ec) throw SizingError("store_failure", profiles_dir_.string(), "cannot create " + profiles_dir_.string());
}

bool ProfileRegistry::is_valid_name(std::string_view name) noexcept { return safe_file_stem(name); }

void ProfileRegistry::add(const std::string& name, const ModelCoefficients& coeffs) {
  if (!is_valid_name(name))
    throw SizingError("invalid_profile_name", name, "profile names use letters, digits, '-', '_' and '.'");
  std::unique_lock lock(mutex_);
  write_once(profiles_dir_ / (name + ".json"), to_json(coeffs), "profile_exists");
}

std::optional<ModelCoefficients> ProfileRegistry::find(std::string_view name) const {
  if (!is_valid_name(name)) return std::nullopt;
  std::shared_lock lock(mutex_);
  auto doc = read_file(profiles_dir_ / (std::string(name) + ".json"));
  if (!doc) return std::nullopt;
  return parse_coefficients(*doc);
}

}  // namespace sizer
