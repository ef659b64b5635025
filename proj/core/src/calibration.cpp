#include "sizer/calibration.hpp"

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <utility>

#include "sizer/error.hpp"
#include "sizer/perfmodel.hpp"

namespace sizer {

namespace {

using PairKey = std::pair<std::string, std::string>;

std::string pair_name(const PairKey& key) { return key.first + "/" + key.second; }

// Least squares restricted to non-negative coefficients by clamp-and-refit:
// columns whose estimate goes negative are pinned to zero and dropped until
// the remaining fit is non-negative. Columns are scaled to unit norm before
// the rank-revealing QR so that the rank test is not swamped by units.
Eigen::VectorXd nonnegative_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& target,
                                          const std::string& what) {
  const Eigen::Index cols = design.cols();
  Eigen::VectorXd norms(cols);
  for (Eigen::Index c = 0; c < cols; ++c) norms[c] = design.col(c).norm();
  if ((norms.array() == 0.0).any())
    throw SizingError("collinear_samples", what, what + ": a regressor is identically zero across samples");

  const Eigen::MatrixXd scaled = design * norms.cwiseInverse().asDiagonal();
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-10);
    if (qr.rank() < cols)
      throw SizingError("collinear_samples", what, what + ": samples do not determine every coefficient");
  }

  std::vector<bool> active(static_cast<std::size_t>(cols), true);
  Eigen::VectorXd solution = Eigen::VectorXd::Zero(cols);
  for (;;) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index c = 0; c < cols; ++c)
      if (active[static_cast<std::size_t>(c)]) idx.push_back(c);
    solution.setZero();
    if (idx.empty()) break;

    Eigen::MatrixXd sub(scaled.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = scaled.col(idx[k]);
    const Eigen::VectorXd beta = sub.colPivHouseholderQr().solve(target);

    bool clamped = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double v = beta[static_cast<Eigen::Index>(k)] / norms[idx[k]];
      if (v < 0.0) {
        active[static_cast<std::size_t>(idx[k])] = false;
        clamped = true;
      } else {
        solution[idx[k]] = v;
      }
    }
    if (!clamped) break;
  }
  return solution;
}

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

ModelCoefficients fit_coefficients(const std::vector<CalibrationSample>& samples, const std::string& reference_tier,
                                   const std::vector<HardwareTier>& tier_table, const ModelCoefficients& prior) {
  const HardwareTier* reference = find_tier(tier_table, reference_tier);
  if (!reference)
    throw SizingError("unknown_reference_tier", reference_tier, "reference tier " + reference_tier + " is unknown");

  // Group by pair, keeping first-appearance order.
  std::vector<PairKey> order;
  std::map<PairKey, std::vector<const CalibrationSample*>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!find_tier(tier_table, s.tier))
      throw SizingError("unknown_tier", "sample " + std::to_string(i + 1), "sample " + std::to_string(i + 1) +
                                                                             " names unknown tier " + s.tier);
    PairKey key{s.implementation_type, s.binding_type};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&s);
  }
  if (order.empty())
    throw SizingError("insufficient_samples", "", "no calibration samples");

  const double fallback_deploy = ModelCoefficients::defaults().pairs.front().deploy_mem_mb;

  ModelCoefficients out;
  out.reference_tier = reference_tier;
  for (const auto& key : order) {
    const auto& rows = groups[key];
    const std::string name = pair_name(key);
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n < kMinCpuSamples || n < kMinMemorySamples)
      throw SizingError("insufficient_samples", name,
                        fmt::format("{}: {} samples, need at least {}", name, n, kMinCpuSamples));

    Eigen::MatrixXd cpu_design(n, 4);
    Eigen::VectorXd cpu_target(n);
    Eigen::MatrixXd mem_design(n, 3);
    Eigen::VectorXd mem_target(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const CalibrationSample& s = *rows[static_cast<std::size_t>(r)];
      const double factor = tier_scale_factor(*find_tier(tier_table, s.tier), *reference);
      cpu_design.row(r) << 1.0, s.concurrency, s.throughput, s.throughput * s.payload_total_kb;
      cpu_target[r] = s.measured_cpu_pct / factor;
      mem_design.row(r) << 1.0, s.concurrency, s.payload_total_kb;
      mem_target[r] = s.measured_mem_mb;
    }

    const Eigen::VectorXd cpu = nonnegative_least_squares(cpu_design, cpu_target, name + " cpu");
    const Eigen::VectorXd mem = nonnegative_least_squares(mem_design, mem_target, name + " memory");

    PairCoefficients p;
    p.implementation_type = key.first;
    p.binding_type = key.second;
    p.c0_cpu_pct = cpu[0];
    p.c1_cpu_per_user = cpu[1];
    p.c2_cpu_per_rps = cpu[2];
    p.c3_cpu_per_rps_kb = cpu[3];
    p.m0_mem_mb = mem[0];
    p.m1_mem_per_user_mb = mem[1];
    p.m2_mem_per_kb_mb = mem[2];
    const PairCoefficients* before = prior.find(key.first, key.second);
    p.deploy_mem_mb = before ? before->deploy_mem_mb : fallback_deploy;
    out.pairs.push_back(std::move(p));
  }
  return out;
}

ValidationReport validate_extrapolation(const ModelCoefficients& coeffs, const std::vector<CalibrationSample>& holdout,
                                        double tolerance_cpu_pct, const std::vector<HardwareTier>& tier_table) {
  if (holdout.empty()) throw SizingError("empty_holdout", "", "holdout set is empty");
  const DemandModel model(coeffs, tier_table);

  double cpu_sq = 0.0;
  double mem_sq = 0.0;
  double max_cpu = 0.0;
  for (std::size_t i = 0; i < holdout.size(); ++i) {
    const auto& s = holdout[i];
    const HardwareTier* tier = find_tier(tier_table, s.tier);
    if (!tier)
      throw SizingError("unknown_tier", "sample " + std::to_string(i + 1), "holdout sample names unknown tier " + s.tier);
    ServiceSpec svc;
    svc.id = "holdout";
    svc.implementation_type = s.implementation_type;
    svc.binding_type = s.binding_type;
    RuntimeProfile profile;
    profile.concurrency = s.concurrency;
    profile.throughput = s.throughput;
    profile.payload_request_kb = s.payload_total_kb;
    const ResourceDemand d = model.estimate(svc, profile, *tier);
    const double cpu_err = d.cpu_pct - s.measured_cpu_pct;
    const double mem_err = d.memory_mb - s.measured_mem_mb;
    cpu_sq += cpu_err * cpu_err;
    mem_sq += mem_err * mem_err;
    max_cpu = std::max(max_cpu, std::abs(cpu_err));
  }

  ValidationReport report;
  report.holdout_count = static_cast<int>(holdout.size());
  report.cpu_rmse_pct = std::sqrt(cpu_sq / static_cast<double>(holdout.size()));
  report.mem_rmse_mb = std::sqrt(mem_sq / static_cast<double>(holdout.size()));
  report.max_abs_cpu_err_pct = max_cpu;
  report.pass = max_cpu <= tolerance_cpu_pct;
  return report;
}

std::vector<CalibrationSample> parse_calibration_csv(std::string_view text,
                                                     const std::vector<HardwareTier>& tier_table) {
  std::vector<CalibrationSample> out;
  bool header_seen = false;
  int row = 0;
  for (std::string_view rest = text; !rest.empty();) {
    const auto nl = rest.find('\n');
    const std::string line = trim(rest.substr(0, nl));
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != kCalibrationCsvHeader)
        throw SizingError("malformed_csv", "header", "expected header '" + std::string(kCalibrationCsvHeader) + "'");
      header_seen = true;
      continue;
    }

    ++row;
    const std::string where = "row " + std::to_string(row);
    const auto cells = split(line, ',');
    if (cells.size() != 8)
      throw SizingError("malformed_csv", where, fmt::format("{}: expected 8 columns, found {}", where, cells.size()));

    CalibrationSample s;
    s.tier = trim(cells[0]);
    s.implementation_type = trim(cells[1]);
    s.binding_type = trim(cells[2]);
    if (!find_tier(tier_table, s.tier))
      throw SizingError("unknown_tier", where, where + ": unknown tier '" + s.tier + "'");
    if (!is_valid_identifier(s.implementation_type) || !is_valid_identifier(s.binding_type))
      throw SizingError("malformed_csv", where, where + ": implementation and binding must be non-empty identifiers");

    double* numbers[] = {&s.concurrency, &s.throughput, &s.payload_total_kb, &s.measured_cpu_pct,
                         &s.measured_mem_mb};
    for (std::size_t k = 0; k < 5; ++k) {
      if (!parse_double(cells[3 + k], *numbers[k]) || *numbers[k] < 0.0)
        throw SizingError("malformed_csv", where,
                          fmt::format("{}: column {} is not a non-negative number", where, 4 + k));
    }
    out.push_back(std::move(s));
  }
  if (!header_seen) throw SizingError("malformed_csv", "header", "calibration CSV is empty");
  return out;
}

std::string to_calibration_csv(const std::vector<CalibrationSample>& samples) {
  std::string out(kCalibrationCsvHeader);
  out += '\n';
  for (const auto& s : samples)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", s.tier, s.implementation_type, s.binding_type, s.concurrency,
                       s.throughput, s.payload_total_kb, s.measured_cpu_pct, s.measured_mem_mb);
  return out;
}

}  // namespace sizer
