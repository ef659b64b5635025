#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sizer/domain.hpp"

namespace sizer {

struct CalibrationSample {
  std::string tier;
  std::string implementation_type;
  std::string binding_type;
  double concurrency = 0.0;
  double throughput = 0.0;
  double payload_total_kb = 0.0;
  double measured_cpu_pct = 0.0;
  double measured_mem_mb = 0.0;

  bool operator==(const CalibrationSample&) const = default;
};

struct ValidationReport {
  int holdout_count = 0;
  double cpu_rmse_pct = 0.0;
  double mem_rmse_mb = 0.0;
  double max_abs_cpu_err_pct = 0.0;
  bool pass = false;
};

inline constexpr int kMinCpuSamples = 4;
inline constexpr int kMinMemorySamples = 3;

// Ordinary least squares per (implementation_type, binding_type) pair.
// CPU regresses on (1, U, T, T*P) after samples from other tiers are rescaled
// onto `reference_tier`; memory regresses on (1, U, P). A negative fitted
// coefficient is clamped to 0 and the fit repeated without it until all are
// non-negative. deploy_mem_mb is carried over from `prior` (or the default
// model when the pair is new), since the samples cannot observe it.
//
// Throws SizingError with code insufficient_samples or collinear_samples
// naming the pair, or unknown_tier naming the sample.
ModelCoefficients fit_coefficients(const std::vector<CalibrationSample>& samples,
                                   const std::string& reference_tier,
                                   const std::vector<HardwareTier>& tier_table,
                                   const ModelCoefficients& prior = ModelCoefficients::defaults());

// Predicts each holdout sample on its own tier and compares. pass is
// max_abs_cpu_err_pct <= tolerance_cpu_pct. Throws on an empty holdout.
ValidationReport validate_extrapolation(const ModelCoefficients& coeffs,
                                        const std::vector<CalibrationSample>& holdout,
                                        double tolerance_cpu_pct,
                                        const std::vector<HardwareTier>& tier_table);

inline constexpr std::string_view kCalibrationCsvHeader =
    "tier,impl,binding,concurrency,throughput,payload_kb,cpu_pct,mem_mb";

// Parses the calibration CSV. Rows naming a tier outside `tier_table`, bad
// numbers or wrong column counts raise SizingError whose subject is "row N"
// (1-based data row).
std::vector<CalibrationSample> parse_calibration_csv(std::string_view text,
                                                     const std::vector<HardwareTier>& tier_table);
std::string to_calibration_csv(const std::vector<CalibrationSample>& samples);

}  // namespace sizer
