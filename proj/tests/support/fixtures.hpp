#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sizer/calibration.hpp"
#include "sizer/domain.hpp"
#include "sizer/packer.hpp"

namespace sizer::testing {

inline std::filesystem::path data_dir() { return SIZER_TEST_DATA_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const HardwareTier& tier(const std::string& name) { return *find_tier(standard_tiers(), name); }

// U=100 users, T=100 req/s, P=64 KB split evenly.
inline RuntimeProfile reference_profile() {
  RuntimeProfile p;
  p.concurrency = 100;
  p.throughput = 100;
  p.payload_request_kb = 32;
  p.payload_response_kb = 32;
  return p;
}

inline ServiceSpec service(const std::string& id, std::optional<RuntimeProfile> profile = reference_profile()) {
  ServiceSpec s;
  s.id = id;
  s.profile = profile;
  return s;
}

// The worked scenario: ten identical default services, runtime level, distributed.
inline SizingRequest ten_service_request() {
  SizingRequest r;
  for (int i = 1; i <= 10; ++i) r.services.push_back(service("svc" + std::to_string(i)));
  r.architecture = Architecture::distributed;
  r.level = SizingLevel::runtime;
  return r;
}

inline ServiceDemand cpu_demand(const std::string& id, double cpu, const std::string& tier_name,
                                double memory = 0.0) {
  return {id, {cpu, memory, tier_name}};
}

// Independent generator for calibration data: evaluates the affine model
// directly and converts to the sample's tier through the ratio of
// processors x cores x GHz products (not through tier_scale_factor).
inline CalibrationSample synthesize(const PairCoefficients& c, const HardwareTier& reference, const HardwareTier& on,
                                    double users, double rps, double kb) {
  CalibrationSample s;
  s.tier = on.name;
  s.implementation_type = c.implementation_type;
  s.binding_type = c.binding_type;
  s.concurrency = users;
  s.throughput = rps;
  s.payload_total_kb = kb;
  const double ref_units = reference.processors * reference.cores_per_processor * reference.frequency_ghz;
  const double tier_units = on.processors * on.cores_per_processor * on.frequency_ghz;
  s.measured_cpu_pct = (c.c0_cpu_pct + c.c1_cpu_per_user * users + c.c2_cpu_per_rps * rps +
                        c.c3_cpu_per_rps_kb * rps * kb) * ref_units / tier_units;
  s.measured_mem_mb = c.m0_mem_mb + c.m1_mem_per_user_mb * users + c.m2_mem_per_kb_mb * kb;
  return s;
}

inline std::vector<CalibrationSample> factorial_samples(const PairCoefficients& c, const HardwareTier& reference,
                                                        const std::vector<HardwareTier>& on,
                                                        const std::vector<double>& levels) {
  std::vector<CalibrationSample> out;
  for (const auto& t : on)
    for (double u : levels)
      for (double r : levels)
        for (double p : levels) out.push_back(synthesize(c, reference, t, u, r, p));
  return out;
}

// Uniform multiplicative noise in [-fraction, +fraction] on both measurements.
inline void add_noise(std::vector<CalibrationSample>& samples, double fraction, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-fraction, fraction);
  for (auto& s : samples) {
    s.measured_cpu_pct *= 1.0 + u(rng);
    s.measured_mem_mb *= 1.0 + u(rng);
  }
}

inline double rel_err(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

inline double max_rel_err(const PairCoefficients& got, const PairCoefficients& want) {
  double e = 0.0;
  e = std::max(e, rel_err(got.c0_cpu_pct, want.c0_cpu_pct));
  e = std::max(e, rel_err(got.c1_cpu_per_user, want.c1_cpu_per_user));
  e = std::max(e, rel_err(got.c2_cpu_per_rps, want.c2_cpu_per_rps));
  e = std::max(e, rel_err(got.c3_cpu_per_rps_kb, want.c3_cpu_per_rps_kb));
  e = std::max(e, rel_err(got.m0_mem_mb, want.m0_mem_mb));
  e = std::max(e, rel_err(got.m1_mem_per_user_mb, want.m1_mem_per_user_mb));
  e = std::max(e, rel_err(got.m2_mem_per_kb_mb, want.m2_mem_per_kb_mb));
  return e;
}

// Random CPU-only packing instance: n in [1, max_n], demands uniform in (0, W).
struct Instance {
  std::vector<double> cpu;
  double cap = 80.0;
};

inline Instance random_instance(std::mt19937& rng, int max_n, double cap = 80.0) {
  std::uniform_int_distribution<int> n_dist(1, max_n);
  std::uniform_real_distribution<double> d(0.0, cap);
  Instance inst;
  inst.cap = cap;
  const int n = n_dist(rng);
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    while (v <= 0.0) v = d(rng);
    inst.cpu.push_back(v);
  }
  return inst;
}

inline std::vector<ServiceDemand> as_demands(const std::vector<double>& cpu, const std::string& tier_name,
                                             double scale = 1.0) {
  std::vector<ServiceDemand> out;
  for (std::size_t i = 0; i < cpu.size(); ++i)
    out.push_back(cpu_demand("s" + std::to_string(i + 1), cpu[i] * scale, tier_name));
  return out;
}

// Exhaustive partition enumeration (restricted growth strings); exponential,
// for n <= 9. Independent of the subset DP in exact_packer.
inline int brute_force_min_machines(const std::vector<double>& cpu, double cap) {
  const std::size_t n = cpu.size();
  if (n == 0) return 0;
  int best = static_cast<int>(n);
  std::vector<double> load;
  auto rec = [&](auto&& self, std::size_t i, int used) -> void {
    if (used >= best) return;
    if (i == n) {
      best = used;
      return;
    }
    for (int b = 0; b < used; ++b) {
      if (load[static_cast<std::size_t>(b)] + cpu[i] < cap) {
        load[static_cast<std::size_t>(b)] += cpu[i];
        self(self, i + 1, used);
        load[static_cast<std::size_t>(b)] -= cpu[i];
      }
    }
    load.push_back(cpu[i]);
    self(self, i + 1, used + 1);
    load.pop_back();
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace sizer::testing
