#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sizer/codec.hpp"
#include "sizer/engine.hpp"
#include "sizer/error.hpp"
#include "sizer/validate.hpp"

namespace sizer {
namespace {

TEST(Codec, ParsesMinimalRequestWithDefaults) {
  const auto r = parse_request(R"({"services":[{"id":"a"}]})");
  ASSERT_EQ(r.services.size(), 1u);
  EXPECT_EQ(r.services[0].implementation_type, "java");
  EXPECT_EQ(r.services[0].binding_type, "soap_http");
  EXPECT_FALSE(r.services[0].profile.has_value());
  EXPECT_EQ(r.architecture, Architecture::distributed);
  EXPECT_EQ(r.level, SizingLevel::runtime);
  EXPECT_EQ(r.packer, PackerConfig{});
  EXPECT_TRUE(std::holds_alternative<std::monostate>(r.coefficients));
}

TEST(Codec, CoefficientSourceForms) {
  EXPECT_EQ(std::get<std::string>(parse_request(R"({"coefficients":"lab-2026"})").coefficients), "lab-2026");
  const std::string inl = R"({"coefficients":)" + to_json(ModelCoefficients::defaults()) + "}";
  EXPECT_EQ(std::get<ModelCoefficients>(parse_request(inl).coefficients), ModelCoefficients::defaults());
  EXPECT_THROW(parse_request(R"({"coefficients":3})"), SizingError);
}

TEST(Codec, MalformedInputs) {
  for (const char* bad : {"{", "[]", R"({"services":{}})", R"({"services":[{"id":7}]})",
                          R"({"architecture":"cluster"})", R"({"tiers":[{"name":"x"}]})",
                          R"({"packer":{"max_nodes_per_host":2.5}})"}) {
    try {
      parse_request(bad);
      ADD_FAILURE() << "accepted " << bad;
    } catch (const SizingError& e) {
      EXPECT_EQ(e.code(), "malformed_json") << bad;
    }
  }
}

TEST(Codec, TierDocumentForms) {
  const auto a = parse_tiers(to_json(standard_tiers()));
  EXPECT_EQ(a, standard_tiers());
  const auto b = parse_tiers(R"({"tiers":[{"name":"x","processors":1,"cores_per_processor":2,"frequency_ghz":2.5,"ram_gb":8}]})");
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].name, "x");
}

TEST(Codec, FullPrecisionNumbers) {
  HardwareTier t{"odd", 1, 3, 0.1 + 0.2, 1.0 / 3.0};
  const auto back = parse_tiers("[" + to_json(t) + "]");
  EXPECT_EQ(back[0], t);
}

// Property: results survive serialization bit-identically, both as values and
// as text, across a spread of random requests.
TEST(Codec, ResultRoundTripProperty) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> load(0.0, 400.0);
  for (int trial = 0; trial < 100; ++trial) {
    SizingRequest r;
    r.architecture = (rng() % 4 == 0) ? Architecture::single : Architecture::distributed;
    r.level = (rng() % 3 == 0) ? SizingLevel::deployment : SizingLevel::runtime;
    const int n = static_cast<int>(rng() % 25);
    for (int i = 0; i < n; ++i) {
      RuntimeProfile p;
      p.workload_type = (rng() & 1) ? WorkloadType::burst : WorkloadType::steady;
      p.concurrency = load(rng);
      p.throughput = load(rng);
      p.payload_request_kb = load(rng) / 7.0;
      p.payload_response_kb = load(rng) / 3.0;
      r.services.push_back(testing::service("svc-" + std::to_string(i), p));
    }
    r = validate_request(r, ModelCoefficients::defaults());
    const auto result = size(r, ModelCoefficients::defaults(), {"run-" + std::to_string(trial), "2026-10-17T00:00:00Z"});
    const std::string text = to_json(result);
    const SizingResult back = parse_result(text);
    ASSERT_EQ(back, result) << "trial " << trial;
    ASSERT_EQ(to_json(back), text) << "trial " << trial;
  }
}

TEST(Codec, RunRecordRoundTrip) {
  auto r = validate_request(testing::ten_service_request(), ModelCoefficients::defaults());
  const auto result = size(r, ModelCoefficients::defaults(), {"id-1", "2026-10-17T10:00:00Z"});
  const RunRecord rec{"id-1", r, result, "2026-10-17T10:00:00Z"};
  EXPECT_EQ(parse_run_record(to_json(rec)), rec);
}

TEST(Codec, ViolationsDocument) {
  const std::string doc = to_json(std::vector<Violation>{{"duplicate_id", "svc1", "dup"}});
  EXPECT_NE(doc.find("\"duplicate_id\""), std::string::npos);
  EXPECT_NE(doc.find("\"svc1\""), std::string::npos);
}

}  // namespace
}  // namespace sizer
