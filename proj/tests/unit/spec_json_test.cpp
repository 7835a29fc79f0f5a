#include <gtest/gtest.h>

#include "effcost/archlib.hpp"
#include "effcost/errors.hpp"
#include "effcost/records_csv.hpp"
#include "effcost/spec_json.hpp"
#include "support/oracles.hpp"

using namespace effcost;

namespace {

std::vector<ArchSpec> sample_specs() {
  std::vector<ArchSpec> out{build_vit(vit_base(16)), build_vit(vit_base(64, PatchBoundary::kPad)),
                            build_universal_transformer(vit_base(32), 4),
                            build_moe_transformer(vit_base(32), MoeConfig{4, 2, 2})};
  LmConfig lm;
  lm.layers_per_stack = 2;
  out.push_back(build_lm(lm));
  lm.arrangement = LmArrangement::kEncoderDecoder;
  out.push_back(build_lm(lm));
  for (std::uint64_t seed = 0; seed < 40; ++seed) out.push_back(oracle::random_repeat_spec(seed, seed % 2 == 0));
  ArchSpec par;
  par.name = "parallel \"quoted\"";
  par.input = TokenInput{4, 10, 0};
  par.metadata = {{"source", "hand-written"}, {"note", "ünïcode"}};
  par.element_bytes = 2;
  par.layers.emplace_back(TokenEmbedding{10, 8, false, false});
  par.layers.emplace_back(Parallel{{{Dense{8, 8, true, 0.25}}, {FeedForward{8, 16, 0.5}}}});
  par.layers.emplace_back(Unembed{8, 10});
  out.push_back(par);
  return out;
}

// Builder refs without a "name" get a generated one; compare structure only.
ArchSpec unnamed(ArchSpec s) {
  s.name.clear();
  return s;
}

}  // namespace

TEST(SpecJson, RoundTripIsIdentity) {
  for (const auto& spec : sample_specs()) {
    const std::string text = serialize_arch(spec);
    const ArchSpec back = parse_arch(text);
    EXPECT_EQ(back, spec) << spec.name;
    EXPECT_EQ(serialize_arch(back), text) << spec.name;
  }
}

TEST(SpecJson, MalformedJsonReportsOffset) {
  try {
    (void)parse_arch("{\"name\": \"x\",, }");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 14u);
    EXPECT_NE(std::string(e.what()).find("byte 14"), std::string::npos);
  }
}

TEST(SpecJson, UnknownKeyNamesPath) {
  nlohmann::json j = to_json(build_vit(vit_base(32)));
  j["layers"][1]["body"][0]["colour"] = "blue";
  try {
    (void)arch_from_json(j);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/layers/1/body/0"), std::string::npos) << e.what();
  }
}

TEST(SpecJson, WrongTypeRejected) {
  nlohmann::json j = to_json(build_vit(vit_base(32)));
  j["layers"][0]["patch"] = "thirty-two";
  EXPECT_THROW((void)arch_from_json(j), ParseError);
  j["layers"][0]["patch"] = -4;
  EXPECT_THROW((void)arch_from_json(j), ParseError);
}

TEST(SpecFile, BuilderRefResolves) {
  const SpecFile f = parse_spec_file(R"({"schema_version": 1, "builder": {"family": "vit", "patch": 32},
                                         "hardware": "tpu_like", "batch": 8, "optimizer": "sgd"})");
  EXPECT_EQ(unnamed(resolve_arch(f)), unnamed(build_vit(vit_base(32))));
  ASSERT_TRUE(f.hardware.has_value());
  EXPECT_EQ(std::get<std::string>(*f.hardware), "tpu_like");
  EXPECT_EQ(f.batch, Count{8});
  EXPECT_EQ(f.optimizer, OptimizerKind::kSgd);
  const SpecFile named = parse_spec_file(R"({"schema_version": 1, "builder": {"family": "vit", "name": "mine", "patch": 32}})");
  EXPECT_EQ(resolve_arch(named).name, "mine");
}

TEST(SpecFile, BuilderVariants) {
  auto resolve = [](const std::string& builder) {
    return unnamed(resolve_arch(parse_spec_file(R"({"schema_version": 1, "builder": )" + builder + "}")));
  };
  EXPECT_EQ(resolve(R"({"family": "vit", "patch": 32, "universal_steps": 3})"),
            unnamed(build_universal_transformer(vit_base(32), 3)));
  EXPECT_EQ(resolve(R"({"family": "vit", "patch": 32, "moe": {"num_experts": 4, "moe_every": 2}})"),
            unnamed(build_moe_transformer(vit_base(32), MoeConfig{4, 1, 2})));
  EXPECT_EQ(resolve(R"({"family": "vit", "patch": 64, "boundary": "crop"})"),
            unnamed(build_vit(vit_base(64, PatchBoundary::kCrop))));
  LmConfig lm;
  lm.arrangement = LmArrangement::kEncoderDecoder;
  lm.layers_per_stack = 3;
  EXPECT_EQ(resolve(R"({"family": "lm", "arrangement": "encoder_decoder", "layers_per_stack": 3})"), unnamed(build_lm(lm)));
  EXPECT_THROW((void)resolve(R"({"family": "rnn"})"), ParseError);
  EXPECT_THROW((void)resolve(R"({"family": "vit", "patch": 60})"), SpecError);
}

TEST(SpecFile, SchemaRules) {
  EXPECT_THROW((void)parse_spec_file(R"({"schema_version": 2, "builder": {"family": "vit"}})"), ParseError);
  EXPECT_THROW((void)parse_spec_file(R"({"schema_version": 1})"), ParseError);
  EXPECT_THROW((void)parse_spec_file(R"({"schema_version": 1, "builder": {"family": "vit"}, "extra": 1})"),
               ParseError);
}

TEST(SpecFile, RoundTripsThroughJson) {
  SpecFile f;
  f.arch = build_vit(vit_base(32));
  HardwareModel hw = *find_preset("tpu_like");
  hw.name = "custom";
  f.hardware = hw;
  f.batch = 4;
  f.quality = 71.5;
  f.energy = EnergyProfile{10, 0.001, 1000, 0.4};
  f.pricing = PricingProfile{2, 8, 1.5};
  const std::string text = to_json(f).dump(2);
  const SpecFile back = parse_spec_file(text);
  EXPECT_EQ(to_json(back).dump(2), text);
  EXPECT_EQ(std::get<HardwareModel>(*back.hardware), hw);
}

TEST(Hardware, JsonRoundTrip) {
  for (const auto& hw : hardware_presets()) EXPECT_EQ(hardware_from_json(to_json(hw)), hw);
  nlohmann::json bad = to_json(default_hardware());
  bad["peak_flops_per_sec"] = 0;
  EXPECT_THROW((void)hardware_from_json(bad), std::exception);
}

TEST(RecordsCsv, ParsesCommentsQuotesAndGaps) {
  const auto t = parse_records_csv(
      "# comment\nname,family,quality,params,latency\n\"a, b\",x,1.5,10,\nc,,2,20,0.5\n");
  EXPECT_EQ(t.indicator_columns, (std::vector<std::string>{"params", "latency"}));
  ASSERT_EQ(t.records.size(), 2u);
  EXPECT_EQ(t.records[0].name, "a, b");
  EXPECT_EQ(t.records[0].family, std::optional<std::string>("x"));
  EXPECT_FALSE(t.records[0].indicators.contains("latency"));
  EXPECT_FALSE(t.records[1].family.has_value());
  EXPECT_DOUBLE_EQ(t.records[1].indicators.at("latency"), 0.5);
  EXPECT_EQ(parse_records_csv(write_records_csv(t)).records, t.records);
}

TEST(RecordsCsv, Errors) {
  EXPECT_THROW((void)parse_records_csv("name,params\na,1\n"), ParseError);     // no quality column
  EXPECT_THROW((void)parse_records_csv("quality,params\n1,1\n"), ParseError);  // no name column
  try {
    (void)parse_records_csv("name,quality,params\na,1,2\nb,1,oops\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 26u);
  }
  EXPECT_THROW((void)parse_records_csv("name,quality,params\na,1\n"), ParseError);  // ragged
  EXPECT_THROW((void)parse_records_csv("name,quality,params\na,1,inf\n"), ParseError);
}

TEST(RecordsCsv, Sig6Formatting) {
  EXPECT_EQ(format_sig6(17.660005432), "17.66");
  EXPECT_EQ(format_sig6(86567656.0), "86567700");
  EXPECT_EQ(format_sig6(0.000706992248), "0.000706992");
  EXPECT_EQ(format_sig6(0.0), "0");
  EXPECT_EQ(format_sig6(-2.5), "-2.5");
}
