// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace bcdof;
using namespace bcdof::cli;

namespace {

ChannelSpec identity_spec() {
  return parse_channel_spec(R"({"h1": [[1, 0], [0, 1]], "h2": [[1, 0], [0, 1]], "power": 1.0})");
}

ChannelSpec crossed_spec() { return parse_channel_spec(R"({"h1": [[1, 0]], "h2": [[0, 1]]})"); }

} // namespace

TEST(ChannelSpecParsing, ExplicitMatrices) {
  const auto spec = identity_spec();
  ASSERT_TRUE(spec.h1.has_value());
  EXPECT_EQ(spec.h1->rows(), 2);
  EXPECT_FALSE(spec.seed.has_value());
}

TEST(ChannelSpecParsing, MalformedJsonReportsPosition) {
  try {
    parse_channel_spec("{\n  \"h1\": [[1, 0]],\n  \"h2\": [[0, 1]\n  \"power\": 1\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(ChannelSpecParsing, RejectsInvalidSpecs) {
  EXPECT_THROW(parse_channel_spec(R"({"h1": [[1, 0]], "h2": [[0, 1, 2]]})"), ValidationError);
  EXPECT_THROW(parse_channel_spec(R"({"h1": [[1, 0], [1]], "h2": [[0, 1]]})"), ValidationError);
  EXPECT_THROW(parse_channel_spec(R"({"h1": [[1, 0]], "h2": [[0, 1]], "dims": [2, 1, 1], "seed": 3})"),
               ValidationError);
  EXPECT_THROW(parse_channel_spec(R"({"dims": [2, 1, 1]})"), ValidationError);
  EXPECT_THROW(parse_channel_spec(R"({"h1": [[1]], "h2": [[1]], "power": -1})"), ValidationError);
  EXPECT_THROW(parse_channel_spec(R"({"h1": [[1]], "h2": [[1]], "gain": 2})"), ValidationError);
  EXPECT_THROW(parse_channel_spec("[1, 2]"), ValidationError);
}

TEST(ChannelSpecParsing, RoundTrip) {
  for (const auto& spec : {identity_spec(), crossed_spec(),
                           parse_channel_spec(R"({"dims": [3, 2, 2], "seed": 9, "power": 0.1})"),
                           parse_channel_spec(R"({"h1": [[0.1, -2.5e-7, 3.141592653589793]], "h2": [[1e300, 0, 1]]})")}) {
    const auto again = channel_spec_from_json(parse_json_text(to_json(spec).dump()));
    EXPECT_TRUE(again == spec);
  }
}

TEST(ChannelSpecParsing, GeneratedChannelsAreReproducible) {
  const auto spec = parse_channel_spec(R"({"dims": [3, 2, 2], "seed": 9})");
  const auto a = materialize(spec);
  const auto b = materialize(spec);
  EXPECT_EQ(a.h1, b.h1);
  EXPECT_EQ(a.h2, b.h2);
  EXPECT_EQ(a.h1.rows(), 2);
  EXPECT_EQ(a.h1.cols(), 3);
}

TEST(CmdGsvd, IdentityPair) {
  const auto rep = cmd_gsvd(identity_spec(), {});
  EXPECT_EQ(rep.exit_code, kExitOk);
  const auto& res = rep.json.at("results");
  EXPECT_EQ(res.at("k"), 2);
  EXPECT_EQ(res.at("p"), 0);
  EXPECT_EQ(res.at("s"), 2);
  EXPECT_EQ(rep.json.at("command"), "gsvd");
  EXPECT_EQ(rep.json.at("version"), kVersion);
  EXPECT_EQ(rep.json.at("inputs_digest").get<std::string>().rfind("fnv1a64:", 0), 0u);
}

TEST(CmdGsvd, CrossedSizes) {
  const auto res = cmd_gsvd(crossed_spec(), {}).json.at("results");
  EXPECT_EQ(res.at("sizes"), (nlohmann::json{{"s1", 1}, {"sc", 0}, {"s2", 1}}));
}

TEST(CmdGsvd, ZeroToleranceFailsCheck) {
  Tolerances tol;
  tol.reconstruction = 0.0;
  const auto rep = cmd_gsvd(parse_channel_spec(R"({"dims": [4, 3, 3], "seed": 1})"), tol);
  EXPECT_EQ(rep.exit_code, kExitCheckFailed);
  EXPECT_FALSE(rep.diagnostic.empty());
}

TEST(CmdGsvd, Deterministic) {
  const auto spec = parse_channel_spec(R"({"dims": [4, 3, 2], "seed": 17})");
  EXPECT_EQ(cmd_gsvd(spec, {}).json.dump(), cmd_gsvd(spec, {}).json.dump());
}

TEST(CmdRegion, SharedOnlyInner) {
  const auto rep = cmd_region({0, 2, 0}, Which::inner);
  const auto& inner = rep.json.at("results").at("inner");
  EXPECT_EQ(inner.at("vertices").size(), 4u);
  const auto& v = inner.at("vertices");
  EXPECT_NE(std::find(v.begin(), v.end(), nlohmann::json::array({"2/1", "0/1", "0/1"})), v.end());
  EXPECT_FALSE(rep.json.at("results").contains("outer"));
}

TEST(CmdRegion, BothReportsEquality) {
  const auto rep = cmd_region({1, 1, 1}, Which::both);
  EXPECT_EQ(rep.json.at("results").at("equal"), true);
  EXPECT_EQ(rep.exit_code, kExitOk);
}

TEST(CmdRegion, EmptySizesGiveOrigin) {
  const auto v = cmd_region({0, 0, 0}, Which::outer).json.at("results").at("outer").at("vertices");
  EXPECT_EQ(v, nlohmann::json::parse(R"([["0/1", "0/1", "0/1"]])"));
}

TEST(CmdSweep, IdentityCommonOnly) {
  const auto rep = cmd_sweep(identity_spec(), {0, 0, 0}, parse_power_grid("1e6:1e12:3"), Scheme::dpc, {});
  EXPECT_EQ(rep.exit_code, kExitOk);
  const auto& s = rep.json.at("results").at("slopes");
  EXPECT_NEAR(s.at("d0").get<double>(), 2.0, 0.05);
  EXPECT_NEAR(s.at("d1").get<double>(), 0.0, 0.05);
  EXPECT_NEAR(s.at("d2").get<double>(), 0.0, 0.05);
  EXPECT_EQ(rep.csv.substr(0, 11), "P,R0,R1,R2\n");
  EXPECT_EQ(std::count(rep.csv.begin(), rep.csv.end(), '\n'), 4);
}

TEST(CmdSweep, CrossedZeroForcingLendsPrivatePipes) {
  const auto rep = cmd_sweep(crossed_spec(), {0, 0, 1}, parse_power_grid("1e6:1e12:3"), Scheme::zf, {});
  EXPECT_EQ(rep.exit_code, kExitOk);
  const auto& s = rep.json.at("results").at("slopes");
  EXPECT_NEAR(s.at("d0").get<double>(), 1.0, 0.05);
  EXPECT_NEAR(s.at("d1").get<double>(), 0.0, 0.05);
  EXPECT_NEAR(s.at("d2").get<double>(), 0.0, 0.05);
}

TEST(CmdSweep, RejectsShortGridAndInfeasibleParams) {
  EXPECT_THROW(cmd_sweep(identity_spec(), {0, 0, 0}, {1e6}, Scheme::dpc, {}), ValidationError);
  try {
    cmd_sweep(identity_spec(), {0, 0, 1}, {1e6, 1e9}, Scheme::dpc, {});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("beta <= min(|S1|, |S2|)"), std::string::npos);
  }
}

TEST(CmdVerify, SmallRunPasses) {
  const auto rep = cmd_verify(3, {4, 3, 3}, 42, {});
  EXPECT_EQ(rep.exit_code, kExitOk) << rep.diagnostic;
  EXPECT_EQ(rep.json.at("results").at("passed"), true);
  EXPECT_EQ(rep.json.at("results").at("region_equality").at("passed"), 64);
  EXPECT_EQ(rep.json.dump(), cmd_verify(3, {4, 3, 3}, 42, {}).json.dump());
}

TEST(CmdVerify, ImpossibleToleranceFails) {
  Tolerances tol;
  tol.reconstruction = 0.0;
  const auto rep = cmd_verify(2, {5, 4, 4}, 42, tol);
  EXPECT_EQ(rep.exit_code, kExitCheckFailed);
  EXPECT_NE(rep.diagnostic.find("gsvd_residuals"), std::string::npos);
}

TEST(CmdVerify, ZeroTrialsRejected) { EXPECT_THROW(cmd_verify(0, {5, 4, 4}, 1, {}), ValidationError); }

TEST(Parsing, PowerGrid) {
  const auto g = parse_power_grid("1e6:1e12:3");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[0], 1e6);
  EXPECT_NEAR(g[1], 1e9, 1e-3);
  EXPECT_EQ(g[2], 1e12);
  EXPECT_EQ(parse_power_grid("10,100"), (std::vector<double>{10, 100}));
  EXPECT_THROW(parse_power_grid("1e6:1e12:1"), ValidationError);
  EXPECT_THROW(parse_power_grid("1e6"), ValidationError);
  EXPECT_THROW(parse_power_grid("100,10"), ValidationError);
  EXPECT_THROW(parse_power_grid("1e6:x:3"), ValidationError);
}

TEST(Parsing, Triples) {
  EXPECT_EQ(parse_triple("1,2,3", "--sizes"), (std::array<std::size_t, 3>{1, 2, 3}));
  EXPECT_THROW(parse_triple("1,2", "--sizes"), ValidationError);
  EXPECT_THROW(parse_triple("1,-2,3", "--sizes"), ValidationError);
  EXPECT_THROW(parse_triple("1,2,3,4", "--sizes"), ValidationError);
}

TEST(Parsing, DigestIsStable) {
  const nlohmann::json j = {{"a", 1}};
  EXPECT_EQ(inputs_digest(j), inputs_digest(nlohmann::json::parse(R"({"a":1})")));
  EXPECT_NE(inputs_digest(j), inputs_digest({{"a", 2}}));
  EXPECT_EQ(inputs_digest(j).size(), 8u + 16u);
}
