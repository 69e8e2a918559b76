#include <gtest/gtest.h>

#include <cmath>

#include "hardylab/serialize.hpp"

using namespace hardylab;

TEST(Serialize, HashHelpers) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
  EXPECT_STRNE(version(), "");
}

TEST(Serialize, NonFiniteNumbersBecomeStrings) {
  EXPECT_EQ(number(INFINITY), "inf");
  EXPECT_EQ(number(-INFINITY), "-inf");
  EXPECT_EQ(number(NAN), "nan");
  EXPECT_EQ(number(1.5), 1.5);
  EXPECT_EQ(number_from(number(INFINITY)), INFINITY);
  EXPECT_TRUE(std::isnan(number_from(Json("nan"))));
  EXPECT_EQ(number_from(Json(2.0)), 2.0);
  EXPECT_THROW(number_from(Json("x")), std::invalid_argument);
}

TEST(Serialize, DomainRoundTripKeepsFingerprint) {
  for (const DomainSpec& spec : {DomainSpec::disk(), DomainSpec::koch_minus_slit(), DomainSpec::interval(),
                                 DomainSpec::punctured_square()}) {
    const Rational h = spec.kind == DomainKind::KochMinusSlit ? Rational(1, 16) : Rational(1, 32);
    const GridDomain d = build_domain(spec, h);
    const Json j = domain_to_json(d);
    EXPECT_EQ(j.at("h"), h.str());
    const GridDomain back = domain_from_json(Json::parse(j.dump()));
    EXPECT_EQ(back.fingerprint(), d.fingerprint());
    EXPECT_EQ(back.size(), d.size());
    EXPECT_EQ(back.dist(), d.dist());
    EXPECT_EQ(back.spec().kind, spec.kind);
  }
}

TEST(Serialize, TamperedDomainIsRejected) {
  Json j = domain_to_json(build_domain(DomainSpec::square(), Rational(1, 16)));
  j["mask_rle"][5] = Json::array({0, 8, 8});
  EXPECT_THROW(domain_from_json(j), std::invalid_argument);
  j["mask_rle"][5] = Json::array({0, 15});
  EXPECT_THROW(domain_from_json(j), std::invalid_argument);
}

TEST(Serialize, FunctionsCarryTheirDomainHash) {
  const auto a = share(build_domain(DomainSpec::square(), Rational(1, 16)));
  const auto b = share(build_domain(DomainSpec::disk(), Rational(1, 16)));
  GridFunction u(a, 0.25);
  const Json j = function_to_json(u);
  EXPECT_EQ(function_from_json(j, a).values, u.values);
  EXPECT_THROW(function_from_json(j, b), std::invalid_argument);
}

TEST(Serialize, WhitneyFlags) {
  const GridDomain d = build_domain(DomainSpec::square(), Rational(1, 16));
  const WhitneyDecomposition w = whitney_decompose(d);
  const Json j = whitney_to_json(w);
  ASSERT_EQ(j.size(), w.cubes.size());
  std::size_t flagged = 0;
  for (const Json& q : j) flagged += q.at("flag") == "boundary-truncated";
  EXPECT_EQ(flagged, w.truncated_count());
}

TEST(Serialize, SpecRoundTrip) {
  SlitSnowflakeSpec k;
  k.r_side = 1.5;
  const DomainSpec spec = DomainSpec::koch_minus_slit(k);
  const DomainSpec back = spec_from_json(spec_to_json(spec));
  EXPECT_EQ(back.kind, DomainKind::KochMinusSlit);
  EXPECT_EQ(back.snowflake.r_side, 1.5);
  EXPECT_EQ(back.snowflake.level, 4);
}
