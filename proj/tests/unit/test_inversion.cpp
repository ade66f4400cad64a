#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "sumindex/errors.hpp"
#include "sumindex/inversion.hpp"
#include "sumindex/inversion_io.hpp"
#include "sumindex/standalone.hpp"

using namespace sumindex;

namespace {

FunctionSpec identity(std::uint64_t n) {
  return FunctionSpec(n, n, [](std::uint64_t x) { return x; });
}

std::vector<std::vector<std::uint64_t>> preimages(const FunctionSpec& f) {
  std::vector<std::vector<std::uint64_t>> inv(f.range_size());
  for (std::uint64_t x = 0; x < f.domain_size(); ++x) inv[f(x)].push_back(x);
  return inv;
}

}  // namespace

TEST(Plan, HalfOrLessIsFullInverse) {
  EXPECT_EQ(plan_parameters(1024, 0.5).mode, InversionMode::full_inverse);
  EXPECT_EQ(plan_parameters(16, 0.0).mode, InversionMode::full_inverse);
}

TEST(Plan, SampleSetFormulas) {
  const ParamPlan a = plan_parameters(1ULL << 16, 0.75);
  EXPECT_EQ(a.mode, InversionMode::sample_set);
  EXPECT_EQ(a.g, 1ULL << 12);
  EXPECT_EQ(a.t, 1ULL << 4);
  EXPECT_EQ(a.s, 1ULL << 4);
  EXPECT_EQ(a.r, (1ULL << 8) * 16);
  const ParamPlan b = plan_parameters(1ULL << 16, 1.0);
  EXPECT_EQ(b.g, 1ULL << 16);
  EXPECT_EQ(b.t, 1ULL << 8);
  EXPECT_EQ(b.s, 1u);
  EXPECT_EQ(b.r, (1ULL << 8) * 16);
}

TEST(Plan, ClassicFormulas) {
  const ParamPlan p = plan_parameters(1ULL << 12, 0.75, {}, InversionMode::classic_fn);
  EXPECT_EQ(p.mode, InversionMode::classic_fn);
  EXPECT_EQ(p.g, static_cast<std::uint64_t>(std::ceil(std::pow(4096.0, 0.75))));
  EXPECT_EQ(p.t, static_cast<std::uint64_t>(std::ceil(std::pow(4096.0, 0.25))));
  EXPECT_EQ(p.s, static_cast<std::uint64_t>(std::ceil(std::pow(4096.0, 0.25))));
  EXPECT_EQ(p.r, static_cast<std::uint64_t>(std::ceil(std::pow(4096.0, 0.5) * 12)));
}

TEST(Plan, RejectsBadArguments) {
  EXPECT_THROW(plan_parameters(0, 0.75), std::invalid_argument);
  EXPECT_THROW(plan_parameters(8, 1.5), std::invalid_argument);
  EXPECT_THROW(plan_parameters(8, -0.1), std::invalid_argument);
}

TEST(SampleSet, Properties) {
  EXPECT_TRUE(build_sample_set(0, 0, 8).empty());
  EXPECT_EQ(build_sample_set(77, 4, 8), build_sample_set(77, 4, 8));
  for (std::uint64_t x : build_sample_set(5, 1000, 1ULL << 20)) EXPECT_LT(x, 1ULL << 20);
  EXPECT_THROW(build_sample_set(1, 9, 8), std::invalid_argument);
}

TEST(Bypass, IdentityUnblocked) {
  const FunctionSpec f = identity(8);
  ImageDictionary none;
  EXPECT_EQ(bypassed_eval(f, none, 3, 5), 5u);
}

TEST(Bypass, ConstantBlocked) {
  const FunctionSpec f(8, 8, [](std::uint64_t) { return 3; });
  ImageDictionary blocked;
  blocked.insert(3, 0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::uint64_t v = bypassed_eval(f, blocked, seed, 2);
    EXPECT_NE(v, 3u);
    EXPECT_LT(v, 8u);
  }
}

TEST(Bypass, NeverLandsOnBlockedImage) {
  const FunctionSpec f = random_function(12, 64, 64);
  ImageDictionary blocked;
  for (std::uint64_t x : build_sample_set(9, 8, 64)) blocked.insert(f(x), x);
  for (std::uint64_t x = 0; x < 64; ++x) EXPECT_FALSE(blocked.contains(bypassed_eval(f, blocked, 4, x)));
}

TEST(Tables, ChainsWalkToTheirEnds) {
  const FunctionSpec f = random_function(3, 256, 256);
  const ParamPlan plan = plan_parameters(256, 0.75);
  ImageDictionary blocked;
  const TableSeeds seeds{11, 12, 13};
  const auto tables = build_tables(f, plan, blocked, seeds);
  ASSERT_EQ(tables.size(), plan.r);
  for (const HellmanTable& t : tables) {
    ASSERT_EQ(t.pairs.size(), plan.s);
    const MixKey mix(seeds.mix_seed, t.table_index);
    for (std::size_t c = 0; c < t.pairs.size(); ++c) {
      std::uint64_t x = t.pairs[c].start;
      for (std::uint64_t step = 0; step < plan.t; ++step) x = chain_step(f, blocked, mix, seeds.bypass_seed, x);
      EXPECT_EQ(x, t.pairs[c].end);
      if (c > 0) {
        const ChainPair& a = t.pairs[c - 1];
        const ChainPair& b = t.pairs[c];
        EXPECT_TRUE(a.end < b.end || (a.end == b.end && a.start <= b.start));
      }
    }
  }
  // flat layout holds the same chains
  const auto flat = build_chains(f, plan, blocked, seeds);
  for (std::size_t i = 0; i < tables.size(); ++i)
    for (std::size_t c = 0; c < plan.s; ++c) EXPECT_EQ(flat[i * plan.s + c], tables[i].pairs[c]);
}

TEST(Tables, BuildCostBounded) {
  FunctionSpec f = random_function(4, 256, 256);
  const ParamPlan plan = plan_parameters(256, 0.75);
  ImageDictionary blocked;
  build_tables(f, plan, blocked, {1, 2, 3});
  EXPECT_LE(f.evaluations(), plan.r * plan.s * plan.t);
}

TEST(FullInverse, Identity) {
  const FunctionSpec f = identity(8);
  const InversionAdvice a = preprocess_inversion(f, plan_parameters(8, 0.5), 1);
  for (std::uint64_t y = 0; y < 8; ++y) EXPECT_EQ(invert(a, f, y), y);
}

TEST(FullInverse, Constant) {
  const FunctionSpec f(8, 8, [](std::uint64_t) { return 0; });
  const InversionAdvice a = preprocess_inversion(f, plan_parameters(8, 0.5), 1);
  ASSERT_TRUE(invert(a, f, 0).has_value());
  EXPECT_EQ(f(*invert(a, f, 0)), 0u);
  for (std::uint64_t y = 1; y < 8; ++y) EXPECT_FALSE(invert(a, f, y).has_value());
}

TEST(Invert, NeverReturnsUnverifiedAnswer) {
  for (InversionMode mode : {InversionMode::sample_set, InversionMode::classic_fn}) {
    // range twice the domain so half the range has no preimage
    const FunctionSpec f = random_function(21, 1024, 2048);
    const auto inv = preimages(f);
    const InversionAdvice a = preprocess_inversion(f, plan_parameters(1024, 0.75, {}, mode), 5);
    for (std::uint64_t y = 0; y < 2048; ++y) {
      const auto x = invert(a, f, y);
      if (inv[y].empty()) EXPECT_FALSE(x.has_value());
      if (x) EXPECT_EQ(f(*x), y);
    }
  }
}

TEST(Invert, SampleSetWeakSuccess) {
  // per-query success >= 1/2 on images, averaged over seeds
  const std::uint64_t L = 1ULL << 12;
  std::uint64_t hits = 0, tries = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const FunctionSpec f = random_function(1000 + seed, L, L);
    const InversionAdvice a = preprocess_inversion(f, plan_parameters(L, 0.75), seed, ~seed);
    for (std::uint64_t q = 0; q < 100; ++q) {
      const std::uint64_t y = f((q * 2654435761ULL + seed) % L);
      FunctionSpec g = f;
      g.reset_evaluations();
      hits += invert(a, g, y).has_value();
      EXPECT_LE(g.evaluations(), query_eval_budget(a.plan));
      ++tries;
    }
  }
  EXPECT_GE(static_cast<double>(hits) / tries, 0.5);
}

TEST(Invert, SpaceScalesAsExpected) {
  // bit_size / (L^(1.5 - delta) * word) stays within a polylog factor
  const std::uint64_t L = 1ULL << 10;
  const double delta = 0.8;
  const double unit = std::pow(static_cast<double>(L), 1.5 - delta) * 10;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FunctionSpec f = random_function(seed, L, L);
    const InversionAdvice a = preprocess_inversion(f, plan_parameters(L, delta), seed);
    const double ratio = a.bit_size / unit;
    EXPECT_LT(ratio, 100.0);  // log2(L)^2
    EXPECT_GT(ratio, 1.0 / 100.0);
  }
}

TEST(InversionIo, RoundTripAndAccounting) {
  for (InversionMode mode : {InversionMode::full_inverse, InversionMode::sample_set, InversionMode::classic_fn}) {
    const double delta = mode == InversionMode::full_inverse ? 0.25 : 0.75;
    const FunctionSpec f = random_function(8, 512, 700);
    const InversionAdvice a = preprocess_inversion(f, plan_parameters(512, delta, {}, mode), 42);
    const auto bytes = serialize_inversion(a);
    EXPECT_EQ(inversion_bits(a), a.bit_size);
    EXPECT_LE(a.bit_size, bytes.size() * 8);
    EXPECT_LT(bytes.size() * 8 - a.bit_size, 64u);
    const InversionAdvice b = deserialize_inversion(bytes);
    EXPECT_EQ(a, b);
    for (std::uint64_t y = 0; y < 700; ++y) EXPECT_EQ(invert(a, f, y), invert(b, f, y));
  }
}

TEST(InversionIo, RejectsGarbage) {
  const std::vector<std::uint8_t> junk = {'S', 'I', 'D', 'Y', 0, 0};
  EXPECT_THROW(deserialize_inversion(junk), FormatError);
  const FunctionSpec f = random_function(8, 256, 256);
  auto bytes = serialize_inversion(preprocess_inversion(f, plan_parameters(256, 0.75), 1));
  bytes.resize(bytes.size() / 2);
  EXPECT_THROW(deserialize_inversion(bytes), FormatError);
}

TEST(Standalone, RandomFunctionDeterministic) {
  const FunctionSpec a = random_function(5, 100, 37), b = random_function(5, 100, 37);
  for (std::uint64_t x = 0; x < 100; ++x) {
    EXPECT_EQ(a(x), b(x));
    EXPECT_LT(a(x), 37u);
  }
}
