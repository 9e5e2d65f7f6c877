#include <gtest/gtest.h>

#include <set>
#include <stdexcept>

#include "asymgen/synthesize.hpp"

using namespace asymgen;

namespace {

GenConfig config(int per_type, std::uint64_t seed, int jobs) {
  GenConfig cfg;
  cfg.counts.fill(per_type);
  cfg.seed = seed;
  cfg.jobs = jobs;
  return cfg;
}

std::string dump(const std::vector<ProblemRecord>& records) {
  std::string out;
  for (const ProblemRecord& r : records) out += serialize(r) + "\n";
  return out;
}

}  // namespace

TEST(Synthesize, SameSeedSameBytes) {
  EXPECT_EQ(dump(synthesize(config(6, 7, 1)).records), dump(synthesize(config(6, 7, 1)).records));
}

TEST(Synthesize, JobsDoNotChangeOutput) {
  const SynthesisResult a = synthesize(config(6, 7, 1));
  const SynthesisResult b = synthesize(config(6, 7, 8));
  EXPECT_EQ(dump(a.records), dump(b.records));
  for (std::size_t t = 0; t < kPTypeCount; ++t) {
    EXPECT_EQ(a.stats[t].drawn, b.stats[t].drawn);
    EXPECT_EQ(a.stats[t].rejected, b.stats[t].rejected);
  }
}

TEST(Synthesize, SeedsDiffer) {
  EXPECT_NE(dump(synthesize(config(4, 1, 4)).records), dump(synthesize(config(4, 2, 4)).records));
}

TEST(Synthesize, CountsIdsGateAndUniqueness) {
  GenConfig cfg = config(0, 5, 4);
  cfg.count(PType::Roots) = 12;
  cfg.count(PType::IntegralLaplace) = 5;
  const SynthesisResult res = synthesize(cfg);
  ASSERT_EQ(res.records.size(), 17u);
  std::set<std::string> keys;
  std::set<std::string> ids;
  for (const ProblemRecord& r : res.records) {
    EXPECT_TRUE(r.validation.pass);
    keys.insert(ptype_name(r.ptype) + r.params.dump());
    ids.insert(r.id);
  }
  EXPECT_EQ(keys.size(), res.records.size());
  EXPECT_EQ(ids.size(), res.records.size());
  EXPECT_EQ(res.records.front().id, "roots-0000");
  EXPECT_EQ(res.records.back().id, "integral_laplace-0004");
}

TEST(Synthesize, SmallShapeSpaceExhausts) {
  // Only 45 (n1, n2) pairs times 4 sign patterns exist.
  GenConfig cfg = config(0, 3, 4);
  cfg.count(PType::NondimSymbolic) = 200;
  cfg.max_attempts = 50;
  EXPECT_THROW(synthesize(cfg), GenerationExhausted);
}

TEST(Synthesize, CandidateSeedsAreIndependent) {
  std::set<std::uint64_t> seeds;
  for (PType t : kAllPTypes) {
    for (int slot = 0; slot < 20; ++slot) {
      for (int attempt = 0; attempt < 5; ++attempt) seeds.insert(candidate_seed(7, t, slot, attempt));
    }
  }
  EXPECT_EQ(seeds.size(), kPTypeCount * 20 * 5);
}

TEST(Synthesize, MiniMix) {
  const GenConfig cfg = mini_mix(1);
  EXPECT_EQ(cfg.total(), 366);
  for (PType t : kAllPTypes) EXPECT_GT(cfg.count(t), 0);
}

TEST(Synthesize, ContextsAttachById) {
  GenConfig cfg = config(0, 9, 2);
  cfg.count(PType::IntegralPoly) = 2;
  cfg.contexts["integral_poly-0001"] = "A charged particle crosses a potential well.";
  const SynthesisResult res = synthesize(cfg);
  EXPECT_FALSE(res.records[0].context.has_value());
  EXPECT_EQ(res.records[1].context, cfg.contexts["integral_poly-0001"]);
}

TEST(Synthesize, RejectionReasonLabels) {
  EXPECT_EQ(rejection_reason(InconsistentCover("x")), "inconsistent cover");
  EXPECT_EQ(rejection_reason(ZeroAmplitude("x")), "zero amplitude");
  EXPECT_EQ(rejection_reason(std::runtime_error("x")), "other");
}
