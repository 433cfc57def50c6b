#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>

#include "blm/instance.hpp"
#include "blm/synthetic.hpp"
#include "fixtures.hpp"
#include "test_util.hpp"

using namespace blm;
using blm::testing::slurp;
using blm::testing::TempDir;

namespace {

SentenceRecord en(const std::string& text, StructureType st) {
  return {text, Language::EN, SyntheticSource{"reference"}, st};
}

// The English example instance, with the second sentence of each reused
// declarative pool taken from the answer set.
Pools reference_pools() {
  Pools p;
  p[kActTwoQ] = {en("Does the customer pay the bill?", kActTwoQ)};
  p[kActTwoD] = {en("The student gets the prize.", kActTwoD), en("The store ships the order.", kActTwoD)};
  p[kActOneQ] = {en("Does the teacher explain?", kActOneQ)};
  p[kActOneD] = {en("The car moves.", kActOneD), en("The writer publishes.", kActOneD)};
  p[kPassTwoQ] = {en("Why is the case studied by the lawyer?", kPassTwoQ)};
  p[kPassTwoD] = {en("The key is found by the boy.", kPassTwoD),
                  en("The news is reported by the speaker.", kPassTwoD)};
  p[kPassOneQ] = {en("When was the screen touched?", kPassOneQ), en("How was the data analyzed?", kPassOneQ)};
  p[kPassOneD] = {en("The plants were watered", kPassOneD)};
  return p;
}

const Pools& fr_pools(std::size_t n) { return blm::testing::generated_pools(Language::FR, n); }
std::set<std::string> texts_of(const std::vector<BLMInstance>& v) {
  std::set<std::string> out;
  for (const auto& inst : v) {
    for (const auto& r : inst.context) out.insert(r.text);
    for (const auto& a : inst.answers) out.insert(a.record.text);
  }
  return out;
}

}  // namespace

TEST(Assemble, ReferenceInstanceIsForced) {
  const auto pools = reference_pools();
  std::set<std::string> all;
  for (const auto& [st, pool] : pools) {
    for (const auto& r : pool) all.insert(r.text);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto inst = assemble_instance(pools, rng);
    EXPECT_TRUE(validate_instance(inst).empty());
    const auto& correct = inst.answers[static_cast<std::size_t>(inst.correct_index)];
    EXPECT_EQ(correct.record.text, "The plants were watered");
    EXPECT_EQ(correct.record.structure, kPassOneD);
    EXPECT_EQ(texts_of({inst}), all);
  }
}

TEST(Assemble, SingleSentencePoolsCannotFillTwelveSlots) {
  Pools p;
  for (const auto& st : kAllStructures) p[st] = {en("s " + to_string(st), st)};
  Rng rng(1);
  try {
    assemble_instance(p, rng);
    FAIL();
  } catch (const PoolExhausted& e) {
    ASSERT_TRUE(e.structure().has_value());
    EXPECT_EQ(*e.structure(), kPassTwoD);  // first answer whose pool is used up
  }
}

TEST(Assemble, MissingPoolIsNamed) {
  auto p = reference_pools();
  p.erase(kPassOneQ);
  Rng rng(1);
  try {
    assemble_instance(p, rng);
    FAIL();
  } catch (const PoolExhausted& e) {
    EXPECT_EQ(e.structure(), kPassOneQ);
    EXPECT_NE(std::string(e.what()).find("Pass-1-Q"), std::string::npos);
  }
}

TEST(Assemble, ValidateCatchesEachViolation) {
  Rng rng(3);
  const auto good = assemble_instance(fr_pools(20), rng);
  ASSERT_TRUE(validate_instance(good).empty());

  auto bad = good;
  std::swap(bad.context[0], bad.context[1]);
  EXPECT_FALSE(validate_instance(bad).empty());
  bad = good;
  bad.correct_index = (good.correct_index + 1) % 5;
  EXPECT_FALSE(validate_instance(bad).empty());
  bad = good;
  bad.answers[0].record.text = bad.context[0].text;
  EXPECT_FALSE(validate_instance(bad).empty());
  bad = good;
  bad.answers[(good.correct_index + 1) % 5].label = AnswerLabel::Correct;
  EXPECT_FALSE(validate_instance(bad).empty());
}

TEST(Assemble, TenThousandInstancesAreWellFormed) {
  Rng rng(2024);
  const auto& pools = fr_pools(30);
  for (int i = 0; i < 10000; ++i) {
    const auto inst = assemble_instance(pools, rng);
    const auto errs = validate_instance(inst);
    ASSERT_TRUE(errs.empty()) << errs.front();
    int pass_one_decl = 0;
    for (const auto& a : inst.answers) pass_one_decl += a.record.structure == kPassOneD ? 1 : 0;
    ASSERT_EQ(pass_one_decl, 1);
  }
}

// Position of the correct answer over 1000 assemblies stays inside the
// exact two-sided 99% binomial interval for p = 1/5.
TEST(Assemble, CorrectPositionIsUniform) {
  const boost::math::binomial_distribution<> bin(1000, 0.2);
  const double lo = boost::math::quantile(bin, 0.005);
  const double hi = boost::math::quantile(boost::math::complement(bin, 0.005));
  std::array<int, 5> hist{};
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) ++hist[static_cast<std::size_t>(assemble_instance(fr_pools(30), rng).correct_index)];
  for (int h : hist) {
    EXPECT_GE(h, lo);
    EXPECT_LE(h, hi);
  }
}

TEST(Build, SizesFollowSplit) {
  BuildOptions opt;
  opt.n_instances = 5;
  opt.split = 0.8;
  const auto ds = build_dataset(fr_pools(30), opt);
  EXPECT_EQ(ds.train.size(), 4u);
  EXPECT_EQ(ds.test.size(), 1u);
  EXPECT_EQ(ds.train[0].instance_id, "fr-train-00001");
}

TEST(Build, RejectsBadArguments) {
  BuildOptions opt;
  opt.n_instances = 0;
  EXPECT_THROW(build_dataset(fr_pools(30), opt), InvalidArgument);
  opt.n_instances = 10;
  for (double s : {0.0, 1.0, -0.5, 1.5}) {
    opt.split = s;
    EXPECT_THROW(build_dataset(fr_pools(30), opt), InvalidArgument);
  }
}

TEST(Build, StrictSplitNeedsTwoSentencesPerPool) {
  Pools p;
  for (const auto& st : kAllStructures) p[st] = {en("s " + to_string(st), st)};
  BuildOptions opt;
  opt.n_instances = 2;
  opt.split = 0.5;
  EXPECT_THROW(build_dataset(p, opt), PoolExhausted);
}

TEST(Build, CapacityErrorWhenPoolsTooSmall) {
  BuildOptions opt;
  opt.n_instances = 2000;
  opt.strict = false;
  EXPECT_THROW(build_dataset(reference_pools(), opt), Error);
}

TEST(Build, StrictSplitIsSentenceDisjoint) {
  BuildOptions opt;
  opt.n_instances = 2000;
  opt.split = 0.8;
  opt.seed = 7;
  const auto ds = build_dataset(fr_pools(500), opt);
  ASSERT_EQ(ds.train.size(), 1600u);
  ASSERT_EQ(ds.test.size(), 400u);
  const auto train = texts_of(ds.train), test = texts_of(ds.test);
  for (const auto& t : test) ASSERT_FALSE(train.count(t)) << t;
  std::set<std::string> keys;
  for (const auto* split : {&ds.train, &ds.test}) {
    for (const auto& inst : *split) {
      ASSERT_TRUE(validate_instance(inst).empty());
      ASSERT_TRUE(keys.insert(instance_detail::instance_key(inst)).second);
    }
  }
}

TEST(Build, LooseSplitStillHasNoDuplicateInstances) {
  BuildOptions opt;
  opt.n_instances = 500;
  opt.strict = false;
  const auto ds = build_dataset(fr_pools(30), opt);
  std::set<std::string> keys;
  for (const auto* split : {&ds.train, &ds.test}) {
    for (const auto& inst : *split) ASSERT_TRUE(keys.insert(instance_detail::instance_key(inst)).second);
  }
}

TEST(Build, SameSeedSameBytes) {
  TempDir dir("instance");
  BuildOptions opt;
  opt.n_instances = 200;
  opt.seed = 3;
  write_dataset(dir / "a.jsonl", build_dataset(fr_pools(30), opt).train);
  write_dataset(dir / "b.jsonl", build_dataset(fr_pools(30), opt).train);
  opt.seed = 4;
  write_dataset(dir / "c.jsonl", build_dataset(fr_pools(30), opt).train);
  EXPECT_EQ(slurp(dir / "a.jsonl"), slurp(dir / "b.jsonl"));
  EXPECT_NE(slurp(dir / "a.jsonl"), slurp(dir / "c.jsonl"));
}

TEST(Build, DatasetFileRoundTrips) {
  TempDir dir("instance");
  BuildOptions opt;
  opt.n_instances = 50;
  const auto ds = build_dataset(fr_pools(30), opt);
  write_dataset(dir / "train.jsonl", ds.train);
  EXPECT_EQ(read_dataset(dir / "train.jsonl"), ds.train);
  const auto first = slurp(dir / "train.jsonl").substr(0, 200);
  EXPECT_NE(first.find("\"blm-v1\""), std::string::npos);
}
