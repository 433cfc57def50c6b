#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "blm/experiments.hpp"
#include "fixtures.hpp"

using namespace blm;

namespace {

Prediction wrong(AnswerLabel l) { return {"x", 1, 0, l}; }
Prediction right() { return {"x", 0, 0, AnswerLabel::Correct}; }

EvaluationReport report(Language lang, const char* name, double f1) {
  EvaluationReport r;
  r.condition = condition_from_name(name, lang, "oracle");
  r.f1 = r.accuracy = f1;
  return r;
}

}  // namespace

TEST(Scoring, F1Examples) {
  const std::vector<int> gold{0, 1, 2, 3};
  EXPECT_DOUBLE_EQ(compute_f1(gold, gold), 1.0);
  EXPECT_DOUBLE_EQ(compute_f1(std::vector<int>{1, 2, 3, 4}, gold), 0.0);
  EXPECT_DOUBLE_EQ(compute_f1(std::vector<int>{0, 1, 2, 4}, gold), 0.75);
  EXPECT_THROW(compute_f1(std::vector<int>{0}, gold), InvalidArgument);
  EXPECT_THROW(compute_f1(std::vector<int>{}, std::vector<int>{}), InvalidArgument);
}

// Candidate-level macro F1 reduces to (acc + (3 + acc) / 4) / 2: the
// correct class has F1 = acc, and the distractor class has 3n + k true
// positives against n - k false positives and n - k false negatives.
TEST(Scoring, MacroF1ClosedForm) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 40);
    std::vector<int> pred(n), gold(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = static_cast<int>(uniform_index(rng, 5));
      pred[i] = static_cast<int>(uniform_index(rng, 5));
      k += pred[i] == gold[i] ? 1 : 0;
    }
    const double acc = static_cast<double>(k) / static_cast<double>(n);
    EXPECT_NEAR(macro_f1(pred, gold), (acc + (3 + acc) / 4) / 2, 1e-12);
    EXPECT_DOUBLE_EQ(compute_f1(pred, gold), acc);
  }
}

TEST(ErrorAnalysis, Examples) {
  EXPECT_TRUE(error_analysis(std::vector<Prediction>{right(), right()}).empty());
  const auto d = error_analysis(std::vector<Prediction>{
      wrong(AnswerLabel::ErrVoice), right(), wrong(AnswerLabel::ErrNumArgs), wrong(AnswerLabel::ErrVoice),
      wrong(AnswerLabel::ErrNumArgs)});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d.at(AnswerLabel::ErrVoice), 0.5);
  EXPECT_DOUBLE_EQ(d.at(AnswerLabel::ErrNumArgs), 0.5);
  EXPECT_DOUBLE_EQ(voice_error_mass(d), 0.5);
}

TEST(ErrorAnalysis, SumsToOne) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Prediction> ps;
    const auto n = 1 + uniform_index(rng, 300);
    for (std::uint64_t i = 0; i < n; ++i) ps.push_back(wrong(kErrorLabels[uniform_index(rng, 4)]));
    const auto d = error_analysis(ps);
    double s = 0.0;
    for (const auto& [l, v] : d) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(TTest, HandComputedShift) {
  const std::vector<double> a{1, 2, 3}, b{11, 12, 13};
  // pooled variance 1, se = sqrt(2/3), t = -10 / se
  const auto r = t_test(a, b);
  EXPECT_EQ(r.df, 4);
  EXPECT_NEAR(r.se, std::sqrt(2.0 / 3.0), 1e-10);
  EXPECT_NEAR(r.se, 0.816496580927726, 1e-10);
  EXPECT_NEAR(r.t, -12.247448713915890, 1e-10);
  EXPECT_NEAR(r.p, 0.00025521674944192687, 1e-10);  // scipy.stats.ttest_ind
  EXPECT_FALSE(r.degenerate);
}

TEST(TTest, FourAgainstFour) {
  const std::vector<double> a{0.97, 0.99, 0.31, 0.29}, b{0.62, 0.77, 0.93, 0.95};
  const auto mean = [](const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / 4; };
  double ss = 0;
  for (double x : a) ss += (x - mean(a)) * (x - mean(a));
  for (double x : b) ss += (x - mean(b)) * (x - mean(b));
  const double se = std::sqrt(ss / 6 * 0.5);
  const auto r = t_test(a, b);
  EXPECT_EQ(r.df, 6);
  EXPECT_NEAR(r.se, se, 1e-10);
  EXPECT_NEAR(r.t, (mean(a) - mean(b)) / se, 1e-10);
  EXPECT_NEAR(r.t, -0.8412141201937173, 1e-10);
  EXPECT_NEAR(r.p, 0.432469141631492, 1e-10);
}

TEST(TTest, DegenerateSamples) {
  const std::vector<double> a{0.5, 0.5, 0.5};
  auto r = t_test(a, a);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p, 1.0);
  const std::vector<double> same{1, 2, 3};
  r = t_test(same, same);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_NEAR(r.p, 1.0, 1e-15);
  r = t_test(a, std::vector<double>{0.7, 0.7});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.t, -std::numeric_limits<double>::infinity());
  EXPECT_THROW(t_test(std::vector<double>{1}, a), InvalidArgument);
}

TEST(TTest, AggregatedGroupingHasSixDegreesOfFreedom) {
  std::vector<EvaluationReport> rs;
  for (auto lang : {Language::FR, Language::IT}) {
    rs.push_back(report(lang, "SynSyn", 1.0));
    rs.push_back(report(lang, "NatNat", 0.7));
    rs.push_back(report(lang, "SynNat", 0.3));
    rs.push_back(report(lang, "NatSyn", 0.9));
  }
  const auto agg = aggregated_t_test(rs);
  EXPECT_EQ(agg.result.df, 6);
  EXPECT_EQ(agg.group_a, (std::vector<std::string>{"fr:SynSyn", "fr:SynNat", "it:SynSyn", "it:SynNat"}));
  EXPECT_EQ(agg.group_b, (std::vector<std::string>{"fr:NatNat", "fr:NatSyn", "it:NatNat", "it:NatSyn"}));
  const auto j = t_test_to_json(agg);
  EXPECT_EQ(j.at("df"), 6);
  EXPECT_NE(j.at("grouping").get<std::string>().find("plausible"), std::string::npos);
}

TEST(Conditions, Names) {
  std::vector<std::string> names;
  for (auto [tr, te] : kConditionPairs) names.push_back(Condition{tr, te}.name());
  EXPECT_EQ(names, (std::vector<std::string>{"SynSyn", "NatNat", "SynNat", "NatSyn"}));
  EXPECT_EQ(condition_from_name("NatSyn", Language::IT).train_source, DataSource::Nat);
  EXPECT_THROW(condition_from_name("SynFoo", Language::IT), InvalidArgument);
}

TEST(RunCondition, OracleCeilingAndDeterminism) {
  const auto ds = blm::testing::synthetic_dataset(600, 4);
  OracleConfig cfg;
  cfg.sigma = 0.05;
  const OracleProvider provider(cfg);
  const Condition cond{DataSource::Syn, DataSource::Syn, Language::FR, "oracle"};
  const auto r = run_condition(cond, ds.train, ds.test, provider, ProbeHyper{});
  EXPECT_EQ(r.n_test, 120u);
  EXPECT_GE(r.f1, 0.95);
  EXPECT_DOUBLE_EQ(r.f1, r.accuracy);
  EXPECT_EQ(r, run_condition(cond, ds.train, ds.test, provider, ProbeHyper{}));
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
}

TEST(RunCondition, NoiselessOracleCeiling) {
  const auto ds = blm::testing::synthetic_dataset(1000, 8);
  const auto r = run_condition({DataSource::Syn, DataSource::Syn, Language::FR, "oracle"}, ds.train, ds.test,
                               OracleProvider{}, ProbeHyper{});
  EXPECT_GE(r.f1, 0.99);
}

TEST(RunCondition, VoiceAblationMakesVoiceErrors) {
  const auto ds = blm::testing::synthetic_dataset(600, 5);
  OracleConfig cfg;
  const OracleProvider clean(cfg);
  cfg.ablate_voice = true;
  const OracleProvider ablated(cfg);
  const auto r = run_condition({DataSource::Syn, DataSource::Syn, Language::FR, "oracle"}, ds.train, ds.test,
                               clean, ablated, ProbeHyper{});
  ASSERT_FALSE(r.error_distribution.empty());
  EXPECT_GE(voice_error_mass(r.error_distribution), 0.6);
  const auto mode = std::max_element(r.error_distribution.begin(), r.error_distribution.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  EXPECT_TRUE(violates_voice(mode->first)) << to_string(mode->first);
}

TEST(RunCondition, ProviderDimensionMustMatch) {
  const auto ds = blm::testing::synthetic_dataset(20, 4, 0.5);
  const auto m = train_on(ds.train, OracleProvider{}, ProbeHyper{.epochs = 1});
  EXPECT_THROW(evaluate(m, {}, ds.test, HashProvider(32)), InvalidArgument);
  EXPECT_THROW(evaluate(m, {}, {}, OracleProvider{}), InvalidArgument);
}
