#include <algorithm>

#include <gtest/gtest.h>

#include "attrinfer/errors.h"
#include "attrinfer/features.h"
#include "support/test_support.h"

namespace attrinfer {
namespace {

class ExampleFeaturesTest : public ::testing::Test {
 protected:
  void SetUp() override {
    e0_ = testing::LoadExampleEntitlements(p_);
    clustering_ = Cluster(p_.model, ClusteringConfig{});
  }

  const Group& Faculty() const { return clustering_.GroupOf("csFac2"); }
  const Group& Gradebooks() const { return clustering_.GroupOf("cs101gb"); }

  const Policy p_ = testing::LoadExamplePolicy();
  EntitlementSet e0_;
  Clustering clustering_;
};

TEST_F(ExampleFeaturesTest, LearningDataSkipsMissingRows) {
  const EntitlementIndex index(e0_);
  const auto data = BuildLearningData(Faculty(), Gradebooks(), "modify", index, p_.model);
  ASSERT_TRUE(data.has_value());
  // csFac1 has Missing cells: 3 faculty x 5 gradebooks remain.
  EXPECT_EQ(data->rows(), 15u);
  std::vector<std::pair<std::string, std::string>> positives;
  for (size_t r = 0; r < data->rows(); ++r) {
    if (data->labels[r] == 1.0) positives.push_back(data->pairs[r]);
  }
  EXPECT_EQ(positives, (std::vector<std::pair<std::string, std::string>>{
                           {"csFac2", "cs601gb"}, {"eeFac1", "ee101gb"}, {"eeFac2", "ee601gb"}}));
  EXPECT_EQ(data->features, EnumerateFeatures(Faculty(), Gradebooks(), p_.model));
}

TEST_F(ExampleFeaturesTest, RankingFindsTheRule) {
  const EntitlementIndex index(e0_);
  const auto data = BuildLearningData(Faculty(), Gradebooks(), "modify", index, p_.model);
  ASSERT_TRUE(data.has_value());
  const RankedFeatures ranked = LearnImportantFeatures(*data);
  EXPECT_EQ(ranked.rows, 15u);
  EXPECT_EQ(ranked.positives, 3u);
  ASSERT_GE(ranked.entries.size(), 3u);
  const Feature contains = Feature::Constraint({"coursesTaught", ConsOp::kContains, "course"});
  EXPECT_EQ(ranked.entries[0].feature, contains);
  EXPECT_NEAR(ranked.entries[0].coefficient, 1.0, 1e-6);
  std::vector<Feature> top3;
  for (int i = 0; i < 3; ++i) top3.push_back(ranked.entries[i].feature);
  const Feature position = Feature::UserCondition(AtomicCondition::In("position", {"faculty"}));
  const Feature type = Feature::ResourceCondition(AtomicCondition::In("type", {"gradebook"}));
  EXPECT_NE(std::find(top3.begin(), top3.end(), position), top3.end());
  EXPECT_NE(std::find(top3.begin(), top3.end(), type), top3.end());
  for (size_t i = 1; i < ranked.entries.size(); ++i) {
    const auto& a = ranked.entries[i - 1];
    const auto& b = ranked.entries[i];
    const auto qa = QuantizeCoefficient(a.coefficient);
    const auto qb = QuantizeCoefficient(b.coefficient);
    ASSERT_TRUE(qa > qb || (qa == qb && (a.support > b.support ||
                                         (a.support == b.support && a.feature < b.feature))))
        << "ranks " << i << " and " << i + 1;
  }
}

TEST_F(ExampleFeaturesTest, EnumerationCoversRuleAtoms) {
  const auto features = EnumerateFeatures(Faculty(), Gradebooks(), p_.model);
  EXPECT_TRUE(std::is_sorted(features.begin(), features.end()));
  const auto has = [&](const Feature& f) {
    return std::find(features.begin(), features.end(), f) != features.end();
  };
  EXPECT_TRUE(has(Feature::UserCondition(AtomicCondition::In("position", {"faculty"}))));
  EXPECT_TRUE(has(Feature::ResourceCondition(AtomicCondition::In("type", {"gradebook"}))));
  EXPECT_TRUE(has(Feature::Constraint({"coursesTaught", ConsOp::kContains, "course"})));
  EXPECT_TRUE(has(Feature::UserCondition(AtomicCondition::Contains("coursesTaught", "cs601"))));
  EXPECT_TRUE(has(Feature::Constraint({"department", ConsOp::kEqual, "department"})));
}

TEST_F(ExampleFeaturesTest, EmptyE0GivesZeroLabels) {
  const EntitlementIndex index(EntitlementSet{});
  const auto data = BuildLearningData(Faculty(), Gradebooks(), "modify", index, p_.model);
  ASSERT_TRUE(data.has_value());
  for (double y : data->labels) EXPECT_EQ(y, 0.0);
  const RankedFeatures ranked = LearnImportantFeatures(*data);
  EXPECT_EQ(ranked.positives, 0u);
  for (const auto& e : ranked.entries) EXPECT_EQ(QuantizeCoefficient(e.coefficient), 0);
}

TEST_F(ExampleFeaturesTest, AllRowsTaintedGivesNullopt) {
  const Group only_missing{0, Side::kUser, Faculty().signature, {"csFac1"}};
  const EntitlementIndex index(e0_);
  EXPECT_FALSE(BuildLearningData(only_missing, Gradebooks(), "modify", index, p_.model));
}

ObjectModel ToyModel() {
  Schema schema({{"a", AttrKind::kSingle, Side::kUser},
                 {"c", AttrKind::kSingle, Side::kUser},
                 {"b", AttrKind::kSingle, Side::kResource}});
  return ObjectModel(schema,
                     {{"u0", {{"a", AttrValue::Atomic("x")}, {"c", AttrValue::Atomic("p")}}},
                      {"u1", {{"a", AttrValue::Atomic("y")}, {"c", AttrValue::Atomic("q")}}}},
                     {{"r0", {{"b", AttrValue::Atomic("x")}}},
                      {"r1", {{"b", AttrValue::Atomic("y")}}}});
}

TEST(ToyFeaturesTest, EnumeratesConditionsAndOneConstraint) {
  const ObjectModel om = ToyModel();
  const Clustering c = Cluster(om, ClusteringConfig{});
  const auto features =
      EnumerateFeatures(c.GroupOf("u0"), c.GroupOf("r0"), om);
  const std::vector<Feature> want = {
      Feature::UserCondition(AtomicCondition::In("a", {"x"})),
      Feature::UserCondition(AtomicCondition::In("a", {"y"})),
      Feature::UserCondition(AtomicCondition::In("c", {"p"})),
      Feature::UserCondition(AtomicCondition::In("c", {"q"})),
      Feature::ResourceCondition(AtomicCondition::In("b", {"x"})),
      Feature::ResourceCondition(AtomicCondition::In("b", {"y"})),
      Feature::Constraint({"a", ConsOp::kEqual, "b"}),
      Feature::Constraint({"c", ConsOp::kEqual, "b"}),
  };
  EXPECT_EQ(features, want);
}

TEST(ToyFeaturesTest, DuplicateColumnsRankAdjacent) {
  const ObjectModel om = ToyModel();
  const Clustering c = Cluster(om, ClusteringConfig{});
  // Only u0 is entitled, so `a in {x}` and `c in {p}` are the same column.
  const EntitlementIndex index(EntitlementSet{{"u0", "r0", "r"}, {"u0", "r1", "r"}});
  const auto data = BuildLearningData(c.GroupOf("u0"), c.GroupOf("r0"), "r", index, om);
  ASSERT_TRUE(data.has_value());
  const RankedFeatures ranked = LearnImportantFeatures(*data);
  ASSERT_GE(ranked.entries.size(), 2u);
  EXPECT_EQ(ranked.entries[0].feature, Feature::UserCondition(AtomicCondition::In("a", {"x"})));
  EXPECT_EQ(ranked.entries[1].feature, Feature::UserCondition(AtomicCondition::In("c", {"p"})));
  EXPECT_EQ(QuantizeCoefficient(ranked.entries[0].coefficient),
            QuantizeCoefficient(ranked.entries[1].coefficient));
  EXPECT_EQ(ranked.entries[0].support, ranked.entries[1].support);
}

TEST(FeatureTest, MentionsAndSide) {
  const Feature uc = Feature::UserCondition(AtomicCondition::In("a", {"x"}));
  EXPECT_TRUE(uc.Mentions(Side::kUser, "a"));
  EXPECT_FALSE(uc.Mentions(Side::kResource, "a"));
  EXPECT_EQ(uc.condition_side(), Side::kUser);
  const Feature k = Feature::Constraint({"a", ConsOp::kEqual, "b"});
  EXPECT_TRUE(k.Mentions(Side::kUser, "a"));
  EXPECT_TRUE(k.Mentions(Side::kResource, "b"));
  EXPECT_FALSE(k.Mentions(Side::kResource, "a"));
  EXPECT_THROW(k.condition_side(), ContractViolation);
}

TEST(FeatureTest, Quantize) {
  EXPECT_EQ(QuantizeCoefficient(0.0), 0);
  EXPECT_EQ(QuantizeCoefficient(1e-9), 0);
  EXPECT_EQ(QuantizeCoefficient(-1e-9), 0);
  EXPECT_EQ(QuantizeCoefficient(1.0), QuantizeCoefficient(1.0 - 1e-10));
  EXPECT_GT(QuantizeCoefficient(0.5), QuantizeCoefficient(0.4));
}

TEST(FeatureTest, LearnRejectsEmptyData) {
  LearningData empty;
  EXPECT_THROW(LearnImportantFeatures(empty), ContractViolation);
}

}  // namespace
}  // namespace attrinfer
