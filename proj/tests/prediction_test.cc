#include <gtest/gtest.h>

#include "attrinfer/errors.h"
#include "attrinfer/prediction.h"
#include "support/test_support.h"

namespace attrinfer {
namespace {

class ExamplePredictionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    e0_ = testing::LoadExampleEntitlements(p_);
    clustering_ = Cluster(p_.model, ClusteringConfig{});
  }

  GroupTriple FacultyModify() const {
    return {clustering_.GroupOf("csFac1").id, clustering_.GroupOf("cs101gb").id, "modify"};
  }
  const Object& Fac1() const { return *p_.model.FindUser("csFac1"); }

  const Policy p_ = testing::LoadExamplePolicy();
  EntitlementSet e0_;
  Clustering clustering_;
};

TEST_F(ExamplePredictionTest, RelevantGroupTriples) {
  EXPECT_EQ(RelevantGroupTriples(Side::kUser, "csFac1", EntitlementIndex(e0_), clustering_),
            std::set<GroupTriple>{FacultyModify()});
  EXPECT_TRUE(RelevantGroupTriples(Side::kUser, "csFac1", EntitlementIndex(EntitlementSet{}),
                                   clustering_)
                  .empty());
  EntitlementSet more = e0_;
  more.insert({"csFac1", "csStu1trans", "read"});
  const GroupTriple transcripts{clustering_.GroupOf("csFac1").id,
                                clustering_.GroupOf("csStu1trans").id, "read"};
  EXPECT_EQ(RelevantGroupTriples(Side::kUser, "csFac1", EntitlementIndex(more), clustering_),
            (std::set<GroupTriple>{FacultyModify(), transcripts}));
  EXPECT_EQ(RelevantGroupTriples(Side::kResource, "cs101gb", EntitlementIndex(e0_), clustering_),
            std::set<GroupTriple>{FacultyModify()});
}

TEST_F(ExamplePredictionTest, PredictFromConstraint) {
  const Feature contains = Feature::Constraint({"coursesTaught", ConsOp::kContains, "course"});
  EXPECT_EQ(PredictFromFeature(contains, Side::kUser, "coursesTaught", Fac1(), FacultyModify(),
                               EntitlementIndex(e0_), clustering_, p_.model),
            ValueSet{"cs101"});
  EntitlementSet more = e0_;
  more.insert({"csFac1", "cs601gb", "modify"});
  EXPECT_EQ(PredictFromFeature(contains, Side::kUser, "coursesTaught", Fac1(), FacultyModify(),
                               EntitlementIndex(more), clustering_, p_.model),
            (ValueSet{"cs101", "cs601"}));
  // Equality with two different counterpart values pins nothing.
  EntitlementSet split = e0_;
  split.insert({"csFac1", "ee101gb", "modify"});
  const Feature dept = Feature::Constraint({"department", ConsOp::kEqual, "department"});
  EXPECT_TRUE(PredictFromFeature(dept, Side::kUser, "department", Fac1(), FacultyModify(),
                                 EntitlementIndex(split), clustering_, p_.model)
                  .empty());
  EXPECT_EQ(PredictFromFeature(dept, Side::kUser, "department", Fac1(), FacultyModify(),
                               EntitlementIndex(e0_), clustering_, p_.model),
            ValueSet{"cs"});
}

TEST_F(ExamplePredictionTest, PredictFromCondition) {
  const Feature ee = Feature::UserCondition(AtomicCondition::In("department", {"ee"}));
  EXPECT_EQ(PredictFromFeature(ee, Side::kUser, "department", Fac1(), FacultyModify(),
                               EntitlementIndex(e0_), clustering_, p_.model),
            ValueSet{"ee"});
  const Feature taught =
      Feature::UserCondition(AtomicCondition::Contains("coursesTaught", "cs601"));
  EXPECT_EQ(PredictFromFeature(taught, Side::kUser, "coursesTaught", Fac1(), FacultyModify(),
                               EntitlementIndex(e0_), clustering_, p_.model),
            ValueSet{"cs601"});
  EXPECT_THROW(PredictFromFeature(ee, Side::kUser, "coursesTaught", Fac1(), FacultyModify(),
                                  EntitlementIndex(e0_), clustering_, p_.model),
               ContractViolation);
}

TEST_F(ExamplePredictionTest, PredictsCoursesTaught) {
  const auto preds = PredictAll(p_.model, e0_, clustering_, PredictionConfig{});
  ASSERT_EQ(preds.size(), 2u);
  EXPECT_EQ(preds[0].attr, "coursesTaught");
  EXPECT_EQ(preds[0].confidence, Confidence::kHigh);
  EXPECT_EQ(preds[0].Values(), ValueSet{"cs101"});
  ASSERT_EQ(preds[0].provenance.size(), 1u);
  EXPECT_EQ(preds[0].provenance[0].rank, 1);
  EXPECT_EQ(preds[1].attr, "department");
  EXPECT_EQ(preds[1].confidence, Confidence::kNei);
  EXPECT_TRUE(preds[1].values.empty());
}

TEST_F(ExamplePredictionTest, TightestGates) {
  PredictionConfig cfg;
  cfg.ntcf = {1, 1};
  const Prediction p =
      PredictMissingUserAttr("csFac1", "coursesTaught", e0_, p_.model, clustering_, cfg);
  EXPECT_EQ(p.confidence, Confidence::kHigh);
  EXPECT_EQ(p.Values(), ValueSet{"cs101"});
}

TEST_F(ExamplePredictionTest, PredictRequiresMissingCell) {
  const EntitlementIndex index(e0_);
  Predictor predictor(p_.model, index, clustering_, PredictionConfig{});
  EXPECT_THROW(predictor.PredictUserAttr("csFac2", "department"), ContractViolation);
  EXPECT_THROW(predictor.PredictUserAttr("ghost", "department"), ContractViolation);
  EXPECT_EQ(predictor.PredictUserAttr("csFac1", "coursesTaught").Values(), ValueSet{"cs101"});
}

TEST_F(ExamplePredictionTest, Deterministic) {
  const auto a = PredictAll(p_.model, e0_, clustering_, PredictionConfig{});
  const auto b = PredictAll(p_.model, e0_, clustering_, PredictionConfig{});
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].Values(), b[i].Values());
    EXPECT_EQ(a[i].confidence, b[i].confidence);
    EXPECT_EQ(a[i].provenance.size(), b[i].provenance.size());
  }
}

TEST(PredictionConfigTest, Validation) {
  PredictionConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.ntcf = {0, 5};
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.ntcf = {4, 3};
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.ntcf = {1, 1};
  EXPECT_NO_THROW(cfg.Validate());
}

Candidate Cand(ValueSet values, Confidence c, int rank) {
  Candidate out;
  out.values = std::move(values);
  out.confidence = c;
  out.triple = {0, 1, "r"};
  out.feature = Feature::UserCondition(AtomicCondition::In("a", {"x"}));
  out.rank = rank;
  return out;
}

TEST(CombinePredictionsTest, EmptyIsNei) {
  const Prediction p = CombinePredictions("u", Side::kUser, "a", AttrKind::kSingle, {});
  EXPECT_EQ(p.confidence, Confidence::kNei);
  EXPECT_TRUE(p.values.empty());
}

TEST(CombinePredictionsTest, HighestConfidencePerValue) {
  const Prediction p = CombinePredictions(
      "u", Side::kUser, "a", AttrKind::kMulti,
      {Cand({"x"}, Confidence::kMedium, 4), Cand({"x", "y"}, Confidence::kHigh, 2)});
  ASSERT_EQ(p.values.size(), 2u);
  EXPECT_EQ(p.values[0].value, "x");
  EXPECT_EQ(p.values[0].confidence, Confidence::kHigh);
  EXPECT_EQ(p.values[0].best_rank, 2);
  EXPECT_EQ(p.confidence, Confidence::kHigh);
  ASSERT_EQ(p.provenance.size(), 2u);
  EXPECT_EQ(p.provenance[0].rank, 2);
}

TEST(CombinePredictionsTest, SingleValuedTieBreaks) {
  Prediction p = CombinePredictions(
      "u", Side::kUser, "a", AttrKind::kSingle,
      {Cand({"x"}, Confidence::kHigh, 2), Cand({"y"}, Confidence::kHigh, 1),
       Cand({"z"}, Confidence::kMedium, 4)});
  ASSERT_EQ(p.values.size(), 1u);
  EXPECT_EQ(p.values[0].value, "y");
  p = CombinePredictions("u", Side::kUser, "a", AttrKind::kSingle,
                         {Cand({"y"}, Confidence::kHigh, 1), Cand({"x"}, Confidence::kHigh, 1)});
  EXPECT_EQ(p.values[0].value, "x");
  p = CombinePredictions("u", Side::kUser, "a", AttrKind::kSingle,
                         {Cand({"y"}, Confidence::kMedium, 4), Cand({"x"}, Confidence::kHigh, 3)});
  EXPECT_EQ(p.values[0].value, "x");
  EXPECT_EQ(p.confidence, Confidence::kHigh);
}

}  // namespace
}  // namespace attrinfer
