#include <gtest/gtest.h>

#include "support/property_checks.h"
#include "support/test_support.h"

namespace attrinfer::testing {
namespace {

void Expect(const CheckResult& r, size_t count) {
  EXPECT_EQ(r.cases, count);
  EXPECT_TRUE(r.ok()) << r.failures << " of " << r.cases << " failed; first: "
                      << r.first_failure;
}

TEST(PropertyTest, Similarity) { Expect(CheckSimilarity(PropertySeed(), 1000), 1000); }

TEST(PropertyTest, Clustering) { Expect(CheckClustering(PropertySeed(), 500), 500); }

TEST(PropertyTest, NtcfMonotonicity) {
  Expect(CheckNtcfMonotonicity(PropertySeed(), 200), 200);
}

TEST(PropertyTest, RemovalRoundTrip) {
  Expect(CheckRemovalRoundTrip(PropertySeed(), 200), 200);
}

TEST(PropertyTest, RuleMeaningOracle) {
  Expect(CheckRuleMeaningOracle(PropertySeed(), 50), 50);
}

TEST(PropertyTest, LeastSquaresOracle) {
  const CheckResult r = CheckLeastSquaresOracle(PropertySeed(), 100);
  Expect(r, 100);
  EXPECT_LE(r.max_error, kOracleTolerance);
}

}  // namespace
}  // namespace attrinfer::testing
