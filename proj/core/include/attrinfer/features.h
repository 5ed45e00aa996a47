#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "attrinfer/clustering.h"
#include "attrinfer/least_squares.h"
#include "attrinfer/policy.h"

namespace attrinfer {

enum class FeatureKind { kUserCondition, kResourceCondition, kConstraint };

// An atomic condition on the user, an atomic condition on the resource, or an
// atomic constraint between them. The defaulted ordering (kind, then atom) is
// the canonical feature order.
struct Feature {
  FeatureKind kind = FeatureKind::kUserCondition;
  AtomicCondition condition;    // condition kinds only
  AtomicConstraint constraint;  // kConstraint only

  static Feature UserCondition(AtomicCondition c);
  static Feature ResourceCondition(AtomicCondition c);
  static Feature Constraint(AtomicConstraint c);

  bool is_condition() const { return kind != FeatureKind::kConstraint; }
  // Side a condition feature applies to. Precondition: is_condition().
  Side condition_side() const;
  // True when the feature reads attribute `attr` of the given side.
  bool Mentions(Side side, const std::string& attr) const;
  std::string ToString() const;

  friend auto operator<=>(const Feature&, const Feature&) = default;
  friend bool operator==(const Feature&, const Feature&) = default;
};

struct LearningData {
  std::vector<Feature> features;
  BinaryMatrix bits;                // one row per (user, resource) pair
  std::vector<double> labels;       // 1 iff <u, r, a> in E0
  std::vector<std::pair<std::string, std::string>> pairs;

  size_t rows() const { return bits.rows(); }
};

// Coefficients closer than this are treated as tied when ranking.
inline constexpr double kCoefficientResolution = 1e-6;
int64_t QuantizeCoefficient(double c);

struct RankedFeature {
  Feature feature;
  double coefficient = 0.0;
  // Number of learning rows on which the feature holds, overall and among
  // rows labelled 1.
  size_t support = 0;
  size_t positive_support = 0;
};

struct RankedFeatures {
  // Sorted by coefficient (quantized) descending, then support descending, then
  // canonical feature order.
  std::vector<RankedFeature> entries;
  double intercept = 0.0;
  size_t rows = 0;
  // Rows labelled 1.
  size_t positives = 0;
};

// Candidate features for a (user group, resource group) pair, in canonical
// order: user conditions, resource conditions, constraints, each sorted.
// Conditions use the values observed among group members; constraints cover
// every (user attr, resource attr) pair with its kind-compatible operator.
std::vector<Feature> EnumerateFeatures(const Group& user_group, const Group& resource_group,
                                       const ObjectModel& om);

// Rows for every pair of members without Missing cells. Returns nullopt when
// no such pair exists.
std::optional<LearningData> BuildLearningData(const Group& user_group,
                                              const Group& resource_group,
                                              const std::string& action,
                                              const EntitlementIndex& e0,
                                              const ObjectModel& om);

// Fits the linear model and ranks features by signed coefficient.
// Throws ContractViolation on empty learning data.
RankedFeatures LearnImportantFeatures(const LearningData& data);

}  // namespace attrinfer
