#pragma once

#include <compare>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "attrinfer/clustering.h"
#include "attrinfer/features.h"
#include "attrinfer/policy.h"

namespace attrinfer {

// Number of top confident features: features ranked within num_high give High
// confidence, ranks (num_high, num_med] give Medium.
struct Ntcf {
  int num_high = 3;
  int num_med = 5;
};

struct PredictionConfig {
  Ntcf ntcf;
  // Throws ConfigError unless 1 <= num_high <= num_med.
  void Validate() const;
};

// Ordered so that larger means more confident.
enum class Confidence { kNei = 0, kMedium = 1, kHigh = 2 };
const char* ToString(Confidence c);

struct GroupTriple {
  int user_group = -1;
  int resource_group = -1;
  std::string action;

  friend auto operator<=>(const GroupTriple&, const GroupTriple&) = default;
  friend bool operator==(const GroupTriple&, const GroupTriple&) = default;
};

// Candidate values extracted from one ranked feature of one triple.
struct Candidate {
  ValueSet values;
  Confidence confidence = Confidence::kNei;
  GroupTriple triple;
  Feature feature;
  int rank = 0;  // 1-based
};

struct PredictedValue {
  std::string value;
  Confidence confidence = Confidence::kNei;
  int best_rank = 0;
};

struct Prediction {
  std::string object_id;
  Side side = Side::kUser;
  std::string attr;
  AttrKind kind = AttrKind::kSingle;
  // Sorted by value. Empty iff confidence == kNei; one entry for single-valued
  // attributes.
  std::vector<PredictedValue> values;
  Confidence confidence = Confidence::kNei;
  std::vector<Candidate> provenance;

  ValueSet Values() const;
};

// (group(u), group(r), a) for every entitlement in E0 involving the object.
std::set<GroupTriple> RelevantGroupTriples(Side side, const std::string& object_id,
                                           const EntitlementIndex& e0,
                                           const Clustering& clustering);

// Whether a ranked feature may supply values for `subject`. The feature must
// hold on every learning row labelled 1 (at least one), and
//  - have a positive coefficient, or be a single-valued `attr in {v}`
//    condition that holds on every learning row and on every group member
//    whose value is known (at least two);
//  - for conditions backed only by the coefficient, have at least two rows
//    labelled 1;
//  - for conditions, not be contradicted by a known value of any same-side
//    object that shares a counterpart with `subject` under the triple's action.
bool IsEvidence(const RankedFeature& entry, const RankedFeatures& ranked, Side side,
                const Object& subject, const GroupTriple& triple, const EntitlementIndex& e0,
                const Clustering& clustering, const ObjectModel& om);

// Values implied for attribute `attr` of `subject` by feature `f`.
//
// Conditions carry their constant. Constraints read the counterpart attribute
// of the counterpart-group objects the subject is entitled with under the
// triple's action; the values every such pair forces are returned (all
// elements for "must contain" relations, the common value for "must equal"
// relations). A relation that pins a single-valued attribute to more than one
// value, or only bounds a set from above, yields no values.
// Throws ContractViolation when `f` does not mention `attr` on `side`.
ValueSet PredictFromFeature(const Feature& f, Side side, const std::string& attr,
                            const Object& subject, const GroupTriple& triple,
                            const EntitlementIndex& e0, const Clustering& clustering,
                            const ObjectModel& om);

// Scans ranks 1..num_med of `ranked` for evidence features mentioning `attr`.
std::vector<Candidate> PredictMissingValues(const RankedFeatures& ranked, Side side,
                                            const std::string& attr, const Object& subject,
                                            const GroupTriple& triple, const EntitlementIndex& e0,
                                            const Clustering& clustering, const ObjectModel& om,
                                            const PredictionConfig& cfg);

// Keeps the highest confidence per distinct value. Single-valued attributes
// return one value (ties: best rank, then lexicographic); multi-valued ones
// return all values. No candidates gives NEI.
Prediction CombinePredictions(const std::string& object_id, Side side, const std::string& attr,
                              AttrKind kind, std::vector<Candidate> candidates);

// Imputes Missing cells of one object model. Learned rankings are cached per
// group triple, so the instance is tied to the model/E0/clustering it was built
// with. Thread-safe.
class Predictor {
 public:
  Predictor(const ObjectModel& om, const EntitlementIndex& e0, const Clustering& clustering,
            PredictionConfig cfg);

  // Precondition: the cell is Missing.
  Prediction Predict(Side side, const std::string& object_id, const std::string& attr);
  Prediction PredictUserAttr(const std::string& user, const std::string& attr) {
    return Predict(Side::kUser, user, attr);
  }
  Prediction PredictResourceAttr(const std::string& resource, const std::string& attr) {
    return Predict(Side::kResource, resource, attr);
  }

  // One prediction per Missing cell, ordered by (object id, attribute).
  std::vector<Prediction> PredictAll();

  // Ranked features for a triple, or nullopt when its learning data is empty.
  const std::optional<RankedFeatures>& Ranking(const GroupTriple& triple);

 private:
  const ObjectModel& om_;
  const EntitlementIndex& e0_;
  const Clustering& clustering_;
  PredictionConfig cfg_;
  std::mutex mu_;
  std::map<GroupTriple, std::optional<RankedFeatures>> cache_;
};

Prediction PredictMissingUserAttr(const std::string& user, const std::string& attr,
                                  const EntitlementSet& e0, const ObjectModel& om,
                                  const Clustering& clustering, const PredictionConfig& cfg);
Prediction PredictMissingResourceAttr(const std::string& resource, const std::string& attr,
                                      const EntitlementSet& e0, const ObjectModel& om,
                                      const Clustering& clustering, const PredictionConfig& cfg);
std::vector<Prediction> PredictAll(const ObjectModel& om, const EntitlementSet& e0,
                                   const Clustering& clustering, const PredictionConfig& cfg);

}  // namespace attrinfer
