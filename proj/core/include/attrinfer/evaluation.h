#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "attrinfer/clustering.h"
#include "attrinfer/policy.h"
#include "attrinfer/prediction.h"

namespace attrinfer {

struct CellRef {
  Side side = Side::kUser;
  std::string object_id;
  std::string attr;

  friend auto operator<=>(const CellRef&, const CellRef&) = default;
  friend bool operator==(const CellRef&, const CellRef&) = default;
};

struct RemovedCell {
  CellRef cell;
  AttrValue original;
};

struct RemovalPlan {
  double percent = 0.0;
  uint64_t seed = 0;
  // Number of cells that were eligible for removal.
  size_t eligible = 0;
  // In selection order.
  std::vector<RemovedCell> removed;
};

// Non-Null, non-Missing cells other than `id`, users before resources, objects
// in model order, attributes by name.
std::vector<CellRef> EligibleCells(const ObjectModel& om);

// round(percent * eligible). Models with at most this many eligible cells get
// at least one removal for any positive percent.
inline constexpr size_t kForcedRemovalLimit = 100;
size_t RemovalCount(size_t eligible, double percent);

// Picks cells uniformly at random without replacement. Throws ConfigError
// unless 0 <= percent < 1.
RemovalPlan PlanRemoval(const ObjectModel& om, double percent, uint64_t seed);
// Copy of `om` with the planned cells set to Missing.
ObjectModel ApplyRemoval(const ObjectModel& om, const RemovalPlan& plan);
// Writes the recorded originals back.
ObjectModel RestoreRemoval(const ObjectModel& om, const RemovalPlan& plan);
std::pair<ObjectModel, RemovalPlan> RemoveAttributes(const ObjectModel& om, double percent,
                                                     uint64_t seed);

enum class Verdict { kCorrect, kWrong, kNei };
const char* ToString(Verdict v);

// How a multi-valued prediction is compared with the original set: kSubset
// accepts any non-empty subset, kExact demands equality.
enum class MultiValueRule { kSubset, kExact };
const char* ToString(MultiValueRule r);
MultiValueRule ParseMultiValueRule(const std::string& name);

Verdict ScorePrediction(const Prediction& pred, const AttrValue& original,
                        MultiValueRule rule = MultiValueRule::kSubset);

struct EvalConfig {
  ClusteringConfig clustering;
  PredictionConfig prediction;
  std::vector<double> percents = {0.03, 0.06, 0.09};
  int runs = 5;
  uint64_t seed = 1;
  // Worker threads for independent runs; 0 picks the hardware concurrency.
  int jobs = 1;
  MultiValueRule multi_rule = MultiValueRule::kSubset;
  bool keep_cells = true;

  void Validate() const;
};

struct CellResult {
  RemovedCell removed;
  Prediction prediction;
  Verdict verdict = Verdict::kNei;
};

struct RunReport {
  double percent = 0.0;
  int run = 0;
  uint64_t seed = 0;
  size_t removed = 0;
  size_t predicted = 0;
  size_t correct = 0;
  // predicted / removed; 1.0 with zero_denominator set when nothing was removed.
  double coverage = 1.0;
  // correct / predicted; 1.0 when nothing was predicted.
  double accuracy = 1.0;
  bool zero_denominator = false;
  double elapsed_seconds = 0.0;
  std::vector<CellResult> cells;
};

struct SettingReport {
  double percent = 0.0;
  std::vector<RunReport> runs;
  double coverage_mean = 0.0;
  // Sample standard deviation over runs (0 for a single run).
  double coverage_stddev = 0.0;
  double accuracy_mean = 0.0;
  double elapsed_mean = 0.0;
  size_t wrong = 0;
};

struct EvalReport {
  std::string dataset;
  size_t objects = 0;
  size_t attribute_cells = 0;
  size_t entitlements = 0;
  std::vector<SettingReport> settings;

  // Mean accuracy over every run of every setting.
  double accuracy() const;
};

// Seed of run `run` under percent index `setting`.
uint64_t RunSeed(uint64_t base, size_t setting, int run);

// One removal + prediction pass over a complete policy whose E0 is `e0`.
RunReport EvaluateRun(const Policy& policy, const EntitlementSet& e0, double percent,
                      uint64_t seed, const EvalConfig& cfg);

// Derives E0 from the complete policy, then runs cfg.runs removals per percent.
// Results are ordered by (percent, run) regardless of cfg.jobs.
EvalReport Evaluate(const Policy& policy, const EvalConfig& cfg, const std::string& dataset);

}  // namespace attrinfer
