#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attrinfer/clustering.h"
#include "attrinfer/evaluation.h"
#include "attrinfer/prediction.h"

namespace attrinfer::tools {

// Settings shared by every subcommand. Defaults are w = 1.0, ST = 0.25 and
// NTCF <3, 5>.
struct RunConfig {
  ClusteringConfig clustering;
  PredictionConfig prediction;
  uint64_t seed = 1;
  // 0 picks the hardware concurrency.
  int jobs = 0;
  // Removal percents in percent units (3 means 3%).
  std::vector<double> percents = {3, 6, 9};
  int runs = 5;
  MultiValueRule multi_rule = MultiValueRule::kSubset;

  // Throws ConfigError.
  void Validate() const;
  EvalConfig ToEvalConfig() const;
};

// Values set on the command line; unset fields leave the config untouched.
struct ConfigOverrides {
  std::map<std::string, double> weights;
  std::optional<double> st;
  std::optional<Ntcf> ntcf;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::vector<double>> percents;
  std::optional<int> runs;
  std::optional<MultiValueRule> multi_rule;
};

// Reads a JSON config document. Recognized keys: weights (object), st, ntcf
// ([numHigh, numMed]), seed, jobs, percents, runs, multiRule. Unknown keys and
// ill-typed values throw ConfigError.
void ApplyConfigJson(const std::string& text, RunConfig* cfg);
void ApplyOverrides(const ConfigOverrides& o, RunConfig* cfg);

// "attr=weight".
std::pair<std::string, double> ParseWeight(const std::string& spec);
// "numHigh,numMed".
Ntcf ParseNtcf(const std::string& spec);
// Comma-separated numbers.
std::vector<double> ParseNumberList(const std::string& spec);
// Comma-separated positive integers, with "a-b" ranges.
std::vector<int> ParseIntList(const std::string& spec);

}  // namespace attrinfer::tools
