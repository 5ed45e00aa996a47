#pragma once

#include <optional>
#include <string>
#include <vector>

#include "attrinfer/clustering.h"
#include "attrinfer/evaluation.h"
#include "attrinfer/features.h"
#include "attrinfer/prediction.h"
#include "attrinfer/tools/run_config.h"

namespace attrinfer::tools {

// Output encoders. All output is a pure function of the arguments; timing
// columns and fields are left out when `timing` is false.

// One row per report: dataset, objs, attrs, e0, acc, then cov_P, sd_P, time_P
// for each removal percent P.
std::string EvalReportsCsv(const std::vector<EvalReport>& reports, bool timing);
// Full detail down to individual cells, plus the effective configuration.
std::string EvalReportsJson(const std::vector<EvalReport>& reports, const RunConfig& cfg,
                            bool timing);

std::string PredictionsJson(const std::vector<Prediction>& predictions);

// Groups with signature, members and member mean similarity statistics.
std::string ClusteringJson(const Clustering& clustering, const ObjectModel& om,
                           const ClusteringConfig& cfg);

std::string RankingJson(const GroupTriple& triple, const std::optional<RankedFeatures>& ranked,
                        const Ntcf& ntcf);

// "3" for 0.03, "2.5" for 0.025.
std::string PercentLabel(double fraction);

}  // namespace attrinfer::tools
