#include "attrinfer/tools/report_io.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace attrinfer::tools {

using json = nlohmann::ordered_json;

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

json ValueJson(const AttrValue& v) {
  if (v.is_atomic()) return v.atomic();
  if (v.is_set()) return json(std::vector<std::string>(v.set().begin(), v.set().end()));
  if (v.is_missing()) return json{{"missing", true}};
  return nullptr;
}

json TripleJson(const GroupTriple& t) {
  return json{{"userGroup", t.user_group},
              {"resourceGroup", t.resource_group},
              {"action", t.action}};
}

json PredictionJson(const Prediction& p) {
  json values = json::array();
  for (const auto& v : p.values) {
    values.push_back(json{{"value", v.value},
                          {"confidence", ToString(v.confidence)},
                          {"rank", v.best_rank}});
  }
  json provenance = json::array();
  for (const auto& c : p.provenance) {
    provenance.push_back(json{{"triple", TripleJson(c.triple)},
                              {"rank", c.rank},
                              {"feature", c.feature.ToString()},
                              {"confidence", ToString(c.confidence)},
                              {"values", std::vector<std::string>(c.values.begin(),
                                                                  c.values.end())}});
  }
  return json{{"object", p.object_id},
              {"side", ToString(p.side)},
              {"attr", p.attr},
              {"kind", ToString(p.kind)},
              {"confidence", ToString(p.confidence)},
              {"values", std::move(values)},
              {"provenance", std::move(provenance)}};
}

}  // namespace

std::string PercentLabel(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", fraction * 100.0);
  return buf;
}

std::string EvalReportsCsv(const std::vector<EvalReport>& reports, bool timing) {
  std::ostringstream out;
  std::vector<double> header_percents;
  if (!reports.empty()) {
    for (const auto& s : reports.front().settings) header_percents.push_back(s.percent);
  }
  out << "dataset,objs,attrs,e0,acc";
  for (double p : header_percents) {
    const std::string label = PercentLabel(p);
    out << ",cov_" << label << ",sd_" << label;
    if (timing) out << ",time_" << label;
  }
  out << "\n";
  for (const auto& r : reports) {
    out << r.dataset << "," << r.objects << "," << r.attribute_cells << "," << r.entitlements
        << "," << Fixed(r.accuracy(), 4);
    for (const auto& s : r.settings) {
      out << "," << Fixed(s.coverage_mean, 4) << "," << Fixed(s.coverage_stddev, 4);
      if (timing) out << "," << Fixed(s.elapsed_mean, 4);
    }
    out << "\n";
  }
  return out.str();
}

std::string EvalReportsJson(const std::vector<EvalReport>& reports, const RunConfig& cfg,
                            bool timing) {
  json weights = json::object();
  for (const auto& [attr, w] : cfg.clustering.weights) weights[attr] = w;
  json doc;
  doc["config"] = json{{"weights", std::move(weights)},
                       {"st", cfg.clustering.st},
                       {"ntcf", {cfg.prediction.ntcf.num_high, cfg.prediction.ntcf.num_med}},
                       {"seed", cfg.seed},
                       {"percents", cfg.percents},
                       {"runs", cfg.runs},
                       {"multiRule", ToString(cfg.multi_rule)}};
  json list = json::array();
  for (const auto& r : reports) {
    json settings = json::array();
    for (const auto& s : r.settings) {
      json runs = json::array();
      for (const auto& run : s.runs) {
        json cells = json::array();
        for (const auto& c : run.cells) {
          const ValueSet predicted = c.prediction.Values();
          cells.push_back(json{{"side", ToString(c.removed.cell.side)},
                               {"object", c.removed.cell.object_id},
                               {"attr", c.removed.cell.attr},
                               {"original", ValueJson(c.removed.original)},
                               {"predicted", std::vector<std::string>(predicted.begin(),
                                                                      predicted.end())},
                               {"confidence", ToString(c.prediction.confidence)},
                               {"verdict", ToString(c.verdict)}});
        }
        json jr{{"run", run.run},
                {"seed", run.seed},
                {"removed", run.removed},
                {"predicted", run.predicted},
                {"correct", run.correct},
                {"coverage", run.coverage},
                {"accuracy", run.accuracy},
                {"zeroDenominator", run.zero_denominator}};
        if (timing) jr["elapsedSeconds"] = run.elapsed_seconds;
        jr["cells"] = std::move(cells);
        runs.push_back(std::move(jr));
      }
      json js{{"percent", s.percent * 100.0},
              {"coverageMean", s.coverage_mean},
              {"coverageStddev", s.coverage_stddev},
              {"accuracyMean", s.accuracy_mean},
              {"wrong", s.wrong}};
      if (timing) js["elapsedMean"] = s.elapsed_mean;
      js["runs"] = std::move(runs);
      settings.push_back(std::move(js));
    }
    list.push_back(json{{"dataset", r.dataset},
                        {"objects", r.objects},
                        {"attributeCells", r.attribute_cells},
                        {"entitlements", r.entitlements},
                        {"accuracy", r.accuracy()},
                        {"settings", std::move(settings)}});
  }
  doc["reports"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string PredictionsJson(const std::vector<Prediction>& predictions) {
  json out = json::array();
  for (const auto& p : predictions) out.push_back(PredictionJson(p));
  return out.dump(2) + "\n";
}

std::string ClusteringJson(const Clustering& clustering, const ObjectModel& om,
                           const ClusteringConfig& cfg) {
  json groups = json::array();
  for (Side side : {Side::kUser, Side::kResource}) {
    for (const auto& g : clustering.groups(side)) {
      const std::vector<double> means = MemberMeanSimilarities(g, om, cfg);
      double sum = 0.0;
      for (double m : means) sum += m;
      json stats{{"min", *std::min_element(means.begin(), means.end())},
                 {"mean", sum / static_cast<double>(means.size())},
                 {"max", *std::max_element(means.begin(), means.end())}};
      groups.push_back(json{{"id", g.id},
                            {"side", ToString(g.side)},
                            {"signature", std::vector<std::string>(g.signature.begin(),
                                                                   g.signature.end())},
                            {"members", g.members},
                            {"memberMeanSimilarity", means},
                            {"meanSimilarity", std::move(stats)}});
    }
  }
  return json{{"st", cfg.st}, {"groups", std::move(groups)}}.dump(2) + "\n";
}

std::string RankingJson(const GroupTriple& triple, const std::optional<RankedFeatures>& ranked,
                        const Ntcf& ntcf) {
  json doc{{"triple", TripleJson(triple)}};
  json features = json::array();
  if (ranked) {
    doc["rows"] = ranked->rows;
    doc["positives"] = ranked->positives;
    doc["intercept"] = ranked->intercept;
    int rank = 0;
    for (const auto& e : ranked->entries) {
      ++rank;
      const char* gate = rank <= ntcf.num_high  ? "High"
                         : rank <= ntcf.num_med ? "Medium"
                                                : "NEI";
      features.push_back(json{{"rank", rank},
                              {"feature", e.feature.ToString()},
                              {"coefficient", e.coefficient},
                              {"support", e.support},
                              {"positiveSupport", e.positive_support},
                              {"gate", gate}});
    }
  } else {
    doc["rows"] = 0;
  }
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

}  // namespace attrinfer::tools
