#include "attrinfer/evaluation.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "attrinfer/errors.h"
#include "attrinfer/random.h"

namespace attrinfer {

std::vector<CellRef> EligibleCells(const ObjectModel& om) {
  std::vector<CellRef> out;
  for (Side side : {Side::kUser, Side::kResource}) {
    for (const auto& o : om.objects(side)) {
      for (const auto& [name, value] : o.attrs) {
        if (name == "id" || !value.is_known()) continue;
        out.push_back(CellRef{side, o.id, name});
      }
    }
  }
  return out;
}

size_t RemovalCount(size_t eligible, double percent) {
  auto k = static_cast<size_t>(std::llround(percent * static_cast<double>(eligible)));
  if (k == 0 && percent > 0.0 && eligible > 0 && eligible <= kForcedRemovalLimit) k = 1;
  return std::min(k, eligible);
}

RemovalPlan PlanRemoval(const ObjectModel& om, double percent, uint64_t seed) {
  if (!(percent >= 0.0 && percent < 1.0)) {
    throw ConfigError("removal percent must lie in [0, 1)");
  }
  const auto cells = EligibleCells(om);
  RemovalPlan plan;
  plan.percent = percent;
  plan.seed = seed;
  plan.eligible = cells.size();
  Rng rng(seed);
  for (size_t i : rng.Sample(cells.size(), RemovalCount(cells.size(), percent))) {
    const CellRef& c = cells[i];
    plan.removed.push_back(RemovedCell{c, om.Find(c.side, c.object_id)->Get(c.attr)});
  }
  return plan;
}

ObjectModel ApplyRemoval(const ObjectModel& om, const RemovalPlan& plan) {
  ObjectModel out = om;
  for (const auto& r : plan.removed) out.SetCell(r.cell.object_id, r.cell.attr, AttrValue::Missing());
  return out;
}

ObjectModel RestoreRemoval(const ObjectModel& om, const RemovalPlan& plan) {
  ObjectModel out = om;
  for (const auto& r : plan.removed) out.SetCell(r.cell.object_id, r.cell.attr, r.original);
  return out;
}

std::pair<ObjectModel, RemovalPlan> RemoveAttributes(const ObjectModel& om, double percent,
                                                     uint64_t seed) {
  RemovalPlan plan = PlanRemoval(om, percent, seed);
  ObjectModel removed = ApplyRemoval(om, plan);
  return {std::move(removed), std::move(plan)};
}

const char* ToString(Verdict v) {
  switch (v) {
    case Verdict::kCorrect:
      return "correct";
    case Verdict::kWrong:
      return "wrong";
    case Verdict::kNei:
      return "nei";
  }
  return "?";
}

const char* ToString(MultiValueRule r) { return r == MultiValueRule::kSubset ? "subset" : "exact"; }

MultiValueRule ParseMultiValueRule(const std::string& name) {
  if (name == "subset") return MultiValueRule::kSubset;
  if (name == "exact") return MultiValueRule::kExact;
  throw ConfigError("unknown multi-valued scoring rule '" + name + "' (expected subset or exact)");
}

Verdict ScorePrediction(const Prediction& pred, const AttrValue& original, MultiValueRule rule) {
  if (pred.confidence == Confidence::kNei || pred.values.empty()) return Verdict::kNei;
  if (!original.is_known()) throw ContractViolation("scored cell has no known original value");
  const ValueSet predicted = pred.Values();
  const ValueSet truth = original.AsSet();
  if (pred.kind == AttrKind::kSingle) {
    return predicted.size() == 1 && truth.size() == 1 && *predicted.begin() == *truth.begin()
               ? Verdict::kCorrect
               : Verdict::kWrong;
  }
  if (rule == MultiValueRule::kExact) return predicted == truth ? Verdict::kCorrect : Verdict::kWrong;
  return std::includes(truth.begin(), truth.end(), predicted.begin(), predicted.end())
             ? Verdict::kCorrect
             : Verdict::kWrong;
}

void EvalConfig::Validate() const {
  clustering.Validate();
  prediction.Validate();
  if (runs < 1) throw ConfigError("runs must be positive");
  if (jobs < 0) throw ConfigError("jobs must be non-negative");
  if (percents.empty()) throw ConfigError("at least one removal percent is required");
  for (double p : percents) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("removal percents must lie in (0, 1)");
  }
}

double EvalReport::accuracy() const {
  double sum = 0.0;
  size_t n = 0;
  for (const auto& s : settings) {
    for (const auto& r : s.runs) {
      sum += r.accuracy;
      ++n;
    }
  }
  return n == 0 ? 1.0 : sum / static_cast<double>(n);
}

uint64_t RunSeed(uint64_t base, size_t setting, int run) {
  return DeriveSeed(base, (static_cast<uint64_t>(setting) << 32) | static_cast<uint32_t>(run));
}

RunReport EvaluateRun(const Policy& policy, const EntitlementSet& e0, double percent,
                      uint64_t seed, const EvalConfig& cfg) {
  RunReport report;
  report.percent = percent;
  report.seed = seed;

  const auto start = std::chrono::steady_clock::now();
  auto [om, plan] = RemoveAttributes(policy.model, percent, seed);
  const Clustering clustering = Cluster(om, cfg.clustering);
  const EntitlementIndex index(e0);
  Predictor predictor(om, index, clustering, cfg.prediction);
  std::vector<CellResult> cells;
  cells.reserve(plan.removed.size());
  for (auto& removed : plan.removed) {
    Prediction pred = predictor.Predict(removed.cell.side, removed.cell.object_id, removed.cell.attr);
    const Verdict v = ScorePrediction(pred, removed.original, cfg.multi_rule);
    cells.push_back(CellResult{std::move(removed), std::move(pred), v});
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::sort(cells.begin(), cells.end(), [](const CellResult& a, const CellResult& b) {
    return a.removed.cell < b.removed.cell;
  });
  report.removed = cells.size();
  for (const auto& c : cells) {
    if (c.verdict != Verdict::kNei) ++report.predicted;
    if (c.verdict == Verdict::kCorrect) ++report.correct;
  }
  if (report.removed == 0) {
    report.zero_denominator = true;
  } else {
    report.coverage = static_cast<double>(report.predicted) / static_cast<double>(report.removed);
  }
  if (report.predicted > 0) {
    report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.predicted);
  }
  if (cfg.keep_cells) report.cells = std::move(cells);
  return report;
}

namespace {

void Summarize(SettingReport& s) {
  const double n = static_cast<double>(s.runs.size());
  double cov = 0.0;
  double acc = 0.0;
  double time = 0.0;
  for (const auto& r : s.runs) {
    cov += r.coverage;
    acc += r.accuracy;
    time += r.elapsed_seconds;
    s.wrong += r.predicted - r.correct;
  }
  s.coverage_mean = cov / n;
  s.accuracy_mean = acc / n;
  s.elapsed_mean = time / n;
  if (s.runs.size() > 1) {
    double ss = 0.0;
    for (const auto& r : s.runs) ss += (r.coverage - s.coverage_mean) * (r.coverage - s.coverage_mean);
    s.coverage_stddev = std::sqrt(ss / (n - 1.0));
  }
}

}  // namespace

EvalReport Evaluate(const Policy& policy, const EvalConfig& cfg, const std::string& dataset) {
  cfg.Validate();
  if (policy.model.MissingCount() != 0) {
    throw ContractViolation("evaluation needs a complete policy");
  }
  const EntitlementSet e0 = PolicyMeaning(policy);

  EvalReport report;
  report.dataset = dataset;
  report.objects = policy.model.users().size() + policy.model.resources().size();
  report.attribute_cells = EligibleCells(policy.model).size();
  report.entitlements = e0.size();

  const size_t runs = static_cast<size_t>(cfg.runs);
  const size_t total = cfg.percents.size() * runs;
  std::vector<RunReport> results(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < total; i = next++) {
      const size_t setting = i / runs;
      const int run = static_cast<int>(i % runs);
      try {
        results[i] = EvaluateRun(policy, e0, cfg.percents[setting], RunSeed(cfg.seed, setting, run),
                                 cfg);
        results[i].run = run;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  size_t jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                              : static_cast<size_t>(cfg.jobs);
  jobs = std::min(jobs, total);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (size_t s = 0; s < cfg.percents.size(); ++s) {
    SettingReport setting;
    setting.percent = cfg.percents[s];
    for (size_t r = 0; r < runs; ++r) setting.runs.push_back(std::move(results[s * runs + r]));
    Summarize(setting);
    report.settings.push_back(std::move(setting));
  }
  return report;
}

}  // namespace attrinfer
