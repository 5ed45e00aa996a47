// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "attrinfer/clustering.h"
#include "attrinfer/evaluation.h"
#include "attrinfer/features.h"
#include "attrinfer/generator.h"
#include "attrinfer/prediction.h"
#include "attrinfer/tools/cli.h"
#include "support/property_checks.h"
#include "support/test_support.h"

namespace attrinfer {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class Criteria {
 public:
  void Report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
    if (!ok) ++failed_;
  }
  int failed() const { return failed_; }

 private:
  int failed_ = 0;
};

std::vector<std::vector<std::string>> MemberLists(const std::vector<Group>& groups) {
  std::vector<std::vector<std::string>> out;
  for (const auto& g : groups) out.push_back(g.members);
  return out;
}

void GoldenFixture(Criteria* c) {
  std::ostringstream why;
  bool ok = true;
  try {
    const auto start = Clock::now();
    const Policy p = testing::LoadExamplePolicy();
    const EntitlementSet e0 = testing::LoadExampleEntitlements(p);
    const ClusteringConfig ccfg;
    const Clustering clustering = Cluster(p.model, ccfg);

    const bool groups_ok =
        MemberLists(clustering.user_groups()) ==
            std::vector<std::vector<std::string>>{{"csFac1", "csFac2", "eeFac1", "eeFac2"},
                                                  {"csStu1", "eeStu1"}} &&
        MemberLists(clustering.resource_groups()) ==
            std::vector<std::vector<std::string>>{
                {"cs101gb", "cs601gb", "ee101gb", "ee601gb", "ee602gb"},
                {"csStu1trans", "eeStu1trans"}};
    if (!groups_ok) why << "groups differ; ";

    const EntitlementIndex index(e0);
    Predictor predictor(p.model, index, clustering, PredictionConfig{});
    const GroupTriple triple{clustering.GroupOf("csFac1").id, clustering.GroupOf("cs101gb").id,
                             "modify"};
    const auto& ranked = predictor.Ranking(triple);
    bool top3_ok = ranked.has_value() && ranked->entries.size() >= 3;
    if (top3_ok) {
      const std::vector<Feature> want = {
          Feature::UserCondition(AtomicCondition::In("position", {"faculty"})),
          Feature::ResourceCondition(AtomicCondition::In("type", {"gradebook"})),
          Feature::Constraint({"coursesTaught", ConsOp::kContains, "course"})};
      for (const auto& f : want) {
        bool found = false;
        for (int i = 0; i < 3; ++i) found = found || ranked->entries[i].feature == f;
        top3_ok = top3_ok && found;
      }
    }
    if (!top3_ok) why << "top-3 features differ; ";

    const Prediction taught = predictor.PredictUserAttr("csFac1", "coursesTaught");
    const bool taught_ok =
        taught.confidence == Confidence::kHigh && taught.Values() == ValueSet{"cs101"};
    if (!taught_ok) why << "coursesTaught prediction differs; ";
    const Prediction dept = predictor.PredictUserAttr("csFac1", "department");
    const bool dept_ok = dept.confidence == Confidence::kNei && dept.values.empty();
    if (!dept_ok) why << "department is not NEI; ";

    const double elapsed = SecondsSince(start);
    const bool fast = elapsed < 1.0;
    if (!fast) why << "took " << elapsed << " s; ";
    ok = groups_ok && top3_ok && taught_ok && dept_ok && fast;
    if (ok) {
      why << "4 groups, rule atoms in top 3, coursesTaught={cs101} High, department NEI in "
          << elapsed * 1000.0 << " ms";
    }
  } catch (const std::exception& e) {
    ok = false;
    why << "exception: " << e.what();
  }
  c->Report("golden-fixture", ok, why.str());
}

struct MatrixResult {
  bool ran = false;
  std::string error;
  double seconds = 0.0;
  size_t max_objects = 0;
  size_t wrong = 0;
  double min_accuracy = 1.0;
  // Lowest per-setting coverage mean and highest std-dev, per template.
  double min_coverage[2] = {1.0, 1.0};
  double max_stddev[2] = {0.0, 0.0};
};

MatrixResult RunMatrix() {
  MatrixResult m;
  const auto start = Clock::now();
  try {
    for (Template t : {Template::kUniversity, Template::kProjMgmt}) {
      const int ti = t == Template::kUniversity ? 0 : 1;
      for (int scale = 1; scale <= 3; ++scale) {
        GenSpec spec;
        spec.tmpl = t;
        spec.scale = scale;
        const GeneratedPolicy g = Generate(spec);
        m.max_objects = std::max(m.max_objects, g.objects());
        EvalConfig cfg;
        cfg.jobs = 0;
        cfg.keep_cells = false;
        const EvalReport r =
            Evaluate(g.policy, cfg, std::string(ToString(t)) + "-" + std::to_string(scale));
        for (const auto& s : r.settings) {
          m.wrong += s.wrong;
          for (const auto& run : s.runs) m.min_accuracy = std::min(m.min_accuracy, run.accuracy);
          m.min_coverage[ti] = std::min(m.min_coverage[ti], s.coverage_mean);
          m.max_stddev[ti] = std::max(m.max_stddev[ti], s.coverage_stddev);
        }
      }
    }
    m.ran = true;
  } catch (const std::exception& e) {
    m.error = e.what();
  }
  m.seconds = SecondsSince(start);
  return m;
}

void AccuracyReproduction(const MatrixResult& m, Criteria* c) {
  std::ostringstream why;
  if (!m.ran) {
    c->Report("accuracy-matrix", false, "exception: " + m.error);
    return;
  }
  const bool ok = m.wrong == 0 && m.min_accuracy == 1.0 && m.max_objects <= 600 &&
                  m.seconds < 300.0;
  why << "2 templates x scales 1-3 x {3,6,9}% x 5 runs: wrong=" << m.wrong
      << " min acc=" << m.min_accuracy << " max objects=" << m.max_objects << " time="
      << m.seconds << " s";
  c->Report("accuracy-matrix", ok, why.str());
}

void CoverageBand(const MatrixResult& m, Criteria* c) {
  if (!m.ran) {
    c->Report("coverage-band", false, "exception: " + m.error);
    return;
  }
  const bool ok = m.min_coverage[0] >= 0.70 && m.min_coverage[1] >= 0.55 &&
                  m.max_stddev[0] <= 0.06 && m.max_stddev[1] <= 0.06;
  std::ostringstream why;
  why << "university min cov=" << m.min_coverage[0] << " (>= 0.70) max sd=" << m.max_stddev[0]
      << "; projmgmt min cov=" << m.min_coverage[1] << " (>= 0.55) max sd=" << m.max_stddev[1]
      << " (<= 0.06)";
  c->Report("coverage-band", ok, why.str());
}

void OracleEquivalence(Criteria* c) {
  const testing::CheckResult meaning = testing::CheckRuleMeaningOracle(1, 50);
  const testing::CheckResult ls = testing::CheckLeastSquaresOracle(1, 100);
  const bool ok = meaning.ok() && meaning.cases == 50 && ls.ok() && ls.cases == 100 &&
                  ls.max_error <= testing::kOracleTolerance;
  std::ostringstream why;
  why << "rule meaning " << meaning.cases - meaning.failures << "/" << meaning.cases
      << " identical; least squares " << ls.cases - ls.failures << "/" << ls.cases
      << " max coefficient error " << ls.max_error;
  if (!meaning.first_failure.empty()) why << "; " << meaning.first_failure;
  if (!ls.first_failure.empty()) why << "; " << ls.first_failure;
  c->Report("oracle-equivalence", ok, why.str());
}

void PropertySuites(Criteria* c) {
  const uint64_t seeds[] = {11, 2024, 987654321};
  bool ok = true;
  size_t cases = 0;
  std::string first;
  for (uint64_t seed : seeds) {
    const testing::CheckResult results[] = {
        testing::CheckSimilarity(seed, 1000),       testing::CheckClustering(seed, 500),
        testing::CheckNtcfMonotonicity(seed, 200),  testing::CheckRemovalRoundTrip(seed, 200)};
    const size_t expected[] = {1000, 500, 200, 200};
    for (size_t i = 0; i < 4; ++i) {
      cases += results[i].cases;
      if (!results[i].ok() || results[i].cases != expected[i]) {
        ok = false;
        if (first.empty()) first = "seed " + std::to_string(seed) + ": " + results[i].first_failure;
      }
    }
  }
  std::ostringstream why;
  why << cases << " cases over seeds 11, 2024, 987654321";
  if (!first.empty()) why << "; " << first;
  c->Report("property-suites", ok, why.str());
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"attrinfer"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = tools::RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void Determinism(Criteria* c) {
  const auto dir = std::filesystem::temp_directory_path() / "attrinfer_acceptance";
  std::filesystem::create_directories(dir);
  const auto run = [&](const std::string& tag, const std::string& jobs) {
    const auto json = (dir / (tag + ".json")).string();
    CliRun r = Cli({"--seed", "3", "--runs", "3", "--percents", "3,9", "--jobs", jobs,
                    "evaluate", "--template", "university,projmgmt", "--scale", "1",
                    "--no-timing", "--json", json});
    r.out += "\n--json--\n" + Slurp(json);
    return r;
  };
  const CliRun a = run("a", "1");
  const CliRun b = run("b", "1");
  const CliRun p = run("p", "3");
  std::filesystem::remove_all(dir);
  const bool ran = a.code == 0 && b.code == 0 && p.code == 0;
  const bool ok = ran && a.out == b.out && a.out == p.out && a.out.size() > 100;
  std::ostringstream why;
  if (!ran) {
    why << "evaluate failed: " << a.err << b.err << p.err;
  } else {
    why << "repeated evaluate CSV+JSON (" << a.out.size() << " bytes) "
        << (a.out == b.out ? "identical" : "differ") << "; --jobs 1 vs 3 "
        << (a.out == p.out ? "identical" : "differ");
  }
  c->Report("determinism", ok, why.str());
}

}  // namespace
}  // namespace attrinfer

int main() {
  attrinfer::Criteria criteria;
  attrinfer::GoldenFixture(&criteria);
  const attrinfer::MatrixResult matrix = attrinfer::RunMatrix();
  attrinfer::AccuracyReproduction(matrix, &criteria);
  attrinfer::CoverageBand(matrix, &criteria);
  attrinfer::OracleEquivalence(&criteria);
  attrinfer::PropertySuites(&criteria);
  attrinfer::Determinism(&criteria);
  std::cout << (criteria.failed() == 0 ? "ALL PASS" : "FAILURES: " +
                                                           std::to_string(criteria.failed()))
            << std::endl;
  return criteria.failed() == 0 ? 0 : 1;
}
