#include "attrinfer/tools/cli.h"

#include <exception>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "attrinfer/clustering.h"
#include "attrinfer/errors.h"
#include "attrinfer/evaluation.h"
#include "attrinfer/features.h"
#include "attrinfer/generator.h"
#include "attrinfer/policy.h"
#include "attrinfer/policy_io.h"
#include "attrinfer/prediction.h"
#include "attrinfer/tools/report_io.h"
#include "attrinfer/tools/run_config.h"

#ifndef ATTRINFER_VERSION
#define ATTRINFER_VERSION "0.0.0"
#endif

namespace attrinfer::tools {

namespace {

// Raw flag values, applied to the RunConfig only when given.
struct GlobalFlags {
  std::string config_path;
  std::vector<std::string> weights;
  double st = 0.0;
  std::string ntcf;
  uint64_t seed = 0;
  int jobs = 0;
  std::string percents;
  int runs = 0;
  std::string multi_rule;

  CLI::Option* st_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* runs_opt = nullptr;
};

void AddGlobalFlags(CLI::App& app, GlobalFlags& f) {
  app.add_option("--config", f.config_path, "JSON config file (flags take precedence)")
      ->check(CLI::ExistingFile);
  app.add_option("--weights", f.weights, "Attribute weight attr=w (repeatable, default 1.0)")
      ->delimiter(',');
  f.st_opt = app.add_option("--st", f.st, "Similarity threshold (default 0.25)");
  app.add_option("--ntcf", f.ntcf, "NTCF gates numHigh,numMed (default 3,5)");
  f.seed_opt = app.add_option("--seed", f.seed, "Random seed (default 1)");
  f.jobs_opt = app.add_option("--jobs", f.jobs, "Worker threads for evaluation (0 = all cores)");
  app.add_option("--percents", f.percents, "Removal percents, e.g. 3,6,9");
  f.runs_opt = app.add_option("--runs", f.runs, "Runs per removal percent (default 5)");
  app.add_option("--multi-rule", f.multi_rule, "Multi-valued scoring: subset or exact");
}

RunConfig ResolveConfig(const GlobalFlags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) ApplyConfigJson(ReadFile(f.config_path), &cfg);
  ConfigOverrides o;
  for (const auto& w : f.weights) {
    auto [attr, weight] = ParseWeight(w);
    o.weights[attr] = weight;
  }
  if (f.st_opt->count() > 0) o.st = f.st;
  if (!f.ntcf.empty()) o.ntcf = ParseNtcf(f.ntcf);
  if (f.seed_opt->count() > 0) o.seed = f.seed;
  if (f.jobs_opt->count() > 0) o.jobs = f.jobs;
  if (!f.percents.empty()) o.percents = ParseNumberList(f.percents);
  if (f.runs_opt->count() > 0) o.runs = f.runs;
  if (!f.multi_rule.empty()) o.multi_rule = ParseMultiValueRule(f.multi_rule);
  ApplyOverrides(o, &cfg);
  cfg.Validate();
  return cfg;
}

void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteFile(path, text);
  }
}

Policy LoadPolicy(const std::string& path) { return ParsePolicyJson(ReadFile(path)); }

// E0 from the entitlement file, or from the policy's rules when no file is
// given (only for complete policies).
EntitlementSet LoadEntitlements(const std::string& path, const Policy& policy) {
  if (!path.empty()) return ParseEntitlementsCsv(ReadFile(path), &policy.model);
  if (policy.model.MissingCount() != 0) {
    throw InputError("policy has Missing cells; pass --entitlements");
  }
  return PolicyMeaning(policy);
}

Side ResolveSide(const ObjectModel& om, const std::string& id, const std::string& side) {
  if (side == "user") return Side::kUser;
  if (side == "resource") return Side::kResource;
  if (!side.empty()) throw InputError("--side must be user or resource");
  const bool user = om.Find(Side::kUser, id) != nullptr;
  const bool resource = om.Find(Side::kResource, id) != nullptr;
  if (user && resource) throw InputError("'" + id + "' names a user and a resource; pass --side");
  if (!user && !resource) throw InputError("unknown object '" + id + "'");
  return user ? Side::kUser : Side::kResource;
}

int GroupFor(const Clustering& clustering, const ObjectModel& om, Side side,
             const std::string& object_id, int group_id) {
  if (!object_id.empty()) {
    if (om.Find(side, object_id) == nullptr) {
      throw InputError(std::string("unknown ") + ToString(side) + " '" + object_id + "'");
    }
    return clustering.GroupOf(object_id).id;
  }
  for (const auto& g : clustering.groups(side)) {
    if (g.id == group_id) return group_id;
  }
  throw InputError(std::string("no ") + ToString(side) + " group " + std::to_string(group_id));
}

std::string DatasetName(const std::string& policy_path) {
  return std::filesystem::path(policy_path).stem().string();
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infers missing attribute values in ABAC object models.", "attrinfer"};
  app.set_version_flag("--version", std::string("attrinfer ") + ATTRINFER_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  AddGlobalFlags(app, flags);

  std::string tmpl = "university";
  std::string scales = "1";
  std::string policy_path;
  std::string entitlements_path;
  std::string out_path;
  std::string e0_out_path;
  std::string csv_path;
  std::string json_path;
  std::string object_id;
  std::string attr;
  std::string side;
  std::string action;
  std::string user_id;
  std::string resource_id;
  int user_group = -1;
  int resource_group = -1;
  bool no_timing = false;

  CLI::App* generate = app.add_subcommand("generate", "Generate a synthetic complete policy");
  generate->add_option("--template", tmpl, "university or projmgmt")->capture_default_str();
  generate->add_option("--scale", scales, "Number of departments")->capture_default_str();
  generate->add_option("-o,--out", out_path, "Policy JSON output (default stdout)");
  generate->add_option("--entitlements", e0_out_path, "Also write the policy's E0 as CSV");

  CLI::App* entitlements = app.add_subcommand("entitlements", "Write the E0 of a policy as CSV");
  entitlements->add_option("--policy", policy_path, "Policy JSON")->required();
  entitlements->add_option("-o,--out", out_path, "CSV output (default stdout)");

  CLI::App* cluster = app.add_subcommand("cluster", "Cluster users and resources");
  cluster->add_option("--policy", policy_path, "Policy JSON")->required();
  cluster->add_option("-o,--out", out_path, "JSON output (default stdout)");

  CLI::App* features = app.add_subcommand("features", "Rank the features of one group triple");
  features->add_option("--policy", policy_path, "Policy JSON")->required();
  features->add_option("--entitlements", entitlements_path, "E0 CSV (default: from rules)");
  auto* ug = features->add_option("--user-group", user_group, "User group id");
  auto* rg = features->add_option("--resource-group", resource_group, "Resource group id");
  features->add_option("--user", user_id, "Pick the user group of this user")->excludes(ug);
  features->add_option("--resource", resource_id, "Pick the resource group of this resource")
      ->excludes(rg);
  features->add_option("--action", action, "Action")->required();
  features->add_option("-o,--out", out_path, "JSON output (default stdout)");

  CLI::App* predict = app.add_subcommand("predict", "Predict Missing attribute values");
  predict->add_option("--policy", policy_path, "Policy JSON with Missing cells")->required();
  predict->add_option("--entitlements", entitlements_path, "E0 CSV")->required();
  predict->add_option("--object", object_id, "Predict only this object's cells");
  predict->add_option("--attr", attr, "Predict only this attribute");
  predict->add_option("--side", side, "user or resource (when --object is ambiguous)");
  predict->add_option("-o,--out", out_path, "JSON output (default stdout)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Remove, predict and score");
  evaluate->add_option("--template", tmpl, "Comma-separated templates")->capture_default_str();
  evaluate->add_option("--scale", scales, "Scales, e.g. 1-3 or 1,2")->capture_default_str();
  evaluate->add_option("--policy", policy_path, "Evaluate this complete policy instead");
  evaluate->add_option("--csv", csv_path, "CSV summary output (default stdout)");
  evaluate->add_option("--json", json_path, "JSON detail output");
  evaluate->add_flag("--no-timing", no_timing, "Leave wall-clock times out of the outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    const RunConfig cfg = ResolveConfig(flags);

    if (generate->parsed()) {
      const auto scale_list = ParseIntList(scales);
      if (scale_list.size() != 1) throw InputError("generate takes a single --scale");
      GenSpec spec;
      spec.tmpl = ParseTemplate(tmpl);
      spec.scale = scale_list.front();
      spec.seed = cfg.seed;
      const GeneratedPolicy g = Generate(spec);
      Emit(out_path, PolicyToJson(g.policy), out);
      if (!e0_out_path.empty()) WriteFile(e0_out_path, EntitlementsToCsv(g.entitlements));
    } else if (entitlements->parsed()) {
      const Policy policy = LoadPolicy(policy_path);
      Emit(out_path, EntitlementsToCsv(PolicyMeaning(policy)), out);
    } else if (cluster->parsed()) {
      const Policy policy = LoadPolicy(policy_path);
      const Clustering clustering = Cluster(policy.model, cfg.clustering);
      Emit(out_path, ClusteringJson(clustering, policy.model, cfg.clustering), out);
    } else if (features->parsed()) {
      if (user_id.empty() && ug->count() == 0) throw InputError("pass --user or --user-group");
      if (resource_id.empty() && rg->count() == 0) {
        throw InputError("pass --resource or --resource-group");
      }
      const Policy policy = LoadPolicy(policy_path);
      const EntitlementSet e0 = LoadEntitlements(entitlements_path, policy);
      const EntitlementIndex index(e0);
      const Clustering clustering = Cluster(policy.model, cfg.clustering);
      const GroupTriple triple{
          GroupFor(clustering, policy.model, Side::kUser, user_id, user_group),
          GroupFor(clustering, policy.model, Side::kResource, resource_id, resource_group),
          action};
      Predictor predictor(policy.model, index, clustering, cfg.prediction);
      Emit(out_path, RankingJson(triple, predictor.Ranking(triple), cfg.prediction.ntcf), out);
    } else if (predict->parsed()) {
      const Policy policy = LoadPolicy(policy_path);
      const EntitlementSet e0 = LoadEntitlements(entitlements_path, policy);
      const EntitlementIndex index(e0);
      const Clustering clustering = Cluster(policy.model, cfg.clustering);
      Predictor predictor(policy.model, index, clustering, cfg.prediction);
      std::vector<Prediction> predictions;
      if (object_id.empty()) {
        for (auto& p : predictor.PredictAll()) {
          if (attr.empty() || p.attr == attr) predictions.push_back(std::move(p));
        }
      } else {
        const Side s = ResolveSide(policy.model, object_id, side);
        const Object& o = *policy.model.Find(s, object_id);
        for (const auto& [name, value] : o.attrs) {
          if (!value.is_missing() || (!attr.empty() && name != attr)) continue;
          predictions.push_back(predictor.Predict(s, object_id, name));
        }
        if (!attr.empty() && predictions.empty()) {
          throw InputError("'" + object_id + "." + attr + "' is not a Missing cell");
        }
      }
      Emit(out_path, PredictionsJson(predictions), out);
    } else if (evaluate->parsed()) {
      EvalConfig eval_cfg = cfg.ToEvalConfig();
      eval_cfg.keep_cells = !json_path.empty();
      std::vector<EvalReport> reports;
      if (!policy_path.empty()) {
        const Policy policy = LoadPolicy(policy_path);
        if (policy.model.MissingCount() != 0) {
          throw InputError("evaluate needs a policy without Missing cells");
        }
        reports.push_back(Evaluate(policy, eval_cfg, DatasetName(policy_path)));
      } else {
        std::vector<Template> templates;
        std::stringstream in(tmpl);
        for (std::string name; std::getline(in, name, ',');) {
          templates.push_back(ParseTemplate(name));
        }
        if (templates.empty()) throw InputError("--template is empty");
        for (Template t : templates) {
          for (int scale : ParseIntList(scales)) {
            GenSpec spec;
            spec.tmpl = t;
            spec.scale = scale;
            spec.seed = cfg.seed;
            const GeneratedPolicy g = Generate(spec);
            reports.push_back(Evaluate(g.policy, eval_cfg,
                                       std::string(ToString(t)) + "-" + std::to_string(scale)));
          }
        }
      }
      Emit(csv_path, EvalReportsCsv(reports, !no_timing), out);
      if (!json_path.empty()) WriteFile(json_path, EvalReportsJson(reports, cfg, !no_timing));
    }
    return kExitOk;
  } catch (const InputError& e) {
    err << "attrinfer: error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "attrinfer: internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace attrinfer::tools
