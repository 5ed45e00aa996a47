#include "attrinfer/tools/run_config.h"

#include <cerrno>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "attrinfer/errors.h"

namespace attrinfer::tools {

using json = nlohmann::json;

void RunConfig::Validate() const {
  clustering.Validate();
  prediction.Validate();
  if (jobs < 0) throw ConfigError("jobs must be non-negative");
  if (runs < 1) throw ConfigError("runs must be positive");
  if (percents.empty()) throw ConfigError("at least one removal percent is required");
  for (double p : percents) {
    if (!(p > 0.0 && p < 100.0)) throw ConfigError("removal percents must lie in (0, 100)");
  }
}

EvalConfig RunConfig::ToEvalConfig() const {
  EvalConfig out;
  out.clustering = clustering;
  out.prediction = prediction;
  out.percents.clear();
  for (double p : percents) out.percents.push_back(p / 100.0);
  out.runs = runs;
  out.seed = seed;
  out.jobs = jobs;
  out.multi_rule = multi_rule;
  return out;
}

namespace {

double Number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("config: '" + key + "' must be a number");
  return j.get<double>();
}

int Integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("config: '" + key + "' must be an integer");
  return j.get<int>();
}

}  // namespace

void ApplyConfigJson(const std::string& text, RunConfig* cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "weights") {
      if (!value.is_object()) throw ConfigError("config: 'weights' must be an object");
      for (const auto& [attr, w] : value.items()) {
        cfg->clustering.weights[attr] = Number(w, "weights." + attr);
      }
    } else if (key == "st") {
      cfg->clustering.st = Number(value, key);
    } else if (key == "ntcf") {
      if (!value.is_array() || value.size() != 2) {
        throw ConfigError("config: 'ntcf' must be [numHigh, numMed]");
      }
      cfg->prediction.ntcf = Ntcf{Integer(value[0], key), Integer(value[1], key)};
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("config: 'seed' must be unsigned");
      cfg->seed = value.get<uint64_t>();
    } else if (key == "jobs") {
      cfg->jobs = Integer(value, key);
    } else if (key == "percents") {
      if (!value.is_array()) throw ConfigError("config: 'percents' must be an array");
      cfg->percents.clear();
      for (const auto& p : value) cfg->percents.push_back(Number(p, key));
    } else if (key == "runs") {
      cfg->runs = Integer(value, key);
    } else if (key == "multiRule") {
      if (!value.is_string()) throw ConfigError("config: 'multiRule' must be a string");
      cfg->multi_rule = ParseMultiValueRule(value.get<std::string>());
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
}

void ApplyOverrides(const ConfigOverrides& o, RunConfig* cfg) {
  for (const auto& [attr, w] : o.weights) cfg->clustering.weights[attr] = w;
  if (o.st) cfg->clustering.st = *o.st;
  if (o.ntcf) cfg->prediction.ntcf = *o.ntcf;
  if (o.seed) cfg->seed = *o.seed;
  if (o.jobs) cfg->jobs = *o.jobs;
  if (o.percents) cfg->percents = *o.percents;
  if (o.runs) cfg->runs = *o.runs;
  if (o.multi_rule) cfg->multi_rule = *o.multi_rule;
}

namespace {

double ToDouble(const std::string& s, const std::string& what) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ConfigError("invalid number '" + s + "' in " + what);
  }
  return v;
}

int ToInt(const std::string& s, const std::string& what) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || v < INT32_MIN ||
      v > INT32_MAX) {
    throw ConfigError("invalid integer '" + s + "' in " + what);
  }
  return static_cast<int>(v);
}

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::pair<std::string, double> ParseWeight(const std::string& spec) {
  const size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("weight '" + spec + "' must look like attr=weight");
  }
  return {spec.substr(0, eq), ToDouble(spec.substr(eq + 1), "--weights")};
}

Ntcf ParseNtcf(const std::string& spec) {
  const auto parts = SplitCommas(spec);
  if (parts.size() != 2) throw ConfigError("NTCF '" + spec + "' must look like numHigh,numMed");
  return Ntcf{ToInt(parts[0], "--ntcf"), ToInt(parts[1], "--ntcf")};
}

std::vector<double> ParseNumberList(const std::string& spec) {
  std::vector<double> out;
  for (const auto& p : SplitCommas(spec)) out.push_back(ToDouble(p, "'" + spec + "'"));
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::vector<int> ParseIntList(const std::string& spec) {
  std::vector<int> out;
  for (const auto& p : SplitCommas(spec)) {
    const size_t dash = p.find('-', 1);
    const int lo = ToInt(p.substr(0, dash), "'" + spec + "'");
    const int hi = dash == std::string::npos ? lo : ToInt(p.substr(dash + 1), "'" + spec + "'");
    if (lo < 1 || hi < lo) throw ConfigError("invalid range '" + p + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

}  // namespace attrinfer::tools
