#include "attrinfer/policy_io.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "attrinfer/errors.h"

namespace attrinfer {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string LineColumn(const std::string& text, size_t byte) {
  size_t line = 1;
  size_t col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const json& Require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) Fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Fail(where, std::string("missing key '") + key + "'");
  return *it;
}

std::string RequireString(const json& j, const std::string& where) {
  if (!j.is_string()) Fail(where, "expected a string");
  return j.get<std::string>();
}

ValueSet RequireStringSet(const json& j, const std::string& where) {
  if (!j.is_array()) Fail(where, "expected an array of strings");
  ValueSet out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.insert(RequireString(j[i], where + "/" + std::to_string(i)));
  }
  return out;
}

AttrValue ParseValue(const json& j, const std::string& where) {
  if (j.is_null()) return AttrValue::Null();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.empty()) Fail(where, "atomic values must be non-empty");
    return AttrValue::Atomic(std::move(s));
  }
  if (j.is_array()) return AttrValue::Set(RequireStringSet(j, where));
  if (j.is_object()) {
    auto it = j.find("missing");
    if (it != j.end() && it->is_boolean() && it->get<bool>() && j.size() == 1) {
      return AttrValue::Missing();
    }
  }
  Fail(where, "expected string, array, null or {\"missing\": true}");
}

std::vector<Object> ParseObjects(const json& arr, Side side, const Schema& schema,
                                 const std::string& where) {
  if (!arr.is_array()) Fail(where, "expected an array");
  std::vector<Object> out;
  const bool has_id_attr = schema.Find(side, "id") != nullptr;
  for (size_t i = 0; i < arr.size(); ++i) {
    std::string at = where + "/" + std::to_string(i);
    Object o;
    o.id = RequireString(Require(arr[i], "id", at), at + "/id");
    if (o.id.empty()) Fail(at + "/id", "object ids must be non-empty");
    if (arr[i].contains("attrs")) {
      const json& attrs = arr[i]["attrs"];
      if (!attrs.is_object()) Fail(at + "/attrs", "expected an object");
      for (const auto& [name, value] : attrs.items()) {
        o.attrs[name] = ParseValue(value, at + "/attrs/" + name);
      }
    }
    for (const auto& a : schema.Attributes(side)) {
      if (o.attrs.count(a.name) == 0) {
        o.attrs[a.name] = (a.name == "id") ? AttrValue::Atomic(o.id) : AttrValue::Null();
      }
    }
    if (has_id_attr) {
      const AttrValue& idv = o.attrs["id"];
      if (!idv.is_missing() && !(idv.is_atomic() && idv.atomic() == o.id)) {
        Fail(at + "/attrs/id", "must equal the object id '" + o.id + "'");
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

AtomicCondition ParseCondition(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) Fail(where, "atomic condition must be [attr, op, val]");
  std::string attr = RequireString(j[0], where + "/0");
  std::string op = RequireString(j[1], where + "/1");
  if (op == "in") {
    if (j[2].is_string()) return AtomicCondition::In(attr, {j[2].get<std::string>()});
    return AtomicCondition::In(attr, RequireStringSet(j[2], where + "/2"));
  }
  if (op == "contains") return AtomicCondition::Contains(attr, RequireString(j[2], where + "/2"));
  Fail(where + "/1", "unknown condition operator '" + op + "'");
}

AtomicConstraint ParseConstraint(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    Fail(where, "atomic constraint must be [userAttr, op, resourceAttr]");
  }
  AtomicConstraint c;
  c.user_attr = RequireString(j[0], where + "/0");
  std::string op = RequireString(j[1], where + "/1");
  c.resource_attr = RequireString(j[2], where + "/2");
  if (op == "equal") {
    c.op = ConsOp::kEqual;
  } else if (op == "in") {
    c.op = ConsOp::kIn;
  } else if (op == "contains") {
    c.op = ConsOp::kContains;
  } else if (op == "supseteq") {
    c.op = ConsOp::kSupseteq;
  } else {
    Fail(where + "/1", "unknown constraint operator '" + op + "'");
  }
  return c;
}

template <typename T, typename F>
std::vector<T> ParseList(const json& obj, const char* key, const std::string& where, F parse) {
  std::vector<T> out;
  if (!obj.contains(key)) return out;
  const json& arr = obj[key];
  if (!arr.is_array()) Fail(where + "/" + key, "expected an array");
  for (size_t i = 0; i < arr.size(); ++i) {
    out.push_back(parse(arr[i], where + "/" + key + "/" + std::to_string(i)));
  }
  return out;
}

ordered_json ValueToJson(const AttrValue& v) {
  switch (v.kind()) {
    case AttrValue::Kind::kAtomic:
      return v.atomic();
    case AttrValue::Kind::kSet: {
      ordered_json arr = ordered_json::array();
      for (const auto& s : v.set()) arr.push_back(s);
      return arr;
    }
    case AttrValue::Kind::kNull:
      return nullptr;
    case AttrValue::Kind::kMissing:
      return ordered_json{{"missing", true}};
  }
  return nullptr;
}

ordered_json ObjectsToJson(const std::vector<Object>& objects) {
  ordered_json arr = ordered_json::array();
  for (const auto& o : objects) {
    ordered_json attrs = ordered_json::object();
    for (const auto& [name, value] : o.attrs) attrs[name] = ValueToJson(value);
    arr.push_back(ordered_json{{"id", o.id}, {"attrs", attrs}});
  }
  return arr;
}

ordered_json ConditionToJson(const AtomicCondition& c) {
  if (c.op == CondOp::kIn) {
    ordered_json vals = ordered_json::array();
    for (const auto& v : c.values) vals.push_back(v);
    return ordered_json::array({c.attr, "in", vals});
  }
  return ordered_json::array({c.attr, "contains", c.element()});
}

}  // namespace

Policy ParsePolicyJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON at " + LineColumn(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("policy: top-level value must be an object");

  Schema schema;
  const json& sch = Require(doc, "schema", "policy");
  if (!sch.is_array()) Fail("/schema", "expected an array");
  for (size_t i = 0; i < sch.size(); ++i) {
    std::string at = "/schema/" + std::to_string(i);
    AttrSchema a;
    a.name = RequireString(Require(sch[i], "name", at), at + "/name");
    std::string kind = RequireString(Require(sch[i], "kind", at), at + "/kind");
    std::string applies = RequireString(Require(sch[i], "appliesTo", at), at + "/appliesTo");
    if (kind == "single") {
      a.kind = AttrKind::kSingle;
    } else if (kind == "multi") {
      a.kind = AttrKind::kMulti;
    } else {
      Fail(at + "/kind", "expected \"single\" or \"multi\"");
    }
    if (applies == "user") {
      a.side = Side::kUser;
    } else if (applies == "resource") {
      a.side = Side::kResource;
    } else {
      Fail(at + "/appliesTo", "expected \"user\" or \"resource\"");
    }
    try {
      schema.Add(std::move(a));
    } catch (const InputError& e) {
      Fail(at, e.what());
    }
  }

  auto users = ParseObjects(Require(doc, "users", "policy"), Side::kUser, schema, "/users");
  auto resources =
      ParseObjects(Require(doc, "resources", "policy"), Side::kResource, schema, "/resources");

  Policy policy;
  policy.model = ObjectModel(std::move(schema), std::move(users), std::move(resources));
  if (doc.contains("actions")) {
    for (const auto& a : RequireStringSet(doc["actions"], "/actions")) policy.actions.insert(a);
  }
  policy.rules = ParseList<Rule>(doc, "rules", "", [](const json& j, const std::string& at) {
    Rule r;
    r.user_condition = ParseList<AtomicCondition>(j, "uc", at, ParseCondition);
    r.resource_condition = ParseList<AtomicCondition>(j, "rc", at, ParseCondition);
    r.constraint = ParseList<AtomicConstraint>(j, "c", at, ParseConstraint);
    r.actions = RequireStringSet(Require(j, "actions", at), at + "/actions");
    return r;
  });
  // Actions named only by rules are added to the action set.
  for (const auto& r : policy.rules) policy.actions.insert(r.actions.begin(), r.actions.end());
  policy.Validate();
  return policy;
}

std::string PolicyToJson(const Policy& policy) {
  ordered_json doc;
  ordered_json sch = ordered_json::array();
  for (const auto& a : policy.model.schema().all()) {
    sch.push_back(ordered_json{{"name", a.name}, {"kind", ToString(a.kind)}, {"appliesTo", ToString(a.side)}});
  }
  doc["schema"] = sch;
  doc["users"] = ObjectsToJson(policy.model.users());
  doc["resources"] = ObjectsToJson(policy.model.resources());
  doc["actions"] = ordered_json::array();
  for (const auto& a : policy.actions) doc["actions"].push_back(a);
  ordered_json rules = ordered_json::array();
  for (const auto& r : policy.rules) {
    ordered_json jr;
    jr["uc"] = ordered_json::array();
    for (const auto& c : r.user_condition) jr["uc"].push_back(ConditionToJson(c));
    jr["rc"] = ordered_json::array();
    for (const auto& c : r.resource_condition) jr["rc"].push_back(ConditionToJson(c));
    jr["c"] = ordered_json::array();
    for (const auto& c : r.constraint) {
      jr["c"].push_back(ordered_json::array({c.user_attr, ToString(c.op), c.resource_attr}));
    }
    jr["actions"] = ordered_json::array();
    for (const auto& a : r.actions) jr["actions"].push_back(a);
    rules.push_back(jr);
  }
  doc["rules"] = rules;
  return doc.dump(2) + "\n";
}

EntitlementSet ParseEntitlementsCsv(const std::string& text, const ObjectModel* model) {
  EntitlementSet out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "user,resource,action") {
        throw InputError("entitlements: line " + std::to_string(lineno) +
                         ": expected header 'user,resource,action'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 3) {
      throw InputError("entitlements: line " + std::to_string(lineno) + ": expected 3 fields, got " +
                       std::to_string(fields.size()));
    }
    for (size_t k = 0; k < 3; ++k) {
      if (fields[k].empty()) {
        throw InputError("entitlements: line " + std::to_string(lineno) + ", column " +
                         std::to_string(k + 1) + ": empty field");
      }
    }
    if (model != nullptr) {
      if (model->FindUser(fields[0]) == nullptr) {
        throw InputError("entitlements: line " + std::to_string(lineno) + ": unknown user '" +
                         fields[0] + "'");
      }
      if (model->FindResource(fields[1]) == nullptr) {
        throw InputError("entitlements: line " + std::to_string(lineno) + ": unknown resource '" +
                         fields[1] + "'");
      }
    }
    out.insert(Entitlement{fields[0], fields[1], fields[2]});
  }
  if (!header_seen) throw InputError("entitlements: empty file (missing header)");
  return out;
}

std::string EntitlementsToCsv(const EntitlementSet& entitlements) {
  std::string out = "user,resource,action\n";
  for (const auto& e : entitlements) out += e.user + "," + e.resource + "," + e.action + "\n";
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace attrinfer
