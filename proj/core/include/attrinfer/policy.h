#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "attrinfer/attr_value.h"

namespace attrinfer {

enum class AttrKind { kSingle, kMulti };
enum class Side { kUser, kResource };

const char* ToString(AttrKind k);
const char* ToString(Side s);

struct AttrSchema {
  std::string name;
  AttrKind kind = AttrKind::kSingle;
  Side side = Side::kUser;
};

// Declared attributes, keyed by (side, name). Names are unique per side; the
// same name may appear once on each side (e.g. `department`).
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttrSchema> attrs);

  void Add(AttrSchema attr);
  const AttrSchema* Find(Side side, const std::string& name) const;
  // Throws TypeError when the attribute is not declared.
  const AttrSchema& Get(Side side, const std::string& name) const;
  // Attributes of one side, sorted by name.
  std::vector<AttrSchema> Attributes(Side side) const;
  const std::vector<AttrSchema>& all() const { return attrs_; }

 private:
  std::vector<AttrSchema> attrs_;
};

struct Object {
  std::string id;
  std::map<std::string, AttrValue> attrs;

  // Attributes absent from the map read as Null.
  const AttrValue& Get(const std::string& attr) const;
  bool HasMissing() const;
};

// Users and resources plus the schema they follow. Object ids are unique across
// the whole model.
class ObjectModel {
 public:
  ObjectModel() = default;
  ObjectModel(Schema schema, std::vector<Object> users, std::vector<Object> resources);

  const Schema& schema() const { return schema_; }
  const std::vector<Object>& users() const { return users_; }
  const std::vector<Object>& resources() const { return resources_; }
  const std::vector<Object>& objects(Side side) const {
    return side == Side::kUser ? users_ : resources_;
  }

  const Object* FindUser(const std::string& id) const;
  const Object* FindResource(const std::string& id) const;
  const Object* Find(Side side, const std::string& id) const;
  std::optional<Side> SideOf(const std::string& id) const;

  // Replaces one cell. Throws InputError for unknown objects or attributes.
  void SetCell(const std::string& object_id, const std::string& attr, AttrValue value);

  // Checks the schema invariants: unique ids, every value kind matches its
  // attribute kind, no undeclared attributes. Throws InputError.
  void Validate() const;

  size_t MissingCount() const;

 private:
  void Reindex();
  Object* MutableFind(const std::string& id, Side* side);

  Schema schema_;
  std::vector<Object> users_;
  std::vector<Object> resources_;
  std::unordered_map<std::string, std::pair<Side, size_t>> index_;
};

enum class CondOp { kIn, kContains };

// <attr, op, val>: op=In tests a single-valued attribute against a value set,
// op=Contains tests a multi-valued attribute for one element.
struct AtomicCondition {
  std::string attr;
  CondOp op = CondOp::kIn;
  ValueSet values;  // In: the accepted values. Contains: exactly one element.

  static AtomicCondition In(std::string attr, ValueSet values);
  static AtomicCondition Contains(std::string attr, std::string value);

  // Precondition: op == kContains.
  const std::string& element() const;
  std::string ToString() const;

  friend auto operator<=>(const AtomicCondition&, const AtomicCondition&) = default;
  friend bool operator==(const AtomicCondition&, const AtomicCondition&) = default;
};

enum class ConsOp { kEqual, kIn, kContains, kSupseteq };

const char* ToString(CondOp op);
const char* ToString(ConsOp op);
// Kind pair accepted by an operator: Equal S×S, In S×M, Contains M×S, Supseteq M×M.
ConsOp OperatorFor(AttrKind user_kind, AttrKind resource_kind);

// <attrU, op, attrR>: relates a user attribute to a resource attribute.
struct AtomicConstraint {
  std::string user_attr;
  ConsOp op = ConsOp::kEqual;
  std::string resource_attr;

  std::string ToString() const;

  friend auto operator<=>(const AtomicConstraint&, const AtomicConstraint&) = default;
  friend bool operator==(const AtomicConstraint&, const AtomicConstraint&) = default;
};

struct Rule {
  std::vector<AtomicCondition> user_condition;
  std::vector<AtomicCondition> resource_condition;
  std::vector<AtomicConstraint> constraint;
  std::set<std::string> actions;

  std::string ToString() const;
};

struct Entitlement {
  std::string user;
  std::string resource;
  std::string action;

  friend auto operator<=>(const Entitlement&, const Entitlement&) = default;
  friend bool operator==(const Entitlement&, const Entitlement&) = default;
};

// Canonical entitlement set: deduplicated, ordered by (user, resource, action).
using EntitlementSet = std::set<Entitlement>;

struct Policy {
  ObjectModel model;
  std::set<std::string> actions;
  std::vector<Rule> rules;

  // Model validation plus rule type-checking and action membership.
  void Validate() const;
};

// Type-checks an atom against the schema; throws TypeError.
void CheckCondition(const Schema& schema, Side side, const AtomicCondition& c);
void CheckConstraint(const Schema& schema, const AtomicConstraint& c);

Tri EvalAtomicCondition(const Schema& schema, Side side, const Object& o,
                        const AtomicCondition& c);
Tri EvalCondition(const Schema& schema, Side side, const Object& o,
                  const std::vector<AtomicCondition>& cond);
Tri EvalAtomicConstraint(const Schema& schema, const Object& u, const Object& r,
                         const AtomicConstraint& c);
Tri EvalConstraint(const Schema& schema, const Object& u, const Object& r,
                   const std::vector<AtomicConstraint>& cons);

struct RuleMeaning {
  EntitlementSet granted;
  // Triples excluded because evaluation touched a Missing cell.
  size_t unknown_count = 0;
};

RuleMeaning ComputeRuleMeaning(const Rule& rule, const ObjectModel& om);
EntitlementSet PolicyMeaning(const Policy& policy);

// Lookup structure over E0 keyed by (user, action) and (resource, action).
class EntitlementIndex {
 public:
  explicit EntitlementIndex(const EntitlementSet& e0);

  bool Contains(const std::string& user, const std::string& resource,
                const std::string& action) const;
  // Entitlements in which `object_id` is the user (side == kUser) or resource.
  const std::vector<Entitlement>& Involving(Side side, const std::string& object_id) const;
  size_t size() const { return all_.size(); }

 private:
  std::set<Entitlement> all_;
  std::unordered_map<std::string, std::vector<Entitlement>> by_user_;
  std::unordered_map<std::string, std::vector<Entitlement>> by_resource_;
};

}  // namespace attrinfer
