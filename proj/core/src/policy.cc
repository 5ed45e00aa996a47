#include "attrinfer/policy.h"

#include <algorithm>

#include "attrinfer/errors.h"

namespace attrinfer {

namespace {

const AttrValue& NullValue() {
  static const AttrValue kNull = AttrValue::Null();
  return kNull;
}

std::string JoinSet(const ValueSet& values) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : values) {
    if (!first) out += ", ";
    out += v;
    first = false;
  }
  return out + "}";
}

bool IsSubset(const ValueSet& sub, const ValueSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace

const char* ToString(AttrKind k) { return k == AttrKind::kSingle ? "single" : "multi"; }

const char* ToString(Side s) { return s == Side::kUser ? "user" : "resource"; }

const char* ToString(CondOp op) { return op == CondOp::kIn ? "in" : "contains"; }

const char* ToString(ConsOp op) {
  switch (op) {
    case ConsOp::kEqual:
      return "equal";
    case ConsOp::kIn:
      return "in";
    case ConsOp::kContains:
      return "contains";
    case ConsOp::kSupseteq:
      return "supseteq";
  }
  return "?";
}

ConsOp OperatorFor(AttrKind user_kind, AttrKind resource_kind) {
  if (user_kind == AttrKind::kSingle) {
    return resource_kind == AttrKind::kSingle ? ConsOp::kEqual : ConsOp::kIn;
  }
  return resource_kind == AttrKind::kSingle ? ConsOp::kContains : ConsOp::kSupseteq;
}

// ---------------------------------------------------------------------------
// Schema

Schema::Schema(std::vector<AttrSchema> attrs) {
  for (auto& a : attrs) Add(std::move(a));
}

void Schema::Add(AttrSchema attr) {
  if (attr.name.empty()) throw InputError("attribute name must be non-empty");
  if (Find(attr.side, attr.name) != nullptr) {
    throw InputError("duplicate " + std::string(ToString(attr.side)) + " attribute '" +
                     attr.name + "'");
  }
  attrs_.push_back(std::move(attr));
}

const AttrSchema* Schema::Find(Side side, const std::string& name) const {
  for (const auto& a : attrs_) {
    if (a.side == side && a.name == name) return &a;
  }
  return nullptr;
}

const AttrSchema& Schema::Get(Side side, const std::string& name) const {
  const AttrSchema* a = Find(side, name);
  if (a == nullptr) {
    throw TypeError("undeclared " + std::string(ToString(side)) + " attribute '" + name + "'");
  }
  return *a;
}

std::vector<AttrSchema> Schema::Attributes(Side side) const {
  std::vector<AttrSchema> out;
  for (const auto& a : attrs_) {
    if (a.side == side) out.push_back(a);
  }
  std::sort(out.begin(), out.end(),
            [](const AttrSchema& a, const AttrSchema& b) { return a.name < b.name; });
  return out;
}

// ---------------------------------------------------------------------------
// Object / ObjectModel

const AttrValue& Object::Get(const std::string& attr) const {
  auto it = attrs.find(attr);
  return it == attrs.end() ? NullValue() : it->second;
}

bool Object::HasMissing() const {
  return std::any_of(attrs.begin(), attrs.end(),
                     [](const auto& kv) { return kv.second.is_missing(); });
}

ObjectModel::ObjectModel(Schema schema, std::vector<Object> users, std::vector<Object> resources)
    : schema_(std::move(schema)), users_(std::move(users)), resources_(std::move(resources)) {
  Reindex();
}

void ObjectModel::Reindex() {
  index_.clear();
  for (size_t i = 0; i < users_.size(); ++i) {
    if (!index_.emplace(users_[i].id, std::make_pair(Side::kUser, i)).second) {
      throw InputError("duplicate object id '" + users_[i].id + "'");
    }
  }
  for (size_t i = 0; i < resources_.size(); ++i) {
    if (!index_.emplace(resources_[i].id, std::make_pair(Side::kResource, i)).second) {
      throw InputError("duplicate object id '" + resources_[i].id + "'");
    }
  }
}

const Object* ObjectModel::FindUser(const std::string& id) const {
  return Find(Side::kUser, id);
}

const Object* ObjectModel::FindResource(const std::string& id) const {
  return Find(Side::kResource, id);
}

const Object* ObjectModel::Find(Side side, const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end() || it->second.first != side) return nullptr;
  return &objects(side)[it->second.second];
}

std::optional<Side> ObjectModel::SideOf(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second.first;
}

Object* ObjectModel::MutableFind(const std::string& id, Side* side) {
  auto it = index_.find(id);
  if (it == index_.end()) return nullptr;
  *side = it->second.first;
  auto& vec = *side == Side::kUser ? users_ : resources_;
  return &vec[it->second.second];
}

void ObjectModel::SetCell(const std::string& object_id, const std::string& attr, AttrValue value) {
  Side side;
  Object* o = MutableFind(object_id, &side);
  if (o == nullptr) throw InputError("unknown object '" + object_id + "'");
  schema_.Get(side, attr);
  o->attrs[attr] = std::move(value);
}

void ObjectModel::Validate() const {
  for (Side side : {Side::kUser, Side::kResource}) {
    for (const auto& o : objects(side)) {
      if (o.id.empty()) throw InputError("object with empty id");
      for (const auto& [name, value] : o.attrs) {
        const AttrSchema* a = schema_.Find(side, name);
        if (a == nullptr) {
          throw InputError("object '" + o.id + "' has undeclared " + ToString(side) +
                           " attribute '" + name + "'");
        }
        if (value.is_atomic() && a->kind != AttrKind::kSingle) {
          throw InputError("object '" + o.id + "': atomic value under multi-valued attribute '" +
                           name + "'");
        }
        if (value.is_set() && a->kind != AttrKind::kMulti) {
          throw InputError("object '" + o.id + "': set value under single-valued attribute '" +
                           name + "'");
        }
      }
    }
  }
}

size_t ObjectModel::MissingCount() const {
  size_t n = 0;
  for (Side side : {Side::kUser, Side::kResource}) {
    for (const auto& o : objects(side)) {
      for (const auto& kv : o.attrs) n += kv.second.is_missing() ? 1 : 0;
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Atoms

AtomicCondition AtomicCondition::In(std::string attr, ValueSet values) {
  return AtomicCondition{std::move(attr), CondOp::kIn, std::move(values)};
}

AtomicCondition AtomicCondition::Contains(std::string attr, std::string value) {
  return AtomicCondition{std::move(attr), CondOp::kContains, ValueSet{std::move(value)}};
}

const std::string& AtomicCondition::element() const {
  if (op != CondOp::kContains || values.size() != 1) {
    throw ContractViolation("AtomicCondition::element() on " + ToString());
  }
  return *values.begin();
}

std::string AtomicCondition::ToString() const {
  if (op == CondOp::kIn) return attr + " in " + JoinSet(values);
  return attr + " contains " + (values.size() == 1 ? *values.begin() : JoinSet(values));
}

std::string AtomicConstraint::ToString() const {
  return user_attr + " " + attrinfer::ToString(op) + " " + resource_attr;
}

std::string Rule::ToString() const {
  auto join = [](const auto& atoms) {
    std::string out;
    for (const auto& a : atoms) {
      if (!out.empty()) out += " and ";
      out += a.ToString();
    }
    return out.empty() ? std::string("true") : out;
  };
  std::string acts;
  for (const auto& a : actions) acts += (acts.empty() ? "" : ", ") + a;
  return "<" + join(user_condition) + "; " + join(resource_condition) + "; " + join(constraint) +
         "; {" + acts + "}>";
}

void CheckCondition(const Schema& schema, Side side, const AtomicCondition& c) {
  const AttrSchema& a = schema.Get(side, c.attr);
  if (c.op == CondOp::kIn && a.kind != AttrKind::kSingle) {
    throw TypeError("condition '" + c.ToString() + "': 'in' requires a single-valued attribute");
  }
  if (c.op == CondOp::kContains) {
    if (a.kind != AttrKind::kMulti) {
      throw TypeError("condition '" + c.ToString() +
                      "': 'contains' requires a multi-valued attribute");
    }
    if (c.values.size() != 1) {
      throw TypeError("condition '" + c.ToString() + "': 'contains' takes one atomic value");
    }
  }
}

void CheckConstraint(const Schema& schema, const AtomicConstraint& c) {
  const AttrSchema& u = schema.Get(Side::kUser, c.user_attr);
  const AttrSchema& r = schema.Get(Side::kResource, c.resource_attr);
  if (OperatorFor(u.kind, r.kind) != c.op) {
    throw TypeError("constraint '" + c.ToString() + "': operator does not match kinds " +
                    ToString(u.kind) + " x " + ToString(r.kind));
  }
}

Tri EvalAtomicCondition(const Schema& schema, Side side, const Object& o,
                        const AtomicCondition& c) {
  CheckCondition(schema, side, c);
  const AttrValue& v = o.Get(c.attr);
  if (v.is_null()) return Tri::kFalse;
  if (v.is_missing()) return Tri::kUnknown;
  if (c.op == CondOp::kIn) {
    if (!v.is_atomic()) throw TypeError("object '" + o.id + "': '" + c.attr + "' is not atomic");
    return FromBool(c.values.count(v.atomic()) > 0);
  }
  if (!v.is_set()) throw TypeError("object '" + o.id + "': '" + c.attr + "' is not a set");
  return FromBool(v.set().count(c.element()) > 0);
}

Tri EvalCondition(const Schema& schema, Side side, const Object& o,
                  const std::vector<AtomicCondition>& cond) {
  Tri acc = Tri::kTrue;
  for (const auto& c : cond) {
    acc = TriAnd(acc, EvalAtomicCondition(schema, side, o, c));
  }
  return acc;
}

Tri EvalAtomicConstraint(const Schema& schema, const Object& u, const Object& r,
                         const AtomicConstraint& c) {
  CheckConstraint(schema, c);
  const AttrValue& uv = u.Get(c.user_attr);
  const AttrValue& rv = r.Get(c.resource_attr);
  if (uv.is_null() || rv.is_null()) return Tri::kFalse;
  if (uv.is_missing() || rv.is_missing()) return Tri::kUnknown;
  switch (c.op) {
    case ConsOp::kEqual:
      return FromBool(uv.atomic() == rv.atomic());
    case ConsOp::kIn:
      return FromBool(rv.set().count(uv.atomic()) > 0);
    case ConsOp::kContains:
      return FromBool(uv.set().count(rv.atomic()) > 0);
    case ConsOp::kSupseteq:
      return FromBool(IsSubset(rv.set(), uv.set()));
  }
  return Tri::kFalse;
}

Tri EvalConstraint(const Schema& schema, const Object& u, const Object& r,
                   const std::vector<AtomicConstraint>& cons) {
  Tri acc = Tri::kTrue;
  for (const auto& c : cons) acc = TriAnd(acc, EvalAtomicConstraint(schema, u, r, c));
  return acc;
}

RuleMeaning ComputeRuleMeaning(const Rule& rule, const ObjectModel& om) {
  RuleMeaning out;
  if (rule.actions.empty()) return out;
  const Schema& schema = om.schema();
  std::vector<Tri> resource_ok;
  resource_ok.reserve(om.resources().size());
  for (const auto& r : om.resources()) {
    resource_ok.push_back(EvalCondition(schema, Side::kResource, r, rule.resource_condition));
  }
  for (const auto& u : om.users()) {
    Tri user_ok = EvalCondition(schema, Side::kUser, u, rule.user_condition);
    if (user_ok == Tri::kFalse) continue;
    for (size_t j = 0; j < om.resources().size(); ++j) {
      Tri t = TriAnd(user_ok, resource_ok[j]);
      if (t == Tri::kFalse) continue;
      const Object& r = om.resources()[j];
      t = TriAnd(t, EvalConstraint(schema, u, r, rule.constraint));
      if (t == Tri::kTrue) {
        for (const auto& a : rule.actions) out.granted.insert({u.id, r.id, a});
      } else if (t == Tri::kUnknown) {
        out.unknown_count += rule.actions.size();
      }
    }
  }
  return out;
}

EntitlementSet PolicyMeaning(const Policy& policy) {
  EntitlementSet out;
  for (const auto& rule : policy.rules) {
    auto m = ComputeRuleMeaning(rule, policy.model);
    out.merge(m.granted);
  }
  return out;
}

void Policy::Validate() const {
  model.Validate();
  const Schema& schema = model.schema();
  for (const auto& rule : rules) {
    for (const auto& c : rule.user_condition) CheckCondition(schema, Side::kUser, c);
    for (const auto& c : rule.resource_condition) CheckCondition(schema, Side::kResource, c);
    for (const auto& c : rule.constraint) CheckConstraint(schema, c);
    for (const auto& a : rule.actions) {
      if (actions.count(a) == 0) throw InputError("rule action '" + a + "' not in policy actions");
    }
  }
}

// ---------------------------------------------------------------------------
// EntitlementIndex

EntitlementIndex::EntitlementIndex(const EntitlementSet& e0) : all_(e0) {
  for (const auto& e : all_) {
    by_user_[e.user].push_back(e);
    by_resource_[e.resource].push_back(e);
  }
}

bool EntitlementIndex::Contains(const std::string& user, const std::string& resource,
                                const std::string& action) const {
  return all_.count(Entitlement{user, resource, action}) > 0;
}

const std::vector<Entitlement>& EntitlementIndex::Involving(Side side,
                                                            const std::string& object_id) const {
  static const std::vector<Entitlement> kEmpty;
  const auto& map = side == Side::kUser ? by_user_ : by_resource_;
  auto it = map.find(object_id);
  return it == map.end() ? kEmpty : it->second;
}

}  // namespace attrinfer
