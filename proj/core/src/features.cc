#include "attrinfer/features.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "attrinfer/errors.h"

namespace attrinfer {

Feature Feature::UserCondition(AtomicCondition c) {
  return Feature{FeatureKind::kUserCondition, std::move(c), {}};
}

Feature Feature::ResourceCondition(AtomicCondition c) {
  return Feature{FeatureKind::kResourceCondition, std::move(c), {}};
}

Feature Feature::Constraint(AtomicConstraint c) {
  return Feature{FeatureKind::kConstraint, {}, std::move(c)};
}

Side Feature::condition_side() const {
  if (kind == FeatureKind::kConstraint) throw ContractViolation("constraint has no single side");
  return kind == FeatureKind::kUserCondition ? Side::kUser : Side::kResource;
}

bool Feature::Mentions(Side side, const std::string& attr) const {
  if (kind == FeatureKind::kConstraint) {
    return side == Side::kUser ? constraint.user_attr == attr : constraint.resource_attr == attr;
  }
  return condition_side() == side && condition.attr == attr;
}

std::string Feature::ToString() const {
  switch (kind) {
    case FeatureKind::kUserCondition:
      return "user: " + condition.ToString();
    case FeatureKind::kResourceCondition:
      return "resource: " + condition.ToString();
    case FeatureKind::kConstraint:
      return "constraint: " + constraint.ToString();
  }
  return "";
}

int64_t QuantizeCoefficient(double c) {
  return static_cast<int64_t>(std::llround(c / kCoefficientResolution));
}

namespace {

std::vector<AtomicCondition> ConditionsFor(const Group& g, const ObjectModel& om) {
  std::vector<AtomicCondition> out;
  const Schema& schema = om.schema();
  for (const auto& attr : g.signature) {
    const AttrSchema& a = schema.Get(g.side, attr);
    ValueSet observed;
    for (const auto& id : g.members) {
      const Object* o = om.Find(g.side, id);
      const AttrValue& v = o->Get(attr);
      if (v.is_known()) {
        for (auto& s : v.AsSet()) observed.insert(std::move(s));
      }
    }
    for (const auto& v : observed) {
      out.push_back(a.kind == AttrKind::kSingle ? AtomicCondition::In(attr, {v})
                                                : AtomicCondition::Contains(attr, v));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Definite(Tri t, const Feature& f) {
  if (t == Tri::kUnknown) {
    throw InvariantFailure("feature '" + f.ToString() + "' evaluated to unknown on learning data");
  }
  return t == Tri::kTrue;
}

std::vector<const Object*> CompleteMembers(const Group& g, const ObjectModel& om) {
  std::vector<const Object*> out;
  for (const auto& id : g.members) {
    const Object* o = om.Find(g.side, id);
    if (o == nullptr) throw ContractViolation("group member '" + id + "' not in model");
    if (!o->HasMissing()) out.push_back(o);
  }
  return out;
}

}  // namespace

std::vector<Feature> EnumerateFeatures(const Group& user_group, const Group& resource_group,
                                       const ObjectModel& om) {
  std::vector<Feature> out;
  for (auto& c : ConditionsFor(user_group, om)) out.push_back(Feature::UserCondition(std::move(c)));
  for (auto& c : ConditionsFor(resource_group, om)) {
    out.push_back(Feature::ResourceCondition(std::move(c)));
  }
  std::vector<AtomicConstraint> cons;
  const Schema& schema = om.schema();
  for (const auto& ua : user_group.signature) {
    const AttrKind uk = schema.Get(Side::kUser, ua).kind;
    for (const auto& ra : resource_group.signature) {
      const AttrKind rk = schema.Get(Side::kResource, ra).kind;
      cons.push_back(AtomicConstraint{ua, OperatorFor(uk, rk), ra});
    }
  }
  std::sort(cons.begin(), cons.end());
  for (auto& c : cons) out.push_back(Feature::Constraint(std::move(c)));
  return out;
}

std::optional<LearningData> BuildLearningData(const Group& user_group,
                                              const Group& resource_group,
                                              const std::string& action,
                                              const EntitlementIndex& e0,
                                              const ObjectModel& om) {
  const auto users = CompleteMembers(user_group, om);
  const auto resources = CompleteMembers(resource_group, om);
  if (users.empty() || resources.empty()) return std::nullopt;

  LearningData ld;
  ld.features = EnumerateFeatures(user_group, resource_group, om);
  const size_t p = ld.features.size();
  const Schema& schema = om.schema();

  std::vector<size_t> user_cols;
  std::vector<size_t> resource_cols;
  std::vector<size_t> constraint_cols;
  for (size_t j = 0; j < p; ++j) {
    switch (ld.features[j].kind) {
      case FeatureKind::kUserCondition:
        user_cols.push_back(j);
        break;
      case FeatureKind::kResourceCondition:
        resource_cols.push_back(j);
        break;
      case FeatureKind::kConstraint:
        constraint_cols.push_back(j);
        break;
    }
  }

  auto side_bits = [&](const std::vector<const Object*>& objs, const std::vector<size_t>& cols,
                       Side side) {
    std::vector<std::vector<uint8_t>> bits(objs.size(), std::vector<uint8_t>(cols.size(), 0));
    for (size_t i = 0; i < objs.size(); ++i) {
      for (size_t k = 0; k < cols.size(); ++k) {
        const Feature& f = ld.features[cols[k]];
        bits[i][k] = Definite(EvalAtomicCondition(schema, side, *objs[i], f.condition), f);
      }
    }
    return bits;
  };
  const auto ubits = side_bits(users, user_cols, Side::kUser);
  const auto rbits = side_bits(resources, resource_cols, Side::kResource);

  ld.bits = BinaryMatrix(0, p);
  std::vector<uint8_t> row(p, 0);
  for (size_t i = 0; i < users.size(); ++i) {
    std::unordered_set<std::string> permitted;
    for (const auto& e : e0.Involving(Side::kUser, users[i]->id)) {
      if (e.action == action) permitted.insert(e.resource);
    }
    for (size_t k = 0; k < user_cols.size(); ++k) row[user_cols[k]] = ubits[i][k];
    for (size_t r = 0; r < resources.size(); ++r) {
      for (size_t k = 0; k < resource_cols.size(); ++k) row[resource_cols[k]] = rbits[r][k];
      for (size_t col : constraint_cols) {
        const Feature& f = ld.features[col];
        row[col] = Definite(EvalAtomicConstraint(schema, *users[i], *resources[r], f.constraint), f);
      }
      ld.bits.AppendRow(row);
      ld.labels.push_back(permitted.count(resources[r]->id) ? 1.0 : 0.0);
      ld.pairs.emplace_back(users[i]->id, resources[r]->id);
    }
  }
  return ld;
}

RankedFeatures LearnImportantFeatures(const LearningData& data) {
  if (data.rows() == 0) throw ContractViolation("LearnImportantFeatures: empty learning data");
  const LinearFit fit = FitLeastSquares(data.bits, data.labels);
  RankedFeatures out;
  out.intercept = fit.intercept;
  out.rows = data.rows();
  const size_t p = data.features.size();
  std::vector<size_t> support(p, 0);
  std::vector<size_t> positive(p, 0);
  for (size_t r = 0; r < data.rows(); ++r) {
    auto row = data.bits.row(r);
    const bool label = data.labels[r] > 0.5;
    out.positives += label;
    for (size_t j = 0; j < p; ++j) {
      support[j] += row[j];
      positive[j] += label && row[j];
    }
  }
  std::vector<size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int64_t> q(p);
  for (size_t j = 0; j < p; ++j) q[j] = QuantizeCoefficient(fit.coefficients[j]);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (q[a] != q[b]) return q[a] > q[b];
    if (support[a] != support[b]) return support[a] > support[b];
    return data.features[a] < data.features[b];
  });
  out.entries.reserve(p);
  for (size_t j : order) {
    out.entries.push_back(
        RankedFeature{data.features[j], fit.coefficients[j], support[j], positive[j]});
  }
  return out;
}

}  // namespace attrinfer
