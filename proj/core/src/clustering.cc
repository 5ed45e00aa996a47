#include "attrinfer/clustering.h"

#include <algorithm>
#include <cmath>

#include "attrinfer/errors.h"

namespace attrinfer {

double ClusteringConfig::WeightOf(const std::string& attr) const {
  auto it = weights.find(attr);
  return it == weights.end() ? 1.0 : it->second;
}

void ClusteringConfig::Validate() const {
  if (!(st >= 0.0 && st <= 1.0)) throw ConfigError("ST must lie in [0, 1]");
  for (const auto& [name, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("weight for '" + name + "' must be a finite non-negative number");
    }
  }
}

Clustering::Clustering(std::vector<Group> user_groups, std::vector<Group> resource_groups)
    : user_groups_(std::move(user_groups)), resource_groups_(std::move(resource_groups)) {
  for (const auto* groups : {&user_groups_, &resource_groups_}) {
    for (const auto& g : *groups) {
      for (const auto& m : g.members) {
        if (!index_.emplace(m, g.id).second) {
          throw InvariantFailure("object '" + m + "' assigned to two groups");
        }
      }
    }
  }
}

const Group& Clustering::GroupOf(const std::string& object_id) const {
  auto it = index_.find(object_id);
  if (it == index_.end()) throw ContractViolation("object '" + object_id + "' is not clustered");
  return ById(it->second);
}

const Group& Clustering::ById(int group_id) const {
  const auto nu = static_cast<int>(user_groups_.size());
  if (group_id >= 0 && group_id < nu) return user_groups_[group_id];
  if (group_id >= nu && group_id - nu < static_cast<int>(resource_groups_.size())) {
    return resource_groups_[group_id - nu];
  }
  throw ContractViolation("no group with id " + std::to_string(group_id));
}

Signature ActiveAttributes(const Object& o) {
  Signature out;
  for (const auto& [name, value] : o.attrs) {
    if (!value.is_null()) out.insert(name);
  }
  return out;
}

double AttrJaccard(const Object& a, const Object& b, const std::string& attr) {
  const AttrValue& va = a.Get(attr);
  const AttrValue& vb = b.Get(attr);
  if (va.is_null() || vb.is_null()) {
    throw ContractViolation("AttrJaccard: attribute '" + attr + "' is not active in both '" +
                            a.id + "' and '" + b.id + "'");
  }
  if (va.is_missing() || vb.is_missing()) return 0.5;
  ValueSet sa = va.AsSet();
  ValueSet sb = vb.AsSet();
  if (sa.empty() && sb.empty()) return 1.0;
  size_t inter = 0;
  for (const auto& v : sa) inter += sb.count(v);
  const size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double ObjectSimilarity(const Object& a, const Object& b, const Signature& signature,
                        const ClusteringConfig& cfg) {
  // Objects with no active attribute are indistinguishable.
  if (signature.empty()) return 1.0;
  double num = 0.0;
  double den = 0.0;
  for (const auto& attr : signature) {
    const double w = cfg.WeightOf(attr);
    if (w == 0.0) continue;
    num += w * AttrJaccard(a, b, attr);
    den += w;
  }
  if (den <= 0.0) throw ConfigError("total attribute weight over the signature is zero");
  return num / den;
}

std::vector<Group> PartitionBySignature(const std::vector<Object>& objects, Side side) {
  std::vector<Group> groups;
  std::map<Signature, size_t> slot;
  for (const auto& o : objects) {
    Signature sig = ActiveAttributes(o);
    auto [it, inserted] = slot.emplace(sig, groups.size());
    if (inserted) groups.push_back(Group{-1, side, std::move(sig), {}});
    groups[it->second].members.push_back(o.id);
  }
  return groups;
}

namespace {

std::vector<const Object*> Members(const Group& group, const ObjectModel& om) {
  std::vector<const Object*> objs;
  objs.reserve(group.members.size());
  for (const auto& id : group.members) {
    const Object* o = om.Find(group.side, id);
    if (o == nullptr) throw ContractViolation("group member '" + id + "' not in model");
    objs.push_back(o);
  }
  return objs;
}

std::vector<double> MeanSimilarities(const std::vector<const Object*>& members,
                                     const Signature& signature, const ClusteringConfig& cfg) {
  const size_t n = members.size();
  std::vector<double> sum(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double s = ObjectSimilarity(*members[i], *members[j], signature, cfg);
      sum[i] += s;
      sum[j] += s;
    }
  }
  std::vector<double> mean(n, 1.0);
  if (n > 1) {
    for (size_t i = 0; i < n; ++i) mean[i] = sum[i] / static_cast<double>(n - 1);
  }
  return mean;
}

void RefineInto(const Group& group, const ObjectModel& om, const ClusteringConfig& cfg,
                std::vector<Group>& out) {
  if (group.members.size() <= 1) {
    out.push_back(group);
    return;
  }
  const std::vector<const Object*> objs = Members(group, om);
  const std::vector<double> mean = MeanSimilarities(objs, group.signature, cfg);
  Group kept{-1, group.side, group.signature, {}};
  Group split{-1, group.side, group.signature, {}};
  for (size_t i = 0; i < objs.size(); ++i) {
    (mean[i] < cfg.st ? split : kept).members.push_back(group.members[i]);
  }
  if (split.members.empty() || kept.members.empty()) {
    out.push_back(group);
    return;
  }
  RefineInto(kept, om, cfg, out);
  RefineInto(split, om, cfg, out);
}

}  // namespace

std::vector<Group> RefineGroup(const Group& group, const ObjectModel& om,
                               const ClusteringConfig& cfg) {
  cfg.Validate();
  std::vector<Group> out;
  RefineInto(group, om, cfg, out);
  return out;
}

Clustering Cluster(const ObjectModel& om, const ClusteringConfig& cfg) {
  cfg.Validate();
  int next_id = 0;
  auto run = [&](Side side) {
    std::vector<Group> refined;
    for (const auto& g : PartitionBySignature(om.objects(side), side)) {
      RefineInto(g, om, cfg, refined);
    }
    for (auto& g : refined) g.id = next_id++;
    return refined;
  };
  auto users = run(Side::kUser);
  auto resources = run(Side::kResource);
  return Clustering(std::move(users), std::move(resources));
}

std::vector<double> MemberMeanSimilarities(const Group& group, const ObjectModel& om,
                                           const ClusteringConfig& cfg) {
  return MeanSimilarities(Members(group, om), group.signature, cfg);
}

}  // namespace attrinfer
