#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "attrinfer/policy.h"

namespace attrinfer {

using Signature = std::set<std::string>;

struct ClusteringConfig {
  // Per-attribute importance; attributes not listed weigh 1.0.
  std::map<std::string, double> weights;
  // Similarity threshold: members whose mean similarity to the rest of their
  // group falls below it are split off.
  double st = 0.25;

  double WeightOf(const std::string& attr) const;
  // Throws ConfigError on negative weights or st outside [0, 1].
  void Validate() const;
};

struct Group {
  int id = -1;
  Side side = Side::kUser;
  Signature signature;
  std::vector<std::string> members;
};

// Partition of the object model into refined groups. Group ids are dense:
// user groups first, then resource groups, in creation order.
class Clustering {
 public:
  Clustering() = default;
  Clustering(std::vector<Group> user_groups, std::vector<Group> resource_groups);

  const std::vector<Group>& user_groups() const { return user_groups_; }
  const std::vector<Group>& resource_groups() const { return resource_groups_; }
  const std::vector<Group>& groups(Side side) const {
    return side == Side::kUser ? user_groups_ : resource_groups_;
  }

  // Throws ContractViolation for ids not in the clustering.
  const Group& GroupOf(const std::string& object_id) const;
  const Group& ById(int group_id) const;
  bool Contains(const std::string& object_id) const { return index_.count(object_id) > 0; }
  const std::unordered_map<std::string, int>& index() const { return index_; }

 private:
  std::vector<Group> user_groups_;
  std::vector<Group> resource_groups_;
  std::unordered_map<std::string, int> index_;
};

// Attributes whose value is not Null. Missing cells count as active.
Signature ActiveAttributes(const Object& o);

// Jaccard similarity of one attribute, atomic values lifted to singletons.
// Missing on either side yields 0.5; two empty sets yield 1.0.
double AttrJaccard(const Object& a, const Object& b, const std::string& attr);

// Weighted mean of AttrJaccard over `signature`; 1.0 for an empty signature.
// Throws ConfigError when every attribute of a non-empty signature has weight 0.
double ObjectSimilarity(const Object& a, const Object& b, const Signature& signature,
                        const ClusteringConfig& cfg);

// Groups keyed by exact active-attribute set; groups ordered by first
// appearance, members in input order. Group ids are left unassigned (-1).
std::vector<Group> PartitionBySignature(const std::vector<Object>& objects, Side side);

// Splits off members whose mean similarity is below cfg.st into one new group
// and recurses on both parts. A pass that would move no member or every
// member leaves the group as is. Returned groups have unassigned ids.
std::vector<Group> RefineGroup(const Group& group, const ObjectModel& om,
                               const ClusteringConfig& cfg);

Clustering Cluster(const ObjectModel& om, const ClusteringConfig& cfg);

// Mean similarity of each member to the other members, in member order. A
// singleton scores 1.0.
std::vector<double> MemberMeanSimilarities(const Group& group, const ObjectModel& om,
                                           const ClusteringConfig& cfg);

}  // namespace attrinfer
