#include "attrinfer/prediction.h"

#include <algorithm>
#include <tuple>

#include "attrinfer/errors.h"

namespace attrinfer {

void PredictionConfig::Validate() const {
  if (ntcf.num_high < 1 || ntcf.num_med < ntcf.num_high) {
    throw ConfigError("NTCF must satisfy 1 <= numHigh <= numMed (got <" +
                      std::to_string(ntcf.num_high) + ", " + std::to_string(ntcf.num_med) + ">)");
  }
}

const char* ToString(Confidence c) {
  switch (c) {
    case Confidence::kHigh:
      return "High";
    case Confidence::kMedium:
      return "Medium";
    case Confidence::kNei:
      return "NEI";
  }
  return "?";
}

ValueSet Prediction::Values() const {
  ValueSet out;
  for (const auto& v : values) out.insert(v.value);
  return out;
}

std::set<GroupTriple> RelevantGroupTriples(Side side, const std::string& object_id,
                                           const EntitlementIndex& e0,
                                           const Clustering& clustering) {
  std::set<GroupTriple> out;
  for (const auto& e : e0.Involving(side, object_id)) {
    out.insert(GroupTriple{clustering.GroupOf(e.user).id, clustering.GroupOf(e.resource).id,
                           e.action});
  }
  return out;
}

namespace {

Side Other(Side s) { return s == Side::kUser ? Side::kResource : Side::kUser; }

// Known counterpart values over the objects `subject` is entitled with.
std::vector<AttrValue> CounterpartValues(Side side, const Object& subject,
                                         const std::string& counterpart_attr,
                                         const GroupTriple& triple, const EntitlementIndex& e0,
                                         const Clustering& clustering, const ObjectModel& om) {
  const Side other = Other(side);
  const int other_group = other == Side::kUser ? triple.user_group : triple.resource_group;
  std::vector<AttrValue> out;
  for (const auto& e : e0.Involving(side, subject.id)) {
    if (e.action != triple.action) continue;
    const std::string& cid = side == Side::kUser ? e.resource : e.user;
    if (clustering.GroupOf(cid).id != other_group) continue;
    const AttrValue& v = om.Find(other, cid)->Get(counterpart_attr);
    if (v.is_known()) out.push_back(v);
  }
  return out;
}

ValueSet UnionOf(const std::vector<AttrValue>& vals) {
  ValueSet out;
  for (const auto& v : vals) {
    for (auto& s : v.AsSet()) out.insert(std::move(s));
  }
  return out;
}

ValueSet IntersectionOf(const std::vector<AttrValue>& vals) {
  if (vals.empty()) return {};
  ValueSet acc = vals.front().AsSet();
  for (size_t i = 1; i < vals.size() && !acc.empty(); ++i) {
    ValueSet next;
    const ValueSet s = vals[i].AsSet();
    std::set_intersection(acc.begin(), acc.end(), s.begin(), s.end(),
                          std::inserter(next, next.end()));
    acc = std::move(next);
  }
  return acc;
}

ValueSet SingletonOrNothing(ValueSet s) { return s.size() == 1 ? s : ValueSet{}; }

// A zero-coefficient `attr in {v}` condition that holds on every learning row
// and on every group member whose value is known (at least two).
bool IsGroupConstant(const RankedFeature& entry, const RankedFeatures& ranked,
                     const GroupTriple& triple, const Clustering& clustering,
                     const ObjectModel& om) {
  const Feature& f = entry.feature;
  if (!f.is_condition() || f.condition.op != CondOp::kIn || f.condition.values.size() != 1) {
    return false;
  }
  if (ranked.rows == 0 || entry.support != ranked.rows) return false;
  const Side side = f.condition_side();
  const Group& g =
      clustering.ById(side == Side::kUser ? triple.user_group : triple.resource_group);
  const std::string& expected = *f.condition.values.begin();
  size_t known = 0;
  for (const auto& id : g.members) {
    const AttrValue& v = om.Find(side, id)->Get(f.condition.attr);
    if (!v.is_atomic()) continue;
    if (v.atomic() != expected) return false;
    ++known;
  }
  return known >= 2;
}

}  // namespace

bool IsEvidence(const RankedFeature& entry, const RankedFeatures& ranked, Side side,
                const Object& subject, const GroupTriple& triple, const EntitlementIndex& e0,
                const Clustering& clustering, const ObjectModel& om) {
  if (ranked.positives == 0 || entry.positive_support != ranked.positives) return false;
  const Feature& f = entry.feature;
  if (!f.is_condition()) return QuantizeCoefficient(entry.coefficient) > 0;
  if (!IsGroupConstant(entry, ranked, triple, clustering, om) &&
      (QuantizeCoefficient(entry.coefficient) <= 0 || ranked.positives < 2)) {
    return false;
  }
  if (f.condition_side() != side) return true;

  // Objects sharing a counterpart with the subject must not contradict it.
  const Schema& schema = om.schema();
  const Side other = Other(side);
  const int own_group = side == Side::kUser ? triple.user_group : triple.resource_group;
  const int other_group = other == Side::kUser ? triple.user_group : triple.resource_group;
  for (const auto& e : e0.Involving(side, subject.id)) {
    if (e.action != triple.action) continue;
    const std::string& cid = side == Side::kUser ? e.resource : e.user;
    if (clustering.GroupOf(cid).id != other_group) continue;
    for (const auto& peer : e0.Involving(other, cid)) {
      if (peer.action != triple.action) continue;
      const std::string& pid = side == Side::kUser ? peer.user : peer.resource;
      if (pid == subject.id || clustering.GroupOf(pid).id != own_group) continue;
      const Object& o = *om.Find(side, pid);
      if (EvalAtomicCondition(schema, side, o, f.condition) == Tri::kFalse) return false;
    }
  }
  return true;
}

ValueSet PredictFromFeature(const Feature& f, Side side, const std::string& attr,
                            const Object& subject, const GroupTriple& triple,
                            const EntitlementIndex& e0, const Clustering& clustering,
                            const ObjectModel& om) {
  if (!f.Mentions(side, attr)) {
    throw ContractViolation("feature '" + f.ToString() + "' does not mention " + ToString(side) +
                            " attribute '" + attr + "'");
  }
  if (f.is_condition()) {
    if (f.condition.op == CondOp::kContains) return f.condition.values;
    return SingletonOrNothing(f.condition.values);
  }

  const AtomicConstraint& c = f.constraint;
  const std::string& counterpart_attr = side == Side::kUser ? c.resource_attr : c.user_attr;
  const auto vals = CounterpartValues(side, subject, counterpart_attr, triple, e0, clustering, om);
  if (vals.empty()) return {};

  switch (c.op) {
    case ConsOp::kEqual:
      // Every entitled pair has u.attr == r.attr: all counterpart values agree.
      return SingletonOrNothing(UnionOf(vals));
    case ConsOp::kIn:
      // u.attr (atomic) is an element of each r.attr (set).
      return side == Side::kUser ? SingletonOrNothing(IntersectionOf(vals)) : UnionOf(vals);
    case ConsOp::kContains:
      // u.attr (set) holds each r.attr (atomic).
      return side == Side::kUser ? UnionOf(vals) : SingletonOrNothing(IntersectionOf(vals));
    case ConsOp::kSupseteq:
      // u.attr is a superset of each r.attr: a lower bound for the user only.
      return side == Side::kUser ? UnionOf(vals) : ValueSet{};
  }
  return {};
}

std::vector<Candidate> PredictMissingValues(const RankedFeatures& ranked, Side side,
                                            const std::string& attr, const Object& subject,
                                            const GroupTriple& triple, const EntitlementIndex& e0,
                                            const Clustering& clustering, const ObjectModel& om,
                                            const PredictionConfig& cfg) {
  std::vector<Candidate> out;
  const size_t limit =
      std::min(ranked.entries.size(), static_cast<size_t>(std::max(cfg.ntcf.num_med, 0)));
  for (size_t i = 0; i < limit; ++i) {
    const RankedFeature& entry = ranked.entries[i];
    if (!entry.feature.Mentions(side, attr)) continue;
    if (!IsEvidence(entry, ranked, side, subject, triple, e0, clustering, om)) continue;
    ValueSet values =
        PredictFromFeature(entry.feature, side, attr, subject, triple, e0, clustering, om);
    if (values.empty()) continue;
    const int rank = static_cast<int>(i) + 1;
    out.push_back(Candidate{std::move(values),
                            rank <= cfg.ntcf.num_high ? Confidence::kHigh : Confidence::kMedium,
                            triple, entry.feature, rank});
  }
  return out;
}

Prediction CombinePredictions(const std::string& object_id, Side side, const std::string& attr,
                              AttrKind kind, std::vector<Candidate> candidates) {
  Prediction p;
  p.object_id = object_id;
  p.side = side;
  p.attr = attr;
  p.kind = kind;

  std::map<std::string, PredictedValue> best;
  for (const auto& c : candidates) {
    for (const auto& v : c.values) {
      auto [it, inserted] = best.try_emplace(v, PredictedValue{v, c.confidence, c.rank});
      if (inserted) continue;
      PredictedValue& b = it->second;
      if (c.confidence > b.confidence ||
          (c.confidence == b.confidence && c.rank < b.best_rank)) {
        b.confidence = c.confidence;
        b.best_rank = c.rank;
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.triple, a.rank) < std::tie(b.triple, b.rank);
  });
  p.provenance = std::move(candidates);
  if (best.empty()) return p;

  if (kind == AttrKind::kSingle) {
    const PredictedValue* chosen = nullptr;
    for (const auto& [v, pv] : best) {
      if (chosen == nullptr || pv.confidence > chosen->confidence ||
          (pv.confidence == chosen->confidence && pv.best_rank < chosen->best_rank)) {
        chosen = &pv;
      }
    }
    p.values.push_back(*chosen);
  } else {
    for (auto& [v, pv] : best) p.values.push_back(pv);
  }
  for (const auto& v : p.values) p.confidence = std::max(p.confidence, v.confidence);
  return p;
}

// ---------------------------------------------------------------------------
// Predictor

Predictor::Predictor(const ObjectModel& om, const EntitlementIndex& e0,
                     const Clustering& clustering, PredictionConfig cfg)
    : om_(om), e0_(e0), clustering_(clustering), cfg_(cfg) {
  cfg_.Validate();
}

const std::optional<RankedFeatures>& Predictor::Ranking(const GroupTriple& triple) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(triple);
  if (it != cache_.end()) return it->second;
  std::optional<RankedFeatures> ranked;
  auto ld = BuildLearningData(clustering_.ById(triple.user_group),
                              clustering_.ById(triple.resource_group), triple.action, e0_, om_);
  if (ld) ranked = LearnImportantFeatures(*ld);
  return cache_.emplace(triple, std::move(ranked)).first->second;
}

Prediction Predictor::Predict(Side side, const std::string& object_id, const std::string& attr) {
  const Object* subject = om_.Find(side, object_id);
  if (subject == nullptr) {
    throw ContractViolation(std::string("no ") + ToString(side) + " '" + object_id + "'");
  }
  if (!subject->Get(attr).is_missing()) {
    throw ContractViolation("cell " + object_id + "." + attr + " is not missing");
  }
  const AttrKind kind = om_.schema().Get(side, attr).kind;
  std::vector<Candidate> all;
  for (const auto& triple : RelevantGroupTriples(side, object_id, e0_, clustering_)) {
    const auto& ranked = Ranking(triple);
    if (!ranked) continue;
    auto cands =
        PredictMissingValues(*ranked, side, attr, *subject, triple, e0_, clustering_, om_, cfg_);
    all.insert(all.end(), std::make_move_iterator(cands.begin()),
               std::make_move_iterator(cands.end()));
  }
  return CombinePredictions(object_id, side, attr, kind, std::move(all));
}

std::vector<Prediction> Predictor::PredictAll() {
  std::vector<std::tuple<std::string, std::string, Side>> cells;
  for (Side side : {Side::kUser, Side::kResource}) {
    for (const auto& o : om_.objects(side)) {
      for (const auto& [name, value] : o.attrs) {
        if (value.is_missing()) cells.emplace_back(o.id, name, side);
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  std::vector<Prediction> out;
  out.reserve(cells.size());
  for (const auto& [id, attr, side] : cells) out.push_back(Predict(side, id, attr));
  return out;
}

Prediction PredictMissingUserAttr(const std::string& user, const std::string& attr,
                                  const EntitlementSet& e0, const ObjectModel& om,
                                  const Clustering& clustering, const PredictionConfig& cfg) {
  EntitlementIndex index(e0);
  return Predictor(om, index, clustering, cfg).PredictUserAttr(user, attr);
}

Prediction PredictMissingResourceAttr(const std::string& resource, const std::string& attr,
                                      const EntitlementSet& e0, const ObjectModel& om,
                                      const Clustering& clustering, const PredictionConfig& cfg) {
  EntitlementIndex index(e0);
  return Predictor(om, index, clustering, cfg).PredictResourceAttr(resource, attr);
}

std::vector<Prediction> PredictAll(const ObjectModel& om, const EntitlementSet& e0,
                                   const Clustering& clustering, const PredictionConfig& cfg) {
  EntitlementIndex index(e0);
  return Predictor(om, index, clustering, cfg).PredictAll();
}

}  // namespace attrinfer
