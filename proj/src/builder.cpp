#include "pcnet/builder.hpp"

#include <algorithm>
#include <set>

namespace pcnet {

std::size_t CategorizationPid::feature_index(const std::string& id) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].id == id) return i;
  }
  throw Error(ErrorCode::UnknownFeature, "feature '" + id + "' is not in the model");
}

std::size_t CategorizationDecisionModel::action_index(const std::string& action) const {
  auto it = std::find(actions.begin(), actions.end(), action);
  if (it == actions.end()) throw Error(ErrorCode::UnknownAction, "unknown action '" + action + "'");
  return static_cast<std::size_t>(it - actions.begin());
}

CategorizationPid build_categorization_pid(const PcNet& net, const ConceptualCover& cover) {
  if (!is_cover(net, cover.members())) {
    throw Error(ErrorCode::CoverInvalid, "{" + cover.to_string() + "} is not a cover");
  }
  std::vector<const PcDiagram*> diagrams;
  for (const auto& m : cover.members()) {
    const auto* d = net.diagram(m);
    if (!d) {
      throw Error(ErrorCode::DiagramMissing,
                  "cover member '" + m + "' has no diagram (propagate the net first)");
    }
    diagrams.push_back(d);
  }

  CategorizationPid pid;
  pid.cover = cover;
  for (const auto& m : cover.members()) pid.concept_prior.push_back(net.prior(m));

  // Graphical union: shared feature ids are one variable.
  std::set<std::size_t> positions;
  for (const auto* d : diagrams) {
    for (const auto& f : d->features) positions.insert(net.feature_position(f));
  }
  for (auto pos : positions) {
    const auto& decl = net.features()[pos];
    std::vector<const std::vector<std::string>*> lists;
    for (const auto* d : diagrams) {
      if (!d->has_feature(decl.id)) {
        throw Error(ErrorCode::FeatureSetMismatch, "feature '" + decl.id +
                                                       "' is missing from the diagram of '" +
                                                       d->concept_id + "'");
      }
      lists.push_back(&d->cpt(decl.id).parents);
    }
    ModelFeature mf;
    mf.id = decl.id;
    mf.states = decl.domain;
    mf.card = decl.card();
    mf.parents = union_parents(net, lists);
    for (const auto& p : mf.parents) mf.parent_cards.push_back(net.feature(p).card());
    mf.configs = 1;
    for (auto c : mf.parent_cards) mf.configs *= c;
    mf.table.reserve(diagrams.size() * mf.configs * mf.card);
    // Each member's slice is its own table, constant over the parents it lacks.
    for (const auto* d : diagrams) {
      auto ext = extend_cpt(d->cpt(decl.id), mf.parents, mf.parent_cards);
      mf.table.insert(mf.table.end(), ext.values.begin(), ext.values.end());
    }
    pid.features.push_back(std::move(mf));
  }
  for (auto& f : pid.features) {
    for (const auto& p : f.parents) f.parent_indices.push_back(pid.feature_index(p));
  }
  return pid;
}

double derive_cover_utility(const PcNet& net, const PreferenceModel& pref,
                            const std::string& concept_id, const std::string& action) {
  if (!pref.has_action(action)) {
    throw Error(ErrorCode::UnknownAction, "unknown action '" + action + "'");
  }
  const auto& kids = net.children(concept_id);
  if (kids.empty()) {
    auto row = pref.utility.find(action);
    if (row == pref.utility.end() || !row->second.count(concept_id)) {
      throw Error(ErrorCode::UnknownConcept,
                  "no utility for action '" + action + "' at leaf '" + concept_id + "'");
    }
    return row->second.at(concept_id);
  }
  double v = 0.0;
  for (const auto& k : kids) v += link_weight(net, k) * derive_cover_utility(net, pref, k, action);
  return v;
}

CategorizationDecisionModel attach_preference(const PcNet& net, CategorizationPid pid,
                                              const PreferenceModel& pref) {
  for (const auto& f : pref.observed_features) pid.feature_index(f);
  CategorizationDecisionModel model;
  model.actions = pref.actions;
  model.observed_features = pref.observed_features;
  for (const auto& a : pref.actions) {
    std::vector<double> row;
    for (const auto& m : pid.cover.members()) row.push_back(derive_cover_utility(net, pref, m, a));
    model.utility_on_cover.push_back(std::move(row));
  }
  model.pid = std::move(pid);
  return model;
}

CategorizationDecisionModel build_decision_model(const PcNet& net, const ConceptualCover& cover) {
  if (!net.preference()) {
    throw Error(ErrorCode::SchemaError, "net has no preference model");
  }
  return attach_preference(net, build_categorization_pid(net, cover), *net.preference());
}

}  // namespace pcnet
