#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcnet/abstraction.hpp"
#include "pcnet/core.hpp"

namespace pcnet {

// One feature node of the merged network. `table` holds one slice per
// cover member: table[(member * configs + config) * card + state].
struct ModelFeature {
  std::string id;
  std::vector<std::string> states;
  std::vector<std::string> parents;         // B^g(F), rank order
  std::vector<std::size_t> parent_indices;  // positions in the model's feature list
  std::vector<std::size_t> parent_cards;
  std::size_t card = 0;
  std::size_t configs = 1;
  std::vector<double> table;

  double at(std::size_t member, std::size_t config, std::size_t state) const {
    return table[(member * configs + config) * card + state];
  }
  std::size_t entries() const { return table.size(); }
};

// The categorization probabilistic influence diagram: a chance node over
// the cover members and the graphical union of their feature networks.
struct CategorizationPid {
  ConceptualCover cover;
  std::vector<double> concept_prior;  // aligned with cover.members()
  std::vector<ModelFeature> features;  // global rank order

  std::size_t feature_index(const std::string& id) const;
};

// The PID completed with a decision node observing `observed_features` and
// a value node over (action, cover concept).
struct CategorizationDecisionModel {
  CategorizationPid pid;
  std::vector<std::string> actions;
  std::vector<std::vector<double>> utility_on_cover;  // [action][member]
  std::vector<std::string> observed_features;

  const ConceptualCover& cover() const { return pid.cover; }
  std::size_t action_index(const std::string& action) const;
};

// Requires a propagated net (every cover member has a diagram).
CategorizationPid build_categorization_pid(const PcNet& net, const ConceptualCover& cover);

// v(a, c) = sum over descendant leaves l of p(l | c) v(a, l); leaves pass
// through unchanged.
double derive_cover_utility(const PcNet& net, const PreferenceModel& pref,
                            const std::string& concept_id, const std::string& action);

CategorizationDecisionModel attach_preference(const PcNet& net, CategorizationPid pid,
                                              const PreferenceModel& pref);

// build + attach using the net's own preference model.
CategorizationDecisionModel build_decision_model(const PcNet& net, const ConceptualCover& cover);

}  // namespace pcnet
