#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcnet/error.hpp"

namespace pcnet {

// Absolute tolerance for every normalization and consistency check.
inline constexpr double kProbabilityTolerance = 1e-9;

struct FeatureDecl {
  std::string id;
  std::vector<std::string> domain;
  std::size_t rank = 0;

  std::size_t card() const { return domain.size(); }
  std::optional<std::size_t> state_index(const std::string& label) const;
};

// `prior` is asserted for leaves only; internal priors are always derived.
struct Concept {
  std::string id;
  std::optional<std::string> parent;
  std::optional<double> prior;
};

// Conditional table p(F | C, B(F)) for one feature of one concept.
// Rows are parent configurations in mixed radix with the first parent
// varying slowest; each row holds `card` state probabilities.
struct Cpt {
  std::vector<std::string> parents;
  std::vector<std::size_t> parent_cards;
  std::size_t card = 0;
  std::vector<double> values;

  std::size_t configs() const;
  double at(std::size_t config, std::size_t state) const { return values[config * card + state]; }
  std::span<const double> row(std::size_t config) const {
    return {values.data() + config * card, card};
  }

  // Unconditional table with the given row.
  static Cpt marginal(std::vector<double> probabilities);
};

// The local diagram for one concept. The concept node is deterministic and
// implicit; only p(F | C holds, B(F)) is stored.
struct PcDiagram {
  std::string concept_id;
  std::vector<std::string> features;  // global rank order
  std::map<std::string, Cpt> cpts;

  const Cpt& cpt(const std::string& feature) const;
  bool has_feature(const std::string& feature) const { return cpts.count(feature) != 0; }
};

struct PreferenceModel {
  std::vector<std::string> actions;
  // utility[action][leaf concept]
  std::map<std::string, std::map<std::string, double>> utility;
  std::vector<std::string> observed_features;

  bool has_action(const std::string& action) const;
};

// An immutable pc-net. Construction enforces referential integrity (every
// id mentioned resolves, no duplicates, leaves carry priors, internals do
// not) and throws SchemaError otherwise. Semantic invariants such as root
// prior, CPT normalization and rank ordering are left to validate().
class PcNet {
 public:
  PcNet() = default;
  PcNet(std::vector<FeatureDecl> features, std::vector<Concept> concepts,
        std::map<std::string, PcDiagram> leaf_diagrams,
        std::map<std::string, PcDiagram> derived_diagrams = {},
        std::optional<PreferenceModel> preference = std::nullopt);

  // Features sorted by (rank, id).
  const std::vector<FeatureDecl>& features() const { return features_; }
  // Concepts sorted by id.
  const std::vector<Concept>& concepts() const { return concepts_; }
  const std::map<std::string, PcDiagram>& leaf_diagrams() const { return leaf_diagrams_; }
  const std::map<std::string, PcDiagram>& derived_diagrams() const { return derived_diagrams_; }
  const std::optional<PreferenceModel>& preference() const { return preference_; }

  bool has_concept(const std::string& id) const { return concept_index_.count(id) != 0; }
  const Concept& concept_by_id(const std::string& id) const;
  bool has_feature(const std::string& id) const { return feature_index_.count(id) != 0; }
  const FeatureDecl& feature(const std::string& id) const;
  // Position of the feature in features().
  std::size_t feature_position(const std::string& id) const;

  // Concepts without a parent; a valid net has exactly one.
  const std::vector<std::string>& roots() const { return roots_; }
  const std::string& root() const;
  const std::vector<std::string>& children(const std::string& id) const;
  bool is_leaf(const std::string& id) const { return children(id).empty(); }
  std::vector<std::string> leaves() const;

  // Tree preorder from the root, children visited in id order.
  const std::vector<std::string>& preorder() const { return preorder_; }
  std::size_t preorder_position(const std::string& id) const;
  std::vector<std::string> descendant_leaves(const std::string& id) const;
  // Proper ancestors, nearest first.
  std::vector<std::string> ancestors(const std::string& id) const;

  // Leaf: asserted prior. Internal: sum of descendant-leaf priors.
  double prior(const std::string& id) const;

  // Leaf diagram for leaves, derived diagram for internals; null if absent.
  const PcDiagram* diagram(const std::string& id) const;
  bool is_propagated() const;

  PcNet with_derived(std::map<std::string, PcDiagram> derived) const;
  PcNet with_preference(std::optional<PreferenceModel> preference) const;

 private:
  void index();

  std::vector<FeatureDecl> features_;
  std::vector<Concept> concepts_;
  std::map<std::string, PcDiagram> leaf_diagrams_;
  std::map<std::string, PcDiagram> derived_diagrams_;
  std::optional<PreferenceModel> preference_;

  std::unordered_map<std::string, std::size_t> concept_index_;
  std::unordered_map<std::string, std::size_t> feature_index_;
  std::vector<std::vector<std::string>> children_;
  std::vector<std::string> roots_;
  std::vector<std::string> preorder_;
  std::unordered_map<std::string, std::size_t> preorder_index_;
  std::vector<double> priors_;
};

// Proper subsumption: true iff `general` is a strict ancestor of `specific`.
bool subsumes(const PcNet& net, const std::string& specific, const std::string& general);

// Direct subconcepts of `id`; empty for leaves.
std::vector<std::string> most_general_subsumees(const PcNet& net, const std::string& id);

// Lowest common ancestor-or-self of a nonempty set.
std::string most_specific_subsumer(const PcNet& net, const std::vector<std::string>& concepts);

// p(specific | general) = prior(specific) / prior(general).
double subsumption_probability(const PcNet& net, const std::string& specific,
                               const std::string& general);

double concept_prior(const PcNet& net, const std::string& id);

// Weight of a child under its parent: the subsumption probability, or a
// uniform split when the parent has zero prior.
double link_weight(const PcNet& net, const std::string& child);

}  // namespace pcnet
