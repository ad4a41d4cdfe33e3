#include "pcnet/core.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

namespace pcnet {

std::optional<std::size_t> FeatureDecl::state_index(const std::string& label) const {
  auto it = std::find(domain.begin(), domain.end(), label);
  if (it == domain.end()) return std::nullopt;
  return static_cast<std::size_t>(it - domain.begin());
}

std::size_t Cpt::configs() const {
  std::size_t n = 1;
  for (auto c : parent_cards) n *= c;
  return n;
}

Cpt Cpt::marginal(std::vector<double> probabilities) {
  Cpt cpt;
  cpt.card = probabilities.size();
  cpt.values = std::move(probabilities);
  return cpt;
}

const Cpt& PcDiagram::cpt(const std::string& feature) const {
  auto it = cpts.find(feature);
  if (it == cpts.end()) {
    throw Error(ErrorCode::UnknownFeature,
                "feature '" + feature + "' not in diagram of '" + concept_id + "'");
  }
  return it->second;
}

bool PreferenceModel::has_action(const std::string& action) const {
  return std::find(actions.begin(), actions.end(), action) != actions.end();
}

PcNet::PcNet(std::vector<FeatureDecl> features, std::vector<Concept> concepts,
             std::map<std::string, PcDiagram> leaf_diagrams,
             std::map<std::string, PcDiagram> derived_diagrams,
             std::optional<PreferenceModel> preference)
    : features_(std::move(features)),
      concepts_(std::move(concepts)),
      leaf_diagrams_(std::move(leaf_diagrams)),
      derived_diagrams_(std::move(derived_diagrams)),
      preference_(std::move(preference)) {
  index();
}

void PcNet::index() {
  std::sort(features_.begin(), features_.end(), [](const auto& a, const auto& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.id < b.id;
  });
  std::sort(concepts_.begin(), concepts_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!feature_index_.emplace(features_[i].id, i).second) {
      throw Error(ErrorCode::SchemaError, "duplicate feature '" + features_[i].id + "'");
    }
  }
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    if (!concept_index_.emplace(concepts_[i].id, i).second) {
      throw Error(ErrorCode::SchemaError,
                  "concept '" + concepts_[i].id + "' declared more than once (multiple parents?)");
    }
  }

  children_.assign(concepts_.size(), {});
  for (const auto& c : concepts_) {
    if (!c.parent) {
      roots_.push_back(c.id);
      continue;
    }
    auto it = concept_index_.find(*c.parent);
    if (it == concept_index_.end()) {
      throw Error(ErrorCode::SchemaError,
                  "concept '" + c.id + "' has unknown parent '" + *c.parent + "'");
    }
    children_[it->second].push_back(c.id);
  }
  // concepts_ is sorted by id, so each children list already is.

  for (const auto& c : concepts_) {
    bool leaf = children_[concept_index_.at(c.id)].empty();
    if (leaf && !c.prior) {
      throw Error(ErrorCode::SchemaError, "leaf concept '" + c.id + "' has no prior");
    }
    if (!leaf && c.prior) {
      throw Error(ErrorCode::SchemaError,
                  "internal concept '" + c.id + "' must not assert a prior");
    }
  }

  auto check_diagram = [&](const std::string& key, const PcDiagram& d, bool want_leaf) {
    auto it = concept_index_.find(key);
    if (it == concept_index_.end()) {
      throw Error(ErrorCode::SchemaError, "diagram for unknown concept '" + key + "'");
    }
    if (d.concept_id != key) {
      throw Error(ErrorCode::SchemaError, "diagram keyed '" + key + "' names concept '" +
                                              d.concept_id + "'");
    }
    if (children_[it->second].empty() != want_leaf) {
      throw Error(ErrorCode::SchemaError,
                  std::string(want_leaf ? "leaf" : "derived") + " diagram given for " +
                      (want_leaf ? "internal" : "leaf") + " concept '" + key + "'");
    }
    for (const auto& f : d.features) {
      if (!feature_index_.count(f)) {
        throw Error(ErrorCode::SchemaError,
                    "diagram '" + key + "' references undeclared feature '" + f + "'");
      }
      if (!d.cpts.count(f)) {
        throw Error(ErrorCode::SchemaError, "diagram '" + key + "' has no cpt for '" + f + "'");
      }
    }
    for (const auto& [f, cpt] : d.cpts) {
      if (std::find(d.features.begin(), d.features.end(), f) == d.features.end()) {
        throw Error(ErrorCode::SchemaError,
                    "diagram '" + key + "' has a cpt for '" + f + "' outside its feature set");
      }
      const auto& decl = features_[feature_index_.at(f)];
      if (cpt.parents.size() != cpt.parent_cards.size() || cpt.card != decl.card() ||
          cpt.values.size() != cpt.configs() * cpt.card) {
        throw Error(ErrorCode::SchemaError,
                    "diagram '" + key + "' cpt for '" + f + "' has inconsistent shape");
      }
      for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
        const auto& p = cpt.parents[i];
        if (std::find(d.features.begin(), d.features.end(), p) == d.features.end()) {
          throw Error(ErrorCode::SchemaError, "diagram '" + key + "': parent '" + p + "' of '" +
                                                  f + "' is not in the diagram");
        }
        if (features_[feature_index_.at(p)].card() != cpt.parent_cards[i]) {
          throw Error(ErrorCode::SchemaError, "diagram '" + key + "': parent '" + p +
                                                  "' cardinality mismatch in cpt for '" + f + "'");
        }
      }
    }
  };
  for (const auto& [k, d] : leaf_diagrams_) check_diagram(k, d, true);
  for (const auto& [k, d] : derived_diagrams_) check_diagram(k, d, false);

  if (preference_) {
    const auto& pref = *preference_;
    std::set<std::string> seen;
    for (const auto& a : pref.actions) {
      if (!seen.insert(a).second) {
        throw Error(ErrorCode::SchemaError, "duplicate action '" + a + "'");
      }
    }
    for (const auto& [a, row] : pref.utility) {
      if (!seen.count(a)) {
        throw Error(ErrorCode::SchemaError, "utility for undeclared action '" + a + "'");
      }
      for (const auto& [c, v] : row) {
        (void)v;
        if (!concept_index_.count(c)) {
          throw Error(ErrorCode::SchemaError, "utility for unknown concept '" + c + "'");
        }
      }
    }
    for (const auto& f : pref.observed_features) {
      if (!feature_index_.count(f)) {
        throw Error(ErrorCode::SchemaError, "observed feature '" + f + "' is not declared");
      }
    }
  }

  // Preorder and priors; cycles are unreachable from a root and so are
  // simply absent from the preorder (validate() reports them).
  if (roots_.size() == 1) {
    std::vector<std::string> stack{roots_.front()};
    while (!stack.empty()) {
      auto id = std::move(stack.back());
      stack.pop_back();
      const auto& kids = children_[concept_index_.at(id)];
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
      preorder_index_.emplace(id, preorder_.size());
      preorder_.push_back(std::move(id));
    }
  }

  priors_.assign(concepts_.size(), 0.0);
  std::vector<int> state(concepts_.size(), 0);  // 0 new, 1 on stack, 2 done
  std::function<double(std::size_t)> visit = [&](std::size_t i) -> double {
    if (state[i] == 2) return priors_[i];
    if (state[i] == 1) return 0.0;
    state[i] = 1;
    double p = 0.0;
    if (children_[i].empty()) {
      p = *concepts_[i].prior;
    } else {
      for (const auto& c : children_[i]) p += visit(concept_index_.at(c));
    }
    priors_[i] = p;
    state[i] = 2;
    return p;
  };
  for (std::size_t i = 0; i < concepts_.size(); ++i) visit(i);
}

const Concept& PcNet::concept_by_id(const std::string& id) const {
  auto it = concept_index_.find(id);
  if (it == concept_index_.end()) {
    throw Error(ErrorCode::UnknownConcept, "unknown concept '" + id + "'");
  }
  return concepts_[it->second];
}

const FeatureDecl& PcNet::feature(const std::string& id) const {
  return features_[feature_position(id)];
}

std::size_t PcNet::feature_position(const std::string& id) const {
  auto it = feature_index_.find(id);
  if (it == feature_index_.end()) {
    throw Error(ErrorCode::UnknownFeature, "unknown feature '" + id + "'");
  }
  return it->second;
}

const std::string& PcNet::root() const {
  if (roots_.size() != 1) {
    throw Error(ErrorCode::SchemaError,
                "net has " + std::to_string(roots_.size()) + " root concepts, expected 1");
  }
  return roots_.front();
}

const std::vector<std::string>& PcNet::children(const std::string& id) const {
  auto it = concept_index_.find(id);
  if (it == concept_index_.end()) {
    throw Error(ErrorCode::UnknownConcept, "unknown concept '" + id + "'");
  }
  return children_[it->second];
}

std::vector<std::string> PcNet::leaves() const {
  std::vector<std::string> out;
  for (const auto& c : concepts_) {
    if (is_leaf(c.id)) out.push_back(c.id);
  }
  return out;
}

std::size_t PcNet::preorder_position(const std::string& id) const {
  auto it = preorder_index_.find(id);
  if (it == preorder_index_.end()) {
    throw Error(ErrorCode::UnknownConcept, "concept '" + id + "' is not reachable from the root");
  }
  return it->second;
}

std::vector<std::string> PcNet::descendant_leaves(const std::string& id) const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::vector<std::string> stack{id};
  children(id);  // throws on unknown id
  while (!stack.empty()) {
    auto cur = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    const auto& kids = children(cur);
    if (kids.empty()) {
      out.push_back(cur);
    } else {
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
  }
  return out;
}

std::vector<std::string> PcNet::ancestors(const std::string& id) const {
  std::vector<std::string> out;
  const Concept* cur = &concept_by_id(id);
  while (cur->parent && out.size() <= concepts_.size()) {
    if (*cur->parent == id) break;  // cycle back to the start
    out.push_back(*cur->parent);
    cur = &concept_by_id(*cur->parent);
  }
  return out;
}

double PcNet::prior(const std::string& id) const {
  auto it = concept_index_.find(id);
  if (it == concept_index_.end()) {
    throw Error(ErrorCode::UnknownConcept, "unknown concept '" + id + "'");
  }
  return priors_[it->second];
}

const PcDiagram* PcNet::diagram(const std::string& id) const {
  if (auto it = leaf_diagrams_.find(id); it != leaf_diagrams_.end()) return &it->second;
  if (auto it = derived_diagrams_.find(id); it != derived_diagrams_.end()) return &it->second;
  return nullptr;
}

bool PcNet::is_propagated() const {
  return std::all_of(concepts_.begin(), concepts_.end(),
                     [&](const Concept& c) { return diagram(c.id) != nullptr; });
}

PcNet PcNet::with_derived(std::map<std::string, PcDiagram> derived) const {
  return PcNet(features_, concepts_, leaf_diagrams_, std::move(derived), preference_);
}

PcNet PcNet::with_preference(std::optional<PreferenceModel> preference) const {
  return PcNet(features_, concepts_, leaf_diagrams_, derived_diagrams_, std::move(preference));
}

bool subsumes(const PcNet& net, const std::string& specific, const std::string& general) {
  net.concept_by_id(general);
  auto chain = net.ancestors(specific);
  return std::find(chain.begin(), chain.end(), general) != chain.end();
}

std::vector<std::string> most_general_subsumees(const PcNet& net, const std::string& id) {
  return net.children(id);
}

std::string most_specific_subsumer(const PcNet& net, const std::vector<std::string>& concepts) {
  if (concepts.empty()) {
    throw Error(ErrorCode::InvalidArgument, "most specific subsumer of an empty set");
  }
  auto chain_of = [&](const std::string& id) {
    auto chain = net.ancestors(id);
    chain.insert(chain.begin(), id);
    return chain;
  };
  // Walk the first concept's ancestor-or-self chain upward; the first entry
  // that is an ancestor-or-self of every other member is the answer.
  auto candidates = chain_of(concepts.front());
  std::vector<std::unordered_set<std::string>> others;
  for (std::size_t i = 1; i < concepts.size(); ++i) {
    auto chain = chain_of(concepts[i]);
    others.emplace_back(chain.begin(), chain.end());
  }
  for (const auto& cand : candidates) {
    bool common = std::all_of(others.begin(), others.end(),
                              [&](const auto& s) { return s.count(cand) != 0; });
    if (common) return cand;
  }
  throw Error(ErrorCode::UnknownConcept, "concepts share no common subsumer");
}

double subsumption_probability(const PcNet& net, const std::string& specific,
                               const std::string& general) {
  if (!subsumes(net, specific, general)) {
    throw Error(ErrorCode::NotASubconcept,
                "'" + specific + "' is not a subconcept of '" + general + "'");
  }
  double denom = net.prior(general);
  if (denom <= 0.0) {
    throw Error(ErrorCode::ZeroPriorAncestor, "'" + general + "' has zero prior");
  }
  return net.prior(specific) / denom;
}

double concept_prior(const PcNet& net, const std::string& id) { return net.prior(id); }

double link_weight(const PcNet& net, const std::string& child) {
  const auto& c = net.concept_by_id(child);
  if (!c.parent) return 1.0;
  double parent_prior = net.prior(*c.parent);
  if (parent_prior <= 0.0) return 1.0 / static_cast<double>(net.children(*c.parent).size());
  return net.prior(child) / parent_prior;
}

}  // namespace pcnet
