#include "pcnet/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "pcnet/json_util.hpp"

namespace pcnet {
namespace {

// Dense factor over a sorted variable list, last variable fastest.
struct Factor {
  std::vector<std::size_t> vars;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  bool has(std::size_t var) const { return std::find(vars.begin(), vars.end(), var) != vars.end(); }
};

std::vector<std::size_t> strides_in(const Factor& f, const std::vector<std::size_t>& scope) {
  // Stride of each scope variable inside f (0 when f does not mention it).
  std::vector<std::size_t> own(f.vars.size());
  std::size_t s = 1;
  for (std::size_t i = f.vars.size(); i-- > 0;) {
    own[i] = s;
    s *= f.cards[i];
  }
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t i = 0; i < scope.size(); ++i) {
    auto it = std::find(f.vars.begin(), f.vars.end(), scope[i]);
    if (it != f.vars.end()) out[i] = own[static_cast<std::size_t>(it - f.vars.begin())];
  }
  return out;
}

Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  std::vector<std::pair<std::size_t, std::size_t>> merged;
  for (std::size_t i = 0; i < a.vars.size(); ++i) merged.emplace_back(a.vars[i], a.cards[i]);
  for (std::size_t i = 0; i < b.vars.size(); ++i) {
    if (!a.has(b.vars[i])) merged.emplace_back(b.vars[i], b.cards[i]);
  }
  std::sort(merged.begin(), merged.end());
  std::size_t size = 1;
  for (const auto& [v, c] : merged) {
    out.vars.push_back(v);
    out.cards.push_back(c);
    size *= c;
  }
  auto sa = strides_in(a, out.vars);
  auto sb = strides_in(b, out.vars);
  out.values.resize(size);
  std::vector<std::size_t> state(out.vars.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < size; ++k) {
    out.values[k] = a.values[ia] * b.values[ib];
    for (std::size_t d = out.vars.size(); d-- > 0;) {
      if (++state[d] < out.cards[d]) {
        ia += sa[d];
        ib += sb[d];
        break;
      }
      state[d] = 0;
      ia -= sa[d] * (out.cards[d] - 1);
      ib -= sb[d] * (out.cards[d] - 1);
    }
  }
  return out;
}

Factor sum_out(const Factor& f, std::size_t var) {
  auto pos = static_cast<std::size_t>(std::find(f.vars.begin(), f.vars.end(), var) - f.vars.begin());
  Factor out;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (i == pos) continue;
    out.vars.push_back(f.vars[i]);
    out.cards.push_back(f.cards[i]);
  }
  std::size_t inner = 1;
  for (std::size_t i = pos + 1; i < f.vars.size(); ++i) inner *= f.cards[i];
  std::size_t card = f.cards[pos];
  std::size_t outer = f.values.size() / (inner * card);
  out.values.assign(outer * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < card; ++s) {
      const double* src = f.values.data() + (o * card + s) * inner;
      double* dst = out.values.data() + o * inner;
      for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i];
    }
  }
  return out;
}

// Factor for p(F | C, B^g(F)) with observed variables fixed to their
// evidence state. Variables are model feature indices; the concept is
// variable `n_features`.
Factor feature_factor(const CategorizationPid& pid, std::size_t fi,
                      const std::vector<std::optional<std::size_t>>& observed) {
  const auto& mf = pid.features[fi];
  const std::size_t concept_var = pid.features.size();
  const std::size_t members = pid.cover.size();

  Factor f;
  std::vector<std::size_t> scope = mf.parent_indices;
  scope.push_back(fi);
  scope.push_back(concept_var);
  std::vector<std::size_t> free_vars;
  for (auto v : scope) {
    if (v == concept_var || !observed[v]) free_vars.push_back(v);
  }
  std::sort(free_vars.begin(), free_vars.end());
  for (auto v : free_vars) {
    f.vars.push_back(v);
    f.cards.push_back(v == concept_var ? members : pid.features[v].card);
  }
  std::size_t size = 1;
  for (auto c : f.cards) size *= c;
  f.values.resize(size);

  std::vector<std::size_t> assign(concept_var + 1, 0);
  for (std::size_t v = 0; v < concept_var; ++v) {
    if (observed[v]) assign[v] = *observed[v];
  }
  std::vector<std::size_t> state(f.vars.size(), 0);
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t d = 0; d < f.vars.size(); ++d) assign[f.vars[d]] = state[d];
    std::size_t config = 0;
    for (std::size_t p = 0; p < mf.parent_indices.size(); ++p) {
      config = config * mf.parent_cards[p] + assign[mf.parent_indices[p]];
    }
    f.values[k] = mf.at(assign[concept_var], config, assign[fi]);
    for (std::size_t d = f.vars.size(); d-- > 0;) {
      if (++state[d] < f.cards[d]) break;
      state[d] = 0;
    }
  }
  return f;
}

std::size_t state_of(const std::vector<std::string>& states, const std::string& feature,
                     const std::string& label) {
  auto it = std::find(states.begin(), states.end(), label);
  if (it == states.end()) {
    throw Error(ErrorCode::UnknownState,
                "'" + label + "' is not a state of feature '" + feature + "'");
  }
  return static_cast<std::size_t>(it - states.begin());
}

}  // namespace

void check_evidence(const CategorizationDecisionModel& model, const EvidenceSet& evidence) {
  for (const auto& [feature, label] : evidence) {
    auto fi = model.pid.feature_index(feature);
    if (std::find(model.observed_features.begin(), model.observed_features.end(), feature) ==
        model.observed_features.end()) {
      throw Error(ErrorCode::UnobservedFeatureInEvidence,
                  "feature '" + feature + "' is not observed by the decision");
    }
    state_of(model.pid.features[fi].states, feature, label);
  }
}

Posterior posterior(const CategorizationDecisionModel& model, const EvidenceSet& evidence) {
  check_evidence(model, evidence);
  const auto& pid = model.pid;
  const std::size_t n = pid.features.size();
  std::vector<std::optional<std::size_t>> observed(n);
  for (const auto& [feature, label] : evidence) {
    auto fi = pid.feature_index(feature);
    observed[fi] = state_of(pid.features[fi].states, feature, label);
  }

  std::vector<Factor> factors;
  for (std::size_t fi = 0; fi < n; ++fi) factors.push_back(feature_factor(pid, fi, observed));

  for (std::size_t v = n; v-- > 0;) {
    if (observed[v]) continue;
    std::vector<Factor> keep;
    std::optional<Factor> product;
    for (auto& f : factors) {
      if (!f.has(v)) {
        keep.push_back(std::move(f));
      } else {
        product = product ? multiply(*product, f) : std::move(f);
      }
    }
    if (product) keep.push_back(sum_out(*product, v));
    factors = std::move(keep);
  }

  const std::size_t members = pid.cover.size();
  Posterior out;
  out.probabilities = pid.concept_prior;
  for (const auto& f : factors) {
    // Remaining factors mention at most the concept variable.
    for (std::size_t c = 0; c < members; ++c) {
      out.probabilities[c] *= f.vars.empty() ? f.values[0] : f.values[c];
    }
  }
  out.evidence_probability = std::accumulate(out.probabilities.begin(), out.probabilities.end(), 0.0);
  if (!(out.evidence_probability >= kEvidenceFloor)) {
    throw Error(ErrorCode::EvidenceImpossible, "evidence has probability " +
                                                   std::to_string(out.evidence_probability));
  }
  for (auto& p : out.probabilities) p /= out.evidence_probability;
  return out;
}

double expected_utility(const CategorizationDecisionModel& model, const EvidenceSet& evidence,
                        const std::string& action) {
  auto a = model.action_index(action);
  auto post = posterior(model, evidence);
  double eu = 0.0;
  for (std::size_t c = 0; c < post.probabilities.size(); ++c) {
    eu += post.probabilities[c] * model.utility_on_cover[a][c];
  }
  return eu;
}

SolveResult solve(const CategorizationDecisionModel& model, const EvidenceSet& evidence) {
  if (model.actions.empty()) throw Error(ErrorCode::UnknownAction, "model has no actions");
  auto post = posterior(model, evidence);
  SolveResult result;
  const auto& members = model.cover().members();
  for (std::size_t c = 0; c < members.size(); ++c) {
    result.posterior.emplace_back(members[c], post.probabilities[c]);
  }
  double best = -INFINITY;
  for (std::size_t a = 0; a < model.actions.size(); ++a) {
    double eu = 0.0;
    for (std::size_t c = 0; c < members.size(); ++c) {
      eu += post.probabilities[c] * model.utility_on_cover[a][c];
    }
    result.eu_per_action.emplace_back(model.actions[a], eu);
    best = std::max(best, eu);
  }
  double slack = 1e-9 * std::max(1.0, std::abs(best));
  bool chosen = false;
  for (const auto& [action, eu] : result.eu_per_action) {
    if (eu < best - slack) continue;
    if (!chosen || action < result.best_action) {
      result.best_action = action;
      result.best_eu = eu;
      chosen = true;
    }
  }
  return result;
}

std::string solve_result_json(const SolveResult& result) {
  nlohmann::ordered_json j;
  j["posterior"] = nlohmann::ordered_json::object();
  for (const auto& [c, p] : result.posterior) j["posterior"][c] = round_significant(p);
  j["eu_per_action"] = nlohmann::ordered_json::object();
  for (const auto& [a, eu] : result.eu_per_action) j["eu_per_action"][a] = round_significant(eu);
  j["best_action"] = result.best_action;
  j["best_eu"] = round_significant(result.best_eu);
  return j.dump();
}

std::size_t JointTable::feature_configs() const {
  std::size_t n = 1;
  for (auto c : cards) n *= c;
  return n;
}

double JointTable::total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

std::vector<double> JointTable::feature_marginal() const {
  std::size_t configs = feature_configs();
  std::vector<double> out(configs, 0.0);
  for (std::size_t m = 0; m < members.size(); ++m) {
    for (std::size_t k = 0; k < configs; ++k) out[k] += values[m * configs + k];
  }
  return out;
}

std::vector<double> JointTable::evidence_mass(const EvidenceSet& evidence) const {
  std::vector<std::optional<std::size_t>> fixed(features.size());
  for (const auto& [feature, label] : evidence) {
    auto it = std::find(features.begin(), features.end(), feature);
    if (it == features.end()) throw Error(ErrorCode::UnknownFeature, "unknown feature '" + feature + "'");
    auto fi = static_cast<std::size_t>(it - features.begin());
    fixed[fi] = state_of(states[fi], feature, label);
  }
  std::size_t configs = feature_configs();
  std::vector<double> out(members.size(), 0.0);
  for (std::size_t k = 0; k < configs; ++k) {
    std::size_t rem = k;
    bool match = true;
    for (std::size_t f = features.size(); f-- > 0;) {
      std::size_t s = rem % cards[f];
      rem /= cards[f];
      if (fixed[f] && *fixed[f] != s) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    for (std::size_t m = 0; m < members.size(); ++m) out[m] += values[m * configs + k];
  }
  return out;
}

std::vector<double> JointTable::condition(const EvidenceSet& evidence) const {
  auto mass = evidence_mass(evidence);
  double z = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (!(z >= kEvidenceFloor)) {
    throw Error(ErrorCode::EvidenceImpossible, "evidence has probability " + std::to_string(z));
  }
  for (auto& m : mass) m /= z;
  return mass;
}

JointTable joint_oracle(const PcNet& net, const ConceptualCover& cover) {
  JointTable joint;
  joint.members = cover.members();
  std::vector<const PcDiagram*> diagrams;
  for (const auto& m : cover.members()) {
    const auto* d = net.diagram(m);
    if (!d) throw Error(ErrorCode::DiagramMissing, "cover member '" + m + "' has no diagram");
    diagrams.push_back(d);
  }
  for (const auto& fid : diagrams.front()->features) {
    const auto& decl = net.feature(fid);
    joint.features.push_back(fid);
    joint.states.push_back(decl.domain);
    joint.cards.push_back(decl.card());
  }
  const std::size_t configs = joint.feature_configs();
  const std::size_t nf = joint.features.size();
  if (configs > kMaxJointEntries / std::max<std::size_t>(1, joint.members.size())) {
    throw Error(ErrorCode::JointTooLarge, "joint over " + std::to_string(nf) +
                                              " features exceeds " +
                                              std::to_string(kMaxJointEntries) + " entries");
  }
  joint.values.assign(configs * joint.members.size(), 0.0);

  std::vector<std::size_t> assign(nf);
  for (std::size_t m = 0; m < diagrams.size(); ++m) {
    const auto& d = *diagrams[m];
    if (d.features != joint.features) {
      throw Error(ErrorCode::FeatureSetMismatch, "cover members do not share a feature set");
    }
    // Per feature: the member's own table and where its parents sit in `assign`.
    struct Lookup {
      const Cpt* cpt;
      std::vector<std::size_t> parent_pos;
    };
    std::vector<Lookup> lookups;
    for (const auto& fid : joint.features) {
      Lookup l{&d.cpt(fid), {}};
      for (const auto& p : l.cpt->parents) {
        l.parent_pos.push_back(static_cast<std::size_t>(
            std::find(joint.features.begin(), joint.features.end(), p) - joint.features.begin()));
      }
      lookups.push_back(std::move(l));
    }
    const double prior = net.prior(cover.members()[m]);
    std::fill(assign.begin(), assign.end(), 0);
    for (std::size_t k = 0; k < configs; ++k) {
      double p = prior;
      for (std::size_t f = 0; f < nf && p != 0.0; ++f) {
        const auto& l = lookups[f];
        std::size_t config = 0;
        for (std::size_t i = 0; i < l.parent_pos.size(); ++i) {
          config = config * l.cpt->parent_cards[i] + assign[l.parent_pos[i]];
        }
        p *= l.cpt->at(config, assign[f]);
      }
      joint.values[m * configs + k] = p;
      for (std::size_t f = nf; f-- > 0;) {
        if (++assign[f] < joint.cards[f]) break;
        assign[f] = 0;
      }
    }
  }
  return joint;
}

JointTable model_joint(const CategorizationPid& pid) {
  JointTable joint;
  joint.members = pid.cover.members();
  for (const auto& f : pid.features) {
    joint.features.push_back(f.id);
    joint.states.push_back(f.states);
    joint.cards.push_back(f.card);
  }
  const std::size_t configs = joint.feature_configs();
  const std::size_t nf = joint.features.size();
  if (configs > kMaxJointEntries / std::max<std::size_t>(1, joint.members.size())) {
    throw Error(ErrorCode::JointTooLarge, "model joint exceeds " +
                                              std::to_string(kMaxJointEntries) + " entries");
  }
  joint.values.assign(configs * joint.members.size(), 0.0);
  std::vector<std::size_t> assign(nf);
  for (std::size_t m = 0; m < joint.members.size(); ++m) {
    std::fill(assign.begin(), assign.end(), 0);
    for (std::size_t k = 0; k < configs; ++k) {
      double p = pid.concept_prior[m];
      for (std::size_t f = 0; f < nf && p != 0.0; ++f) {
        const auto& mf = pid.features[f];
        std::size_t config = 0;
        for (std::size_t i = 0; i < mf.parent_indices.size(); ++i) {
          config = config * mf.parent_cards[i] + assign[mf.parent_indices[i]];
        }
        p *= mf.at(m, config, assign[f]);
      }
      joint.values[m * configs + k] = p;
      for (std::size_t f = nf; f-- > 0;) {
        if (++assign[f] < joint.cards[f]) break;
        assign[f] = 0;
      }
    }
  }
  return joint;
}

SoundnessReport check_soundness(const PcNet& net, const ConceptualCover& cover) {
  auto mixture = joint_oracle(net, cover);
  auto constructed = model_joint(build_categorization_pid(net, cover));
  auto leaf = joint_oracle(net, leaf_cover(net));

  SoundnessReport report;
  for (std::size_t i = 0; i < mixture.values.size(); ++i) {
    report.model_vs_mixture =
        std::max(report.model_vs_mixture, std::abs(mixture.values[i] - constructed.values[i]));
  }
  auto a = mixture.feature_marginal();
  auto b = leaf.feature_marginal();
  for (std::size_t i = 0; i < a.size(); ++i) {
    report.marginal_vs_leaf = std::max(report.marginal_vs_leaf, std::abs(a[i] - b[i]));
  }
  report.max_deviation = std::max(report.model_vs_mixture, report.marginal_vs_leaf);
  report.sound = report.max_deviation <= kProbabilityTolerance;
  return report;
}

}  // namespace pcnet
