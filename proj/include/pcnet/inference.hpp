#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pcnet/abstraction.hpp"
#include "pcnet/builder.hpp"
#include "pcnet/core.hpp"

namespace pcnet {

// feature id -> observed state label
using EvidenceSet = std::map<std::string, std::string>;

// Evidence mass below this is treated as impossible.
inline constexpr double kEvidenceFloor = 1e-12;
// Explicit joint tables larger than this are refused.
inline constexpr std::size_t kMaxJointEntries = 10'000'000;

struct Posterior {
  std::vector<double> probabilities;  // aligned with the cover members
  double evidence_probability = 0.0;  // p(e)
};

struct SolveResult {
  std::vector<std::pair<std::string, double>> posterior;      // cover order
  std::vector<std::pair<std::string, double>> eu_per_action;  // action order
  std::string best_action;
  double best_eu = 0.0;
};

// Throws UnknownFeature, UnobservedFeatureInEvidence or UnknownState.
void check_evidence(const CategorizationDecisionModel& model, const EvidenceSet& evidence);

// p(c | e) by variable elimination over the merged feature network,
// eliminating unobserved features in reverse rank order. Throws
// EvidenceImpossible when p(e) < kEvidenceFloor.
Posterior posterior(const CategorizationDecisionModel& model, const EvidenceSet& evidence);

double expected_utility(const CategorizationDecisionModel& model, const EvidenceSet& evidence,
                        const std::string& action);

// Maximizes expected utility. Actions whose EU is within 1e-9 (relative,
// floored at 1) of the maximum are treated as tied, and the tie goes to the
// lexicographically smallest action id; best_eu is that action's EU.
SolveResult solve(const CategorizationDecisionModel& model, const EvidenceSet& evidence);

std::string solve_result_json(const SolveResult& result);

// An explicit joint p(member, f_0, ..., f_{n-1}) with the last feature
// varying fastest. Used as a verification oracle.
struct JointTable {
  std::vector<std::string> members;
  std::vector<std::string> features;
  std::vector<std::vector<std::string>> states;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  std::size_t feature_configs() const;
  double at(std::size_t member, std::size_t config) const {
    return values[member * feature_configs() + config];
  }
  double total() const;
  std::vector<double> feature_marginal() const;
  // Mass of the evidence for each member.
  std::vector<double> evidence_mass(const EvidenceSet& evidence) const;
  // p(member | e) by summing the table; throws EvidenceImpossible.
  std::vector<double> condition(const EvidenceSet& evidence) const;
};

// p(c, f) = prior(c) * prod_F p(F | c, B^c(F)) computed directly from each
// member's own diagram. Throws JointTooLarge past kMaxJointEntries.
JointTable joint_oracle(const PcNet& net, const ConceptualCover& cover);

// The joint implied by a constructed model's tables, by enumeration.
JointTable model_joint(const CategorizationPid& pid);

struct SoundnessReport {
  double model_vs_mixture = 0.0;  // constructed model vs cover mixture
  double marginal_vs_leaf = 0.0;  // feature marginal vs leaf cover
  double max_deviation = 0.0;
  bool sound = true;
};

// Requires a propagated net; both joints are built explicitly.
SoundnessReport check_soundness(const PcNet& net, const ConceptualCover& cover);

}  // namespace pcnet
