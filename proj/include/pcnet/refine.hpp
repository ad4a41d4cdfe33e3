#pragma once

#include <string>
#include <vector>

#include "pcnet/abstraction.hpp"
#include "pcnet/builder.hpp"
#include "pcnet/inference.hpp"

namespace pcnet {

// Linear computation-cost proxy, in utility units.
struct CostParams {
  double kappa_table = 0.0;    // per CPT entry of the constructed model
  double kappa_concept = 0.0;  // per cover member
};

enum class MoveKind { None, Specialize, Generalize };

struct Move {
  MoveKind kind = MoveKind::None;
  std::string target;  // concept specialized, or parent generalized to

  std::string to_string() const;
};

struct RefinementStep {
  ConceptualCover cover;
  std::string best_action;
  double best_eu = 0.0;
  double cost = 0.0;
  double net_value = 0.0;
  Move move_applied;  // move that produced this cover; None for the first step
};

struct RefinementTrace {
  std::vector<RefinementStep> steps;
  std::size_t final_index = 0;

  const RefinementStep& final_step() const { return steps.at(final_index); }
};

// Total CPT entries across all feature slices of the model.
std::size_t model_table_entries(const CategorizationDecisionModel& model);

double model_cost(const CategorizationDecisionModel& model, const CostParams& cp);

double net_value(const CategorizationDecisionModel& model, const EvidenceSet& evidence,
                 const CostParams& cp);

// Greedy best-improvement search over covers. Each round evaluates every
// cover one specialize or generalize move away (skipping covers already
// visited) and takes the move with the largest improvement in net value,
// provided it exceeds 1e-9 (relative, floored at 1). Ties go to specialize
// before generalize, then to the smaller target id.
RefinementTrace refine(const PcNet& net, const PreferenceModel& pref, const EvidenceSet& evidence,
                       const CostParams& cp, const ConceptualCover& init);

// One JSON object per step, newline-terminated.
std::string trace_json_lines(const RefinementTrace& trace);

}  // namespace pcnet
