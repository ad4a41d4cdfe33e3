#pragma once

#include <string>

#include "pcnet/builder.hpp"
#include "pcnet/core.hpp"

namespace pcnet {

// Concept hierarchy; each subsumption edge is labeled with p(child | parent)
// to four decimals.
std::string dot_hierarchy(const PcNet& net);

// One concept's pc-diagram: the concept is a double-bordered (deterministic)
// node with an arc to every feature, plus the conditioning arcs.
std::string dot_diagram(const PcNet& net, const std::string& concept_id);

// The categorization PID: concept chance node plus the merged feature graph.
std::string dot_pid(const CategorizationPid& pid);

// The decision model: PID plus decision (box) and value (diamond) nodes,
// with dashed informational arcs from the observed features.
std::string dot_model(const CategorizationDecisionModel& model);

}  // namespace pcnet
