#include "pcnet/refine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "pcnet/json_util.hpp"

namespace pcnet {

std::string Move::to_string() const {
  switch (kind) {
    case MoveKind::None: return "none";
    case MoveKind::Specialize: return "specialize:" + target;
    case MoveKind::Generalize: return "generalize:" + target;
  }
  return "none";
}

std::size_t model_table_entries(const CategorizationDecisionModel& model) {
  std::size_t n = 0;
  for (const auto& f : model.pid.features) n += f.entries();
  return n;
}

double model_cost(const CategorizationDecisionModel& model, const CostParams& cp) {
  return cp.kappa_table * static_cast<double>(model_table_entries(model)) +
         cp.kappa_concept * static_cast<double>(model.cover().size());
}

double net_value(const CategorizationDecisionModel& model, const EvidenceSet& evidence,
                 const CostParams& cp) {
  return solve(model, evidence).best_eu - model_cost(model, cp);
}

RefinementTrace refine(const PcNet& net, const PreferenceModel& pref, const EvidenceSet& evidence,
                       const CostParams& cp, const ConceptualCover& init) {
  if (!(cp.kappa_table >= 0.0) || !(cp.kappa_concept >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cost parameters must be non-negative");
  }
  if (!is_cover(net, init.members())) {
    throw Error(ErrorCode::InitInvalid, "{" + init.to_string() + "} is not a cover");
  }

  std::map<ConceptualCover, RefinementStep> evaluated;
  auto evaluate = [&](const ConceptualCover& cover, const Move& move) {
    auto it = evaluated.find(cover);
    if (it == evaluated.end()) {
      auto model = attach_preference(net, build_categorization_pid(net, cover), pref);
      auto result = solve(model, evidence);
      RefinementStep step;
      step.cover = cover;
      step.best_action = result.best_action;
      step.best_eu = result.best_eu;
      step.cost = model_cost(model, cp);
      step.net_value = step.best_eu - step.cost;
      it = evaluated.emplace(cover, std::move(step)).first;
    }
    RefinementStep step = it->second;
    step.move_applied = move;
    return step;
  };

  RefinementTrace trace;
  std::set<ConceptualCover> visited{init};
  trace.steps.push_back(evaluate(init, {}));

  for (;;) {
    const auto current = trace.steps.back();
    std::vector<std::pair<Move, ConceptualCover>> candidates;
    for (const auto& m : current.cover.members()) {
      if (!net.is_leaf(m)) {
        candidates.push_back({{MoveKind::Specialize, m}, specialize(net, current.cover, m)});
      }
    }
    std::set<std::string> parents;
    for (const auto& m : current.cover.members()) {
      const auto& parent = net.concept_by_id(m).parent;
      if (!parent || !parents.insert(*parent).second) continue;
      const auto& kids = net.children(*parent);
      bool complete = std::all_of(kids.begin(), kids.end(),
                                  [&](const std::string& k) { return current.cover.contains(k); });
      if (complete) {
        candidates.push_back({{MoveKind::Generalize, *parent}, generalize(net, current.cover, kids)});
      }
    }

    const double threshold = 1e-9 * std::max(1.0, std::abs(current.net_value));
    std::optional<RefinementStep> best;
    auto rank = [](const Move& m) {
      return std::make_tuple(m.kind == MoveKind::Specialize ? 0 : 1, m.target);
    };
    for (const auto& [move, cover] : candidates) {
      if (visited.count(cover)) continue;
      auto step = evaluate(cover, move);
      if (step.net_value - current.net_value <= threshold) continue;
      if (!best || step.net_value > best->net_value ||
          (step.net_value == best->net_value && rank(move) < rank(best->move_applied))) {
        best = std::move(step);
      }
    }
    if (!best) break;
    visited.insert(best->cover);
    trace.steps.push_back(std::move(*best));
  }
  trace.final_index = trace.steps.size() - 1;
  return trace;
}

std::string trace_json_lines(const RefinementTrace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    nlohmann::ordered_json j;
    j["step"] = i;
    j["move"] = s.move_applied.to_string();
    j["cover"] = s.cover.to_string();
    j["best_action"] = s.best_action;
    j["best_eu"] = round_significant(s.best_eu);
    j["cost"] = round_significant(s.cost);
    j["net_value"] = round_significant(s.net_value);
    j["final"] = i == trace.final_index;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace pcnet
