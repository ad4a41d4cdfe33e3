#include "pcnet/dot.hpp"

#include <cstdio>
#include <sstream>

namespace pcnet {
namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void feature_graph(std::ostringstream& out, const CategorizationPid& pid, const std::string& concept_node) {
  for (const auto& f : pid.features) out << "  " << quote(f.id) << " [shape=ellipse];\n";
  for (const auto& f : pid.features) out << "  " << concept_node << " -> " << quote(f.id) << ";\n";
  for (const auto& f : pid.features) {
    for (const auto& p : f.parents) out << "  " << quote(p) << " -> " << quote(f.id) << ";\n";
  }
}

}  // namespace

std::string dot_hierarchy(const PcNet& net) {
  std::ostringstream out;
  out << "digraph pc_hierarchy {\n";
  out << "  node [shape=box];\n";
  for (const auto& id : net.preorder()) out << "  " << quote(id) << ";\n";
  for (const auto& id : net.preorder()) {
    for (const auto& child : net.children(id)) {
      out << "  " << quote(id) << " -> " << quote(child) << " [label=" << quote(fixed4(link_weight(net, child)))
          << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string dot_diagram(const PcNet& net, const std::string& concept_id) {
  const auto* d = net.diagram(concept_id);
  if (!d) throw Error(ErrorCode::DiagramMissing, "'" + concept_id + "' has no diagram");
  std::ostringstream out;
  out << "digraph pc_diagram {\n";
  out << "  " << quote(concept_id) << " [shape=ellipse, peripheries=2];\n";
  for (const auto& f : d->features) out << "  " << quote(f) << " [shape=ellipse];\n";
  for (const auto& f : d->features) out << "  " << quote(concept_id) << " -> " << quote(f) << ";\n";
  for (const auto& f : d->features) {
    for (const auto& p : d->cpt(f).parents) out << "  " << quote(p) << " -> " << quote(f) << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string dot_pid(const CategorizationPid& pid) {
  std::ostringstream out;
  out << "digraph categorization_pid {\n";
  out << "  \"C\" [shape=ellipse, label=" << quote("C: " + pid.cover.to_string()) << "];\n";
  feature_graph(out, pid, "\"C\"");
  out << "}\n";
  return out.str();
}

std::string dot_model(const CategorizationDecisionModel& model) {
  std::ostringstream out;
  out << "digraph categorization_decision_model {\n";
  out << "  \"C\" [shape=ellipse, label=" << quote("C: " + model.cover().to_string()) << "];\n";
  out << "  \"D\" [shape=box, label=\"decision\"];\n";
  out << "  \"V\" [shape=diamond, label=\"value\"];\n";
  feature_graph(out, model.pid, "\"C\"");
  for (const auto& f : model.observed_features) {
    out << "  " << quote(f) << " -> \"D\" [style=dashed];\n";
  }
  out << "  \"C\" -> \"V\";\n";
  out << "  \"D\" -> \"V\";\n";
  out << "}\n";
  return out.str();
}

}  // namespace pcnet
