#include "pcnet/validate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pcnet/abstraction.hpp"

namespace pcnet {
namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

std::string describe_config(const PcNet& net, const Cpt& cpt, std::size_t config) {
  if (cpt.parents.empty()) return "{}";
  std::vector<std::size_t> states(cpt.parents.size());
  for (std::size_t i = cpt.parents.size(); i-- > 0;) {
    states[i] = config % cpt.parent_cards[i];
    config /= cpt.parent_cards[i];
  }
  std::string out = "{";
  for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
    if (i) out += ", ";
    out += cpt.parents[i] + "=" + net.feature(cpt.parents[i]).domain[states[i]];
  }
  return out + "}";
}

void check_features(const PcNet& net, ValidationReport& report) {
  const auto& features = net.features();
  std::vector<std::size_t> ranks;
  for (const auto& f : features) {
    std::string loc = "feature '" + f.id + "'";
    if (f.domain.size() < 2) report.add(Severity::Error, loc, "domain needs at least 2 states");
    std::set<std::string> labels(f.domain.begin(), f.domain.end());
    if (labels.size() != f.domain.size()) {
      report.add(Severity::Error, loc, "domain labels are not unique");
    }
    ranks.push_back(f.rank);
  }
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] != i) {
      report.add(Severity::Error, "features",
                 "ranks are not a permutation of 0.." + std::to_string(ranks.size() - 1));
      break;
    }
  }
}

void check_hierarchy(const PcNet& net, ValidationReport& report) {
  if (net.roots().size() != 1) {
    report.add(Severity::Error, "concepts",
               "expected exactly one root concept, found " + std::to_string(net.roots().size()));
  }
  for (const auto& c : net.concepts()) {
    std::string loc = "concept '" + c.id + "'";
    if (net.roots().size() == 1) {
      const auto& order = net.preorder();
      if (std::find(order.begin(), order.end(), c.id) == order.end()) {
        report.add(Severity::Error, loc, "not reachable from the root (cycle in parent links)");
      }
    }
    const auto& kids = net.children(c.id);
    if (kids.size() == 1) {
      report.add(Severity::Error, loc, "internal concept has a single child");
    }
    if (c.prior) {
      double p = *c.prior;
      if (!(p >= 0.0 && p <= 1.0)) {
        report.add(Severity::Error, loc, "prior " + fmt(p) + " outside [0,1]");
      } else if (p == 0.0) {
        report.add(Severity::Warning, loc, "zero prior");
      }
    }
  }
  if (net.roots().size() == 1) {
    double root_prior = net.prior(net.root());
    if (std::abs(root_prior - 1.0) > kProbabilityTolerance) {
      report.add(Severity::Error, "concept '" + net.root() + "'",
                 "root prior " + fmt(root_prior) + " (leaf priors must sum to 1)");
    }
  }
}

void check_diagram(const PcNet& net, const PcDiagram& d, ValidationReport& report) {
  std::string loc = "diagram '" + d.concept_id + "'";
  for (const auto& fid : d.features) {
    const auto& cpt = d.cpt(fid);
    const auto& decl = net.feature(fid);
    for (const auto& p : cpt.parents) {
      if (net.feature(p).rank >= decl.rank) {
        report.add(Severity::Error, loc,
                   "arc " + p + " -> " + fid + " does not go up the global feature rank");
      }
    }
    for (std::size_t config = 0; config < cpt.configs(); ++config) {
      double sum = 0.0;
      bool in_range = true;
      for (double v : cpt.row(config)) {
        sum += v;
        in_range = in_range && v >= 0.0 && v <= 1.0;
      }
      std::string where = loc + " feature '" + fid + "' given " + describe_config(net, cpt, config);
      if (!in_range) report.add(Severity::Error, where, "probability outside [0,1]");
      if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        report.add(Severity::Error, where, "row sums to " + fmt(sum));
      }
    }
  }
}

void check_diagrams(const PcNet& net, ValidationReport& report) {
  std::optional<std::set<std::string>> reference;
  std::string reference_owner;
  for (const auto& leaf : net.leaves()) {
    auto it = net.leaf_diagrams().find(leaf);
    if (it == net.leaf_diagrams().end()) {
      report.add(Severity::Error, "concept '" + leaf + "'", "leaf has no diagram");
      continue;
    }
    check_diagram(net, it->second, report);
    std::set<std::string> fs(it->second.features.begin(), it->second.features.end());
    if (!reference) {
      reference = fs;
      reference_owner = leaf;
    } else if (fs != *reference) {
      report.add(Severity::Error, "diagram '" + leaf + "'",
                 "feature set differs from diagram '" + reference_owner + "'");
    }
  }

  for (const auto& [id, d] : net.derived_diagrams()) {
    check_diagram(net, d, report);
    try {
      auto expected = derive_superconcept_diagram(net, id);
      double worst = 0.0;
      for (const auto& fid : expected.features) {
        if (!d.has_feature(fid) || d.cpt(fid).parents != expected.cpt(fid).parents) {
          report.add(Severity::Error, "diagram '" + id + "'",
                     "feature '" + fid + "' does not match the mixture of its children");
          worst = -1.0;
          continue;
        }
        const auto& a = d.cpt(fid).values;
        const auto& b = expected.cpt(fid).values;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
      }
      if (worst > kProbabilityTolerance) {
        report.add(Severity::Error, "diagram '" + id + "'",
                   "derived cpt deviates from the children mixture by " + fmt(worst));
      }
    } catch (const Error& e) {
      report.add(Severity::Error, "diagram '" + id + "'", e.what());
    }
  }
}

void check_preference(const PcNet& net, ValidationReport& report) {
  const auto& pref = net.preference();
  if (!pref) return;
  if (pref->actions.empty()) report.add(Severity::Error, "preference", "no actions declared");
  auto leaves = net.leaves();
  for (const auto& a : pref->actions) {
    auto row = pref->utility.find(a);
    for (const auto& leaf : leaves) {
      if (row == pref->utility.end() || !row->second.count(leaf)) {
        report.add(Severity::Error, "preference",
                   "no utility for action '" + a + "' at leaf '" + leaf + "'");
      }
    }
    if (row == pref->utility.end()) continue;
    for (const auto& [c, v] : row->second) {
      if (!net.is_leaf(c)) {
        report.add(Severity::Error, "preference",
                   "utility asserted on internal concept '" + c + "' (leaves only)");
      }
      if (!std::isfinite(v)) {
        report.add(Severity::Error, "preference", "non-finite utility for '" + a + "'");
      }
    }
  }
  std::set<std::string> observed(pref->observed_features.begin(), pref->observed_features.end());
  if (observed.size() != pref->observed_features.size()) {
    report.add(Severity::Error, "preference", "observed feature listed twice");
  }
}

}  // namespace

void ValidationReport::add(Severity severity, std::string location, std::string message) {
  if (severity == Severity::Error) ok = false;
  issues.push_back({severity, std::move(location), std::move(message)});
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      issues.begin(), issues.end(), [](const Issue& i) { return i.severity == Severity::Error; }));
}

std::string ValidationReport::to_string() const {
  std::string out = ok ? "ok\n" : "invalid\n";
  for (const auto& i : issues) {
    out += (i.severity == Severity::Error ? "error: " : "warning: ") + i.location + ": " +
           i.message + "\n";
  }
  return out;
}

ValidationReport validate(const PcNet& net) {
  ValidationReport report;
  check_features(net, report);
  check_hierarchy(net, report);
  check_diagrams(net, report);
  check_preference(net, report);
  return report;
}

}  // namespace pcnet
