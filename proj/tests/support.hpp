#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcnet/abstraction.hpp"
#include "pcnet/builder.hpp"
#include "pcnet/core.hpp"
#include "pcnet/inference.hpp"
#include "pcnet/io.hpp"
#include "pcnet/refine.hpp"

namespace pcnet::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(PCNET_FIXTURE_DIR) + "/" + name;
}

inline PcNet load_fixture(const std::string& name) { return load_pcnet_file(fixture_path(name)); }

inline PcNet propagated_fixture(const std::string& name) {
  return propagate_all(load_fixture(name));
}

// Every full assignment to the observed features.
inline std::vector<EvidenceSet> all_evidence(const PcNet& net) {
  const auto& observed = net.preference()->observed_features;
  std::vector<EvidenceSet> out{{}};
  for (const auto& f : observed) {
    std::vector<EvidenceSet> next;
    for (const auto& e : out) {
      for (const auto& s : net.feature(f).domain) {
        auto copy = e;
        copy[f] = s;
        next.push_back(std::move(copy));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline EvidenceSet random_full_evidence(const PcNet& net, std::mt19937_64& rng) {
  EvidenceSet e;
  for (const auto& f : net.preference()->observed_features) {
    const auto& dom = net.feature(f).domain;
    e[f] = dom[std::uniform_int_distribution<std::size_t>(0, dom.size() - 1)(rng)];
  }
  return e;
}

// Independent check of the bottom-up mixture: reads the raw document,
// mixes every descendant leaf directly by prior ratio and compares with the
// net's derived tables. Returns the largest absolute difference.
inline double mixture_oracle_deviation(const std::string& raw_json, const PcNet& propagated) {
  const auto doc = nlohmann::json::parse(raw_json);

  std::map<std::string, std::vector<std::string>> domain;
  std::map<std::string, int> rank;
  for (const auto& f : doc["features"]) {
    domain[f["id"]] = f["domain"].get<std::vector<std::string>>();
    rank[f["id"]] = f["rank"].get<int>();
  }
  std::map<std::string, std::string> parent;
  std::map<std::string, double> leaf_prior;
  for (const auto& c : doc["concepts"]) {
    if (c.contains("parent")) parent[c["id"]] = c["parent"];
    if (c.contains("prior")) leaf_prior[c["id"]] = c["prior"];
  }
  // leaf -> feature -> (parent ids, map from given-config to state probs)
  struct Table {
    std::vector<std::string> parents;
    std::vector<nlohmann::json> rows;
  };
  std::map<std::string, std::map<std::string, Table>> leaf_tables;
  for (const auto& d : doc["diagrams"]) {
    const std::string c = d["concept"];
    if (!leaf_prior.count(c)) continue;
    for (const auto& [f, ps] : d["parents"].items()) {
      leaf_tables[c][f].parents = ps.get<std::vector<std::string>>();
      for (const auto& row : d["cpt"][f]) leaf_tables[c][f].rows.push_back(row);
    }
  }
  auto is_under = [&](std::string leaf, const std::string& anc) {
    while (parent.count(leaf)) {
      leaf = parent[leaf];
      if (leaf == anc) return true;
    }
    return false;
  };
  auto lookup = [&](const Table& t, const std::map<std::string, std::string>& config,
                    const std::string& state) {
    for (const auto& row : t.rows) {
      bool match = true;
      for (const auto& p : t.parents) {
        if (row["given"][p].get<std::string>() != config.at(p)) match = false;
      }
      if (match) return row["p"][state].get<double>();
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  double worst = 0.0;
  for (const auto& [concept_id, diagram] : propagated.derived_diagrams()) {
    std::vector<std::string> leaves;
    double mass = 0.0;
    for (const auto& [leaf, p] : leaf_prior) {
      if (is_under(leaf, concept_id)) {
        leaves.push_back(leaf);
        mass += p;
      }
    }
    for (const auto& [f, cpt] : diagram.cpts) {
      for (std::size_t config = 0; config < cpt.configs(); ++config) {
        auto states = decode_config(config, cpt.parent_cards);
        std::map<std::string, std::string> given;
        for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
          given[cpt.parents[i]] = domain[cpt.parents[i]][states[i]];
        }
        for (std::size_t s = 0; s < cpt.card; ++s) {
          double expect = 0.0;
          for (const auto& leaf : leaves) {
            const double w = mass > 0 ? leaf_prior[leaf] / mass : 1.0 / leaves.size();
            expect += w * lookup(leaf_tables[leaf][f], given, domain[f][s]);
          }
          const double diff = std::abs(expect - cpt.at(config, s));
          if (!(diff <= worst)) worst = std::isnan(diff) ? 1.0 : diff;
        }
      }
    }
  }
  return worst;
}

// Every cover of the net evaluated by net value; the exhaustive refine oracle.
inline double exhaustive_best_net_value(const PcNet& net, const EvidenceSet& e,
                                        const CostParams& cp) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& cover : enumerate_covers(net)) {
    best = std::max(best, net_value(build_decision_model(net, cover), e, cp));
  }
  return best;
}

// Brute-force cover count: every subset of concepts that is an antichain
// whose descendant leaves partition the leaf set.
inline std::size_t brute_force_cover_count(const PcNet& net) {
  const auto& ids = net.preorder();
  const auto leaves = net.leaves();
  std::size_t count = 0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << ids.size()); ++mask) {
    std::vector<std::string> chosen;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (mask & (std::size_t{1} << i)) chosen.push_back(ids[i]);
    }
    bool antichain = true;
    for (const auto& a : chosen) {
      for (const auto& b : chosen) {
        if (a != b && subsumes(net, a, b)) antichain = false;
      }
    }
    if (!antichain) continue;
    std::multiset<std::string> covered;
    for (const auto& c : chosen) {
      for (const auto& l : net.descendant_leaves(c)) covered.insert(l);
    }
    if (covered == std::multiset<std::string>(leaves.begin(), leaves.end())) ++count;
  }
  return count;
}

struct RandomNetOptions {
  std::size_t max_depth = 2;
  std::size_t max_children = 3;
  std::size_t min_features = 2;
  std::size_t max_card = 3;
  std::size_t actions = 3;
  // Consistent nets give each internal concept its own discriminating
  // feature; siblings agree on every other table.
  bool consistent = true;
};

inline std::vector<double> random_row(std::mt19937_64& rng, std::size_t card) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> row(card);
  double sum = 0.0;
  for (auto& x : row) sum += (x = u(rng));
  for (auto& x : row) x /= sum;
  return row;
}

inline Cpt random_cpt(std::mt19937_64& rng, const std::vector<std::string>& parents,
                      const std::vector<std::size_t>& parent_cards, std::size_t card) {
  Cpt cpt;
  cpt.parents = parents;
  cpt.parent_cards = parent_cards;
  cpt.card = card;
  for (std::size_t c = 0; c < cpt.configs(); ++c) {
    auto row = random_row(rng, card);
    cpt.values.insert(cpt.values.end(), row.begin(), row.end());
  }
  return cpt;
}

// A random, fully specified net with a preference model. Leaf priors are
// positive and sum to 1; every feature has at most two lower-rank parents.
inline PcNet random_net(std::mt19937_64& rng, const RandomNetOptions& opt = {}) {
  std::vector<Concept> concepts;
  std::map<std::string, std::vector<std::string>> kids;
  std::size_t next_id = 0;
  auto fresh = [&] {
    std::string id = "c";
    if (next_id < 10) id += "0";
    return id + std::to_string(next_id++);
  };
  std::function<void(const std::string&, std::size_t)> grow = [&](const std::string& id,
                                                                 std::size_t depth) {
    std::uniform_int_distribution<std::size_t> n(2, opt.max_children);
    const bool split = depth == 0 || (depth < opt.max_depth && rng() % 2 == 0);
    if (!split) return;
    const std::size_t k = n(rng);
    for (std::size_t i = 0; i < k; ++i) {
      auto child = fresh();
      concepts.push_back({child, id, std::nullopt});
      kids[id].push_back(child);
      grow(child, depth + 1);
    }
  };
  const auto root = fresh();
  concepts.push_back({root, std::nullopt, std::nullopt});
  grow(root, 0);

  std::vector<std::string> internals;
  std::vector<std::string> leaves;
  for (const auto& c : concepts) (kids.count(c.id) ? internals : leaves).push_back(c.id);

  auto weights = random_row(rng, leaves.size());
  for (auto& c : concepts) {
    auto it = std::find(leaves.begin(), leaves.end(), c.id);
    if (it != leaves.end()) c.prior = weights[it - leaves.begin()];
  }

  const std::size_t nf = std::max(opt.min_features, opt.consistent ? internals.size() : 0);
  std::vector<FeatureDecl> features;
  std::uniform_int_distribution<std::size_t> card(2, opt.max_card);
  for (std::size_t i = 0; i < nf; ++i) {
    FeatureDecl f{"f" + std::to_string(i), {}, i};
    const std::size_t k = card(rng);
    for (std::size_t s = 0; s < k; ++s) f.domain.push_back("s" + std::to_string(s));
    features.push_back(std::move(f));
  }
  auto pick_parents = [&](std::size_t i) {
    std::vector<std::string> ps;
    std::vector<std::size_t> cards;
    for (std::size_t j = 0; j < i && ps.size() < 2; ++j) {
      if (rng() % 3 == 0) {
        ps.push_back(features[j].id);
        cards.push_back(features[j].card());
      }
    }
    return std::make_pair(ps, cards);
  };

  std::map<std::string, double> prior;
  std::function<double(const std::string&)> mass = [&](const std::string& id) -> double {
    if (!kids.count(id)) {
      for (const auto& c : concepts) {
        if (c.id == id) return prior[id] = *c.prior;
      }
    }
    double total = 0.0;
    for (const auto& k : kids[id]) total += mass(k);
    return prior[id] = total;
  };
  mass(root);

  std::map<std::string, PcDiagram> diagrams;
  for (const auto& l : leaves) {
    diagrams[l].concept_id = l;
    for (const auto& f : features) diagrams[l].features.push_back(f.id);
  }

  if (opt.consistent) {
    // Table of feature i at every concept, assigned top-down.
    for (std::size_t i = 0; i < nf; ++i) {
      auto [ps, cards] = pick_parents(i);
      std::map<std::string, Cpt> table;
      if (i < internals.size()) {
        const auto& owner = internals[i];
        std::function<void(const std::string&, const Cpt&)> fill = [&](const std::string& id,
                                                                     const Cpt& t) {
          table[id] = t;
          for (const auto& k : kids[id]) fill(k, t);
        };
        Cpt mix;
        mix.parents = ps;
        mix.parent_cards = cards;
        mix.card = features[i].card();
        mix.values.assign(mix.configs() * mix.card, 0.0);
        for (const auto& k : kids[owner]) {
          auto t = random_cpt(rng, ps, cards, features[i].card());
          fill(k, t);
          for (std::size_t v = 0; v < t.values.size(); ++v) {
            mix.values[v] += prior[k] / prior[owner] * t.values[v];
          }
        }
        for (const auto& l : leaves) {
          if (!table.count(l)) table[l] = mix;
        }
      } else {
        auto t = random_cpt(rng, ps, cards, features[i].card());
        for (const auto& l : leaves) table[l] = t;
      }
      for (const auto& l : leaves) diagrams[l].cpts[features[i].id] = table[l];
    }
  } else {
    for (const auto& l : leaves) {
      for (std::size_t i = 0; i < nf; ++i) {
        auto [ps, cards] = pick_parents(i);
        diagrams[l].cpts[features[i].id] = random_cpt(rng, ps, cards, features[i].card());
      }
    }
  }

  PreferenceModel pref;
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (std::size_t a = 0; a < opt.actions; ++a) {
    const auto action = "a" + std::to_string(a);
    pref.actions.push_back(action);
    for (const auto& l : leaves) pref.utility[action][l] = std::round(u(rng));
  }
  for (const auto& f : features) {
    if (rng() % 2 == 0 || pref.observed_features.empty()) pref.observed_features.push_back(f.id);
  }
  return PcNet(features, concepts, diagrams, {}, pref);
}

}  // namespace pcnet::testing
