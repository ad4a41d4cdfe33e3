#include "pcnet/abstraction.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

namespace pcnet {

bool ConceptualCover::contains(const std::string& id) const {
  return std::find(members_.begin(), members_.end(), id) != members_.end();
}

std::size_t ConceptualCover::position(const std::string& id) const {
  auto it = std::find(members_.begin(), members_.end(), id);
  if (it == members_.end()) throw Error(ErrorCode::NotInCover, "'" + id + "' not in cover");
  return static_cast<std::size_t>(it - members_.begin());
}

std::string ConceptualCover::to_string() const {
  std::string out;
  for (const auto& m : members_) {
    if (!out.empty()) out += ',';
    out += m;
  }
  return out;
}

std::vector<std::size_t> decode_config(std::size_t index, const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> states(cards.size());
  for (std::size_t i = cards.size(); i-- > 0;) {
    states[i] = index % cards[i];
    index /= cards[i];
  }
  return states;
}

std::size_t encode_config(const std::vector<std::size_t>& states,
                          const std::vector<std::size_t>& cards) {
  std::size_t index = 0;
  for (std::size_t i = 0; i < cards.size(); ++i) index = index * cards[i] + states[i];
  return index;
}

Cpt extend_cpt(const Cpt& cpt, const std::vector<std::string>& parents,
               const std::vector<std::size_t>& parent_cards) {
  std::vector<std::size_t> where;  // position of each source parent in `parents`
  for (const auto& p : cpt.parents) {
    auto it = std::find(parents.begin(), parents.end(), p);
    if (it == parents.end()) {
      throw Error(ErrorCode::InvalidArgument, "extension drops parent '" + p + "'");
    }
    where.push_back(static_cast<std::size_t>(it - parents.begin()));
  }
  Cpt out;
  out.parents = parents;
  out.parent_cards = parent_cards;
  out.card = cpt.card;
  std::size_t configs = out.configs();
  out.values.resize(configs * out.card);
  std::vector<std::size_t> sub(where.size());
  for (std::size_t config = 0; config < configs; ++config) {
    auto states = decode_config(config, parent_cards);
    for (std::size_t i = 0; i < where.size(); ++i) sub[i] = states[where[i]];
    auto row = cpt.row(encode_config(sub, cpt.parent_cards));
    std::copy(row.begin(), row.end(), out.values.begin() + config * out.card);
  }
  return out;
}

std::vector<std::string> union_parents(const PcNet& net,
                                       const std::vector<const std::vector<std::string>*>& lists) {
  std::set<std::string> all;
  for (const auto* l : lists) all.insert(l->begin(), l->end());
  std::vector<std::string> out(all.begin(), all.end());
  std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
    return net.feature_position(a) < net.feature_position(b);
  });
  return out;
}

PcDiagram derive_superconcept_diagram(const PcNet& net, const std::string& concept_id) {
  const auto& kids = net.children(concept_id);
  if (kids.empty()) {
    throw Error(ErrorCode::NotInternal, "'" + concept_id + "' is a leaf");
  }
  std::vector<const PcDiagram*> child_diagrams;
  std::vector<double> weights;
  for (const auto& k : kids) {
    const auto* d = net.diagram(k);
    if (!d) {
      throw Error(ErrorCode::ChildDiagramMissing,
                  "child '" + k + "' of '" + concept_id + "' has no diagram");
    }
    child_diagrams.push_back(d);
    weights.push_back(link_weight(net, k));
  }
  const auto& features = child_diagrams.front()->features;
  for (const auto* d : child_diagrams) {
    if (d->features != features) {
      throw Error(ErrorCode::FeatureSetMismatch, "children of '" + concept_id +
                                                     "' do not share a feature set ('" +
                                                     child_diagrams.front()->concept_id + "' vs '" +
                                                     d->concept_id + "')");
    }
  }

  PcDiagram out;
  out.concept_id = concept_id;
  out.features = features;
  for (const auto& fid : features) {
    std::vector<const std::vector<std::string>*> lists;
    for (const auto* d : child_diagrams) lists.push_back(&d->cpt(fid).parents);
    auto parents = union_parents(net, lists);
    std::vector<std::size_t> cards;
    for (const auto& p : parents) cards.push_back(net.feature(p).card());

    Cpt mixed;
    mixed.parents = parents;
    mixed.parent_cards = cards;
    mixed.card = net.feature(fid).card();
    mixed.values.assign(mixed.configs() * mixed.card, 0.0);
    for (std::size_t j = 0; j < child_diagrams.size(); ++j) {
      auto ext = extend_cpt(child_diagrams[j]->cpt(fid), parents, cards);
      for (std::size_t i = 0; i < ext.values.size(); ++i) {
        mixed.values[i] += weights[j] * ext.values[i];
      }
    }
    out.cpts.emplace(fid, std::move(mixed));
  }
  return out;
}

PcNet propagate_all(const PcNet& net) {
  const auto& order = net.preorder();
  if (order.empty()) net.root();  // throws for a rootless or multi-root net
  PcNet current = net.with_derived({});
  std::map<std::string, PcDiagram> derived;
  // Reverse preorder visits every child before its parent.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (net.is_leaf(*it)) continue;
    try {
      derived.emplace(*it, derive_superconcept_diagram(current, *it));
    } catch (const Error& e) {
      throw Error(e.code(), "while deriving '" + *it + "': " + e.what());
    }
    current = current.with_derived(derived);
  }
  return current;
}

bool is_cover(const PcNet& net, const std::vector<std::string>& ids) {
  for (const auto& id : ids) net.concept_by_id(id);
  if (ids.empty()) return false;
  std::unordered_set<std::string> members(ids.begin(), ids.end());
  if (members.size() != ids.size()) return false;
  // Each leaf must have exactly one ancestor-or-self in the set.
  for (const auto& leaf : net.leaves()) {
    auto chain = net.ancestors(leaf);
    chain.insert(chain.begin(), leaf);
    auto hits = std::count_if(chain.begin(), chain.end(),
                              [&](const std::string& c) { return members.count(c) != 0; });
    if (hits != 1) return false;
  }
  // Members must also lie inside the tree; a concept on a parent cycle covers no leaf.
  const auto& order = net.preorder();
  return std::all_of(ids.begin(), ids.end(), [&](const std::string& id) {
    return std::find(order.begin(), order.end(), id) != order.end();
  });
}

ConceptualCover make_cover(const PcNet& net, std::vector<std::string> ids) {
  bool valid = false;
  try {
    valid = is_cover(net, ids);
  } catch (const Error& e) {
    throw Error(ErrorCode::CoverInvalid, e.what());
  }
  if (!valid) {
    std::string text;
    for (const auto& id : ids) text += (text.empty() ? "" : ",") + id;
    throw Error(ErrorCode::CoverInvalid,
                "{" + text + "} is not a mutually exclusive, exhaustive set of concepts");
  }
  std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
    return net.preorder_position(a) < net.preorder_position(b);
  });
  ConceptualCover cover;
  cover.members_ = std::move(ids);
  return cover;
}

ConceptualCover parse_cover(const PcNet& net, std::string_view text) {
  std::vector<std::string> ids;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (!piece.empty()) ids.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return make_cover(net, std::move(ids));
}

ConceptualCover root_cover(const PcNet& net) { return make_cover(net, {net.root()}); }

ConceptualCover leaf_cover(const PcNet& net) { return make_cover(net, net.leaves()); }

std::size_t count_covers(const PcNet& net, std::size_t cap) {
  std::function<std::size_t(const std::string&)> f = [&](const std::string& id) -> std::size_t {
    const auto& kids = net.children(id);
    if (kids.empty()) return 1;
    std::size_t product = 1;
    for (const auto& k : kids) {
      product *= f(k);
      if (product > cap) return cap + 1;
    }
    return std::min(product + 1, cap + 1);
  };
  return f(net.root());
}

std::vector<ConceptualCover> enumerate_covers(const PcNet& net) {
  if (count_covers(net) > kMaxCovers) {
    throw Error(ErrorCode::CoverSpaceTooLarge,
                "more than " + std::to_string(kMaxCovers) + " covers");
  }
  using Members = std::vector<std::string>;
  std::function<std::vector<Members>(const std::string&)> rec =
      [&](const std::string& id) -> std::vector<Members> {
    std::vector<Members> out{{id}};
    const auto& kids = net.children(id);
    if (kids.empty()) return out;
    std::vector<Members> partial{{}};
    for (const auto& k : kids) {
      auto sub = rec(k);
      std::vector<Members> next;
      next.reserve(partial.size() * sub.size());
      for (const auto& p : partial) {
        for (const auto& s : sub) {
          Members m = p;
          m.insert(m.end(), s.begin(), s.end());
          next.push_back(std::move(m));
        }
      }
      partial = std::move(next);
    }
    out.insert(out.end(), partial.begin(), partial.end());
    return out;
  };

  auto all = rec(net.root());
  std::vector<std::pair<std::vector<std::size_t>, ConceptualCover>> keyed;
  keyed.reserve(all.size());
  for (auto& m : all) {
    auto cover = make_cover(net, std::move(m));
    std::vector<std::size_t> key;
    for (const auto& id : cover.members()) key.push_back(net.preorder_position(id));
    keyed.emplace_back(std::move(key), std::move(cover));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ConceptualCover> out;
  out.reserve(keyed.size());
  for (auto& [k, c] : keyed) out.push_back(std::move(c));
  return out;
}

ConceptualCover specialize(const PcNet& net, const ConceptualCover& cover,
                           const std::string& concept_id) {
  if (!cover.contains(concept_id)) {
    throw Error(ErrorCode::NotInCover, "'" + concept_id + "' is not in the cover");
  }
  const auto& kids = net.children(concept_id);
  if (kids.empty()) {
    throw Error(ErrorCode::LeafNotSpecializable, "'" + concept_id + "' is a leaf");
  }
  std::vector<std::string> ids;
  for (const auto& m : cover.members()) {
    if (m == concept_id) {
      ids.insert(ids.end(), kids.begin(), kids.end());
    } else {
      ids.push_back(m);
    }
  }
  return make_cover(net, std::move(ids));
}

ConceptualCover generalize(const PcNet& net, const ConceptualCover& cover,
                           const std::vector<std::string>& siblings) {
  for (const auto& s : siblings) {
    if (!cover.contains(s)) throw Error(ErrorCode::NotInCover, "'" + s + "' is not in the cover");
  }
  if (siblings.empty()) {
    throw Error(ErrorCode::NotSiblingComplete, "empty set has no parent");
  }
  const auto& parent = net.concept_by_id(siblings.front()).parent;
  if (!parent) {
    throw Error(ErrorCode::NotSiblingComplete, "'" + siblings.front() + "' is the root");
  }
  std::set<std::string> given(siblings.begin(), siblings.end());
  const auto& kids = net.children(*parent);
  if (given != std::set<std::string>(kids.begin(), kids.end()) || given.size() != siblings.size()) {
    throw Error(ErrorCode::NotSiblingComplete,
                "set is not the complete child set of '" + *parent + "'");
  }
  std::vector<std::string> ids;
  for (const auto& m : cover.members()) {
    if (!given.count(m)) ids.push_back(m);
  }
  ids.push_back(*parent);
  return make_cover(net, std::move(ids));
}

}  // namespace pcnet
