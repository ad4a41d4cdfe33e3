#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pcnet/core.hpp"

namespace pcnet {

// A mutually exclusive and exhaustive set of concepts, kept in tree
// preorder. Instances built through make_cover() and the cover moves are
// always valid for the net they came from.
class ConceptualCover {
 public:
  ConceptualCover() = default;

  const std::vector<std::string>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(const std::string& id) const;
  std::size_t position(const std::string& id) const;

  // Comma-separated member list, the CLI and file form.
  std::string to_string() const;

  friend bool operator==(const ConceptualCover&, const ConceptualCover&) = default;
  friend auto operator<=>(const ConceptualCover&, const ConceptualCover&) = default;

 private:
  friend ConceptualCover make_cover(const PcNet& net, std::vector<std::string> ids);
  std::vector<std::string> members_;
};

// Mixed-radix helpers over parent configurations; the first entry varies
// slowest, matching Cpt row order.
std::vector<std::size_t> decode_config(std::size_t index, const std::vector<std::size_t>& cards);
std::size_t encode_config(const std::vector<std::size_t>& states,
                          const std::vector<std::size_t>& cards);

// Re-indexes `cpt` over a superset of its parents. The table is constant in
// the added parents.
Cpt extend_cpt(const Cpt& cpt, const std::vector<std::string>& parents,
               const std::vector<std::size_t>& parent_cards);

// Rank-ordered union of parent lists.
std::vector<std::string> union_parents(const PcNet& net,
                                       const std::vector<const std::vector<std::string>*>& lists);

// Bottom-up mixture of the children's diagrams: for every feature F the
// parents are the union of the children's parents and
//   p(F | ck, b) = sum_j p(cj | ck) p(F | cj, b restricted to B^j(F)).
PcDiagram derive_superconcept_diagram(const PcNet& net, const std::string& concept_id);

// Derives a diagram for every internal concept, children first. Existing
// derived diagrams are replaced.
PcNet propagate_all(const PcNet& net);

bool is_cover(const PcNet& net, const std::vector<std::string>& ids);

// Validates and canonicalizes to preorder; throws CoverInvalid.
ConceptualCover make_cover(const PcNet& net, std::vector<std::string> ids);
ConceptualCover parse_cover(const PcNet& net, std::string_view text);
ConceptualCover root_cover(const PcNet& net);
ConceptualCover leaf_cover(const PcNet& net);

inline constexpr std::size_t kMaxCovers = 1'000'000;

// Number of covers via f(leaf) = 1, f(internal) = 1 + prod f(children),
// saturated just above `cap`.
std::size_t count_covers(const PcNet& net, std::size_t cap = kMaxCovers);

// Every cover, ordered lexicographically by the preorder positions of the
// members. Throws CoverSpaceTooLarge past kMaxCovers.
std::vector<ConceptualCover> enumerate_covers(const PcNet& net);

ConceptualCover specialize(const PcNet& net, const ConceptualCover& cover,
                           const std::string& concept_id);
ConceptualCover generalize(const PcNet& net, const ConceptualCover& cover,
                           const std::vector<std::string>& siblings);

}  // namespace pcnet
