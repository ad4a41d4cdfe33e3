#include "pcnet/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pcnet {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(where, std::string("missing required field '") + key + "'");
  return *it;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) schema(where, "expected a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) schema(where, "expected a number");
  return v.get<double>();
}

std::vector<std::string> as_string_array(const json& v, const std::string& where) {
  if (!v.is_array()) schema(where, "expected an array");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(as_string(e, where));
  return out;
}

std::vector<FeatureDecl> parse_features(const json& doc) {
  const auto& arr = field(doc, "features", "document");
  if (!arr.is_array()) schema("features", "expected an array");
  std::vector<FeatureDecl> out;
  for (const auto& f : arr) {
    FeatureDecl decl;
    decl.id = as_string(field(f, "id", "feature"), "feature.id");
    std::string where = "feature '" + decl.id + "'";
    decl.domain = as_string_array(field(f, "domain", where), where + ".domain");
    const auto& rank = field(f, "rank", where);
    if (!rank.is_number_integer() || rank.get<long long>() < 0) {
      schema(where + ".rank", "expected a non-negative integer");
    }
    decl.rank = rank.get<std::size_t>();
    out.push_back(std::move(decl));
  }
  return out;
}

std::vector<Concept> parse_concepts(const json& doc) {
  const auto& arr = field(doc, "concepts", "document");
  if (!arr.is_array()) schema("concepts", "expected an array");
  std::vector<Concept> out;
  for (const auto& c : arr) {
    Concept con;
    con.id = as_string(field(c, "id", "concept"), "concept.id");
    std::string where = "concept '" + con.id + "'";
    if (auto it = c.find("parent"); it != c.end()) con.parent = as_string(*it, where + ".parent");
    if (auto it = c.find("prior"); it != c.end()) con.prior = as_number(*it, where + ".prior");
    out.push_back(std::move(con));
  }
  return out;
}

PcDiagram parse_diagram(const json& d, const std::vector<FeatureDecl>& features) {
  auto decl_of = [&](const std::string& id, const std::string& where) -> const FeatureDecl& {
    auto it = std::find_if(features.begin(), features.end(),
                           [&](const FeatureDecl& f) { return f.id == id; });
    if (it == features.end()) schema(where, "undeclared feature '" + id + "'");
    return *it;
  };
  auto by_rank = [&](std::vector<std::string>& ids, const std::string& where) {
    std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
      const auto& fa = decl_of(a, where);
      const auto& fb = decl_of(b, where);
      return fa.rank != fb.rank ? fa.rank < fb.rank : fa.id < fb.id;
    });
  };

  PcDiagram diag;
  diag.concept_id = as_string(field(d, "concept", "diagram"), "diagram.concept_id");
  std::string where = "diagram '" + diag.concept_id + "'";
  diag.features = as_string_array(field(d, "features", where), where + ".features");
  if (std::set<std::string>(diag.features.begin(), diag.features.end()).size() !=
      diag.features.size()) {
    schema(where, "duplicate feature in feature list");
  }
  by_rank(diag.features, where);

  const json empty = json::object();
  const json& parents = d.contains("parents") ? d.at("parents") : empty;
  if (!parents.is_object()) schema(where + ".parents", "expected an object");
  const auto& cpts = field(d, "cpt", where);
  if (!cpts.is_object()) schema(where + ".cpt", "expected an object");
  for (const auto& [key, value] : parents.items()) {
    (void)value;
    if (std::find(diag.features.begin(), diag.features.end(), key) == diag.features.end()) {
      schema(where + ".parents", "feature '" + key + "' is not in this diagram");
    }
  }

  for (const auto& fid : diag.features) {
    const auto& decl = decl_of(fid, where);
    std::string fwhere = where + " cpt '" + fid + "'";
    Cpt cpt;
    cpt.card = decl.card();
    if (parents.contains(fid)) {
      cpt.parents = as_string_array(parents.at(fid), where + ".parents." + fid);
      if (std::set<std::string>(cpt.parents.begin(), cpt.parents.end()).size() !=
          cpt.parents.size()) {
        schema(where + ".parents." + fid, "duplicate parent");
      }
      by_rank(cpt.parents, where);
    }
    std::vector<const FeatureDecl*> pdecls;
    for (const auto& p : cpt.parents) {
      pdecls.push_back(&decl_of(p, fwhere));
      cpt.parent_cards.push_back(pdecls.back()->card());
    }
    std::size_t configs = cpt.configs();
    cpt.values.assign(configs * cpt.card, 0.0);
    std::vector<bool> seen(configs, false);

    auto rows_it = cpts.find(fid);
    if (rows_it == cpts.end()) schema(fwhere, "missing cpt");
    if (!rows_it->is_array()) schema(fwhere, "expected an array of rows");
    for (const auto& row : *rows_it) {
      const json& given = row.contains("given") ? row.at("given") : empty;
      if (!given.is_object()) schema(fwhere, "'given' must be an object");
      if (given.size() != cpt.parents.size()) {
        schema(fwhere, "row 'given' must assign exactly the parents");
      }
      std::size_t config = 0;
      for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
        auto git = given.find(cpt.parents[i]);
        if (git == given.end()) schema(fwhere, "row missing parent '" + cpt.parents[i] + "'");
        auto state = pdecls[i]->state_index(as_string(*git, fwhere));
        if (!state) {
          schema(fwhere, "unknown state '" + git->get<std::string>() + "' for parent '" +
                             cpt.parents[i] + "'");
        }
        config = config * cpt.parent_cards[i] + *state;
      }
      if (seen[config]) schema(fwhere, "parent configuration listed twice");
      seen[config] = true;
      const auto& p = field(row, "p", fwhere);
      if (!p.is_object()) schema(fwhere, "'p' must be an object");
      if (p.size() != cpt.card) schema(fwhere, "'p' must give every state exactly once");
      for (std::size_t s = 0; s < cpt.card; ++s) {
        auto pit = p.find(decl.domain[s]);
        if (pit == p.end()) schema(fwhere, "row missing state '" + decl.domain[s] + "'");
        cpt.values[config * cpt.card + s] = as_number(*pit, fwhere);
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      schema(fwhere, "not every parent configuration has a row");
    }
    diag.cpts.emplace(fid, std::move(cpt));
  }
  for (const auto& [key, value] : cpts.items()) {
    (void)value;
    if (!diag.cpts.count(key)) schema(where + ".cpt", "feature '" + key + "' is not in this diagram");
  }
  return diag;
}

std::optional<PreferenceModel> parse_preference(const json& doc) {
  auto it = doc.find("preference");
  if (it == doc.end()) return std::nullopt;
  const auto& p = *it;
  PreferenceModel pref;
  pref.actions = as_string_array(field(p, "actions", "preference"), "preference.actions");
  const auto& util = field(p, "utility", "preference");
  if (!util.is_object()) schema("preference.utility", "expected an object");
  for (const auto& [action, row] : util.items()) {
    if (!row.is_object()) schema("preference.utility." + action, "expected an object");
    auto& dst = pref.utility[action];
    for (const auto& [leaf, v] : row.items()) {
      dst[leaf] = as_number(v, "preference.utility." + action + "." + leaf);
    }
  }
  if (p.contains("observed")) {
    pref.observed_features = as_string_array(p.at("observed"), "preference.observed");
  }
  return pref;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

PcNet load_pcnet(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte);
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                           std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) schema("document", "expected a JSON object");

  auto features = parse_features(doc);
  auto concepts = parse_concepts(doc);

  std::set<std::string> parents;
  for (const auto& c : concepts) {
    if (c.parent) parents.insert(*c.parent);
  }

  std::map<std::string, PcDiagram> leaf, derived;
  const auto& diagrams = field(doc, "diagrams", "document");
  if (!diagrams.is_array()) schema("diagrams", "expected an array");
  for (const auto& d : diagrams) {
    auto diag = parse_diagram(d, features);
    auto& dst = parents.count(diag.concept_id) ? derived : leaf;
    std::string key = diag.concept_id;
    if (!dst.emplace(key, std::move(diag)).second) {
      schema("diagrams", "concept '" + key + "' has more than one diagram");
    }
  }
  return PcNet(std::move(features), std::move(concepts), std::move(leaf), std::move(derived),
               parse_preference(doc));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PcNet load_pcnet_file(const std::filesystem::path& path) { return load_pcnet(read_text_file(path)); }

std::string serialize_pcnet(const PcNet& net) {
  ordered_json doc;
  doc["features"] = ordered_json::array();
  for (const auto& f : net.features()) {
    ordered_json j;
    j["id"] = f.id;
    j["domain"] = f.domain;
    j["rank"] = f.rank;
    doc["features"].push_back(std::move(j));
  }
  doc["concepts"] = ordered_json::array();
  for (const auto& c : net.concepts()) {
    ordered_json j;
    j["id"] = c.id;
    if (c.parent) j["parent"] = *c.parent;
    if (c.prior) j["prior"] = *c.prior;
    doc["concepts"].push_back(std::move(j));
  }

  std::map<std::string, const PcDiagram*> all;
  for (const auto& [k, d] : net.leaf_diagrams()) all.emplace(k, &d);
  for (const auto& [k, d] : net.derived_diagrams()) all.emplace(k, &d);
  doc["diagrams"] = ordered_json::array();
  for (const auto& [k, d] : all) {
    ordered_json j;
    j["concept"] = d->concept_id;
    j["features"] = d->features;
    ordered_json parents = ordered_json::object();
    ordered_json cpts = ordered_json::object();
    for (const auto& fid : d->features) {
      const auto& cpt = d->cpt(fid);
      const auto& decl = net.feature(fid);
      parents[fid] = cpt.parents;
      ordered_json rows = ordered_json::array();
      for (std::size_t config = 0; config < cpt.configs(); ++config) {
        ordered_json row;
        ordered_json given = ordered_json::object();
        std::size_t rem = config;
        std::vector<std::size_t> states(cpt.parents.size());
        for (std::size_t i = cpt.parents.size(); i-- > 0;) {
          states[i] = rem % cpt.parent_cards[i];
          rem /= cpt.parent_cards[i];
        }
        for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
          given[cpt.parents[i]] = net.feature(cpt.parents[i]).domain[states[i]];
        }
        row["given"] = std::move(given);
        ordered_json p = ordered_json::object();
        for (std::size_t s = 0; s < cpt.card; ++s) p[decl.domain[s]] = cpt.at(config, s);
        row["p"] = std::move(p);
        rows.push_back(std::move(row));
      }
      cpts[fid] = std::move(rows);
    }
    j["parents"] = std::move(parents);
    j["cpt"] = std::move(cpts);
    doc["diagrams"].push_back(std::move(j));
  }

  if (const auto& pref = net.preference()) {
    ordered_json p;
    p["actions"] = pref->actions;
    ordered_json util = ordered_json::object();
    for (const auto& a : pref->actions) {
      ordered_json row = ordered_json::object();
      if (auto it = pref->utility.find(a); it != pref->utility.end()) {
        for (const auto& [leaf, v] : it->second) row[leaf] = v;
      }
      util[a] = std::move(row);
    }
    p["utility"] = std::move(util);
    p["observed"] = pref->observed_features;
    doc["preference"] = std::move(p);
  }
  return doc.dump(2) + "\n";
}

}  // namespace pcnet
