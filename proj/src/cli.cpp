#include "pcnet/cli.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcnet/abstraction.hpp"
#include "pcnet/builder.hpp"
#include "pcnet/dot.hpp"
#include "pcnet/inference.hpp"
#include "pcnet/io.hpp"
#include "pcnet/json_util.hpp"
#include "pcnet/refine.hpp"
#include "pcnet/validate.hpp"

namespace pcnet {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

EvidenceSet parse_evidence(const std::vector<std::string>& flags) {
  EvidenceSet evidence;
  for (const auto& flag : flags) {
    auto eq = flag.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == flag.size()) {
      throw UsageError("evidence must look like FEATURE=STATE, got '" + flag + "'");
    }
    auto feature = flag.substr(0, eq);
    if (evidence.count(feature)) throw UsageError("feature '" + feature + "' given twice");
    evidence.emplace(std::move(feature), flag.substr(eq + 1));
  }
  return evidence;
}

std::string model_json(const CategorizationDecisionModel& model) {
  using nlohmann::ordered_json;
  const auto& members = model.cover().members();
  ordered_json j;
  j["cover"] = model.cover().to_string();
  ordered_json prior = ordered_json::object();
  for (std::size_t c = 0; c < members.size(); ++c) {
    prior[members[c]] = round_significant(model.pid.concept_prior[c]);
  }
  j["concept_prior"] = std::move(prior);
  j["features"] = ordered_json::array();
  for (const auto& f : model.pid.features) {
    ordered_json jf;
    jf["id"] = f.id;
    jf["states"] = f.states;
    jf["parents"] = f.parents;
    ordered_json cpt = ordered_json::object();
    for (std::size_t m = 0; m < members.size(); ++m) {
      ordered_json rows = ordered_json::array();
      for (std::size_t config = 0; config < f.configs; ++config) {
        ordered_json row = ordered_json::array();
        for (std::size_t s = 0; s < f.card; ++s) row.push_back(round_significant(f.at(m, config, s)));
        rows.push_back(std::move(row));
      }
      cpt[members[m]] = std::move(rows);
    }
    jf["cpt"] = std::move(cpt);
    j["features"].push_back(std::move(jf));
  }
  j["actions"] = model.actions;
  ordered_json util = ordered_json::object();
  for (std::size_t a = 0; a < model.actions.size(); ++a) {
    ordered_json row = ordered_json::object();
    for (std::size_t c = 0; c < members.size(); ++c) {
      row[members[c]] = round_significant(model.utility_on_cover[a][c]);
    }
    util[model.actions[a]] = std::move(row);
  }
  j["utility_on_cover"] = std::move(util);
  j["observed"] = model.observed_features;
  return j.dump(2) + "\n";
}

// Loads, validates and propagates; an invalid net is a domain error.
PcNet load_ready(const std::string& path, std::ostream& err) {
  auto net = load_pcnet_file(path);
  auto report = validate(net);
  if (!report.ok) {
    err << report.to_string();
    throw Error(ErrorCode::InvalidArgument, "net '" + path + "' failed validation");
  }
  return propagate_all(net);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic conceptual network toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string input;
  std::string output = "stdout";
  app.add_option("--input", input, "pc-net JSON file")->required();
  app.add_option("--output", output, "output path, or 'stdout'");

  auto* validate_cmd = app.add_subcommand("validate", "check every invariant of the net");
  auto* propagate_cmd = app.add_subcommand("propagate", "derive internal diagrams and write the net");
  auto* covers_cmd = app.add_subcommand("covers", "list every conceptual cover");

  std::string cover_text;
  std::vector<std::string> evidence_flags;
  auto* build_cmd = app.add_subcommand("build", "construct the decision model for a cover");
  build_cmd->add_option("--cover", cover_text, "comma-separated concept ids")->required();

  auto* solve_cmd = app.add_subcommand("solve", "solve the decision model for a cover");
  solve_cmd->add_option("--cover", cover_text, "comma-separated concept ids")->required();
  solve_cmd->add_option("--evidence", evidence_flags, "FEATURE=STATE, repeatable");

  std::string init_text;
  CostParams cp;
  auto* refine_cmd = app.add_subcommand("refine", "greedy cover refinement");
  refine_cmd->add_option("--init", init_text, "initial cover")->required();
  refine_cmd->add_option("--kappa-table", cp.kappa_table, "cost per CPT entry")->required();
  refine_cmd->add_option("--kappa-concept", cp.kappa_concept, "cost per cover member")->required();
  refine_cmd->add_option("--evidence", evidence_flags, "FEATURE=STATE, repeatable");

  std::string target = "net";
  std::string concept_id;
  auto* dot_cmd = app.add_subcommand("export-dot", "emit Graphviz DOT");
  dot_cmd->add_option("--target", target, "net | diagram | cover | model");
  dot_cmd->add_option("--cover", cover_text, "cover for the cover/model targets");
  dot_cmd->add_option("--concept", concept_id, "concept for the diagram target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : 2;
  }

  if (!std::ifstream(input)) {
    err << "error: cannot read '" << input << "'\n";
    return 2;
  }

  std::ostringstream result;
  int status = 0;
  try {
    if (validate_cmd->parsed()) {
      auto report = validate(load_pcnet_file(input));
      result << report.to_string();
      status = report.ok ? 0 : 1;
    } else if (propagate_cmd->parsed()) {
      result << serialize_pcnet(load_ready(input, err));
    } else if (covers_cmd->parsed()) {
      auto net = load_pcnet_file(input);
      auto report = validate(net);
      if (!report.ok) {
        err << report.to_string();
        return 1;
      }
      for (const auto& c : enumerate_covers(net)) result << c.to_string() << "\n";
    } else if (build_cmd->parsed()) {
      auto net = load_ready(input, err);
      result << model_json(build_decision_model(net, parse_cover(net, cover_text)));
    } else if (solve_cmd->parsed()) {
      auto evidence = parse_evidence(evidence_flags);
      auto net = load_ready(input, err);
      auto model = build_decision_model(net, parse_cover(net, cover_text));
      result << solve_result_json(solve(model, evidence)) << "\n";
    } else if (refine_cmd->parsed()) {
      auto evidence = parse_evidence(evidence_flags);
      auto net = load_ready(input, err);
      if (!net.preference()) throw Error(ErrorCode::SchemaError, "net has no preference model");
      ConceptualCover init;
      try {
        init = parse_cover(net, init_text);
      } catch (const Error& e) {
        throw Error(ErrorCode::InitInvalid, e.what());
      }
      result << trace_json_lines(refine(net, *net.preference(), evidence, cp, init));
    } else if (dot_cmd->parsed()) {
      auto net = load_ready(input, err);
      if (target == "net") {
        result << dot_hierarchy(net);
      } else if (target == "diagram") {
        net.concept_by_id(concept_id);
        result << dot_diagram(net, concept_id);
      } else if (target == "cover") {
        result << dot_pid(build_categorization_pid(net, parse_cover(net, cover_text)));
      } else if (target == "model") {
        result << dot_model(build_decision_model(net, parse_cover(net, cover_text)));
      } else {
        err << "unknown export target '" << target << "'\n";
        return 1;
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }

  if (output == "stdout" || output == "-") {
    out << result.str();
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) {
      err << "cannot write '" << output << "'\n";
      return 2;
    }
    file << result.str();
  }
  return status;
}

}  // namespace pcnet
