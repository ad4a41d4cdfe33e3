#include <gtest/gtest.h>

#include "pcnet/io.hpp"
#include "support.hpp"

using namespace pcnet;
using pcnet::testing::fixture_path;
using pcnet::testing::load_fixture;

namespace {

ErrorCode load_error(const std::string& text) {
  try {
    load_pcnet(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "loaded: " << text;
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Io, MachiningShape) {
  auto net = load_fixture("machining.pcnet.json");
  EXPECT_EQ(net.features().size(), 15u);
  EXPECT_EQ(net.concepts().size(), 9u);
  EXPECT_EQ(net.leaf_diagrams().size(), 6u);
  EXPECT_TRUE(net.derived_diagrams().empty());
  ASSERT_TRUE(net.preference().has_value());
  EXPECT_EQ(net.preference()->actions.size(), 5u);
  EXPECT_EQ(net.preference()->observed_features.size(), 5u);
}

TEST(Io, TinyCpt) {
  auto net = load_fixture("tiny.pcnet.json");
  const auto& cpt = net.diagram("B1")->cpt("F");
  EXPECT_EQ(cpt.card, 2u);
  EXPECT_DOUBLE_EQ(cpt.at(0, 0), 0.9);
  EXPECT_DOUBLE_EQ(cpt.at(0, 1), 0.1);
}

TEST(Io, RoundTrip) {
  for (const auto* name : {"tiny.pcnet.json", "machining.pcnet.json"}) {
    auto net = load_fixture(name);
    auto text = serialize_pcnet(net);
    auto again = serialize_pcnet(load_pcnet(text));
    EXPECT_EQ(text, again) << name;

    auto propagated = propagate_all(net);
    auto ptext = serialize_pcnet(propagated);
    auto reloaded = load_pcnet(ptext);
    EXPECT_EQ(reloaded.derived_diagrams().size(), propagated.derived_diagrams().size());
    EXPECT_EQ(serialize_pcnet(reloaded), ptext) << name;
  }
}

TEST(Io, EmptyFeatureListIsSchemaError) {
  auto text = read_text_file(fixture_path("tiny.pcnet.json"));
  auto doc = nlohmann::json::parse(text);
  doc["features"] = nlohmann::json::array();
  EXPECT_EQ(load_error(doc.dump()), ErrorCode::SchemaError);
}

TEST(Io, MalformedJsonIsParseError) {
  EXPECT_EQ(load_error("{\"features\": [}"), ErrorCode::ParseError);
  try {
    load_pcnet("{\n  \"features\": [\n}");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Io, SchemaErrors) {
  auto base = nlohmann::json::parse(read_text_file(fixture_path("tiny.pcnet.json")));

  auto missing_row = base;
  missing_row["diagrams"][0]["cpt"]["F"] = nlohmann::json::array();
  EXPECT_EQ(load_error(missing_row.dump()), ErrorCode::SchemaError);

  auto unknown_state = base;
  unknown_state["diagrams"][0]["cpt"]["F"][0]["p"]["mid"] = 0.0;
  EXPECT_EQ(load_error(unknown_state.dump()), ErrorCode::SchemaError);

  auto wrong_type = base;
  wrong_type["concepts"][1]["prior"] = "0.6";
  EXPECT_EQ(load_error(wrong_type.dump()), ErrorCode::SchemaError);

  auto no_concepts = base;
  no_concepts.erase("concepts");
  EXPECT_EQ(load_error(no_concepts.dump()), ErrorCode::SchemaError);

  auto unknown_parent = base;
  unknown_parent["diagrams"][0]["parents"]["F"] = {"G"};
  EXPECT_EQ(load_error(unknown_parent.dump()), ErrorCode::SchemaError);
}

TEST(Io, MissingFile) {
  try {
    load_pcnet_file(fixture_path("does-not-exist.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Io, PreferenceOptional) {
  auto doc = nlohmann::json::parse(read_text_file(fixture_path("tiny.pcnet.json")));
  doc.erase("preference");
  auto net = load_pcnet(doc.dump());
  EXPECT_FALSE(net.preference().has_value());
  EXPECT_EQ(serialize_pcnet(load_pcnet(serialize_pcnet(net))), serialize_pcnet(net));
}
