#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pcnet/core.hpp"

namespace pcnet {

// Parses a pc-net JSON document. Malformed JSON raises ParseError with the
// line and column; structural problems raise SchemaError.
PcNet load_pcnet(std::string_view text);

// Reads and parses a file. An unreadable path raises InvalidArgument.
PcNet load_pcnet_file(const std::filesystem::path& path);

// Canonical serialization: keys in fixed order, features by rank, concepts
// and diagrams by id, CPT rows in configuration order. Derived diagrams are
// written alongside leaf diagrams.
std::string serialize_pcnet(const PcNet& net);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace pcnet
