#pragma once

#include "influence/graph.hpp"

#include <filesystem>
#include <string>

namespace influence::io {

/// {"name": str, "vertices": [{"id": int, "color": "B"|"W"}], "edges": [[int, int]]}.
/// Ids may be any distinct integers; vertices are renumbered in listed order and
/// keep their file id as label unless a "label" string is given. Throws InputError.
GraphPtr parse_graph_json(const std::string& text);
GraphPtr load_graph_file(const std::filesystem::path& path);
/// Vertex ids are 0..n-1; labels are written when the graph has any.
std::string graph_json(const GroundGraph& g);

std::string read_text_file(const std::filesystem::path& path);

} // namespace influence::io
