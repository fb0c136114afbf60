#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cheeger/graph.hpp"

namespace cheeger {

/// A graph read from disk plus the external label of every dense index.
struct LoadedGraph {
  WeightedGraph graph;
  std::vector<std::string> labels;  ///< labels[i] is the file's name for vertex i
};

/// Edge-list format:
///
///     # comment
///     n m
///     u v w        (m lines)
///
/// Labels that are all integers in [0, n) are used as indices; any other
/// labels are mapped to indices in order of first appearance. With `normalize`
/// each vertex's listed weights are divided by its weighted degree, the two
/// directions of every edge are averaged, and the result is balanced to unit
/// degree; otherwise the file must already satisfy the model.
///
/// Throws GraphParseError for malformed text and GraphValidationError for a
/// well-formed file that violates the model.
LoadedGraph read_graph(std::istream& in, bool normalize);
LoadedGraph load_graph(const std::filesystem::path& path, bool normalize);

/// Writes edges sorted by (u, v) with u < v and 17 significant digits, so
/// that a reload is bit-identical.
void write_graph(std::ostream& out, const WeightedGraph& g);
void save_graph(const std::filesystem::path& path, const WeightedGraph& g);

}  // namespace cheeger
