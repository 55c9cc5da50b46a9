#pragma once

#include <iosfwd>
#include <string>

#include "labelgcn/label_graph.hpp"

namespace labelgcn {

// Edge-list format (UTF-8, tab separated, `#` starts a comment line):
//
//   nodes<TAB>L
//   0<TAB>first label name
//   ...                       (L lines: index<TAB>name)
//   edges
//   u<TAB>v<TAB>weight        (one per undirected edge, either orientation)
//
// Parent-child lists from a taxonomy are accepted as-is and symmetrized.

void write_edge_list(std::ostream& out, const LabelGraph& graph);
LabelGraph read_edge_list(std::istream& in, const std::string& source = "<edges>");
LabelGraph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const LabelGraph& graph);

// Dense similarity format: first line L, then L rows of L whitespace-separated reals.

void write_similarity(std::ostream& out, const Matrix& similarity);
Matrix read_similarity(std::istream& in, const std::string& source = "<similarity>");
Matrix load_similarity(const std::string& path);
void save_similarity(const std::string& path, const Matrix& similarity);

/// Shortest decimal form that parses back to exactly `v`.
std::string format_double(double v);
/// Strict full-token parse; throws ParseError with context on failure.
double parse_double(const std::string& token, const std::string& source, std::size_t line);
std::size_t parse_index(const std::string& token, const std::string& source, std::size_t line);

}  // namespace labelgcn
