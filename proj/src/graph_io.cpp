#include "labelgcn/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "labelgcn/error.hpp"

namespace labelgcn {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& source, std::size_t line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw ParseError(source, line, "expected a finite real, got '" + token + "'");
  }
  return v;
}

std::size_t parse_index(const std::string& token, const std::string& source, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty()) {
    throw ParseError(source, line, "expected a non-negative integer, got '" + token + "'");
  }
  return v;
}

void write_edge_list(std::ostream& out, const LabelGraph& graph) {
  out << "# labelgcn edge list\n";
  out << "nodes\t" << graph.size() << '\n';
  for (std::size_t i = 0; i < graph.size(); ++i) out << i << '\t' << graph.name(i) << '\n';
  out << "edges\n";
  for (const Edge& e : graph.edges()) out << e.u << '\t' << e.v << '\t' << format_double(e.weight) << '\n';
}

LabelGraph read_edge_list(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  enum class Section { kHeader, kNames, kEdges } section = Section::kHeader;
  std::size_t node_count = 0;
  std::vector<std::string> names;
  std::vector<Edge> edges;
  std::vector<bool> named;

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    const auto fields = split_tabs(line);
    switch (section) {
      case Section::kHeader:
        if (fields.size() != 2 || fields[0] != "nodes") throw ParseError(source, line_no, "expected 'nodes<TAB>L' header");
        node_count = parse_index(fields[1], source, line_no);
        if (node_count == 0) throw ParseError(source, line_no, "graph must have at least one node");
        names.assign(node_count, "");
        named.assign(node_count, false);
        section = Section::kNames;
        break;
      case Section::kNames:
        if (fields.size() == 1 && fields[0] == "edges") {
          for (std::size_t i = 0; i < node_count; ++i)
            if (!named[i]) throw ParseError(source, line_no, "node " + std::to_string(i) + " has no name");
          section = Section::kEdges;
          break;
        }
        if (fields.size() != 2 || fields[1].empty()) throw ParseError(source, line_no, "expected 'index<TAB>name'");
        {
          const std::size_t idx = parse_index(fields[0], source, line_no);
          if (idx >= node_count) throw ParseError(source, line_no, "node index " + fields[0] + " out of range");
          if (named[idx]) throw ParseError(source, line_no, "node " + fields[0] + " named twice");
          for (std::size_t j = 0; j < node_count; ++j)
            if (named[j] && names[j] == fields[1]) throw ParseError(source, line_no, "duplicate label name '" + fields[1] + "'");
          names[idx] = fields[1];
          named[idx] = true;
        }
        break;
      case Section::kEdges: {
        if (fields.size() != 3) throw ParseError(source, line_no, "expected 'u<TAB>v<TAB>weight'");
        Edge e{parse_index(fields[0], source, line_no), parse_index(fields[1], source, line_no),
               parse_double(fields[2], source, line_no)};
        if (e.u >= node_count || e.v >= node_count) throw ParseError(source, line_no, "edge endpoint out of range");
        if (e.u == e.v) throw ParseError(source, line_no, "self-loop edge");
        if (!(e.weight > 0.0)) throw ParseError(source, line_no, "edge weight must be positive");
        edges.push_back(e);
        break;
      }
    }
  }
  if (section == Section::kHeader) throw ParseError(source, line_no, "empty edge-list file");
  if (section == Section::kNames) throw ParseError(source, line_no, "missing 'edges' section");
  return LabelGraph::from_edges(node_count, edges, std::move(names));
}

LabelGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path + "'");
  return read_edge_list(in, path);
}

void save_edge_list(const std::string& path, const LabelGraph& graph) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_edge_list(out, graph);
}

void write_similarity(std::ostream& out, const Matrix& similarity) {
  out << similarity.rows() << '\n';
  for (std::size_t i = 0; i < similarity.rows(); ++i) {
    for (std::size_t j = 0; j < similarity.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(similarity(i, j));
    }
    out << '\n';
  }
}

Matrix read_similarity(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string tok, extra;
    ss >> tok;
    if (ss >> extra) throw ParseError(source, line_no, "first line must hold only L");
    n = parse_index(tok, source, line_no);
    break;
  }
  if (n == 0) throw ParseError(source, line_no, "empty or zero-sized similarity file");
  Matrix m(n, n);
  std::size_t row = 0;
  while (row < n && std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (skippable(line)) continue;
    std::istringstream ss(line);
    std::string tok;
    std::size_t col = 0;
    while (ss >> tok) {
      if (col >= n) throw ParseError(source, line_no, "row has more than " + std::to_string(n) + " values");
      m(row, col++) = parse_double(tok, source, line_no);
    }
    if (col != n) throw ParseError(source, line_no, "row has " + std::to_string(col) + " values, expected " + std::to_string(n));
    ++row;
  }
  if (row != n) throw ParseError(source, line_no, "expected " + std::to_string(n) + " rows, found " + std::to_string(row));
  return m;
}

Matrix load_similarity(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open similarity file '" + path + "'");
  return read_similarity(in, path);
}

void save_similarity(const std::string& path, const Matrix& similarity) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_similarity(out, similarity);
}

}  // namespace labelgcn
