#include "labelgcn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "labelgcn/error.hpp"

namespace labelgcn {

namespace {

constexpr const char* kMagic = "LABELGCN-CHECKPOINT";
constexpr int kVersion = 1;

void write_le_double(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

double read_le_double(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

bool valid_word(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  return true;
}

}  // namespace

const std::string& Checkpoint::hyper_value(const std::string& key) const {
  for (const auto& [k, v] : hyper)
    if (k == key) return v;
  throw DataError("checkpoint has no hyperparameter '" + key + "'");
}

bool Checkpoint::has_hyper(const std::string& key) const {
  for (const auto& kv : hyper)
    if (kv.first == key) return true;
  return false;
}

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint) {
  if (!valid_word(checkpoint.kind)) throw ArgumentError("checkpoint kind must be a single word");
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << checkpoint.kind << '\n';
  for (const auto& [k, v] : checkpoint.hyper) {
    if (!valid_word(k) || !valid_word(v)) throw ArgumentError("checkpoint hyperparameter '" + k + "' is not a single word");
    out << "hyper " << k << ' ' << v << '\n';
  }
  if (!checkpoint.vocabulary.empty()) {
    out << "vocab " << checkpoint.vocabulary.size() << '\n';
    for (const auto& token : checkpoint.vocabulary) {
      if (!valid_word(token)) throw ArgumentError("vocabulary token contains whitespace");
      out << token << '\n';
    }
  }
  for (std::size_t i = 0; i < checkpoint.params.size(); ++i) {
    const Matrix& m = checkpoint.params[i];
    out << "tensor " << checkpoint.params.name(i) << ' ' << m.rows() << ' ' << m.cols() << '\n';
  }
  out << "payload\n";
  for (std::size_t i = 0; i < checkpoint.params.size(); ++i)
    for (double v : checkpoint.params[i].data()) write_le_double(out, v);
  if (!out) throw DataError("failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in, const std::string& source) {
  Checkpoint cp;
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) throw ParseError(source, line_no + 1, "unexpected end of checkpoint header");
    ++line_no;
    return line;
  };

  {
    std::istringstream head(next_line());
    std::string magic;
    int version = 0;
    if (!(head >> magic >> version) || magic != kMagic) throw ParseError(source, line_no, "not a labelgcn checkpoint");
    if (version != kVersion) throw ParseError(source, line_no, "unsupported checkpoint version " + std::to_string(version));
  }

  struct Shape {
    std::string name;
    std::size_t rows, cols;
  };
  std::vector<Shape> shapes;
  bool have_kind = false;
  for (;;) {
    std::istringstream rec(next_line());
    std::string tag;
    rec >> tag;
    if (tag == "payload") break;
    if (tag == "kind") {
      if (!(rec >> cp.kind)) throw ParseError(source, line_no, "kind line without a value");
      have_kind = true;
    } else if (tag == "hyper") {
      std::string k, v;
      if (!(rec >> k >> v)) throw ParseError(source, line_no, "malformed hyper line");
      cp.hyper.emplace_back(std::move(k), std::move(v));
    } else if (tag == "vocab") {
      std::size_t n = 0;
      if (!(rec >> n)) throw ParseError(source, line_no, "malformed vocab line");
      cp.vocabulary.reserve(n);
      for (std::size_t i = 0; i < n; ++i) cp.vocabulary.push_back(next_line());
    } else if (tag == "tensor") {
      Shape s{};
      if (!(rec >> s.name >> s.rows >> s.cols)) throw ParseError(source, line_no, "malformed tensor line");
      shapes.push_back(std::move(s));
    } else {
      throw ParseError(source, line_no, "unknown header record '" + tag + "'");
    }
  }
  if (!have_kind) throw ParseError(source, line_no, "checkpoint header has no kind");

  for (const auto& s : shapes) {
    std::vector<double> data(s.rows * s.cols);
    for (double& v : data) v = read_le_double(in);
    if (!in) throw ParseError("checkpoint payload truncated in tensor '" + s.name + "' (" + source + ")");
    cp.params.add(s.name, Matrix(s.rows, s.cols, std::move(data)));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after checkpoint payload (" + source + ")");
  return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  return read_checkpoint(in, path);
}

}  // namespace labelgcn
