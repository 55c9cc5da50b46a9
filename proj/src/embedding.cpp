#include "labelgcn/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "labelgcn/error.hpp"
#include "labelgcn/graph_io.hpp"
#include "labelgcn/kernels.hpp"

namespace labelgcn {

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> with_bigrams(std::span<const std::string> tokens) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) out.push_back(tokens[i] + "_" + tokens[i + 1]);
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> document_frequency)
    : tokens_(std::move(tokens)), frequency_(std::move(document_frequency)) {
  if (!frequency_.empty() && frequency_.size() != tokens_.size()) {
    throw ArgumentError("vocabulary frequency list does not match token list");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw ArgumentError("empty vocabulary token");
    if (!index_.emplace(tokens_[i], i).second) throw ArgumentError("duplicate vocabulary token '" + tokens_[i] + "'");
  }
  for (auto f : frequency_)
    if (f < 1) throw ArgumentError("vocabulary frequencies must be >= 1");
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> documents, const VocabularyOptions& options) {
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    const auto grams = options.bigrams ? with_bigrams(doc) : doc;
    std::set<std::string> seen(grams.begin(), grams.end());
    for (const auto& t : seen) ++df[t];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > options.max_size) ranked.resize(options.max_size);
  std::vector<std::string> tokens;
  std::vector<std::size_t> freq;
  for (auto& [t, f] : ranked) {
    tokens.push_back(t);
    freq.push_back(f);
  }
  Vocabulary v(std::move(tokens), std::move(freq));
  v.bigrams_ = options.bigrams;
  return v;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Vocabulary::encode(std::span<const std::string> tokens, std::size_t* dropped) const {
  const auto grams = bigrams_ ? with_bigrams(tokens) : std::vector<std::string>(tokens.begin(), tokens.end());
  std::vector<std::size_t> out;
  std::size_t missing = 0;
  for (const auto& g : grams) {
    if (auto i = index_of(g)) {
      out.push_back(*i);
    } else {
      ++missing;
    }
  }
  if (dropped) *dropped = missing;
  return out;
}

std::vector<double> cbow_embed(std::span<const std::size_t> tokens, const EmbeddingTable& table) {
  if (tokens.empty()) throw ArgumentError("cbow_embed: empty document");
  const Matrix& c = table.weights;
  std::vector<double> out(c.cols(), 0.0);
  for (std::size_t t : tokens) {
    if (t >= c.rows()) {
      throw IndexError("token index " + std::to_string(t) + " out of range for vocabulary of " + std::to_string(c.rows()));
    }
    for (std::size_t j = 0; j < c.cols(); ++j) out[j] += c(t, j);
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& v : out) v *= inv;
  return out;
}

DefinitionVector definition_vector(std::span<const std::string> tokens,
                                   const std::unordered_map<std::string, double>& idf,
                                   const WordVectors& word_vectors) {
  // Raw term counts in first-seen order, so summation order is fixed.
  std::vector<std::pair<std::string, std::size_t>> counts;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& t : tokens) {
    auto [it, inserted] = slot.emplace(t, counts.size());
    if (inserted) counts.emplace_back(t, 0);
    ++counts[it->second].second;
  }

  DefinitionVector out;
  std::optional<std::size_t> dim;
  double weight_sum = 0.0;
  for (const auto& [token, tf] : counts) {
    auto wv = word_vectors.find(token);
    if (wv == word_vectors.end()) {
      out.dropped_tokens += tf;
      continue;
    }
    if (!dim) {
      dim = wv->second.size();
      out.values.assign(*dim, 0.0);
    } else if (wv->second.size() != *dim) {
      throw ShapeError("word vector for '" + token + "' has dimension " + std::to_string(wv->second.size()) +
                       ", expected " + std::to_string(*dim));
    }
    auto w = idf.find(token);
    if (w == idf.end()) throw ArgumentError("no idf value for token '" + token + "'");
    const double weight = static_cast<double>(tf) * w->second;
    weight_sum += weight;
    for (std::size_t j = 0; j < *dim; ++j) out.values[j] += weight * wv->second[j];
  }
  if (weight_sum == 0.0) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
  } else {
    for (double& v : out.values) v /= weight_sum;
  }
  return out;
}

std::unordered_map<std::string, double> inverse_document_frequency(std::span<const std::vector<std::string>> documents) {
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    std::set<std::string> seen(doc.begin(), doc.end());
    for (const auto& t : seen) ++df[t];
  }
  const double n = static_cast<double>(documents.size());
  std::unordered_map<std::string, double> idf;
  for (const auto& [t, f] : df) idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(f))) + 1.0;
  return idf;
}

Matrix cosine_similarity_matrix(std::span<const std::vector<double>> vectors) {
  const std::size_t n = vectors.size();
  if (n == 0) return Matrix();
  const std::size_t d = vectors[0].size();
  std::vector<double> flat;
  flat.reserve(n * d);
  for (const auto& v : vectors) {
    if (v.size() != d) throw ShapeError("cosine_similarity_matrix: vectors differ in dimension");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  Matrix out(n, n);
  kernels::cosine_rows_parallel(flat, n, d, out.data());
  return out;
}

WordVectors read_word_vectors(std::istream& in, const std::string& source) {
  WordVectors out;
  std::optional<std::size_t> dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_whitespace(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    if (line_no == 1 && fields.size() == 2 && fields[0].find_first_not_of("0123456789") == std::string::npos &&
        fields[1].find_first_not_of("0123456789") == std::string::npos) {
      continue;  // fastText-style "count dim" header
    }
    if (fields.size() < 2) throw ParseError(source, line_no, "word vector line needs a token and values");
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_double(fields[i], source, line_no));
    if (!dim) dim = values.size();
    if (values.size() != *dim) {
      throw ParseError(source, line_no, "ragged word vector: " + std::to_string(values.size()) + " values, expected " +
                                            std::to_string(*dim));
    }
    out[fields[0]] = std::move(values);
  }
  if (out.empty()) throw ParseError(source, line_no, "no word vectors found");
  return out;
}

WordVectors load_word_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open word-vector file '" + path + "'");
  return read_word_vectors(in, path);
}

std::vector<LabelledTokens> read_definitions(std::istream& in, const std::string& source) {
  std::vector<LabelledTokens> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError(source, line_no, "expected 'label<TAB>tokens'");
    LabelledTokens rec{line.substr(0, tab), split_whitespace(std::string_view(line).substr(tab + 1))};
    for (const auto& prev : out)
      if (prev.label == rec.label) throw ParseError(source, line_no, "duplicate definition for '" + rec.label + "'");
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw ParseError(source, line_no, "no definitions found");
  return out;
}

std::vector<LabelledTokens> load_definitions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open definitions file '" + path + "'");
  return read_definitions(in, path);
}

}  // namespace labelgcn
