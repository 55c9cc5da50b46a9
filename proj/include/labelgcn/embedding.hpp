#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "labelgcn/matrix.hpp"

namespace labelgcn {

struct VocabularyOptions {
  std::size_t max_size = 100000;
  bool bigrams = true;  // add "a_b" tokens for adjacent pairs
};

/// Dense token -> index map, most frequent first.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> document_frequency = {});

  /// Ranks tokens by document frequency (ties by token text) and keeps the
  /// top `max_size`.
  static Vocabulary build(std::span<const std::vector<std::string>> documents, const VocabularyOptions& options = {});

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  std::optional<std::size_t> index_of(std::string_view token) const;
  /// Empty when the vocabulary was not built from a corpus.
  const std::vector<std::size_t>& document_frequency() const { return frequency_; }
  bool bigrams() const { return bigrams_; }
  void set_bigrams(bool on) { bigrams_ = on; }

  /// Maps tokens (plus bigrams if enabled) to indices, dropping unknown ones.
  std::vector<std::size_t> encode(std::span<const std::string> tokens, std::size_t* dropped = nullptr) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> frequency_;
  std::unordered_map<std::string, std::size_t> index_;
  bool bigrams_ = false;
};

std::vector<std::string> with_bigrams(std::span<const std::string> tokens);

struct EmbeddingTable {
  Matrix weights;  // v × d_e
  bool trainable = true;
};

/// Mean of the embedding rows of `tokens`. Empty input is an ArgumentError,
/// an index >= v an IndexError.
std::vector<double> cbow_embed(std::span<const std::size_t> tokens, const EmbeddingTable& table);

using WordVectors = std::unordered_map<std::string, std::vector<double>>;

struct DefinitionVector {
  std::vector<double> values;
  std::size_t dropped_tokens = 0;  // tokens with no word vector
};

/// TF-IDF weighted mean of word vectors: Σ tf·idf·wv / Σ tf·idf, tf = raw
/// count. Tokens without a word vector are dropped and counted; every kept
/// token must have an idf. All-zero weight gives the zero vector.
DefinitionVector definition_vector(std::span<const std::string> tokens,
                                   const std::unordered_map<std::string, double>& idf,
                                   const WordVectors& word_vectors);

/// Smoothed idf over a collection: ln((1 + N) / (1 + df)) + 1.
std::unordered_map<std::string, double> inverse_document_frequency(std::span<const std::vector<std::string>> documents);

/// Pairwise cosine similarity with zero diagonal; zero-norm vectors give 0 rows/cols.
Matrix cosine_similarity_matrix(std::span<const std::vector<double>> vectors);

// Text inputs.

struct LabelledTokens {
  std::string label;
  std::vector<std::string> tokens;
};

/// `token v1 v2 ...` per line; a leading `count dim` header line is skipped.
WordVectors read_word_vectors(std::istream& in, const std::string& source = "<word-vectors>");
WordVectors load_word_vectors(const std::string& path);

/// `label_name<TAB>token token ...` per line.
std::vector<LabelledTokens> read_definitions(std::istream& in, const std::string& source = "<definitions>");
std::vector<LabelledTokens> load_definitions(const std::string& path);

std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace labelgcn
