#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "labelgcn/checkpoint.hpp"
#include "labelgcn/label_graph.hpp"
#include "labelgcn/rng.hpp"
#include "labelgcn/tape.hpp"

namespace labelgcn {

enum class ModelKind {
  kMlp,      // MLPn: n tanh layers, score_y = v_y · f(x)
  kMlpCrf,   // MLP unary scores refined by mean-field message passing
  kGcntd,    // GCN over [z; v_i] with tied-weight decoder, true label graph
  kGcntdId,  // GCNTD with Â = I
  kGcntdFc,  // GCNTD with a fully connected Â
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);
bool is_gcntd(ModelKind kind);

enum class InputKind { kFeatures, kTokens };

std::string to_string(InputKind kind);
InputKind parse_input_kind(std::string_view text);

struct ModelConfig {
  ModelKind kind = ModelKind::kGcntd;
  std::size_t label_count = 0;
  InputKind input = InputKind::kFeatures;
  std::size_t input_dim = 0;     // feature dimension, or vocabulary size for token input
  std::size_t embed_dim = 64;    // CBoW embedding width d_e (token input only)
  std::size_t hidden_dim = 64;   // d = d_z = d_l
  std::size_t mlp_layers = 1;    // depth of f(x); n of MLPn
  std::size_t gcn_layers = 2;
  std::size_t gcn_hidden = 0;    // width of inner GCN layers; 0 means hidden_dim
  Normalization normalization = Normalization::kSymmetric;  // used by kGcntd only
  double crf_theta = 0.0;
  std::size_t crf_iterations = 5;

  /// Throws ArgumentError on inconsistent dimensions.
  void validate() const;
  std::size_t encoder_input_dim() const { return input == InputKind::kTokens ? embed_dim : input_dim; }
  std::size_t gcn_width() const { return gcn_hidden == 0 ? hidden_dim : gcn_hidden; }
};

/// One example's input: either a dense feature row or token indices.
struct ModelInput {
  std::span<const double> features;
  std::span<const std::size_t> tokens;
};

/// A classifier with the shared score-function interface: forward() yields
/// one real score per label as an L×1 column.
///
/// Parameter layout (names as stored in checkpoints):
///   embedding              v × d_e            token input only
///   encoder.w<l>, .b<l>    f(x) layers, tanh after every layer
///   class_vectors          L × d              MLP and MLP-CRF
///   label_vectors          L × d              GCNTD kinds
///   gcn.w<l>               (2d → h → ... → d) GCNTD kinds
class Model {
 public:
  /// Glorot-uniform weights, zero biases.
  static Model create(const ModelConfig& config, const LabelGraph& graph, Rng& rng);
  /// Restores a model; the graph supplies Â / CRF edges and must match L.
  static Model from_checkpoint(const Checkpoint& checkpoint, const LabelGraph& graph);
  Checkpoint to_checkpoint() const;

  const ModelConfig& config() const { return config_; }
  ModelKind kind() const { return config_.kind; }
  std::size_t label_count() const { return config_.label_count; }

  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

  /// GCN propagation operator (GCNTD kinds).
  const NormalizedAdjacency& propagation() const { return propagation_; }
  /// Replaces Â, e.g. for ablations or permutation tests. Must be L×L.
  void set_propagation(NormalizedAdjacency propagation);
  /// 0/1 edge indicator used by mean-field (MLP-CRF).
  const Matrix& crf_edges() const { return crf_edges_; }
  void set_crf(double theta, std::size_t iterations);

  Var forward(Tape& tape, const ModelInput& input) const;
  /// Input representation z = f(x) as a 1×d row.
  Var encode(Tape& tape, const ModelInput& input) const;
  /// Scores before mean-field (identical to forward for non-CRF kinds).
  Var unary_forward(Tape& tape, const ModelInput& input) const;

  std::vector<double> scores(const ModelInput& input) const;

 private:
  friend Model build_variant(ModelKind kind, const Model& base);

  Model() = default;
  void init_structure(const LabelGraph& graph);

  ModelConfig config_;
  ParameterSet params_;
  NormalizedAdjacency propagation_;
  Matrix crf_edges_;
};

/// Copy of `base` with Â replaced by I (kGcntdId) or the normalized fully
/// connected operator (kGcntdFc). All parameters are shared by value.
Model build_variant(ModelKind kind, const Model& base);

/// Mean-field refinement of unary scores on the label graph: for T rounds,
/// F_i ← F_i + θ Σ_{j∈N(i)} (2σ(F_j) − 1), all nodes updated from the previous round.
std::vector<double> meanfield_forward(std::span<const double> unary, double theta, std::size_t iterations,
                                      const LabelGraph& graph);
/// Tape version of meanfield_forward; `edges` is the L×L 0/1 indicator.
Var meanfield(Tape& tape, Var unary, const Matrix& edges, double theta, std::size_t iterations);

/// Uniform(-r, r) with r = sqrt(6 / (rows + cols)).
Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace labelgcn
