#include "labelgcn/models.hpp"

#include <cmath>

#include "labelgcn/error.hpp"
#include "labelgcn/graph_io.hpp"

namespace labelgcn {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMlp: return "mlp";
    case ModelKind::kMlpCrf: return "mlp-crf";
    case ModelKind::kGcntd: return "gcntd";
    case ModelKind::kGcntdId: return "gcntd-id";
    case ModelKind::kGcntdFc: return "gcntd-fc";
  }
  return "mlp";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "mlp") return ModelKind::kMlp;
  if (text == "mlp-crf") return ModelKind::kMlpCrf;
  if (text == "gcntd") return ModelKind::kGcntd;
  if (text == "gcntd-id") return ModelKind::kGcntdId;
  if (text == "gcntd-fc") return ModelKind::kGcntdFc;
  throw ArgumentError("unknown model kind '" + std::string(text) + "' (mlp, mlp-crf, gcntd, gcntd-id, gcntd-fc)");
}

bool is_gcntd(ModelKind kind) {
  return kind == ModelKind::kGcntd || kind == ModelKind::kGcntdId || kind == ModelKind::kGcntdFc;
}

std::string to_string(InputKind kind) { return kind == InputKind::kTokens ? "tokens" : "features"; }

InputKind parse_input_kind(std::string_view text) {
  if (text == "features") return InputKind::kFeatures;
  if (text == "tokens") return InputKind::kTokens;
  throw ArgumentError("unknown input kind '" + std::string(text) + "'");
}

void ModelConfig::validate() const {
  if (label_count == 0) throw ArgumentError("model needs at least one label");
  if (input_dim == 0) throw ArgumentError("model input dimension must be positive");
  if (hidden_dim == 0) throw ArgumentError("hidden_dim must be positive");
  if (input == InputKind::kTokens && embed_dim == 0) throw ArgumentError("embed_dim must be positive");
  if (mlp_layers == 0) throw ArgumentError("mlp_layers must be >= 1");
  if (is_gcntd(kind) && gcn_layers == 0) throw ArgumentError("gcn_layers must be >= 1");
  if (crf_iterations == 0) throw ArgumentError("crf_iterations must be >= 1");
  if (!std::isfinite(crf_theta)) throw ArgumentError("crf_theta must be finite");
}

Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform(-r, r);
  return m;
}

namespace {

Matrix edge_indicator(const LabelGraph& graph) {
  const std::size_t n = graph.size();
  Matrix e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : graph.neighbor_lists()[i]) e(i, j) = 1.0;
  return e;
}

Normalization propagation_mode(const ModelConfig& config) {
  switch (config.kind) {
    case ModelKind::kGcntdId: return Normalization::kIdentity;
    case ModelKind::kGcntdFc: return Normalization::kFullyConnected;
    default: return config.normalization;
  }
}

/// Parameter names and shapes in declaration order.
std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> layout(const ModelConfig& c) {
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> out;
  if (c.input == InputKind::kTokens) out.push_back({"embedding", {c.input_dim, c.embed_dim}});
  std::size_t in = c.encoder_input_dim();
  for (std::size_t l = 0; l < c.mlp_layers; ++l) {
    out.push_back({"encoder.w" + std::to_string(l), {in, c.hidden_dim}});
    out.push_back({"encoder.b" + std::to_string(l), {1, c.hidden_dim}});
    in = c.hidden_dim;
  }
  if (is_gcntd(c.kind)) {
    out.push_back({"label_vectors", {c.label_count, c.hidden_dim}});
    std::size_t width = 2 * c.hidden_dim;
    for (std::size_t l = 0; l < c.gcn_layers; ++l) {
      const std::size_t next = (l + 1 == c.gcn_layers) ? c.hidden_dim : c.gcn_width();
      out.push_back({"gcn.w" + std::to_string(l), {width, next}});
      width = next;
    }
  } else {
    out.push_back({"class_vectors", {c.label_count, c.hidden_dim}});
  }
  return out;
}

bool is_bias(const std::string& name) { return name.rfind("encoder.b", 0) == 0; }

std::string hyper_lookup(const Checkpoint& cp, const std::string& key) { return cp.hyper_value(key); }

std::size_t hyper_size(const Checkpoint& cp, const std::string& key) {
  return parse_index(hyper_lookup(cp, key), "checkpoint hyper " + key, 0);
}

}  // namespace

void Model::init_structure(const LabelGraph& graph) {
  if (graph.size() != config_.label_count) {
    throw ShapeError("model has " + std::to_string(config_.label_count) + " labels but graph has " +
                     std::to_string(graph.size()));
  }
  if (is_gcntd(config_.kind)) propagation_ = normalize_adjacency(graph, propagation_mode(config_));
  if (config_.kind == ModelKind::kMlpCrf) crf_edges_ = edge_indicator(graph);
}

Model Model::create(const ModelConfig& config, const LabelGraph& graph, Rng& rng) {
  config.validate();
  Model m;
  m.config_ = config;
  m.init_structure(graph);
  for (const auto& [name, shape] : layout(config)) {
    if (is_bias(name)) {
      m.params_.add(name, Matrix(shape.first, shape.second));
    } else {
      m.params_.add(name, glorot_uniform(shape.first, shape.second, rng));
    }
  }
  return m;
}

Checkpoint Model::to_checkpoint() const {
  Checkpoint cp;
  cp.kind = to_string(config_.kind);
  cp.hyper = {
      {"label_count", std::to_string(config_.label_count)},
      {"input", to_string(config_.input)},
      {"input_dim", std::to_string(config_.input_dim)},
      {"embed_dim", std::to_string(config_.embed_dim)},
      {"hidden_dim", std::to_string(config_.hidden_dim)},
      {"mlp_layers", std::to_string(config_.mlp_layers)},
      {"gcn_layers", std::to_string(config_.gcn_layers)},
      {"gcn_hidden", std::to_string(config_.gcn_hidden)},
      {"normalization", to_string(config_.normalization)},
      {"crf_theta", format_double(config_.crf_theta)},
      {"crf_iterations", std::to_string(config_.crf_iterations)},
  };
  cp.params = params_;
  return cp;
}

Model Model::from_checkpoint(const Checkpoint& cp, const LabelGraph& graph) {
  ModelConfig c;
  c.kind = parse_model_kind(cp.kind);
  c.label_count = hyper_size(cp, "label_count");
  c.input = parse_input_kind(hyper_lookup(cp, "input"));
  c.input_dim = hyper_size(cp, "input_dim");
  c.embed_dim = hyper_size(cp, "embed_dim");
  c.hidden_dim = hyper_size(cp, "hidden_dim");
  c.mlp_layers = hyper_size(cp, "mlp_layers");
  c.gcn_layers = hyper_size(cp, "gcn_layers");
  c.gcn_hidden = hyper_size(cp, "gcn_hidden");
  c.normalization = parse_normalization(hyper_lookup(cp, "normalization"));
  c.crf_theta = parse_double(hyper_lookup(cp, "crf_theta"), "checkpoint hyper crf_theta", 0);
  c.crf_iterations = hyper_size(cp, "crf_iterations");
  c.validate();

  const auto expected = layout(c);
  if (expected.size() != cp.params.size()) throw DataError("checkpoint tensor count does not match its model kind");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& [name, shape] = expected[i];
    const Matrix& t = cp.params[i];
    if (cp.params.name(i) != name || t.rows() != shape.first || t.cols() != shape.second) {
      throw DataError("checkpoint tensor " + cp.params.name(i) + " (" + t.shape_string() + ") does not match expected " +
                      name + " (" + std::to_string(shape.first) + "x" + std::to_string(shape.second) + ")");
    }
  }

  Model m;
  m.config_ = c;
  m.init_structure(graph);
  m.params_ = cp.params;
  return m;
}

void Model::set_propagation(NormalizedAdjacency propagation) {
  if (propagation.matrix.rows() != config_.label_count || propagation.matrix.cols() != config_.label_count) {
    throw ShapeError("propagation operator must be " + std::to_string(config_.label_count) + "x" +
                     std::to_string(config_.label_count));
  }
  propagation_ = std::move(propagation);
}

void Model::set_crf(double theta, std::size_t iterations) {
  if (!std::isfinite(theta)) throw ArgumentError("crf theta must be finite");
  if (iterations == 0) throw ArgumentError("crf iterations must be >= 1");
  config_.crf_theta = theta;
  config_.crf_iterations = iterations;
}

Var Model::encode(Tape& tape, const ModelInput& input) const {
  Var h;
  std::size_t p = 0;
  if (config_.input == InputKind::kTokens) {
    if (input.tokens.empty()) throw ArgumentError("token model given an empty document");
    h = tape.gather_mean(tape.param(p++), input.tokens);
  } else {
    if (input.features.size() != config_.input_dim) {
      throw ShapeError("feature vector has " + std::to_string(input.features.size()) + " entries, model expects " +
                       std::to_string(config_.input_dim));
    }
    h = tape.constant(Matrix::row_vector(input.features));
  }
  for (std::size_t l = 0; l < config_.mlp_layers; ++l) {
    const Var w = tape.param(p++);
    const Var b = tape.param(p++);
    h = tape.tanh(tape.add_row(tape.matmul(h, w), b));
  }
  return h;
}

Var Model::unary_forward(Tape& tape, const ModelInput& input) const {
  const Var z = encode(tape, input);
  if (!is_gcntd(config_.kind)) {
    const Var classes = tape.param(params_.index_of("class_vectors"));
    return tape.matmul(classes, tape.transpose(z));
  }

  const std::size_t n = config_.label_count;
  const Var labels = tape.param(params_.index_of("label_vectors"));
  const Var z_rows = tape.repeat_rows(z, n);
  const Var a_hat = tape.constant(propagation_.matrix);
  Var h = tape.concat_cols(z_rows, labels);
  const std::size_t first = params_.index_of("gcn.w0");
  for (std::size_t l = 0; l < config_.gcn_layers; ++l) {
    const Var w = tape.param(first + l);
    h = tape.tanh(tape.matmul(a_hat, tape.matmul(h, w)));
  }
  // Tied decoder: F_i = u_i·z + u_i·v_i.
  return tape.row_dot(h, tape.add(z_rows, labels));
}

Var Model::forward(Tape& tape, const ModelInput& input) const {
  const Var unary = unary_forward(tape, input);
  if (config_.kind != ModelKind::kMlpCrf) return unary;
  return meanfield(tape, unary, crf_edges_, config_.crf_theta, config_.crf_iterations);
}

std::vector<double> Model::scores(const ModelInput& input) const {
  Tape tape(params_);
  const Var out = forward(tape, input);
  const auto data = tape.value(out).data();
  return {data.begin(), data.end()};
}

Model build_variant(ModelKind kind, const Model& base) {
  if (kind != ModelKind::kGcntdId && kind != ModelKind::kGcntdFc) {
    throw ArgumentError("build_variant expects gcntd-id or gcntd-fc");
  }
  if (!is_gcntd(base.kind())) throw ArgumentError("build_variant needs a GCNTD base model");
  Model variant = base;
  variant.config_.kind = kind;
  const std::size_t n = base.label_count();
  if (kind == ModelKind::kGcntdId) {
    variant.propagation_ = {Matrix::identity(n), Normalization::kIdentity};
  } else {
    variant.propagation_ = normalize_adjacency(LabelGraph(Matrix(n, n)), Normalization::kFullyConnected);
  }
  return variant;
}

std::vector<double> meanfield_forward(std::span<const double> unary, double theta, std::size_t iterations,
                                      const LabelGraph& graph) {
  if (unary.size() != graph.size()) {
    throw ShapeError("meanfield: " + std::to_string(unary.size()) + " scores for a graph of " +
                     std::to_string(graph.size()) + " labels");
  }
  if (iterations == 0) throw ArgumentError("meanfield needs at least one iteration");
  std::vector<double> f(unary.begin(), unary.end());
  std::vector<double> message(f.size());
  for (std::size_t t = 0; t < iterations; ++t) {
    for (std::size_t j = 0; j < f.size(); ++j) message[j] = 2.0 / (1.0 + std::exp(-f[j])) - 1.0;
    std::vector<double> next = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
      double incoming = 0.0;
      for (std::size_t j : graph.neighbor_lists()[i]) incoming += message[j];
      next[i] = f[i] + theta * incoming;
    }
    f = std::move(next);
  }
  return f;
}

Var meanfield(Tape& tape, Var unary, const Matrix& edges, double theta, std::size_t iterations) {
  const Var e = tape.constant(edges);
  Var f = unary;
  // 2σ(x) − 1 = tanh(x / 2).
  for (std::size_t t = 0; t < iterations; ++t) {
    const Var message = tape.tanh(tape.scale(f, 0.5));
    f = tape.add(f, tape.scale(tape.matmul(e, message), theta));
  }
  return f;
}

}  // namespace labelgcn
