#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wlgt/graph.hpp"
#include "wlgt/wl.hpp"

namespace wlgt {

struct Head {
  Eigen::MatrixXd wq, wk, wv;
};

using Ffn = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

struct LayerWeights {
  std::vector<Head> heads;
  Eigen::MatrixXd wo;
  Ffn ffn;  // identity when empty
};

/// Row-wise softmax with row-max subtraction.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores);

/// X' = FFN(X + [h_1 ... h_M] W^O), h_i = softmax(X Wq (X Wk)^T / sqrt(d_k)) X Wv.
/// When `attention` is given it receives each head's attention matrix.
Eigen::MatrixXd transformer_layer(const Eigen::MatrixXd& x, const LayerWeights& w,
                                  std::vector<Eigen::MatrixXd>* attention = nullptr);

/// A^(k,j,gamma) over the tuples of `space`; j is 1-based.
Eigen::MatrixXd generalized_adjacency(const Graph& g, const TupleSpace& space, int j, int gamma);
Eigen::MatrixXd generalized_adjacency(const Graph& g, int k, int j, int gamma);

struct WeightedIndicator {
  Eigen::MatrixXd matrix;
  std::vector<int> zero_rows;
};

WeightedIndicator weighted_indicator(const Eigen::MatrixXd& b);

/// Relabel tables and rounding diagnostics shared by the designed FFNs of one
/// simulation (or of both graphs of a pair).
struct RelabelContext {
  std::vector<Relabeler> per_layer;
  double max_slack = 0.0;
  double slack_limit = 0.4;

  Relabeler& layer(int t);
};

/// Column offsets of the simulation token layout.
struct SimLayout {
  int palette = 0;    // width of the one-hot color block
  int color = 0;      // [color, color + palette)
  int slots = 0;      // per-head count slots, palette wide each
  int num_slots = 0;
  int degree = 0;     // de-normalization factors, one per slot
  int node_id = 0;    // k blocks of n: node-identifying rows
  int adjacency = 0;  // k blocks of n: signed adjacency factor rows
  int width = 0;
};

struct ConstructedWeights {
  int k = 1;
  int s = 1;
  Variant variant = Variant::kKwl;
  double b = 60.0;
  double b_match = 0.0;
  int head_count = 0;
  std::vector<double> alpha, beta;
  SimLayout layout;
  std::shared_ptr<const TupleSpace> space;
  std::vector<LayerWeights> layers;
  std::shared_ptr<RelabelContext> context;
  Eigen::MatrixXd structure;  // rows: degree, node-id and adjacency blocks of each token
  /// Head h (in heads order) targets weighted_indicator(targets[h]).
  std::vector<Eigen::MatrixXd> targets;
};

/// Single-head construction simulating 1-WL. palette < 0 means one color
/// per node.
ConstructedWeights construct_1wl_weights(const Graph& g, int t_layers, double b,
                                         std::shared_ptr<RelabelContext> context = nullptr,
                                         int palette = -1);

/// 2k-head construction for k-WL, delta-k-WL, delta-k-LWL and, on a
/// restricted space, (k,s)-LWL.
ConstructedWeights construct_kgt_weights(const Graph& g, int k, int s, Variant variant, int t_layers,
                                         double b, std::shared_ptr<RelabelContext> context = nullptr,
                                         int palette = -1);

/// Token matrix in the simulation layout with the given initial colors.
Eigen::MatrixXd initial_sim_tokens(const ConstructedWeights& w, const std::vector<int>& colors);

/// Color ids read back from the one-hot color block.
std::vector<int> read_colors(const ConstructedWeights& w, const Eigen::MatrixXd& x);

/// Initial colors obtained as the partition of tokenizer rows (positional
/// encoding and degree embedding switched off), computed jointly so that ids
/// are comparable across graphs.
std::vector<std::vector<int>> initial_token_colors(const std::vector<const Graph*>& graphs, int k, int s,
                                                   std::uint64_t seed);

/// One step of the m-ary digit GNN; returns a canonical coloring.
Coloring gnn_reference_step(const Graph& g, const Coloring& c, Variant variant);
Coloring gnn_reference_step(const Graph& g, const Coloring& c, Variant variant, Relabeler& table);

struct SimOptions {
  int k = 1;
  int s = 1;
  Variant variant = Variant::kKwl;
  int layers = -1;  // -1: until the WL coloring is stable, plus one
  double b = 60.0;
  std::uint64_t seed = 0;
};

struct SimReport {
  int k = 1;
  int s = 1;
  Variant variant = Variant::kKwl;
  int layers = 0;
  /// Index t compares the partitions after t layers (t = 0 is the input).
  std::vector<bool> partition_equal;
  std::vector<std::vector<int>> transformer_partitions, wl_partitions, gnn_partitions;
  std::vector<double> attention_error_per_layer;
  double max_attention_error = 0.0;
  double rounding_slack_max = 0.0;
  int zero_rows = 0;

  bool all_equal() const;
};

SimReport simulate_and_compare(const Graph& g, const SimOptions& opts);

std::string sim_report_json(const SimReport& r);

struct PairSimResult {
  bool distinguished = false;
  std::optional<int> at_layer;
  /// Per layer, per graph canonical partitions of the transformer tokens.
  std::vector<std::vector<int>> partitions_g, partitions_h;
};

/// Runs the construction on both graphs with shared relabel tables and
/// compares color histograms per layer.
PairSimResult simulate_pair(const Graph& g, const Graph& h, const SimOptions& opts);

}  // namespace wlgt
