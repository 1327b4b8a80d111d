#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wlgt/random.hpp"

namespace wlgt {

using Edge = std::pair<int, int>;

/// Undirected node-labeled graph without self-loops or isolated nodes.
/// Immutable after construction; build through make_graph or load_graph.
class Graph {
 public:
  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Edges with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& labels() const { return labels_; }
  bool has_edge_labels() const { return has_edge_labels_; }

  /// Edge labels parallel to edges(); all zero when none were given.
  const std::vector<int>& edge_labels() const { return edge_labels_; }

  bool adjacent(int u, int v) const { return adj_[static_cast<std::size_t>(u) * n_ + v] != 0; }
  int degree(int v) const { return static_cast<int>(neighbors_[v].size()); }
  int label(int v) const { return labels_[v]; }

  /// Sorted neighbor list.
  const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }

  /// Label of edge {u,v}; -1 if not adjacent.
  int edge_label(int u, int v) const { return edge_label_matrix_[static_cast<std::size_t>(u) * n_ + v]; }

 private:
  friend Graph make_graph(int, std::vector<Edge>, std::vector<int>, std::optional<std::vector<int>>);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> labels_;
  bool has_edge_labels_ = false;
  std::vector<int> edge_labels_;
  std::vector<std::uint8_t> adj_;
  std::vector<int> edge_label_matrix_;
  std::vector<std::vector<int>> neighbors_;
};

/// Validates and builds a graph. Edges may be given in either orientation.
/// Throws Error with SELF_LOOP, DUPLICATE_EDGE, INDEX_OUT_OF_RANGE,
/// ISOLATED_NODE or SCHEMA.
Graph make_graph(int num_nodes, std::vector<Edge> edges, std::vector<int> labels = {},
                 std::optional<std::vector<int>> edge_labels = std::nullopt);

/// Parses the graph JSON document format.
Graph load_graph(std::string_view json_text);
Graph load_graph_file(const std::string& path);
std::string graph_to_json(const Graph& g);

struct AtomicTypeMatrix {
  int k = 0;
  std::vector<int> entries;  // row-major k*k over {1 edge, 2 equal, 3 other}

  int at(int i, int j) const { return entries[static_cast<std::size_t>(i) * k + j]; }
  bool operator==(const AtomicTypeMatrix&) const = default;
};

AtomicTypeMatrix atomic_type(const Graph& g, std::span<const int> tup);

/// perm[v] is the new index of node v.
Graph apply_permutation(const Graph& g, std::span<const int> perm);

/// Exhaustive isomorphism test with degree/label pruning. SIZE_LIMIT if n > 9.
bool are_isomorphic_bruteforce(const Graph& g, const Graph& h);

constexpr int kBruteforceMaxNodes = 9;

std::pair<Graph, Graph> builtin_pair(std::string_view name);
const std::vector<std::string>& builtin_pair_names();

Graph cycle_graph(int n);
Graph path_graph(int n);
Graph complete_graph(int n);
Graph disjoint_union(const Graph& a, const Graph& b);

/// G(n, p) resampled until no node is isolated. n >= 2.
Graph random_graph(Rng& rng, int n, double p);

/// Random spanning tree plus independent extra edges with probability p.
Graph random_connected_graph(Rng& rng, int n, double p);

/// Number of connected components.
int count_components(const Graph& g);

}  // namespace wlgt
