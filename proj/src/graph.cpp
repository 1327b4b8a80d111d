#include "wlgt/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wlgt/error.hpp"

namespace wlgt {

using nlohmann::json;

Graph make_graph(int num_nodes, std::vector<Edge> edges, std::vector<int> labels,
                 std::optional<std::vector<int>> edge_labels) {
  if (num_nodes <= 0) throw Error(ErrorCode::kSchema, "num_nodes must be positive");
  if (labels.empty()) labels.assign(num_nodes, 0);
  if (static_cast<int>(labels.size()) != num_nodes)
    throw Error(ErrorCode::kSchema, "labels must have length num_nodes");
  for (int l : labels)
    if (l < 0) throw Error(ErrorCode::kSchema, "labels must be natural numbers");
  if (edge_labels) {
    if (edge_labels->size() != edges.size())
      throw Error(ErrorCode::kSchema, "edge_labels must be parallel to edges");
    for (int l : *edge_labels)
      if (l < 0) throw Error(ErrorCode::kSchema, "edge labels must be natural numbers");
  }

  Graph g;
  g.n_ = num_nodes;
  g.labels_ = std::move(labels);
  g.has_edge_labels_ = edge_labels.has_value();
  const auto nn = static_cast<std::size_t>(num_nodes) * num_nodes;
  g.adj_.assign(nn, 0);
  g.edge_label_matrix_.assign(nn, -1);
  g.neighbors_.assign(num_nodes, {});

  std::vector<std::pair<Edge, int>> tagged;
  tagged.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes)
      throw Error(ErrorCode::kIndexOutOfRange,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v) throw Error(ErrorCode::kSelfLoop, "self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    const auto idx = static_cast<std::size_t>(u) * num_nodes + v;
    if (g.adj_[idx])
      throw Error(ErrorCode::kDuplicateEdge,
                  "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    const int el = edge_labels ? (*edge_labels)[e] : 0;
    g.adj_[idx] = 1;
    g.adj_[static_cast<std::size_t>(v) * num_nodes + u] = 1;
    g.edge_label_matrix_[idx] = el;
    g.edge_label_matrix_[static_cast<std::size_t>(v) * num_nodes + u] = el;
    tagged.push_back({{u, v}, el});
  }
  std::sort(tagged.begin(), tagged.end());
  for (const auto& [e, el] : tagged) {
    g.edges_.push_back(e);
    g.edge_labels_.push_back(el);
    g.neighbors_[e.first].push_back(e.second);
    g.neighbors_[e.second].push_back(e.first);
  }
  for (int v = 0; v < num_nodes; ++v) {
    if (g.neighbors_[v].empty())
      throw Error(ErrorCode::kIsolatedNode, "node " + std::to_string(v) + " is isolated");
    std::sort(g.neighbors_[v].begin(), g.neighbors_[v].end());
  }
  return g;
}

namespace {

int json_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw Error(ErrorCode::kSchema, std::string(what) + " must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) throw Error(ErrorCode::kSchema, std::string(what) + " out of range");
  return static_cast<int>(v);
}

std::vector<int> json_int_array(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::kSchema, std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(json_int(x, what));
  return out;
}

}  // namespace

Graph load_graph(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidJson, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kSchema, "graph document must be an object");
  if (!doc.contains("num_nodes")) throw Error(ErrorCode::kSchema, "missing num_nodes");
  if (!doc.contains("edges")) throw Error(ErrorCode::kSchema, "missing edges");
  const int n = json_int(doc["num_nodes"], "num_nodes");
  const auto& je = doc["edges"];
  if (!je.is_array()) throw Error(ErrorCode::kSchema, "edges must be an array");
  std::vector<Edge> edges;
  for (const auto& e : je) {
    if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kSchema, "each edge must be a pair");
    edges.emplace_back(json_int(e[0], "edge endpoint"), json_int(e[1], "edge endpoint"));
  }
  std::vector<int> labels;
  if (doc.contains("labels")) labels = json_int_array(doc["labels"], "labels");
  std::optional<std::vector<int>> edge_labels;
  if (doc.contains("edge_labels")) edge_labels = json_int_array(doc["edge_labels"], "edge_labels");
  if (doc.contains("labels") && static_cast<int>(labels.size()) != n)
    throw Error(ErrorCode::kSchema, "labels must have length num_nodes");
  return make_graph(n, std::move(edges), std::move(labels), std::move(edge_labels));
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_graph(ss.str());
}

std::string graph_to_json(const Graph& g) {
  json doc;
  doc["num_nodes"] = g.num_nodes();
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  doc["edges"] = edges;
  doc["labels"] = g.labels();
  if (g.has_edge_labels()) doc["edge_labels"] = g.edge_labels();
  return doc.dump();
}

AtomicTypeMatrix atomic_type(const Graph& g, std::span<const int> tup) {
  const int k = static_cast<int>(tup.size());
  for (int v : tup)
    if (v < 0 || v >= g.num_nodes())
      throw Error(ErrorCode::kIndexOutOfRange, "tuple entry " + std::to_string(v) + " out of range");
  AtomicTypeMatrix m{k, std::vector<int>(static_cast<std::size_t>(k) * k)};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      int e = 3;
      if (tup[i] == tup[j]) e = 2;
      else if (g.adjacent(tup[i], tup[j])) e = 1;
      m.entries[static_cast<std::size_t>(i) * k + j] = e;
    }
  return m;
}

Graph apply_permutation(const Graph& g, std::span<const int> perm) {
  const int n = g.num_nodes();
  if (static_cast<int>(perm.size()) != n)
    throw Error(ErrorCode::kNotBijection, "permutation length differs from num_nodes");
  std::vector<char> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw Error(ErrorCode::kNotBijection, "permutation is not a bijection");
    seen[p] = 1;
  }
  std::vector<int> labels(n);
  for (int v = 0; v < n; ++v) labels[perm[v]] = g.label(v);
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  std::optional<std::vector<int>> el;
  if (g.has_edge_labels()) el = g.edge_labels();
  return make_graph(n, std::move(edges), std::move(labels), std::move(el));
}

namespace {

struct IsoSearch {
  const Graph& g;
  const Graph& h;
  std::vector<int> map;   // g node -> h node
  std::vector<char> used;

  bool extend(int v) {
    const int n = g.num_nodes();
    if (v == n) return true;
    for (int w = 0; w < n; ++w) {
      if (used[w] || g.label(v) != h.label(w) || g.degree(v) != h.degree(w)) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) {
        if (g.adjacent(u, v) != h.adjacent(map[u], w)) ok = false;
        else if (g.adjacent(u, v) && g.edge_label(u, v) != h.edge_label(map[u], w)) ok = false;
      }
      if (!ok) continue;
      map[v] = w;
      used[w] = 1;
      if (extend(v + 1)) return true;
      used[w] = 0;
    }
    return false;
  }
};

}  // namespace

bool are_isomorphic_bruteforce(const Graph& g, const Graph& h) {
  if (g.num_nodes() > kBruteforceMaxNodes || h.num_nodes() > kBruteforceMaxNodes)
    throw Error(ErrorCode::kSizeLimit, "brute-force isomorphism is limited to 9 nodes");
  if (g.num_nodes() != h.num_nodes() || g.num_edges() != h.num_edges()) return false;
  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(g.labels()) != sorted(h.labels())) return false;
  IsoSearch s{g, h, std::vector<int>(g.num_nodes(), -1), std::vector<char>(g.num_nodes(), 0)};
  return s.extend(0);
}

Graph cycle_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return make_graph(n, e);
}

Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e);
}

Graph complete_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  const int na = a.num_nodes();
  std::vector<Edge> e = a.edges();
  for (const auto& [u, v] : b.edges()) e.emplace_back(u + na, v + na);
  std::vector<int> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  std::optional<std::vector<int>> el;
  if (a.has_edge_labels() || b.has_edge_labels()) {
    el = a.edge_labels();
    el->insert(el->end(), b.edge_labels().begin(), b.edge_labels().end());
  }
  return make_graph(na + b.num_nodes(), std::move(e), std::move(labels), std::move(el));
}

namespace {

// Cayley graph on Z4 x Z4 with connection set +-(1,0), +-(0,1), +-(1,1); node 4a+b.
constexpr int kShrikhandeEdges[48][2] = {
    {0, 1},   {0, 3},   {0, 4},   {0, 5},   {0, 12},  {0, 15},  {1, 2},   {1, 5},
    {1, 6},   {1, 12},  {1, 13},  {2, 3},   {2, 6},   {2, 7},   {2, 13},  {2, 14},
    {3, 4},   {3, 7},   {3, 14},  {3, 15},  {4, 5},   {4, 7},   {4, 8},   {4, 9},
    {5, 6},   {5, 9},   {5, 10},  {6, 7},   {6, 10},  {6, 11},  {7, 8},   {7, 11},
    {8, 9},   {8, 11},  {8, 12},  {8, 13},  {9, 10},  {9, 13},  {9, 14},  {10, 11},
    {10, 14}, {10, 15}, {11, 12}, {11, 15}, {12, 13}, {12, 15}, {13, 14}, {14, 15}};

// K4 x K4 (rook moves on a 4x4 board); node 4a+b.
constexpr int kRookEdges[48][2] = {
    {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 8},   {0, 12},  {1, 2},   {1, 3},
    {1, 5},   {1, 9},   {1, 13},  {2, 3},   {2, 6},   {2, 10},  {2, 14},  {3, 7},
    {3, 11},  {3, 15},  {4, 5},   {4, 6},   {4, 7},   {4, 8},   {4, 12},  {5, 6},
    {5, 7},   {5, 9},   {5, 13},  {6, 7},   {6, 10},  {6, 14},  {7, 11},  {7, 15},
    {8, 9},   {8, 10},  {8, 11},  {8, 12},  {9, 10},  {9, 11},  {9, 13},  {10, 11},
    {10, 14}, {11, 15}, {12, 13}, {12, 14}, {12, 15}, {13, 14}, {13, 15}, {14, 15}};

Graph from_table(const int (&table)[48][2]) {
  std::vector<Edge> e;
  for (const auto& row : table) e.emplace_back(row[0], row[1]);
  return make_graph(16, e);
}

Graph complete_bipartite_33() {
  std::vector<Edge> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) e.emplace_back(i, j);
  return make_graph(6, e);
}

Graph triangular_prism() {
  return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}, {2, 5}});
}

}  // namespace

const std::vector<std::string>& builtin_pair_names() {
  static const std::vector<std::string> names = {"c6_vs_2c3", "k33_vs_prism", "shrikhande_vs_rook"};
  return names;
}

std::pair<Graph, Graph> builtin_pair(std::string_view name) {
  if (name == "c6_vs_2c3") return {cycle_graph(6), disjoint_union(cycle_graph(3), cycle_graph(3))};
  if (name == "k33_vs_prism") return {complete_bipartite_33(), triangular_prism()};
  if (name == "shrikhande_vs_rook") return {from_table(kShrikhandeEdges), from_table(kRookEdges)};
  throw Error(ErrorCode::kUnknownPair, "unknown pair '" + std::string(name) + "'");
}

Graph random_graph(Rng& rng, int n, double p) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "random graphs need at least 2 nodes");
  for (;;) {
    std::vector<Edge> e;
    std::vector<int> deg(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(p)) {
          e.emplace_back(i, j);
          ++deg[i];
          ++deg[j];
        }
    if (std::all_of(deg.begin(), deg.end(), [](int d) { return d > 0; })) return make_graph(n, e);
  }
}

Graph random_connected_graph(Rng& rng, int n, double p) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "random graphs need at least 2 nodes");
  std::vector<int> order = rng.permutation(n);
  std::set<Edge> e;
  for (int i = 1; i < n; ++i) {
    const int parent = order[rng.uniform_int(0, i - 1)];
    const int child = order[i];
    e.insert({std::min(parent, child), std::max(parent, child)});
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!e.count({i, j}) && rng.bernoulli(p)) e.insert({i, j});
  return make_graph(n, {e.begin(), e.end()});
}

int count_components(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<int> comp(n, -1);
  int count = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = count;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(v))
        if (comp[w] < 0) {
          comp[w] = count;
          stack.push_back(w);
        }
    }
    ++count;
  }
  return count;
}

}  // namespace wlgt
