#include <gtest/gtest.h>

#include <algorithm>

#include "test_util.hpp"
#include "wlgt/error.hpp"
#include "wlgt/graph.hpp"

namespace wlgt {
namespace {

ErrorCode load_error(const std::string& doc) {
  try {
    load_graph(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error for " << doc;
  return ErrorCode::kInvalidArgument;
}

TEST(LoadGraph, MinimalGraph) {
  const Graph g = load_graph(R"({"num_nodes":2,"edges":[[0,1]]})");
  EXPECT_EQ(g.num_nodes(), 2);
  EXPECT_EQ(g.num_edges(), 1);
  EXPECT_EQ(g.labels(), (std::vector<int>{0, 0}));
  EXPECT_TRUE(g.adjacent(1, 0));
}

TEST(LoadGraph, ValidationErrorsAreDistinct) {
  EXPECT_EQ(load_error(R"({"num_nodes":3,"edges":[[0,1]]})"), ErrorCode::kIsolatedNode);
  EXPECT_EQ(load_error(R"({"num_nodes":2,"edges":[[0,0]]})"), ErrorCode::kSelfLoop);
  EXPECT_EQ(load_error(R"({"num_nodes":2,"edges":[[0,1],[1,0]]})"), ErrorCode::kDuplicateEdge);
  EXPECT_EQ(load_error(R"({"num_nodes":2,"edges":[[0,2]]})"), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(load_error(R"({"num_nodes":2,"edges":[[0,1]],"labels":[1]})"), ErrorCode::kSchema);
  EXPECT_EQ(load_error(R"({"num_nodes":2)"), ErrorCode::kInvalidJson);
  EXPECT_EQ(load_error(R"({"edges":[[0,1]]})"), ErrorCode::kSchema);
}

TEST(LoadGraph, LabelsAndEdgeLabelsRoundTrip) {
  const Graph g = load_graph(R"({"num_nodes":3,"edges":[[2,1],[0,1]],"labels":[4,0,4],"edge_labels":[7,3]})");
  EXPECT_EQ(g.edge_label(0, 1), 3);
  EXPECT_EQ(g.edge_label(2, 1), 7);
  EXPECT_EQ(g.edge_label(0, 2), -1);
  const Graph back = load_graph(graph_to_json(g));
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_EQ(back.labels(), g.labels());
  EXPECT_EQ(back.edge_labels(), g.edge_labels());
}

TEST(LoadGraph, MissingFile) {
  try {
    load_graph_file("/nonexistent/graph.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileNotFound);
  }
}

TEST(AtomicType, Examples) {
  const Graph k3 = complete_graph(3);
  const Graph p3 = path_graph(3);
  const std::vector<int> vv{1, 1}, adj{0, 1}, far{0, 2};
  EXPECT_EQ(atomic_type(k3, vv).entries, (std::vector<int>{2, 2, 2, 2}));
  EXPECT_EQ(atomic_type(k3, adj).entries, (std::vector<int>{2, 1, 1, 2}));
  EXPECT_EQ(atomic_type(p3, far).entries, (std::vector<int>{2, 3, 3, 2}));
  const std::vector<int> bad{0, 5};
  EXPECT_THROW(atomic_type(p3, bad), Error);
}

TEST(AtomicType, InvariantUnderPermutation) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = testing::sample_graph(rng, 2, 7);
    const auto perm = rng.permutation(g.num_nodes());
    const Graph h = apply_permutation(g, perm);
    for (int r = 0; r < 20; ++r) {
      std::vector<int> tup(3), ptup(3);
      for (int i = 0; i < 3; ++i) {
        tup[i] = static_cast<int>(rng.uniform_int(0, g.num_nodes() - 1));
        ptup[i] = perm[tup[i]];
      }
      const auto a = atomic_type(g, tup);
      EXPECT_EQ(a, atomic_type(h, ptup));
      for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(a.at(i, i), 2);
        for (int j = 0; j < 3; ++j) EXPECT_EQ(a.at(i, j), a.at(j, i));
      }
    }
  }
}

TEST(Permutation, IdentityAndAutomorphism) {
  const Graph p3 = path_graph(3);
  const std::vector<int> id{0, 1, 2}, swap{2, 1, 0};
  EXPECT_EQ(apply_permutation(p3, id).edges(), p3.edges());
  EXPECT_EQ(apply_permutation(p3, swap).edges(), p3.edges());
  const std::vector<int> bad{0, 0, 1};
  try {
    apply_permutation(p3, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotBijection);
  }
}

TEST(Permutation, LabelsFollowNodes) {
  const Graph g = make_graph(3, {{0, 1}, {1, 2}}, {5, 6, 7});
  const std::vector<int> perm{2, 0, 1};
  const Graph h = apply_permutation(g, perm);
  EXPECT_EQ(h.labels(), (std::vector<int>{6, 7, 5}));
  EXPECT_TRUE(h.adjacent(2, 0));
  EXPECT_TRUE(h.adjacent(0, 1));
}

TEST(Isomorphism, RandomPermutationsAreIsomorphic) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = testing::sample_graph(rng, 2, 8);
    const Graph h = apply_permutation(g, rng.permutation(g.num_nodes()));
    EXPECT_TRUE(are_isomorphic_bruteforce(g, h));
  }
}

TEST(Isomorphism, BuiltinSmallPairsAreNotIsomorphic) {
  for (const char* name : {"c6_vs_2c3", "k33_vs_prism"}) {
    const auto [g, h] = builtin_pair(name);
    EXPECT_FALSE(are_isomorphic_bruteforce(g, h)) << name;
  }
  EXPECT_TRUE(are_isomorphic_bruteforce(cycle_graph(6), apply_permutation(cycle_graph(6), std::vector<int>{3, 1, 4, 0, 5, 2})));
}

TEST(Isomorphism, LabelsMatter) {
  const Graph a = make_graph(2, {{0, 1}}, {0, 1});
  const Graph b = make_graph(2, {{0, 1}}, {0, 0});
  EXPECT_FALSE(are_isomorphic_bruteforce(a, b));
}

TEST(Isomorphism, SizeLimit) {
  try {
    are_isomorphic_bruteforce(cycle_graph(10), cycle_graph(10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSizeLimit);
  }
}

TEST(BuiltinPair, Shapes) {
  const auto [c6, two_c3] = builtin_pair("c6_vs_2c3");
  EXPECT_EQ(count_components(c6), 1);
  EXPECT_EQ(count_components(two_c3), 2);
  for (int v = 0; v < 6; ++v) {
    EXPECT_EQ(c6.degree(v), 2);
    EXPECT_EQ(two_c3.degree(v), 2);
  }
  const auto [k33, prism] = builtin_pair("k33_vs_prism");
  for (int v = 0; v < 6; ++v) {
    EXPECT_EQ(k33.degree(v), 3);
    EXPECT_EQ(prism.degree(v), 3);
  }
}

int triangles(const Graph& g) {
  int t = 0;
  for (const auto& [u, v] : g.edges())
    for (int w : g.neighbors(u))
      if (w > v && g.adjacent(v, w)) ++t;
  return t;
}

TEST(BuiltinPair, StronglyRegularParameters) {
  const auto [shr, rook] = builtin_pair("shrikhande_vs_rook");
  for (const Graph* g : {&shr, &rook}) {
    EXPECT_EQ(g->num_nodes(), 16);
    EXPECT_EQ(g->num_edges(), 48);
    EXPECT_EQ(triangles(*g), 32);
    for (int u = 0; u < 16; ++u) {
      EXPECT_EQ(g->degree(u), 6);
      for (int v = u + 1; v < 16; ++v) {
        int common = 0;
        for (int w : g->neighbors(u)) common += g->adjacent(v, w);
        EXPECT_EQ(common, 2);  // lambda = mu = 2
      }
    }
  }
  // In the rook's graph each neighborhood is two disjoint triangles; in the
  // Shrikhande graph it is a 6-cycle.
  auto neighborhood_components = [](const Graph& g, int v) {
    std::vector<Edge> e;
    const auto& nb = g.neighbors(v);
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (g.adjacent(nb[a], nb[b])) e.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return count_components(make_graph(static_cast<int>(nb.size()), e));
  };
  EXPECT_EQ(neighborhood_components(shr, 0), 1);
  EXPECT_EQ(neighborhood_components(rook, 0), 2);
}

TEST(BuiltinPair, Unknown) {
  try {
    builtin_pair("petersen");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownPair);
  }
}

TEST(Generators, NoIsolatedNodesAndConnectivity) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Graph g = testing::sample_graph(rng, 2, 8);
    for (int v = 0; v < g.num_nodes(); ++v) EXPECT_GE(g.degree(v), 1);
    EXPECT_EQ(count_components(testing::sample_connected(rng, 2, 10)), 1);
  }
}

}  // namespace
}  // namespace wlgt
