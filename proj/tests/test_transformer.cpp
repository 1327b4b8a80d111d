#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wlgt/error.hpp"
#include "wlgt/spectral.hpp"
#include "wlgt/transformer.hpp"

namespace wlgt {
namespace {

Eigen::MatrixXd degree_normalized_adjacency(const Graph& g) {
  Eigen::MatrixXd a = adjacency_matrix(g);
  for (int v = 0; v < g.num_nodes(); ++v) a.row(v) /= g.degree(v);
  return a;
}

TEST(TransformerLayer, ZeroWeightsAreResidual) {
  Rng rng(1);
  Eigen::MatrixXd x = seeded_gaussian(1, 2, 5, 4);
  LayerWeights w;
  w.heads.push_back({Eigen::MatrixXd::Zero(4, 3), Eigen::MatrixXd::Zero(4, 3), Eigen::MatrixXd::Zero(4, 4)});
  w.wo = Eigen::MatrixXd::Zero(4, 4);
  EXPECT_EQ(transformer_layer(x, w), x);
}

TEST(TransformerLayer, UniformAttention) {
  const Eigen::MatrixXd x = seeded_gaussian(3, 4, 5, 4);
  LayerWeights w;
  w.heads.push_back({Eigen::MatrixXd::Zero(4, 2), Eigen::MatrixXd::Zero(4, 2), Eigen::MatrixXd::Identity(4, 4)});
  w.wo = Eigen::MatrixXd::Identity(4, 4);
  std::vector<Eigen::MatrixXd> attn;
  const auto y = transformer_layer(x, w, &attn);
  const Eigen::MatrixXd expected = x + Eigen::MatrixXd::Ones(5, 5) * x / 5.0;
  EXPECT_LE((y - expected).cwiseAbs().maxCoeff(), 1e-14);
  ASSERT_EQ(attn.size(), 1u);
  EXPECT_LE((attn[0] - Eigen::MatrixXd::Constant(5, 5, 0.2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TransformerLayer, ShapeMismatch) {
  LayerWeights w;
  w.heads.push_back({Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(4, 2), Eigen::MatrixXd::Zero(4, 4)});
  w.wo = Eigen::MatrixXd::Zero(4, 4);
  EXPECT_THROW(transformer_layer(Eigen::MatrixXd::Zero(2, 4), w), Error);
}

TEST(Softmax, StableForLargeScores) {
  Eigen::MatrixXd s(1, 3);
  s << 1e4, 1e4 - 1, -1e4;
  const auto p = softmax_rows(s);
  EXPECT_TRUE(p.allFinite());
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
}

TEST(GeneralizedAdjacency, RowSums) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::sample_graph(rng, 2, 5);
    for (int k : {2, 3}) {
      const auto sp = enumerate_tuples(g, k, k);
      for (int j = 1; j <= k; ++j) {
        const auto plus = generalized_adjacency(g, sp, j, 1);
        const auto minus = generalized_adjacency(g, sp, j, -1);
        for (std::size_t i = 0; i < sp.size(); ++i) {
          const int vj = sp.tuple(i)[j - 1];
          EXPECT_EQ(plus.row(i).sum(), g.degree(vj));
          EXPECT_EQ(minus.row(i).sum(), g.num_nodes() - g.degree(vj));
        }
      }
    }
  }
}

TEST(GeneralizedAdjacency, OrderOneIsAdjacency) {
  const Graph g = builtin_pair("k33_vs_prism").second;
  EXPECT_EQ(generalized_adjacency(g, 1, 1, 1), adjacency_matrix(g));
  EXPECT_THROW(generalized_adjacency(g, 2, 3, 1), Error);
}

TEST(WeightedIndicator, Examples) {
  const auto id = weighted_indicator(Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(id.matrix, Eigen::MatrixXd::Identity(3, 3));
  Eigen::MatrixXd b(2, 3);
  b << 1, 1, 0, 0, 0, 0;
  const auto w = weighted_indicator(b);
  EXPECT_EQ(w.matrix(0, 0), 0.5);
  EXPECT_EQ(w.matrix(0, 1), 0.5);
  EXPECT_EQ(w.zero_rows, std::vector<int>{1});
  const Graph p3 = path_graph(3);
  EXPECT_EQ(weighted_indicator(adjacency_matrix(p3)).matrix, degree_normalized_adjacency(p3));
}

TEST(Construct1Wl, P3AttentionAndPartition) {
  const Graph p3 = path_graph(3);
  const auto w = construct_1wl_weights(p3, 1, 60.0);
  EXPECT_EQ(w.head_count, 1);
  ASSERT_EQ(w.layers.size(), 1u);
  EXPECT_EQ(w.layers[0].heads.size(), 1u);
  auto x = initial_sim_tokens(w, {0, 0, 0});
  std::vector<Eigen::MatrixXd> attn;
  x = transformer_layer(x, w.layers[0], &attn);
  EXPECT_LE((attn[0] - degree_normalized_adjacency(p3)).norm(), 1e-8);
  EXPECT_EQ(canonical_partition(read_colors(w, x)), (std::vector<int>{0, 1, 0}));
}

TEST(Construct1Wl, C6StaysOneClass) {
  const Graph c6 = cycle_graph(6);
  const auto w = construct_1wl_weights(c6, 4, 60.0);
  auto x = initial_sim_tokens(w, std::vector<int>(6, 0));
  for (const auto& layer : w.layers) {
    x = transformer_layer(x, layer);
    EXPECT_EQ(canonical_partition(read_colors(w, x)), std::vector<int>(6, 0));
  }
}

TEST(Construct1Wl, AttentionErrorOnRandomGraphs) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::sample_connected(rng, 2, 8);
    const auto w = construct_1wl_weights(g, 1, 60.0);
    std::vector<Eigen::MatrixXd> attn;
    transformer_layer(initial_sim_tokens(w, std::vector<int>(g.num_nodes(), 0)), w.layers[0], &attn);
    EXPECT_LT((attn[0] - degree_normalized_adjacency(g)).norm(), 1e-8);
  }
}

TEST(ConstructKgt, HeadAttentionMatchesIndicators) {
  for (const Graph& g : {complete_graph(3), path_graph(3)}) {
    const auto w = construct_kgt_weights(g, 2, 2, Variant::kKwl, 1, 60.0);
    EXPECT_EQ(w.head_count, 4);
    EXPECT_EQ(w.layers[0].heads.size(), 4u);
    const auto init = initial_coloring(g, w.space);
    std::vector<Eigen::MatrixXd> attn;
    transformer_layer(initial_sim_tokens(w, init.colors), w.layers[0], &attn);
    int h = 0;
    for (int j = 1; j <= 2; ++j)
      for (int gamma : {1, -1}) {
        const auto target = weighted_indicator(generalized_adjacency(g, *w.space, j, gamma));
        EXPECT_TRUE(target.zero_rows.empty());
        EXPECT_LT((attn[h++] - target.matrix).norm(), 1e-6);
      }
  }
}

TEST(ConstructKgt, VariantScalars) {
  const Graph g = path_graph(4);
  const auto kwl = construct_kgt_weights(g, 2, 2, Variant::kKwl, 0, 60.0);
  const auto delta = construct_kgt_weights(g, 2, 2, Variant::kDeltaKwl, 0, 60.0);
  const auto local = construct_kgt_weights(g, 2, 2, Variant::kDeltaKlwl, 0, 60.0);
  EXPECT_EQ(kwl.alpha, kwl.beta);
  EXPECT_NE(delta.alpha, delta.beta);
  EXPECT_GT(delta.beta[0], 0.0);
  EXPECT_EQ(local.beta, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(kwl.b_match, 10.0);
  EXPECT_THROW(construct_kgt_weights(g, 2, 1, Variant::kKwl, 1, 60.0), Error);
}

TEST(ConstructKgt, K3StablePartition) {
  const Graph k3 = complete_graph(3);
  SimOptions opts;
  opts.k = 2;
  opts.s = 2;
  const auto r = simulate_and_compare(k3, opts);
  EXPECT_TRUE(r.all_equal());
  const auto stable = refine_to_stable(k3, 2, 2, Variant::kKwl);
  EXPECT_EQ(r.transformer_partitions.back(), canonical_partition(stable.back().colors));
}

TEST(ConstructKgt, HierarchyOnC6Versus2C3) {
  const auto [c6, two_c3] = builtin_pair("c6_vs_2c3");
  SimOptions one;
  one.k = 1;
  one.layers = 4;
  EXPECT_FALSE(simulate_pair(c6, two_c3, one).distinguished);

  SimOptions delta;
  delta.k = 2;
  delta.s = 2;
  delta.variant = Variant::kDeltaKwl;
  delta.layers = 3;
  const auto rd = simulate_pair(c6, two_c3, delta);
  EXPECT_TRUE(rd.distinguished);
  EXPECT_EQ(rd.at_layer, 1);

  // The oblivious 2-WL construction agrees with the oblivious 2-WL engine,
  // which does not separate this pair.
  SimOptions plain = delta;
  plain.variant = Variant::kKwl;
  const auto rp = simulate_pair(c6, two_c3, plain);
  EXPECT_FALSE(rp.distinguished);
  for (std::size_t t = 0; t < rd.partitions_g.size(); ++t) {
    EXPECT_TRUE(refines(std::span<const int>(rd.partitions_g[t]), std::span<const int>(rp.partitions_g[t])));
    EXPECT_TRUE(refines(std::span<const int>(rd.partitions_h[t]), std::span<const int>(rp.partitions_h[t])));
  }
}

TEST(ConstructKgt, LocalTupleSpaceSimulation) {
  const auto [c6, two_c3] = builtin_pair("c6_vs_2c3");
  SimOptions opts;
  opts.k = 2;
  opts.s = 1;
  opts.variant = Variant::kKsLwl;
  const auto r = simulate_and_compare(c6, opts);
  EXPECT_TRUE(r.all_equal());
  EXPECT_LT(r.max_attention_error, 1e-6);
  opts.layers = 3;
  EXPECT_TRUE(simulate_pair(c6, two_c3, opts).distinguished);
}

TEST(GnnReference, MatchesEngine) {
  const Graph p3 = path_graph(3);
  auto sp1 = std::make_shared<const TupleSpace>(enumerate_tuples(p3, 1, 1));
  const auto c0 = initial_coloring(p3, sp1);
  EXPECT_EQ(gnn_reference_step(p3, c0, Variant::kKwl).colors, refine_step(p3, c0, Variant::kKwl).colors);

  const Graph k3 = complete_graph(3);
  auto sp2 = std::make_shared<const TupleSpace>(enumerate_tuples(k3, 2, 2));
  const auto k0 = initial_coloring(k3, sp2);
  EXPECT_EQ(canonical_partition(gnn_reference_step(k3, k0, Variant::kKwl).colors),
            canonical_partition(refine_step(k3, k0, Variant::kKwl).colors));

  const auto stable = refine_to_stable(p3, 1, 1, Variant::kKwl).back();
  EXPECT_EQ(canonical_partition(gnn_reference_step(p3, stable, Variant::kKwl).colors),
            canonical_partition(stable.colors));
}

TEST(SimulateAndCompare, InitialPartitionsAgree) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = testing::sample_graph(rng, 2, 6);
    SimOptions opts;
    opts.layers = 0;
    for (int k : {1, 2}) {
      opts.k = opts.s = k;
      const auto r = simulate_and_compare(g, opts);
      ASSERT_EQ(r.partition_equal.size(), 1u);
      EXPECT_TRUE(r.partition_equal[0]);
    }
  }
}

TEST(SimulateAndCompare, DeltaOnRandomGraphs) {
  Rng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = testing::sample_graph(rng, 2, 5);
    SimOptions opts;
    opts.k = opts.s = 2;
    opts.variant = Variant::kDeltaKwl;
    const auto r = simulate_and_compare(g, opts);
    EXPECT_TRUE(r.all_equal());
    EXPECT_LT(r.rounding_slack_max, 0.4);
    EXPECT_LT(r.max_attention_error, 1e-6);
  }
}

TEST(SimulateAndCompare, JsonShape) {
  SimOptions opts;
  opts.layers = 3;
  const auto r = simulate_and_compare(path_graph(3), opts);
  EXPECT_EQ(r.partition_equal, (std::vector<bool>{true, true, true, true}));
  const auto text = sim_report_json(r);
  for (const char* key : {"\"k\"", "\"s\"", "\"variant\"", "\"layers\"", "\"partition_equal_per_layer\"",
                          "\"max_attention_error\"", "\"rounding_slack_max\""})
    EXPECT_NE(text.find(key), std::string::npos) << key;
}

}  // namespace
}  // namespace wlgt
