#include "wlgt/transformer.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "wlgt/error.hpp"
#include "wlgt/multiset_code.hpp"
#include "wlgt/spectral.hpp"
#include "wlgt/tokenizer.hpp"

namespace wlgt {

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores) {
  Eigen::MatrixXd out(scores.rows(), scores.cols());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double mx = scores.row(i).maxCoeff();
    Eigen::RowVectorXd e = (scores.row(i).array() - mx).exp().matrix();
    out.row(i) = e / e.sum();
  }
  return out;
}

Eigen::MatrixXd transformer_layer(const Eigen::MatrixXd& x, const LayerWeights& w,
                                  std::vector<Eigen::MatrixXd>* attention) {
  const auto d = x.cols();
  Eigen::Index dv_total = 0;
  for (const auto& h : w.heads) {
    if (h.wq.rows() != d || h.wk.rows() != d || h.wv.rows() != d || h.wq.cols() != h.wk.cols())
      throw Error(ErrorCode::kShapeMismatch, "head projections do not match the token width");
    dv_total += h.wv.cols();
  }
  Eigen::MatrixXd y = x;
  if (!w.heads.empty()) {
    if (w.wo.rows() != dv_total || w.wo.cols() != d)
      throw Error(ErrorCode::kShapeMismatch, "output projection has the wrong shape");
    Eigen::MatrixXd concat(x.rows(), dv_total);
    Eigen::Index off = 0;
    if (attention) attention->clear();
    for (const auto& h : w.heads) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(h.wk.cols()));
      const Eigen::MatrixXd a = softmax_rows(((x * h.wq) * (x * h.wk).transpose()) * scale);
      if (!a.allFinite()) throw Error(ErrorCode::kInvalidArgument, "attention produced non-finite values");
      concat.middleCols(off, h.wv.cols()) = a * (x * h.wv);
      off += h.wv.cols();
      if (attention) attention->push_back(a);
    }
    y += concat * w.wo;
  }
  return w.ffn ? w.ffn(y) : y;
}

Eigen::MatrixXd generalized_adjacency(const Graph& g, const TupleSpace& space, int j, int gamma) {
  const int k = space.k();
  if (j < 1 || j > k) throw Error(ErrorCode::kInvalidArgument, "j must lie in [1, k]");
  if (gamma != 1 && gamma != -1) throw Error(ErrorCode::kInvalidArgument, "gamma must be +1 or -1");
  const auto t = static_cast<Eigen::Index>(space.size());
  if (t > 20000) throw Error(ErrorCode::kMemoryLimit, "generalized adjacency matrix too large");
  const int n = space.num_nodes();
  std::size_t stride = 1;
  for (int o = k - 1; o > j - 1; --o) stride *= n;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    const auto tup = space.tuple(static_cast<std::size_t>(i));
    const int vj = tup[j - 1];
    const std::size_t base = space.code_of(tup) - static_cast<std::size_t>(vj) * stride;
    for (int w = 0; w < n; ++w) {
      if (g.adjacent(vj, w) != (gamma == 1)) continue;
      const auto l = space.index_of_code(base + static_cast<std::size_t>(w) * stride);
      if (l >= 0) b(i, l) = 1.0;
    }
  }
  return b;
}

Eigen::MatrixXd generalized_adjacency(const Graph& g, int k, int j, int gamma) {
  return generalized_adjacency(g, enumerate_tuples(g, k, k), j, gamma);
}

WeightedIndicator weighted_indicator(const Eigen::MatrixXd& b) {
  WeightedIndicator out{Eigen::MatrixXd::Zero(b.rows(), b.cols()), {}};
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    const double s = b.row(i).sum();
    if (s == 0.0) out.zero_rows.push_back(static_cast<int>(i));
    else out.matrix.row(i) = b.row(i) / s;
  }
  return out;
}

Relabeler& RelabelContext::layer(int t) {
  if (static_cast<int>(per_layer.size()) <= t) per_layer.resize(t + 1);
  return per_layer[t];
}

namespace {

struct SignedFactor {
  Eigen::MatrixXd p;        // U |mu|^{1/2}
  Eigen::VectorXd sign;     // sign(mu)
};

SignedFactor signed_adjacency_factor(const Graph& g) {
  const auto dec = eigh(adjacency_matrix(g), SpectralSource::kAdjacency);
  SignedFactor f;
  f.p = dec.eigenvectors * dec.eigenvalues.cwiseAbs().cwiseSqrt().asDiagonal();
  f.sign = dec.eigenvalues.unaryExpr([](double m) { return m < 0 ? -1.0 : 1.0; });
  return f;
}

SimLayout make_layout(int palette, int num_slots, int k, int n, bool node_blocks) {
  SimLayout l;
  l.palette = palette;
  l.color = 0;
  l.slots = palette;
  l.num_slots = num_slots;
  l.degree = l.slots + num_slots * palette;
  l.node_id = l.degree + num_slots;
  l.adjacency = l.node_id + (node_blocks ? k * n : 0);
  l.width = l.adjacency + k * n;
  return l;
}

int one_hot_index(const Eigen::MatrixXd& x, Eigen::Index r, const SimLayout& l) {
  Eigen::Index idx;
  const double mx = x.row(r).segment(l.color, l.palette).maxCoeff(&idx);
  if (mx < 0.5) throw Error(ErrorCode::kShapeMismatch, "token has no color");
  return static_cast<int>(idx);
}

// Designed FFN: de-normalize each slot by its factor, combine the slots of
// each component, round, relabel, and write the new one-hot color.
Ffn make_ffn(const SimLayout& l, int k, bool odd_even, std::shared_ptr<RelabelContext> ctx, int layer) {
  return [l, k, odd_even, ctx, layer](const Eigen::MatrixXd& y) {
    Eigen::MatrixXd out = y;
    const int per_component = l.num_slots / k;
    auto& table = ctx->layer(layer);
    std::vector<std::int64_t> key;
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      const int own = one_hot_index(y, r, l);
      key.clear();
      if (odd_even) {
        // C + 2 * counts: the own color is the unique odd entry.
        for (int c = 0; c < l.palette; ++c) {
          const double count = y(r, l.degree) * y(r, l.slots + c);
          const double rounded = std::round(count);
          ctx->max_slack = std::max(ctx->max_slack, std::abs(count - rounded));
          key.push_back(static_cast<std::int64_t>(y(r, l.color + c) + 2.0 * rounded));
        }
      } else {
        key.push_back(own);
        for (int j = 0; j < k; ++j) {
          for (int c = 0; c < l.palette; ++c) {
            double v = 0.0;
            for (int q = 0; q < per_component; ++q) {
              const int h = j * per_component + q;
              v += y(r, l.degree + h) * y(r, l.slots + h * l.palette + c);
            }
            const double rounded = std::round(v);
            ctx->max_slack = std::max(ctx->max_slack, std::abs(v - rounded));
            key.push_back(static_cast<std::int64_t>(rounded));
          }
        }
      }
      if (ctx->max_slack >= ctx->slack_limit)
        throw Error(ErrorCode::kInvalidArgument, "recovered counts are not close to integers");
      const int id = table(key);
      if (id >= l.palette) throw Error(ErrorCode::kShapeMismatch, "palette overflow");
      out.row(r).segment(l.color, l.degree - l.color).setZero();
      out(r, l.color + id) = 1.0;
    }
    return out;
  };
}

}  // namespace

ConstructedWeights construct_1wl_weights(const Graph& g, int t_layers, double b,
                                         std::shared_ptr<RelabelContext> context, int palette) {
  const int n = g.num_nodes();
  if (palette < 0) palette = n;
  if (!context) context = std::make_shared<RelabelContext>();
  ConstructedWeights w;
  w.k = 1;
  w.s = 1;
  w.variant = Variant::kKwl;
  w.b = b;
  w.head_count = 1;
  w.alpha = {1.0};
  w.beta = {0.0};
  w.context = context;
  w.space = std::make_shared<const TupleSpace>(enumerate_tuples(g, 1, 1));
  w.layout = make_layout(palette, 1, 1, n, false);
  const auto& l = w.layout;

  const auto factor = signed_adjacency_factor(g);
  w.structure = Eigen::MatrixXd::Zero(n, l.width);
  for (int v = 0; v < n; ++v) {
    w.structure(v, l.degree) = g.degree(v);
    w.structure.row(v).segment(l.adjacency, n) = factor.p.row(v);
  }
  w.targets = {adjacency_matrix(g)};

  const double root = std::sqrt(static_cast<double>(n));
  Head head;
  head.wq = Eigen::MatrixXd::Zero(l.width, n);
  head.wk = Eigen::MatrixXd::Zero(l.width, n);
  head.wq.block(l.adjacency, 0, n, n) = (b * root) * factor.sign.asDiagonal().toDenseMatrix();
  head.wk.block(l.adjacency, 0, n, n) = Eigen::MatrixXd::Identity(n, n);
  head.wv = Eigen::MatrixXd::Zero(l.width, palette);
  head.wv.block(l.color, 0, palette, palette) = Eigen::MatrixXd::Identity(palette, palette);
  Eigen::MatrixXd wo = Eigen::MatrixXd::Zero(palette, l.width);
  wo.block(0, l.slots, palette, palette) = Eigen::MatrixXd::Identity(palette, palette);

  for (int t = 0; t < t_layers; ++t)
    w.layers.push_back(LayerWeights{{head}, wo, make_ffn(l, 1, true, context, t)});
  return w;
}

ConstructedWeights construct_kgt_weights(const Graph& g, int k, int s, Variant variant, int t_layers,
                                         double b, std::shared_ptr<RelabelContext> context, int palette) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  check_variant_space(variant, k, s);
  const int n = g.num_nodes();
  if (!context) context = std::make_shared<RelabelContext>();
  ConstructedWeights w;
  w.k = k;
  w.s = s;
  w.variant = variant;
  w.b = b;
  w.b_match = 2.0 * n + 2.0;
  w.head_count = 2 * k;
  w.context = context;
  w.space = std::make_shared<const TupleSpace>(enumerate_tuples(g, k, s));
  const auto& space = *w.space;
  const auto t = static_cast<int>(space.size());
  if (palette < 0) palette = t;
  w.layout = make_layout(palette, 2 * k, k, n, true);
  const auto& l = w.layout;

  for (int j = 0; j < k; ++j) {
    switch (variant) {
      case Variant::kKwl:
        w.alpha.push_back(1.0);
        w.beta.push_back(1.0);
        break;
      case Variant::kDeltaKwl:
        w.alpha.push_back(1.0);
        w.beta.push_back(n + 1.0);  // c+ <= n keeps c+ + (n+1) c- injective
        break;
      case Variant::kDeltaKlwl:
      case Variant::kKsLwl:
        w.alpha.push_back(1.0);
        w.beta.push_back(0.0);
        break;
    }
  }

  // k = 1 under kwl aggregates over neighbors only.
  if (k == 1 && variant == Variant::kKwl) w.beta[0] = 0.0;

  const auto factor = signed_adjacency_factor(g);
  const Eigen::MatrixXd node_id = eigh(laplacian(g, false), SpectralSource::kLaplacian).eigenvectors;

  for (int j = 0; j < k; ++j)
    for (int gamma : {1, -1}) w.targets.push_back(generalized_adjacency(g, space, j + 1, gamma));

  w.structure = Eigen::MatrixXd::Zero(t, l.width);
  for (int i = 0; i < t; ++i) {
    const auto tup = space.tuple(i);
    for (int h = 0; h < 2 * k; ++h) w.structure(i, l.degree + h) = w.targets[h].row(i).sum();
    for (int o = 0; o < k; ++o) {
      w.structure.row(i).segment(l.node_id + o * n, n) = node_id.row(tup[o]);
      w.structure.row(i).segment(l.adjacency + o * n, n) = factor.p.row(tup[o]);
    }
  }

  const int dk = k * n;
  const double root = std::sqrt(static_cast<double>(dk));
  const Eigen::MatrixXd id_n = Eigen::MatrixXd::Identity(n, n);
  std::vector<Head> heads;
  Eigen::MatrixXd wo = Eigen::MatrixXd::Zero(2 * k * palette, l.width);
  for (int j = 0; j < k; ++j) {
    for (int gi = 0; gi < 2; ++gi) {
      const int gamma = gi == 0 ? 1 : -1;
      const int h = 2 * j + gi;
      Head head;
      head.wq = Eigen::MatrixXd::Zero(l.width, dk);
      head.wk = Eigen::MatrixXd::Zero(l.width, dk);
      for (int o = 0; o < k; ++o) {
        if (o == j) {
          head.wq.block(l.adjacency + o * n, o * n, n, n) =
              (gamma * b * root) * factor.sign.asDiagonal().toDenseMatrix();
          head.wk.block(l.adjacency + o * n, o * n, n, n) = id_n;
        } else {
          head.wq.block(l.node_id + o * n, o * n, n, n) = (b * w.b_match * root) * id_n;
          head.wk.block(l.node_id + o * n, o * n, n, n) = id_n;
        }
      }
      head.wv = Eigen::MatrixXd::Zero(l.width, palette);
      head.wv.block(l.color, 0, palette, palette) = Eigen::MatrixXd::Identity(palette, palette);
      const double scale = gamma == 1 ? w.alpha[j] : w.beta[j];
      wo.block(h * palette, l.slots + h * palette, palette, palette) =
          scale * Eigen::MatrixXd::Identity(palette, palette);
      heads.push_back(std::move(head));
    }
  }
  for (int layer = 0; layer < t_layers; ++layer)
    w.layers.push_back(LayerWeights{heads, wo, make_ffn(l, k, false, context, layer)});
  return w;
}

Eigen::MatrixXd initial_sim_tokens(const ConstructedWeights& w, const std::vector<int>& colors) {
  Eigen::MatrixXd x = w.structure;
  if (static_cast<Eigen::Index>(colors.size()) != x.rows())
    throw Error(ErrorCode::kShapeMismatch, "one initial color per token is required");
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    if (colors[r] >= w.layout.palette) throw Error(ErrorCode::kShapeMismatch, "palette overflow");
    x(r, w.layout.color + colors[r]) = 1.0;
  }
  return x;
}

std::vector<int> read_colors(const ConstructedWeights& w, const Eigen::MatrixXd& x) {
  std::vector<int> out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = one_hot_index(x, r, w.layout);
  return out;
}

std::vector<std::vector<int>> initial_token_colors(const std::vector<const Graph*>& graphs, int k, int s,
                                                   std::uint64_t seed) {
  TokenizerConfig cfg;
  cfg.k = k;
  cfg.s = s;
  cfg.d = 16;
  cfg.seed = seed;
  cfg.zero_pe = true;
  cfg.degree_embed = DegreeEmbed::kZero;
  std::vector<Eigen::MatrixXd> mats;
  Eigen::Index total = 0;
  for (const Graph* g : graphs) {
    mats.push_back(k == 1 ? node_tokens(*g, cfg).rows : tuple_tokens(*g, cfg).rows);
    total += mats.back().rows();
  }
  Eigen::MatrixXd stacked(total, cfg.d);
  Eigen::Index off = 0;
  for (const auto& m : mats) {
    stacked.middleRows(off, m.rows()) = m;
    off += m.rows();
  }
  const auto ids = row_partition(stacked);
  std::vector<std::vector<int>> out;
  off = 0;
  for (const auto& m : mats) {
    out.emplace_back(ids.begin() + off, ids.begin() + off + m.rows());
    off += m.rows();
  }
  return out;
}

Coloring gnn_reference_step(const Graph& g, const Coloring& c, Variant variant, Relabeler& table) {
  const auto& space = *c.space;
  check_variant_space(variant, space.k(), space.s());
  const int k = space.k();
  const int n = g.num_nodes();
  const int m = n + 1;
  const int npos = static_cast<int>(space.size());

  std::vector<std::size_t> strides(k);
  std::size_t stride = 1;
  for (int j = k - 1; j >= 0; --j) {
    strides[j] = stride;
    stride *= n;
  }

  Coloring out;
  out.space = c.space;
  out.iteration = c.iteration + 1;
  out.colors.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto tup = space.tuple(i);
    const std::size_t code = space.code_of(tup);
    DigitVector f = code_of(c.colors[i] + 1, m);
    for (int j = 0; j < k; ++j) {
      const int vj = tup[j];
      const std::size_t base = code - static_cast<std::size_t>(vj) * strides[j];
      for (int w = 0; w < n; ++w) {
        const bool adj = g.adjacent(vj, w);
        int block = -1;
        switch (variant) {
          case Variant::kKwl:
            if (k == 1) block = adj ? 1 : -1;
            else block = j + 1;
            break;
          case Variant::kDeltaKwl: block = adj ? 2 * j + 1 : 2 * j + 2; break;
          case Variant::kDeltaKlwl:
          case Variant::kKsLwl: block = adj ? j + 1 : -1; break;
        }
        if (block < 0) continue;
        const auto l = space.index_of_code(base + static_cast<std::size_t>(w) * strides[j]);
        if (l < 0) continue;
        f = add(f, code_of(block * npos + c.colors[l] + 1, m));
      }
    }
    out.colors[i] = table(std::vector<std::int64_t>(f.digits.begin(), f.digits.end()));
  }
  return out;
}

Coloring gnn_reference_step(const Graph& g, const Coloring& c, Variant variant) {
  Relabeler table;
  return gnn_reference_step(g, c, variant, table);
}

bool SimReport::all_equal() const {
  return std::all_of(partition_equal.begin(), partition_equal.end(), [](bool b) { return b; });
}

namespace {

ConstructedWeights build_weights(const Graph& g, const SimOptions& opts, int layers,
                                 std::shared_ptr<RelabelContext> ctx, int palette) {
  if (opts.k == 1 && opts.variant == Variant::kKwl)
    return construct_1wl_weights(g, layers, opts.b, std::move(ctx), palette);
  return construct_kgt_weights(g, opts.k, opts.s, opts.variant, layers, opts.b, std::move(ctx), palette);
}

double head_error(const Eigen::MatrixXd& attn, const Eigen::MatrixXd& target, int* zero_rows) {
  const auto wi = weighted_indicator(target);
  if (zero_rows) *zero_rows += static_cast<int>(wi.zero_rows.size());
  Eigen::MatrixXd diff = attn - wi.matrix;
  for (int r : wi.zero_rows) diff.row(r).setZero();
  return diff.norm();
}

int resolve_layers(const Graph& g, const SimOptions& opts) {
  if (opts.layers >= 0) return opts.layers;
  const auto run = refine_to_stable(g, opts.k, opts.s, opts.variant);
  return run.back().iteration + 1;
}

}  // namespace

SimReport simulate_and_compare(const Graph& g, const SimOptions& opts) {
  check_variant_space(opts.variant, opts.k, opts.s);
  const int layers = resolve_layers(g, opts);
  auto ctx = std::make_shared<RelabelContext>();
  const auto w = build_weights(g, opts, layers, ctx, -1);

  SimReport r;
  r.k = opts.k;
  r.s = opts.s;
  r.variant = opts.variant;
  r.layers = layers;

  Eigen::MatrixXd x = initial_sim_tokens(w, initial_token_colors({&g}, opts.k, opts.s, opts.seed)[0]);
  Coloring wl = initial_coloring(g, w.space);
  Coloring gnn = wl;

  auto record = [&](const Eigen::MatrixXd& tokens) {
    const auto tp = canonical_partition(read_colors(w, tokens));
    const auto wp = canonical_partition(wl.colors);
    const auto gp = canonical_partition(gnn.colors);
    r.partition_equal.push_back(tp == wp && gp == wp);
    r.transformer_partitions.push_back(tp);
    r.wl_partitions.push_back(wp);
    r.gnn_partitions.push_back(gp);
  };
  record(x);
  for (int t = 0; t < layers; ++t) {
    std::vector<Eigen::MatrixXd> attn;
    x = transformer_layer(x, w.layers[t], &attn);
    double err = 0.0;
    for (std::size_t h = 0; h < attn.size(); ++h) err = std::max(err, head_error(attn[h], w.targets[h], &r.zero_rows));
    r.attention_error_per_layer.push_back(err);
    r.max_attention_error = std::max(r.max_attention_error, err);
    wl = refine_step(g, wl, opts.variant);
    gnn = gnn_reference_step(g, gnn, opts.variant);
    record(x);
  }
  r.rounding_slack_max = ctx->max_slack;
  return r;
}

std::string sim_report_json(const SimReport& r) {
  nlohmann::json doc;
  doc["k"] = r.k;
  doc["s"] = r.s;
  doc["variant"] = variant_name(r.variant);
  doc["layers"] = r.layers;
  doc["partition_equal_per_layer"] = r.partition_equal;
  doc["max_attention_error"] = r.max_attention_error;
  doc["rounding_slack_max"] = r.rounding_slack_max;
  return doc.dump();
}

namespace {

std::vector<int> histogram_of(const std::vector<int>& colors, int palette) {
  std::vector<int> h(palette, 0);
  for (int c : colors) ++h[c];
  return h;
}

}  // namespace

PairSimResult simulate_pair(const Graph& g, const Graph& h, const SimOptions& opts) {
  check_variant_space(opts.variant, opts.k, opts.s);
  const int layers = opts.layers >= 0 ? opts.layers : std::max(resolve_layers(g, opts), resolve_layers(h, opts));
  auto ctx = std::make_shared<RelabelContext>();
  const int palette = static_cast<int>(enumerate_tuples(g, opts.k, opts.s).size() +
                                       enumerate_tuples(h, opts.k, opts.s).size());
  const auto wg = build_weights(g, opts, layers, ctx, palette);
  const auto wh = build_weights(h, opts, layers, ctx, palette);
  const auto init = initial_token_colors({&g, &h}, opts.k, opts.s, opts.seed);
  Eigen::MatrixXd xg = initial_sim_tokens(wg, init[0]);
  Eigen::MatrixXd xh = initial_sim_tokens(wh, init[1]);

  PairSimResult r;
  for (int t = 0;; ++t) {
    const auto cg = read_colors(wg, xg);
    const auto ch = read_colors(wh, xh);
    r.partitions_g.push_back(canonical_partition(cg));
    r.partitions_h.push_back(canonical_partition(ch));
    if (!r.distinguished && histogram_of(cg, palette) != histogram_of(ch, palette)) {
      r.distinguished = true;
      r.at_layer = t;
    }
    if (t == layers) break;
    xg = transformer_layer(xg, wg.layers[t]);
    xh = transformer_layer(xh, wh.layers[t]);
  }
  return r;
}

}  // namespace wlgt
