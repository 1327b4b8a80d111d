#include "wlgt/tokenizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "wlgt/error.hpp"
#include "wlgt/random.hpp"
#include "wlgt/spectral.hpp"

namespace wlgt {

namespace {

enum Tag : std::uint64_t {
  kFeatureTable = 11,
  kDegreeTable = 12,
  kAtpTable = 13,
  kSelfVector = 14,
  kEdgeLabelTable = 15,
  kFfnW1 = 16,
  kFfnB1 = 17,
  kFfnW2 = 18,
  kFfnB2 = 19,
  kProjection = 20,
  kEdgeProjection = 21,
};

std::vector<std::int64_t> distinct(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

PeKind parse_pe_kind(std::string_view name) {
  if (name == "lpe") return PeKind::kLpe;
  if (name == "spe") return PeKind::kSpe;
  if (name == "raw" || name == "raw_targets") return PeKind::kRawTargets;
  throw Error(ErrorCode::kInvalidArgument, "unknown positional encoding '" + std::string(name) + "'");
}

Eigen::RowVectorXd embedding_row(std::uint64_t seed, std::uint64_t tag, std::int64_t index, int d) {
  Eigen::RowVectorXd row(d);
  const std::uint64_t base = hash_combine(hash_combine(seed, tag), static_cast<std::uint64_t>(index));
  for (int c = 0; c < d; ++c) row(c) = keyed_gaussian(hash_combine(base, c));
  return row;
}

std::vector<Eigen::RowVectorXd> injective_table(std::uint64_t seed, std::uint64_t tag,
                                                std::span<const std::int64_t> indices, int d) {
  for (std::uint64_t salt = 0;; ++salt) {
    std::vector<Eigen::RowVectorXd> rows;
    std::set<std::vector<double>> seen;
    bool collision = false;
    for (auto idx : indices) {
      rows.push_back(embedding_row(salt == 0 ? seed : hash_combine(seed, salt), tag, idx, d));
      if (!seen.insert(std::vector<double>(rows.back().data(), rows.back().data() + d)).second)
        collision = true;
    }
    if (!collision) return rows;
  }
}

Eigen::MatrixXd positional_encoding(const Graph& g, const TokenizerConfig& cfg) {
  const int n = g.num_nodes();
  if (cfg.zero_pe) return Eigen::MatrixXd::Zero(n, cfg.d);
  switch (cfg.pe_kind) {
    case PeKind::kRawTargets: {
      if (2 * n > cfg.d)
        throw Error(ErrorCode::kShapeMismatch, "raw targets need d >= 2n (d = " + std::to_string(cfg.d) +
                                                   ", n = " + std::to_string(n) + ")");
      const auto t = identifying_targets(g, cfg.normalized);
      Eigen::MatrixXd pe = Eigen::MatrixXd::Zero(n, cfg.d);
      pe.leftCols(n) = t.p_node;
      pe.middleCols(n, n) = t.p_adj;
      return pe;
    }
    case PeKind::kLpe: {
      const auto dec = graph_spectrum(g, cfg.normalized);
      const int l = cfg.eig_count < 0 ? n : cfg.eig_count;
      return lpe(dec, EncoderParams::make(cfg.seed, l, cfg.d));
    }
    case PeKind::kSpe: {
      const auto dec = graph_spectrum(g, cfg.normalized);
      const int m = cfg.spe_rank < 0 ? n : cfg.spe_rank;
      return spe(dec, EncoderParams::make(cfg.seed, n, cfg.d), m);
    }
  }
  return {};
}

namespace {

std::string encoder_name(const TokenizerConfig& cfg) {
  if (cfg.zero_pe) return "none";
  switch (cfg.pe_kind) {
    case PeKind::kLpe: return "lpe";
    case PeKind::kSpe: return "spe";
    case PeKind::kRawTargets: return "raw_targets";
  }
  return "?";
}

Eigen::MatrixXd compute_node_rows(const Graph& g, const TokenizerConfig& cfg) {
  const int n = g.num_nodes();
  const int d = cfg.d;
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "token dimension must be positive");

  std::vector<std::int64_t> labels(g.labels().begin(), g.labels().end());
  labels = distinct(labels);
  const auto ftab = injective_table(cfg.seed, kFeatureTable, labels, d);
  auto feature = [&](int label) -> const Eigen::RowVectorXd& {
    return ftab[std::lower_bound(labels.begin(), labels.end(), label) - labels.begin()];
  };

  std::vector<std::int64_t> degrees;
  for (int v = 0; v < n; ++v) degrees.push_back(g.degree(v));
  degrees = distinct(degrees);
  std::vector<Eigen::RowVectorXd> dtab;
  if (cfg.degree_embed == DegreeEmbed::kSeeded) dtab = injective_table(cfg.seed, kDegreeTable, degrees, d);
  auto degree_row = [&](int deg) -> Eigen::RowVectorXd {
    switch (cfg.degree_embed) {
      case DegreeEmbed::kZero: return Eigen::RowVectorXd::Zero(d);
      case DegreeEmbed::kOneHot: {
        if (deg >= d) throw Error(ErrorCode::kShapeMismatch, "one-hot degree needs d > max degree");
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(d);
        r(deg) = 1.0;
        return r;
      }
      case DegreeEmbed::kSeeded:
        return dtab[std::lower_bound(degrees.begin(), degrees.end(), deg) - degrees.begin()];
    }
    return {};
  };

  const Eigen::MatrixXd pe = positional_encoding(g, cfg);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  const Eigen::MatrixXd w1 = seeded_gaussian(cfg.seed, kFfnW1, d, d, s);
  const Eigen::RowVectorXd b1 = seeded_gaussian(cfg.seed, kFfnB1, 1, d, 0.1);
  const Eigen::MatrixXd w2 = seeded_gaussian(cfg.seed, kFfnW2, d, d, s);
  const Eigen::RowVectorXd b2 = seeded_gaussian(cfg.seed, kFfnB2, 1, d, 0.1);

  Eigen::MatrixXd x(n, d);
  for (int v = 0; v < n; ++v) {
    Eigen::RowVectorXd h = degree_row(g.degree(v)) + pe.row(v);
    if (!cfg.identity_ffn) h = ((h * w1 + b1).cwiseMax(0.0)) * w2 + b2;
    x.row(v) = feature(g.label(v)) + h;
  }
  return x;
}

}  // namespace

TokenMatrix node_tokens(const Graph& g, const TokenizerConfig& cfg) {
  TokenMatrix t;
  t.k = 1;
  t.s = 1;
  t.d = cfg.d;
  t.encoder = encoder_name(cfg);
  t.seed = cfg.seed;
  t.rows = compute_node_rows(g, cfg);
  return t;
}

std::int64_t atp_index(const AtomicTypeMatrix& atp) {
  std::int64_t idx = 0;
  for (int i = 1; i < atp.k; ++i)
    for (int j = 0; j < i; ++j) idx = idx * 3 + (atp.at(i, j) - 1);
  return idx;
}

Eigen::RowVectorXd atp_embedding_from_edges(const Graph& g, std::span<const int> tup, const TokenizerConfig& cfg) {
  const int k = static_cast<int>(tup.size());
  const int d = cfg.d;
  const int blocks = k * (k - 1) / 2;
  if (blocks == 0) return Eigen::RowVectorXd::Zero(d);
  for (int v : tup)
    if (v < 0 || v >= g.num_nodes()) throw Error(ErrorCode::kIndexOutOfRange, "tuple entry out of range");

  std::vector<std::int64_t> edge_labels(g.edge_labels().begin(), g.edge_labels().end());
  edge_labels = distinct(edge_labels);
  const auto etab = injective_table(cfg.seed, kEdgeLabelTable, edge_labels, d);
  const Eigen::RowVectorXd self = embedding_row(cfg.seed, kSelfVector, 0, d);

  Eigen::RowVectorXd concat = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(blocks) * d);
  int b = 0;
  for (int i = 1; i < k; ++i)
    for (int j = 0; j < i; ++j, ++b) {
      auto block = concat.segment(static_cast<Eigen::Index>(b) * d, d);
      if (tup[i] == tup[j]) {
        block = self;
      } else if (g.adjacent(tup[i], tup[j])) {
        const int el = g.edge_label(tup[i], tup[j]);
        block = etab[std::lower_bound(edge_labels.begin(), edge_labels.end(), el) - edge_labels.begin()];
      }
    }
  const Eigen::MatrixXd w = seeded_gaussian(cfg.seed, kEdgeProjection, blocks * d, d,
                                            1.0 / std::sqrt(static_cast<double>(blocks * d)));
  return concat * w;
}

TokenMatrix tuple_tokens(const Graph& g, const TokenizerConfig& cfg) {
  if (cfg.k < 2) throw Error(ErrorCode::kInvalidArgument, "tuple tokens need k >= 2");
  const int k = cfg.k;
  const int d = cfg.d;
  auto space = std::make_shared<const TupleSpace>(enumerate_tuples(g, k, cfg.s));
  const Eigen::MatrixXd x = compute_node_rows(g, cfg);
  const Eigen::MatrixXd w = seeded_gaussian(cfg.seed, kProjection, k * d, d,
                                            1.0 / std::sqrt(static_cast<double>(k * d)));

  std::vector<std::int64_t> types;
  if (!cfg.edge_atp) {
    for (std::size_t i = 0; i < space->size(); ++i) types.push_back(atp_index(atomic_type(g, space->tuple(i))));
    types = distinct(types);
  }
  const auto atab = injective_table(cfg.seed, kAtpTable, types, d);

  TokenMatrix t;
  t.k = k;
  t.s = cfg.s;
  t.d = d;
  t.encoder = encoder_name(cfg);
  t.seed = cfg.seed;
  t.space = space;
  t.rows.resize(static_cast<Eigen::Index>(space->size()), d);
  Eigen::RowVectorXd concat(k * d);
  for (std::size_t i = 0; i < space->size(); ++i) {
    const auto tup = space->tuple(i);
    for (int o = 0; o < k; ++o) concat.segment(static_cast<Eigen::Index>(o) * d, d) = x.row(tup[o]);
    Eigen::RowVectorXd row = concat * w;
    if (cfg.edge_atp) {
      row += atp_embedding_from_edges(g, tup, cfg);
    } else {
      const auto idx = atp_index(atomic_type(g, tup));
      row += atab[std::lower_bound(types.begin(), types.end(), idx) - types.begin()];
    }
    t.rows.row(static_cast<Eigen::Index>(i)) = row;
  }
  return t;
}

std::size_t token_count(const Graph& g, int k, int s) { return enumerate_tuples(g, k, s).size(); }

bool order_transfer_compat(const TokenizerConfig& low, const TokenizerConfig& high) { return low.d == high.d; }

std::vector<int> row_partition(const Eigen::MatrixXd& rows) {
  std::map<std::vector<double>, int> ids;
  std::vector<int> out;
  out.reserve(rows.rows());
  std::vector<double> key(rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) key[c] = rows(i, c);
    auto [it, ins] = ids.try_emplace(key, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

std::string token_matrix_json(const TokenMatrix& t) {
  nlohmann::json doc;
  doc["k"] = t.k;
  doc["s"] = t.s;
  doc["dim"] = t.d;
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < t.rows.rows(); ++i) {
    std::vector<double> r(t.rows.cols());
    for (Eigen::Index c = 0; c < t.rows.cols(); ++c) r[c] = t.rows(i, c);
    rows.push_back(r);
  }
  doc["rows"] = rows;
  return doc.dump();
}

}  // namespace wlgt
