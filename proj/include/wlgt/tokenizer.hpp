#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wlgt/graph.hpp"
#include "wlgt/wl.hpp"

namespace wlgt {

enum class PeKind { kLpe, kSpe, kRawTargets };
enum class DegreeEmbed { kSeeded, kOneHot, kZero };

PeKind parse_pe_kind(std::string_view name);

struct TokenizerConfig {
  int k = 1;
  int s = 1;
  int d = 32;
  PeKind pe_kind = PeKind::kRawTargets;
  std::uint64_t seed = 0;
  bool normalized = false;   // Laplacian used by the positional encoding
  int eig_count = -1;        // LPE eigenpairs; -1 means all
  int spe_rank = -1;         // SPE truncation; -1 means n
  bool identity_ffn = false; // replace the structural FFN by the identity
  bool zero_pe = false;      // drop the positional encoding
  DegreeEmbed degree_embed = DegreeEmbed::kSeeded;
  bool edge_atp = false;     // atomic types from edge embeddings instead of the type index
};

struct TokenMatrix {
  int k = 1;
  int s = 1;
  int d = 0;
  std::string encoder;
  std::uint64_t seed = 0;
  Eigen::MatrixXd rows;
  std::shared_ptr<const TupleSpace> space;  // null for node tokens
};

/// Seeded embedding row for index `index` of table `tag`.
Eigen::RowVectorXd embedding_row(std::uint64_t seed, std::uint64_t tag, std::int64_t index, int d);

/// Seeded rows for the given indices, regenerated with a new salt until the
/// rows are pairwise distinct.
std::vector<Eigen::RowVectorXd> injective_table(std::uint64_t seed, std::uint64_t tag,
                                                std::span<const std::int64_t> indices, int d);

/// n x d positional encoding selected by cfg.pe_kind.
Eigen::MatrixXd positional_encoding(const Graph& g, const TokenizerConfig& cfg);

/// X(v) = F(label v) + FFN(emb_deg(deg v) + emb_PE(v)).
TokenMatrix node_tokens(const Graph& g, const TokenizerConfig& cfg);

/// row(v) = [X(v_1) | ... | X(v_k)] W + emb_atp(v) over enumerate_tuples(G, k, s).
TokenMatrix tuple_tokens(const Graph& g, const TokenizerConfig& cfg);

/// Base-3 index of the strict lower triangle of the atomic type.
std::int64_t atp_index(const AtomicTypeMatrix& atp);

/// Concatenated edge blocks E(v_i, v_j) for i > j, projected to d.
Eigen::RowVectorXd atp_embedding_from_edges(const Graph& g, std::span<const int> tup,
                                            const TokenizerConfig& cfg);

std::size_t token_count(const Graph& g, int k, int s);

bool order_transfer_compat(const TokenizerConfig& low, const TokenizerConfig& high);

/// Canonical ids grouping exactly equal rows.
std::vector<int> row_partition(const Eigen::MatrixXd& rows);

std::string token_matrix_json(const TokenMatrix& t);

}  // namespace wlgt
