#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wlgt/graph.hpp"

namespace wlgt {

enum class Variant { kKwl, kDeltaKwl, kDeltaKlwl, kKsLwl };

std::string_view variant_name(Variant v);

/// Accepts kwl, delta_kwl, delta_klwl, ks_lwl and the CLI spellings
/// delta, delta-local, ks-local.
Variant parse_variant(std::string_view name);

constexpr std::size_t kDefaultTupleCap = 2'000'000;

/// Ordered k-tuples (s = k) or (k,s)-tuples of a graph.
class TupleSpace {
 public:
  int k() const { return k_; }
  int s() const { return s_; }
  int num_nodes() const { return n_; }
  std::size_t size() const { return count_; }
  bool restricted() const { return s_ < k_; }

  std::span<const int> tuple(std::size_t i) const {
    return {tuples_.data() + i * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_)};
  }

  /// Position of a tuple, or -1 when it is not in the space.
  std::int64_t index_of(std::span<const int> tup) const;

  /// Row-major code of a tuple over node indices.
  std::size_t code_of(std::span<const int> tup) const;
  std::int64_t index_of_code(std::size_t code) const { return dense_[code]; }

 private:
  friend TupleSpace enumerate_tuples(const Graph&, int, int, std::size_t);

  int k_ = 0;
  int s_ = 0;
  int n_ = 0;
  std::size_t count_ = 0;
  std::vector<int> tuples_;
  std::vector<std::int32_t> dense_;  // tuple code -> index or -1
};

TupleSpace enumerate_tuples(const Graph& g, int k, int s, std::size_t cap = kDefaultTupleCap);

/// Connected components of the subgraph induced by the distinct nodes of tup.
int tuple_components(const Graph& g, std::span<const int> tup);

struct Coloring {
  std::shared_ptr<const TupleSpace> space;
  std::vector<int> colors;
  int iteration = 0;

  int num_colors() const;
  std::vector<int> histogram() const;
};

/// Injective map from signatures to dense ids, assigned by first occurrence.
class Relabeler {
 public:
  int operator()(const std::vector<std::int64_t>& key);
  std::size_t size() const { return table_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const;
  };
  std::unordered_map<std::vector<std::int64_t>, int, KeyHash> table_;
};

/// Canonical ids of an arbitrary labeling: first occurrence gets the next id.
std::vector<int> canonical_partition(std::span<const int> ids);

Coloring initial_coloring(const Graph& g, std::shared_ptr<const TupleSpace> space);
Coloring initial_coloring(const Graph& g, std::shared_ptr<const TupleSpace> space, Relabeler& table);

/// Signature (old color, neighborhood summary) of tuple i; exposed for tests.
std::vector<std::int64_t> refine_signature(const Graph& g, const TupleSpace& space,
                                           std::span<const int> colors, Variant variant,
                                           std::size_t i);

Coloring refine_step(const Graph& g, const Coloring& c, Variant variant);
Coloring refine_step(const Graph& g, const Coloring& c, Variant variant, Relabeler& table);

/// Throws VARIANT_SPACE_MISMATCH unless the variant accepts the (k, s) space.
void check_variant_space(Variant variant, int k, int s);

struct RefineOptions {
  int max_iter = -1;  // -1: max(64, |tuples| + 1)
  std::size_t tuple_cap = kDefaultTupleCap;
};

/// Colorings c_0, ..., c_t where c_t is the first stable one.
std::vector<Coloring> refine_to_stable(const Graph& g, int k, int s, Variant variant,
                                       const RefineOptions& opts = {});

struct DistinguishResult {
  bool distinguished = false;
  std::optional<int> at_iteration;
};

DistinguishResult distinguish(const Graph& g, const Graph& h, Variant variant, int k, int s,
                              const RefineOptions& opts = {});

/// True iff every color class of a lies inside a class of b.
bool refines(const Coloring& a, const Coloring& b);
bool refines(std::span<const int> a, std::span<const int> b);

std::string coloring_json(const std::vector<Coloring>& run, Variant variant);

}  // namespace wlgt
