#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wlgt/wl.hpp"

namespace wlgt {

struct BenchVariant {
  std::string label;  // e.g. "1wl", "kwl:2", "ks-local:2:1"
  Variant variant = Variant::kKwl;
  int k = 1;
  int s = 1;
};

/// Parses 1wl, kwl:K, delta:K, delta-local:K, ks-local:K:S.
BenchVariant parse_bench_variant(std::string_view label);

struct BenchRow {
  std::string pair;
  bool control = false;  // G versus a random relabeling of G
  std::string variant;
  int k = 1;
  int s = 1;
  bool distinguished = false;
  std::optional<int> at_iteration;
  double wall_time_ms = 0.0;
};

struct BenchOptions {
  std::vector<BenchVariant> variants;
  std::uint64_t seed = 0;
  int workers = 0;       // 0: hardware concurrency
  bool timing = true;    // false reports wall_time_ms = 0
};

/// Every built-in pair followed by its isomorphic control, each against every
/// variant, in that order.
std::vector<BenchRow> run_bench(const BenchOptions& opts);

std::string bench_csv(const std::vector<BenchRow>& rows);
std::string bench_json(const std::vector<BenchRow>& rows);

}  // namespace wlgt
