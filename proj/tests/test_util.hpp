#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "wlgt/graph.hpp"
#include "wlgt/random.hpp"

namespace wlgt::testing {

inline std::string data_path(const std::string& rel) { return std::string(WLGT_TEST_DATA_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Random graph with 2..max_n nodes and a random edge density.
inline Graph sample_graph(Rng& rng, int min_n, int max_n) {
  const int n = static_cast<int>(rng.uniform_int(min_n, max_n));
  const double p = 0.25 + 0.5 * rng.uniform01();
  return random_graph(rng, n, p);
}

inline Graph sample_connected(Rng& rng, int min_n, int max_n) {
  const int n = static_cast<int>(rng.uniform_int(min_n, max_n));
  return random_connected_graph(rng, n, 0.3 * rng.uniform01());
}

}  // namespace wlgt::testing
