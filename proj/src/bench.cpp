#include "wlgt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wlgt/error.hpp"
#include "wlgt/graph.hpp"
#include "wlgt/random.hpp"

namespace wlgt {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_positive(const std::string& s, std::string_view label) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument, "bad bench variant '" + std::string(label) + "'");
}

std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 0;
  for (char c : s) h = hash_combine(h, static_cast<unsigned char>(c));
  return h;
}

struct Job {
  std::string pair;
  bool control;
  const Graph* g;
  const Graph* h;
  const BenchVariant* variant;
};

}  // namespace

BenchVariant parse_bench_variant(std::string_view label) {
  BenchVariant v;
  v.label = std::string(label);
  if (label == "1wl") return v;
  const auto parts = split(label, ':');
  const auto bad = [&] { return Error(ErrorCode::kInvalidArgument, "bad bench variant '" + std::string(label) + "'"); };
  if (parts.size() < 2) throw bad();
  const auto& name = parts[0];
  if (name == "ks-local") {
    if (parts.size() != 3) throw bad();
    v.variant = Variant::kKsLwl;
    v.k = parse_positive(parts[1], label);
    v.s = parse_positive(parts[2], label);
    if (v.s > v.k) throw bad();
    return v;
  }
  if (parts.size() != 2) throw bad();
  if (name == "kwl") v.variant = Variant::kKwl;
  else if (name == "delta") v.variant = Variant::kDeltaKwl;
  else if (name == "delta-local") v.variant = Variant::kDeltaKlwl;
  else throw bad();
  v.k = v.s = parse_positive(parts[1], label);
  return v;
}

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
  std::vector<std::pair<std::string, std::pair<Graph, Graph>>> graphs;
  for (const auto& name : builtin_pair_names()) {
    auto pair = builtin_pair(name);
    Rng rng(hash_combine(opts.seed, name_hash(name)));
    const auto perm = rng.permutation(pair.first.num_nodes());
    Graph relabeled = apply_permutation(pair.first, perm);
    graphs.push_back({name, pair});
    graphs.push_back({name, {pair.first, std::move(relabeled)}});
  }
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < graphs.size(); ++p)
    for (const auto& v : opts.variants)
      jobs.push_back({graphs[p].first, p % 2 == 1, &graphs[p].second.first, &graphs[p].second.second, &v});

  std::vector<BenchRow> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      const auto& job = jobs[i];
      try {
        const auto start = std::chrono::steady_clock::now();
        const auto res = distinguish(*job.g, *job.h, job.variant->variant, job.variant->k, job.variant->s);
        const auto stop = std::chrono::steady_clock::now();
        BenchRow& row = rows[i];
        row.pair = job.pair;
        row.control = job.control;
        row.variant = job.variant->label;
        row.k = job.variant->k;
        row.s = job.variant->s;
        row.distinguished = res.distinguished;
        row.at_iteration = res.at_iteration;
        row.wall_time_ms =
            opts.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int workers = opts.workers > 0 ? opts.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

namespace {

std::string pair_label(const BenchRow& r) { return r.control ? r.pair + "_control" : r.pair; }

}  // namespace

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "pair,variant,k,s,distinguished,at_iteration,wall_time_ms\n";
  for (const auto& r : rows) {
    out << pair_label(r) << ',' << r.variant << ',' << r.k << ',' << r.s << ','
        << (r.distinguished ? "true" : "false") << ',';
    if (r.at_iteration) out << *r.at_iteration;
    out << ',' << r.wall_time_ms << '\n';
  }
  return out.str();
}

std::string bench_json(const std::vector<BenchRow>& rows) {
  nlohmann::json doc;
  auto arr = nlohmann::json::array();
  std::map<std::string, std::map<std::string, int>> totals;
  for (const auto& r : rows) {
    nlohmann::json j;
    j["pair"] = pair_label(r);
    j["variant"] = r.variant;
    j["k"] = r.k;
    j["s"] = r.s;
    j["distinguished"] = r.distinguished;
    j["at_iteration"] = r.at_iteration ? nlohmann::json(*r.at_iteration) : nlohmann::json(nullptr);
    j["wall_time_ms"] = r.wall_time_ms;
    arr.push_back(j);
    auto& t = totals[r.variant];
    if (r.control) {
      ++t["controls"];
      if (r.distinguished) ++t["control_failures"];
    } else {
      ++t["pairs"];
      if (r.distinguished) ++t["distinguished"];
    }
  }
  doc["rows"] = arr;
  doc["totals"] = totals;
  return doc.dump();
}

}  // namespace wlgt
