#include "wlgt/wl.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "wlgt/error.hpp"
#include "wlgt/random.hpp"

namespace wlgt {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kKwl: return "kwl";
    case Variant::kDeltaKwl: return "delta_kwl";
    case Variant::kDeltaKlwl: return "delta_klwl";
    case Variant::kKsLwl: return "ks_lwl";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "kwl") return Variant::kKwl;
  if (name == "delta_kwl" || name == "delta") return Variant::kDeltaKwl;
  if (name == "delta_klwl" || name == "delta-local") return Variant::kDeltaKlwl;
  if (name == "ks_lwl" || name == "ks-local") return Variant::kKsLwl;
  throw Error(ErrorCode::kInvalidArgument, "unknown variant '" + std::string(name) + "'");
}

std::size_t TupleSpace::code_of(std::span<const int> tup) const {
  std::size_t code = 0;
  for (int v : tup) code = code * n_ + v;
  return code;
}

std::int64_t TupleSpace::index_of(std::span<const int> tup) const {
  if (static_cast<int>(tup.size()) != k_) return -1;
  for (int v : tup)
    if (v < 0 || v >= n_) return -1;
  return dense_[code_of(tup)];
}

int tuple_components(const Graph& g, std::span<const int> tup) {
  const int k = static_cast<int>(tup.size());
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (tup[a] == tup[b] || g.adjacent(tup[a], tup[b])) parent[find(a)] = find(b);
  int comps = 0;
  for (int a = 0; a < k; ++a)
    if (find(a) == a) ++comps;
  return comps;
}

TupleSpace enumerate_tuples(const Graph& g, int k, int s, std::size_t cap) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (s < 1 || s > k) throw Error(ErrorCode::kInvalidArgument, "s must satisfy 1 <= s <= k");
  const int n = g.num_nodes();
  std::size_t total = 1;
  constexpr std::size_t kDenseLimit = std::size_t{1} << 27;
  for (int i = 0; i < k; ++i) {
    total *= static_cast<std::size_t>(n);
    if (total > kDenseLimit) throw Error(ErrorCode::kMemoryLimit, "n^k exceeds the tuple index limit");
  }
  if (s == k && total > cap)
    throw Error(ErrorCode::kMemoryLimit, std::to_string(total) + " tuples exceed the cap");

  TupleSpace sp;
  sp.k_ = k;
  sp.s_ = s;
  sp.n_ = n;
  sp.dense_.assign(total, -1);
  std::vector<int> tup(k, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (int i = k - 1; i >= 0; --i) {
      tup[i] = static_cast<int>(rest % n);
      rest /= n;
    }
    if (s < k && tuple_components(g, tup) > s) continue;
    if (sp.count_ >= cap) throw Error(ErrorCode::kMemoryLimit, "tuple count exceeds the cap");
    sp.dense_[code] = static_cast<std::int32_t>(sp.count_++);
    sp.tuples_.insert(sp.tuples_.end(), tup.begin(), tup.end());
  }
  return sp;
}

int Coloring::num_colors() const {
  return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
}

std::vector<int> Coloring::histogram() const {
  std::vector<int> h(num_colors(), 0);
  for (int c : colors) ++h[c];
  return h;
}

std::size_t Relabeler::KeyHash::operator()(const std::vector<std::int64_t>& v) const {
  std::uint64_t h = v.size();
  for (auto x : v) h = hash_combine(h, static_cast<std::uint64_t>(x));
  return static_cast<std::size_t>(h);
}

int Relabeler::operator()(const std::vector<std::int64_t>& key) {
  auto [it, inserted] = table_.try_emplace(key, static_cast<int>(table_.size()));
  return it->second;
}

std::vector<int> canonical_partition(std::span<const int> ids) {
  std::unordered_map<int, int> m;
  std::vector<int> out;
  out.reserve(ids.size());
  for (int id : ids) {
    auto [it, ins] = m.try_emplace(id, static_cast<int>(m.size()));
    out.push_back(it->second);
  }
  return out;
}

Coloring initial_coloring(const Graph& g, std::shared_ptr<const TupleSpace> space, Relabeler& table) {
  Coloring c;
  c.space = space;
  c.colors.resize(space->size());
  std::vector<std::int64_t> key;
  for (std::size_t i = 0; i < space->size(); ++i) {
    const auto tup = space->tuple(i);
    key.clear();
    const auto atp = atomic_type(g, tup);
    key.insert(key.end(), atp.entries.begin(), atp.entries.end());
    for (int v : tup) key.push_back(g.label(v));
    c.colors[i] = table(key);
  }
  return c;
}

Coloring initial_coloring(const Graph& g, std::shared_ptr<const TupleSpace> space) {
  Relabeler table;
  return initial_coloring(g, std::move(space), table);
}

void check_variant_space(Variant variant, int k, int s) {
  if (variant != Variant::kKsLwl && s != k)
    throw Error(ErrorCode::kVariantSpaceMismatch,
                std::string(variant_name(variant)) + " requires the unrestricted space (s = k)");
}

std::vector<std::int64_t> refine_signature(const Graph& g, const TupleSpace& space,
                                           std::span<const int> colors, Variant variant,
                                           std::size_t i) {
  const int k = space.k();
  const int n = space.num_nodes();
  const auto tup = space.tuple(i);
  const std::size_t code = space.code_of(tup);
  std::vector<std::int64_t> key{colors[i]};
  std::vector<std::int64_t> bucket;

  std::size_t stride = 1;
  std::vector<std::size_t> strides(k);
  for (int j = k - 1; j >= 0; --j) {
    strides[j] = stride;
    stride *= n;
  }

  for (int j = 0; j < k; ++j) {
    const int vj = tup[j];
    const std::size_t base = code - static_cast<std::size_t>(vj) * strides[j];
    auto color_at = [&](int w) -> std::int64_t {
      const auto idx = space.index_of_code(base + static_cast<std::size_t>(w) * strides[j]);
      return idx < 0 ? -1 : colors[idx];
    };
    bucket.clear();
    switch (variant) {
      case Variant::kKwl:
        if (k == 1) {
          for (int w : g.neighbors(vj)) bucket.push_back(color_at(w));
        } else {
          for (int w = 0; w < n; ++w) bucket.push_back(color_at(w));
        }
        break;
      case Variant::kDeltaKwl:
        for (int w = 0; w < n; ++w) bucket.push_back(2 * color_at(w) + (g.adjacent(vj, w) ? 1 : 0));
        break;
      case Variant::kDeltaKlwl:
        for (int w : g.neighbors(vj)) bucket.push_back(color_at(w));
        break;
      case Variant::kKsLwl:
        for (int w : g.neighbors(vj)) {
          const auto c = color_at(w);
          if (c >= 0) bucket.push_back(c);
        }
        break;
    }
    std::sort(bucket.begin(), bucket.end());
    key.push_back(static_cast<std::int64_t>(bucket.size()));
    key.insert(key.end(), bucket.begin(), bucket.end());
  }
  return key;
}

Coloring refine_step(const Graph& g, const Coloring& c, Variant variant, Relabeler& table) {
  const auto& space = *c.space;
  check_variant_space(variant, space.k(), space.s());
  Coloring out;
  out.space = c.space;
  out.iteration = c.iteration + 1;
  out.colors.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i)
    out.colors[i] = table(refine_signature(g, space, c.colors, variant, i));
  return out;
}

Coloring refine_step(const Graph& g, const Coloring& c, Variant variant) {
  Relabeler table;
  return refine_step(g, c, variant, table);
}

namespace {

int default_cap(const RefineOptions& opts, std::size_t tuples) {
  if (opts.max_iter >= 0) return opts.max_iter;
  return static_cast<int>(std::max<std::size_t>(64, tuples + 1));
}

}  // namespace

std::vector<Coloring> refine_to_stable(const Graph& g, int k, int s, Variant variant,
                                       const RefineOptions& opts) {
  check_variant_space(variant, k, s);
  auto space = std::make_shared<const TupleSpace>(enumerate_tuples(g, k, s, opts.tuple_cap));
  const int cap = default_cap(opts, space->size());
  std::vector<Coloring> run{initial_coloring(g, space)};
  for (;;) {
    if (run.back().iteration >= cap)
      throw Error(ErrorCode::kIterationLimit, "refinement did not stabilize within " +
                                                  std::to_string(cap) + " iterations");
    Coloring next = refine_step(g, run.back(), variant);
    if (next.num_colors() == run.back().num_colors()) break;
    run.push_back(std::move(next));
  }
  return run;
}

namespace {

bool same_histogram(const Coloring& a, const Coloring& b) { return a.histogram() == b.histogram(); }

}  // namespace

DistinguishResult distinguish(const Graph& g, const Graph& h, Variant variant, int k, int s,
                              const RefineOptions& opts) {
  check_variant_space(variant, k, s);
  std::shared_ptr<const TupleSpace> sg, sh;
  {
    // The two enumerations are independent; run them side by side.
    std::exception_ptr err;
    std::thread worker([&] {
      try {
        sh = std::make_shared<const TupleSpace>(enumerate_tuples(h, k, s, opts.tuple_cap));
      } catch (...) {
        err = std::current_exception();
      }
    });
    sg = std::make_shared<const TupleSpace>(enumerate_tuples(g, k, s, opts.tuple_cap));
    worker.join();
    if (err) std::rethrow_exception(err);
  }
  if (sg->size() != sh->size()) return {true, 0};
  const int cap = default_cap(opts, sg->size() + sh->size());

  Relabeler t0;
  Coloring cg = initial_coloring(g, sg, t0);
  Coloring ch = initial_coloring(h, sh, t0);
  std::size_t joint = t0.size();
  for (;;) {
    if (!same_histogram(cg, ch)) return {true, cg.iteration};
    if (cg.iteration >= cap)
      throw Error(ErrorCode::kIterationLimit, "refinement did not stabilize within " +
                                                  std::to_string(cap) + " iterations");
    Relabeler table;
    Coloring ng = refine_step(g, cg, variant, table);
    Coloring nh = refine_step(h, ch, variant, table);
    if (table.size() == joint) return {false, std::nullopt};
    joint = table.size();
    cg = std::move(ng);
    ch = std::move(nh);
  }
}

bool refines(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kSpaceMismatch, "colorings have different sizes");
  std::unordered_map<int, int> image;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it, ins] = image.try_emplace(a[i], b[i]);
    if (it->second != b[i]) return false;
  }
  return true;
}

bool refines(const Coloring& a, const Coloring& b) {
  if (a.space != b.space &&
      (a.space->size() != b.space->size() || a.space->k() != b.space->k() ||
       a.space->s() != b.space->s() || a.space->num_nodes() != b.space->num_nodes()))
    throw Error(ErrorCode::kSpaceMismatch, "colorings live on different tuple spaces");
  return refines(std::span<const int>(a.colors), std::span<const int>(b.colors));
}

std::string coloring_json(const std::vector<Coloring>& run, Variant variant) {
  nlohmann::json doc;
  const auto& sp = *run.front().space;
  doc["k"] = sp.k();
  doc["s"] = sp.s();
  doc["variant"] = variant_name(variant);
  doc["iterations"] = run.back().iteration;
  auto colors = nlohmann::json::array();
  auto hists = nlohmann::json::array();
  for (const auto& c : run) {
    colors.push_back(c.colors);
    hists.push_back(c.histogram());
  }
  doc["colors_per_iteration"] = colors;
  doc["histograms"] = hists;
  return doc.dump();
}

}  // namespace wlgt
