#include "cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wlgt/bench.hpp"
#include "wlgt/error.hpp"
#include "wlgt/graph.hpp"
#include "wlgt/spectral.hpp"
#include "wlgt/tokenizer.hpp"
#include "wlgt/transformer.hpp"
#include "wlgt/wl.hpp"

namespace wlgt::cli {

namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 0;
  double b = 60.0;
  double tol = 1e-6;
};

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Error(ErrorCode::kFileNotFound, "cannot write " + out_path);
  f << text << '\n';
}

json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) r[c] = m(i, c);
    rows.push_back(r);
  }
  return rows;
}

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weisfeiler-Leman refinement and transformer simulation toolkit", "wlgt"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every pseudo-random table")->capture_default_str();
  app.add_option("--b", g.b, "Softmax temperature of the constructed transformers")->capture_default_str();
  app.add_option("--tol", g.tol, "Attention error tolerance for simulate")->capture_default_str();

  std::string graph_path, g1_path, g2_path, out_path, variant_name = "kwl";
  int k = 1, s = -1, max_iter = -1, layers = -1;

  auto* refine = app.add_subcommand("refine", "Color refinement until stable");
  refine->add_option("--graph", graph_path)->required();
  refine->add_option("--k", k)->capture_default_str();
  refine->add_option("--s", s, "Component bound (default k)");
  refine->add_option("--variant", variant_name)->capture_default_str();
  refine->add_option("--max-iter", max_iter);
  refine->add_option("--out", out_path);

  auto* dist = app.add_subcommand("distinguish", "Compare two graphs under a refinement variant");
  dist->add_option("--g1", g1_path)->required();
  dist->add_option("--g2", g2_path)->required();
  dist->add_option("--k", k)->capture_default_str();
  dist->add_option("--s", s);
  dist->add_option("--variant", variant_name)->capture_default_str();
  dist->add_option("--out", out_path);

  std::string suite = "builtin", variants_list = "1wl,kwl:2,delta:2,delta-local:2,ks-local:2:1,kwl:3",
              format = "csv";
  int workers = 0;
  bool no_timing = false;
  auto* bench = app.add_subcommand("bench", "Run the built-in pair suite");
  bench->add_option("--suite", suite)->check(CLI::IsMember({"builtin"}))->capture_default_str();
  bench->add_option("--variants", variants_list, "Comma-separated list, e.g. 1wl,kwl:2,ks-local:2:1")
      ->capture_default_str();
  bench->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  bench->add_option("--workers", workers);
  bench->add_flag("--no-timing", no_timing, "Report zero wall times (byte-stable output)");
  bench->add_option("--out", out_path);

  auto* sim = app.add_subcommand("simulate", "Run the constructed transformer against the WL engine");
  sim->add_option("--graph", graph_path)->required();
  sim->add_option("--k", k)->capture_default_str();
  sim->add_option("--s", s);
  sim->add_option("--variant", variant_name)->capture_default_str();
  sim->add_option("--layers", layers, "Number of layers (-1: until stable, plus one)");
  sim->add_option("--out", out_path);

  std::string pe_kind = "lpe";
  int dim = 32, eig_count = -1, rank = -1;
  bool normalized = false;
  auto* pe = app.add_subcommand("pe", "Positional encodings");
  pe->add_option("--graph", graph_path)->required();
  pe->add_option("--kind", pe_kind)->check(CLI::IsMember({"lpe", "spe", "raw"}))->capture_default_str();
  pe->add_option("--dim", dim)->capture_default_str();
  pe->add_option("--eig-count", eig_count);
  pe->add_option("--rank", rank);
  pe->add_flag("--normalized", normalized);
  pe->add_option("--out", out_path);

  std::string target = "adjacency";
  auto* verify = app.add_subcommand("verify-identifying", "Check the node/adjacency targets on a graph");
  verify->add_option("--graph", graph_path)->required();
  verify->add_option("--target", target)->check(CLI::IsMember({"node", "adjacency"}))->capture_default_str();
  verify->add_flag("--normalized", normalized);
  verify->add_option("--out", out_path);

  bool edge_atp = false;
  std::string token_pe = "raw";
  auto* tokens = app.add_subcommand("tokens", "Node or tuple token matrix");
  tokens->add_option("--graph", graph_path)->required();
  tokens->add_option("--k", k)->capture_default_str();
  tokens->add_option("--s", s);
  tokens->add_option("--dim", dim)->capture_default_str();
  tokens->add_option("--pe", token_pe)->check(CLI::IsMember({"lpe", "spe", "raw"}))->capture_default_str();
  tokens->add_flag("--normalized", normalized);
  tokens->add_flag("--edge-atp", edge_atp, "Atomic types from edge embeddings");
  tokens->add_option("--out", out_path);

  std::string pair_name;
  auto* pair = app.add_subcommand("pair", "Emit a built-in graph pair");
  pair->add_option("--name", pair_name)->required();
  pair->add_option("--out", out_path);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "USAGE"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  if (s < 0) s = k;
  try {
    if (*refine) {
      const Graph graph = load_graph_file(graph_path);
      const Variant v = parse_variant(variant_name);
      RefineOptions opts;
      opts.max_iter = max_iter;
      emit(coloring_json(refine_to_stable(graph, k, s, v, opts), v), out_path, out);
      return 0;
    }
    if (*dist) {
      const Graph a = load_graph_file(g1_path);
      const Graph bgraph = load_graph_file(g2_path);
      const auto r = distinguish(a, bgraph, parse_variant(variant_name), k, s);
      emit(json{{"distinguished", r.distinguished}, {"at_iteration", optional_int(r.at_iteration)}}.dump(),
           out_path, out);
      return 0;
    }
    if (*bench) {
      BenchOptions opts;
      opts.seed = g.seed;
      opts.workers = workers;
      opts.timing = !no_timing;
      std::stringstream ss(variants_list);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) opts.variants.push_back(parse_bench_variant(item));
      const auto rows = run_bench(opts);
      std::string text = format == "json" ? bench_json(rows) : bench_csv(rows);
      if (format == "csv" && !text.empty() && text.back() == '\n') text.pop_back();
      emit(text, out_path, out);
      return 0;
    }
    if (*sim) {
      const Graph graph = load_graph_file(graph_path);
      SimOptions opts;
      opts.k = k;
      opts.s = s;
      opts.variant = parse_variant(variant_name);
      opts.layers = layers;
      opts.b = g.b;
      opts.seed = g.seed;
      const auto r = simulate_and_compare(graph, opts);
      emit(sim_report_json(r), out_path, out);
      return r.all_equal() && r.max_attention_error < g.tol ? 0 : 1;
    }
    if (*pe) {
      const Graph graph = load_graph_file(graph_path);
      TokenizerConfig cfg;
      cfg.d = dim;
      cfg.seed = g.seed;
      cfg.normalized = normalized;
      cfg.eig_count = eig_count;
      cfg.spe_rank = rank;
      cfg.pe_kind = parse_pe_kind(pe_kind);
      emit(matrix_json(positional_encoding(graph, cfg)).dump(), out_path, out);
      return 0;
    }
    if (*verify) {
      const Graph graph = load_graph_file(graph_path);
      const auto t = identifying_targets(graph, normalized);
      const bool node = target == "node";
      const auto r = node ? check_identifying(t.p_node, t.wq_node, t.wk_node, graph, IdentifyTarget::kNode)
                          : check_identifying(t.p_adj, t.wq_adj, t.wk_adj, graph, IdentifyTarget::kAdjacency);
      emit(json{{"pass", r.pass}, {"margin", r.margin}, {"rows_failed", r.rows_failed}}.dump(), out_path, out);
      return r.pass ? 0 : 1;
    }
    if (*tokens) {
      const Graph graph = load_graph_file(graph_path);
      TokenizerConfig cfg;
      cfg.k = k;
      cfg.s = s;
      cfg.d = dim;
      cfg.seed = g.seed;
      cfg.normalized = normalized;
      cfg.pe_kind = parse_pe_kind(token_pe);
      cfg.edge_atp = edge_atp;
      const auto t = k == 1 ? node_tokens(graph, cfg) : tuple_tokens(graph, cfg);
      emit(token_matrix_json(t), out_path, out);
      return 0;
    }
    if (*pair) {
      const auto [a, bgraph] = builtin_pair(pair_name);
      emit(json{{"name", pair_name}, {"g1", json::parse(graph_to_json(a))}, {"g2", json::parse(graph_to_json(bgraph))}}
               .dump(),
           out_path, out);
      return 0;
    }
  } catch (const Error& e) {
    err << json{{"error", error_code_name(e.code())}, {"message", e.what()}}.dump() << '\n';
    return is_resource_error(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    err << json{{"error", "INTERNAL"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace wlgt::cli
