// occucert: exact hard-core analyses, local-occupancy certificates and
// verification campaigns. Exit codes: 0 ok, 1 verification failure,
// 2 input error, 3 enumeration cap exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "occucert/occucert.hpp"

namespace {

using namespace occucert;

struct Config {
  std::string graph_file, family, out, demand = "certificate";
  std::vector<std::string> lambda;
  std::optional<double> b;
  std::vector<double> bs;
  std::uint64_t seed = 1;
  std::size_t cap = 0;
  bool strict = false, verbose = false, no_lp = false;
};

std::vector<NamedGraph> load_graphs(const Config& c, std::string_view fallback_family = {}) {
  if (!c.graph_file.empty() && !c.family.empty()) throw InputError("use either --graph or --family");
  if (!c.graph_file.empty()) {
    std::ifstream in(c.graph_file);
    if (!in) throw InputError("cannot read graph file " + c.graph_file);
    return {{c.graph_file, read_edge_list(in)}};
  }
  if (!c.family.empty()) return family_instances(c.family, c.seed);
  if (!fallback_family.empty()) return family_instances(std::string(fallback_family), c.seed);
  throw InputError("a graph is required: --graph FILE or --family SPEC");
}

Graph single_graph(const Config& c) {
  auto graphs = load_graphs(c);
  if (graphs.size() != 1) throw InputError("this mode takes a single graph, not a sweep");
  return graphs.front().graph;
}

Fugacity single_fugacity(const Config& c, const Graph& g) {
  if (c.lambda.size() > 1) throw InputError("this mode takes a single --lambda");
  Rng rng(c.seed);
  return realize(parse_lambda_spec(c.lambda.empty() ? "1" : c.lambda.front()), g, rng, c.b.value_or(0));
}

void emit(const Config& c, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + c.out);
  f << text;
}

int run(const std::string& mode, const Config& c) {
  const std::size_t cap = c.cap == 0 ? default_enumeration_cap() : c.cap;
  if (cap > kMaxEnumerationCap) throw InputError("--cap exceeds the global maximum " + std::to_string(kMaxEnumerationCap));

  if (mode == "analyze") {
    const auto g = single_graph(c);
    emit(c, analyze_report(g, single_fugacity(c, g), {.cap = cap, .b = c.b, .verbose = c.verbose}));
    return 0;
  }
  if (mode == "certify") {
    const auto g = single_graph(c);
    emit(c, certify_report(g, single_fugacity(c, g), c.b));
    return 0;
  }
  if (mode == "counterexample") {
    const auto j = counterexample_report();
    emit(c, j);
    return j["lp_below_bound"].get<bool>() ? 0 : 1;
  }
  if (mode == "constants") {
    emit(c, constants_report(c.bs.empty() ? std::vector<double>{0, 1, 2} : c.bs));
    return 0;
  }
  if (mode == "frac-color") {
    auto graphs = load_graphs(c);
    if (graphs.size() == 1 && c.lambda.size() <= 1) {
      const auto& g = graphs.front().graph;
      const auto lambda = single_fugacity(c, g);
      const auto q = realize_demand(parse_demand_spec(c.demand), g, general_params(lambda));
      const auto j = frac_color_report(g, lambda, q, {.strict = c.strict, .cap = cap});
      emit(c, j);
      if (!j.contains("coloring")) return 1;
      return j["coloring"]["verdict"]["certifies"].get<bool>() ? 0 : 1;
    }
    DemandCampaignOptions opt{.demand = c.demand, .cap = cap, .strict = c.strict, .verbose = c.verbose};
    if (!c.lambda.empty()) opt.lambda_specs = c.lambda;
    const auto r = demand_campaign(graphs, opt);
    emit(c, r.to_json());
    return r.exit_code();
  }
  if (mode == "verify-thm1") {
    Thm1Options opt{.seed = c.seed, .cap = cap, .lp = !c.no_lp, .verbose = c.verbose};
    if (!c.lambda.empty()) opt.lambda_specs = c.lambda;
    const auto r = verify_thm1(load_graphs(c, "connected:1-6"), opt);
    emit(c, r.to_json());
    return r.exit_code();
  }
  if (mode == "verify-thm2") {
    Thm2Options opt{.b = c.b.value_or(0), .cap = cap, .verbose = c.verbose};
    if (!c.lambda.empty()) opt.lambda_specs = c.lambda;
    const auto r = verify_thm2(load_graphs(c, "trianglefree:2-9"), opt);
    emit(c, r.to_json());
    return r.exit_code();
  }
  if (mode == "scan") {
    ScanOptions opt{.seed = c.seed, .cap = cap, .verbose = c.verbose};
    if (!c.lambda.empty()) opt.lambda_specs = c.lambda;
    const auto r = conjecture_scan(load_graphs(c, "cliques:2-5"), opt);
    emit(c, r.to_json());
    return r.exit_code();
  }
  throw InputError("unknown mode " + mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact hard-core model analyses and local-occupancy certificates"};
  app.require_subcommand(1, 1);
  Config c;

  const std::vector<std::pair<std::string, std::string>> modes{
      {"analyze", "degree/mad profiles, exact hard-core summary, general bound and gap"},
      {"certify", "dual certificate y' = (B + A Gamma)^{-1} 1 with spectral and series diagnostics"},
      {"verify-thm1", "general-bound suite over a family (default: connected graphs n <= 6)"},
      {"verify-thm2", "local-mad Lambert-W bound suite over a family (default: triangle-free, 2 <= n <= 9)"},
      {"frac-color", "demand process: fractional colouring certificate for q in ind(G)"},
      {"counterexample", "the K_{1,2} example where the occupancy LP falls short of the bound"},
      {"constants", "c(0), eta and c(b)"},
      {"scan", "E|X| - bound for arbitrary fugacities (default: cliques K_2..K_5)"},
  };
  for (const auto& [name, help] : modes) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--graph", c.graph_file, "edge-list file: 'n m' then m lines 'u v'");
    sub->add_option("--family", c.family,
                    "complete:n path:n cycle:n star:k empty:n bipartite:a,b gnp:n,p (join with +), "
                    "connected:a-b trianglefree:a-b cliques:a-b random:count,a-b,p");
    sub->add_option("--lambda", c.lambda,
                    "p/q | delta:r (r/Delta) | random | c:r (r c(b)/Delta) | JSON | @file; repeatable");
    sub->add_option("--b", c.b, "local mad bound (0 or >= 1)");
    sub->add_option("--seed", c.seed, "64-bit seed for every random choice");
    sub->add_option("--cap", c.cap, "enumeration cap (default 24 or $OCCUCERT_CAP)");
    sub->add_option("--out", c.out, "write the JSON report here instead of stdout");
    sub->add_flag("--strict", c.strict, "frac-color: verify local occupancy on every visited subgraph");
    sub->add_flag("--verbose", c.verbose, "include per-set probabilities / every campaign record");
    if (name == "frac-color")
      sub->add_option("--demand", c.demand, "certificate[:sigma] | uniform | p/q | JSON array");
    if (name == "constants") sub->add_option("--values", c.bs, "b values for c(b)");
    if (name == "verify-thm1") sub->add_flag("--no-lp", c.no_lp, "skip the LP weak-duality check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string mode = app.get_subcommands().front()->get_name();
  try {
    return run(mode, c);
  } catch (const Error& e) {
    std::cerr << "occucert: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "occucert: " << e.what() << "\n";
    return 2;
  }
}
