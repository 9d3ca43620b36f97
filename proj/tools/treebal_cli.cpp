// treebal: spanning-tree packing, balanced double tree decomposition, exact
// small-instance oracles, the Hamiltonian-pair hardness gadget, and directed
// counterexample families — one binary for scripts and CI.
//
// Exit codes: 0 = success / decision "yes"; 2 = computed "no" (infeasible,
// unbalanced, not found) with a certificate printed; 1 = usage or input error.
//
// Human-readable report lines start with '#' so every stdout stream is also a
// parseable file of its kind; --porcelain switches to bare key-value records.

#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "treebal/balancer.hpp"
#include "treebal/decomposition.hpp"
#include "treebal/digraph_families.hpp"
#include "treebal/generators.hpp"
#include "treebal/graph.hpp"
#include "treebal/hardness.hpp"
#include "treebal/oracle.hpp"
#include "treebal/packing.hpp"
#include "treebal/union_find.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 2;
constexpr int kExitError = 1;

struct Options {
  bool porcelain = false;
};

// "#"-prefixed in human mode, bare key-value in porcelain mode.
void report(const Options& opt, const std::string& key, const std::string& value) {
  if (opt.porcelain)
    std::cout << key << ' ' << value << '\n';
  else
    std::cout << "# " << key << ' ' << value << '\n';
}

void report(const Options& opt, const std::string& key, long long value) {
  report(opt, key, std::to_string(value));
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

treebal::MultiGraph load_graph(const std::string& path) {
  return treebal::parse_graph_string(read_input(path));
}

treebal::MultiDigraph load_digraph(const std::string& path) {
  return treebal::parse_digraph_string(read_input(path));
}

void print_split(const treebal::MultiGraph& g, const treebal::SplitDecomposition& split) {
  treebal::serialize_decomposition(g, split.colour, std::cout);
  for (int i = 0; i < g.edge_count(); ++i)
    if (split.in_m[i]) std::cout << "m " << g.edge(i).id << '\n';
}

int run_pack(const Options& opt, const std::string& path) {
  auto g = load_graph(path);
  auto packed = treebal::pack_double_tree(g);
  if (!packed.feasible) {
    report(opt, "feasible", "0");
    report(opt, "reason", "fewer than 2(|P|-1) edges cross the printed partition");
    treebal::serialize_partition(packed.witness, std::cout);
    return kExitNo;
  }
  report(opt, "feasible", "1");
  report(opt, "leftover_edges", packed.split.m_count());
  print_split(g, packed.split);
  return kExitYes;
}

int run_balance(const Options& opt, const std::string& path, int c, bool trace,
                const std::string& out_path) {
  auto g = load_graph(path);
  auto packed = treebal::pack_double_tree(g);
  if (!packed.feasible) {
    report(opt, "feasible", "0");
    treebal::serialize_partition(packed.witness, std::cout);
    return kExitNo;
  }
  treebal::BalancerStats stats;
  auto result = treebal::balance(g, packed.split, c, &stats);
  auto rep = treebal::imbalance(g, result.split.colour);
  report(opt, "imbalance", rep.max_diff);
  report(opt, "argmax_vertex", rep.argmax_vertex);
  report(opt, "reductions", static_cast<long long>(result.trace.size()));
  if (trace) {
    std::ostringstream ts;
    treebal::dump_trace(result.trace, ts);
    std::istringstream lines(ts.str());
    std::string line;
    while (std::getline(lines, line))
      std::cout << (opt.porcelain ? "" : "# ") << line << '\n';
  }
  if (out_path.empty()) {
    treebal::serialize_decomposition(g, result.split.colour, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    treebal::serialize_decomposition(g, result.split.colour, out);
    report(opt, "wrote", out_path);
  }
  return kExitYes;
}

// Does every colour class contain a spanning tree? (When the edge count is
// exactly 2(n-1) this forces both classes to BE spanning trees.)
bool class_contains_spanning_tree(const treebal::MultiGraph& g, const std::vector<int>& colour,
                                  int which) {
  treebal::UnionFind uf(g.vertex_count() + 1);  // elements 0..n; slot 0 unused
  for (int i = 0; i < g.edge_count(); ++i)
    if (colour[i] == which) uf.unite(g.edge(i).u, g.edge(i).v);
  return g.vertex_count() > 0 && uf.components == 2;
}

int run_verify(const Options& opt, const std::string& graph_path,
               const std::string& decomp_path) {
  auto g = load_graph(graph_path);
  std::istringstream din(read_input(decomp_path));
  auto d = treebal::parse_decomposition(g, din);
  bool ok = true;
  std::string reason;
  if (g.edge_count() == 2 * (g.vertex_count() - 1)) {
    auto check = treebal::validate_double_tree_decomposition(g, d.colour);
    ok = check.ok;
    reason = check.detail;
  } else {
    for (int which = 1; which <= 2 && ok; ++which)
      if (!class_contains_spanning_tree(g, d.colour, which)) {
        ok = false;
        reason = "class " + std::to_string(which) + " does not contain a spanning tree";
      }
  }
  report(opt, "valid", ok ? "1" : "0");
  if (!ok) {
    report(opt, "reason", reason);
    return kExitNo;
  }
  auto rep = treebal::imbalance(g, d.colour);
  report(opt, "imbalance", rep.max_diff);
  report(opt, "argmax_vertex", rep.argmax_vertex);
  return kExitYes;
}

int run_oracle(const Options& opt, const std::string& path, bool want_min, bool want_pbdt,
               bool want_ham, int jobs) {
  auto g = load_graph(path);
  if (want_min) {
    treebal::Decomposition witness;
    auto value = treebal::min_imbalance(g, &witness, jobs);
    if (!value) {
      report(opt, "decomposable", "0");
      return kExitNo;
    }
    report(opt, "min_imbalance", *value);
    treebal::serialize_decomposition(g, witness.colour, std::cout);
    return kExitYes;
  }
  if (want_pbdt) {
    treebal::Decomposition witness;
    bool yes = treebal::pbdt(g, &witness, jobs);
    report(opt, "pbdt", yes ? "1" : "0");
    if (!yes) return kExitNo;
    treebal::serialize_decomposition(g, witness.colour, std::cout);
    return kExitYes;
  }
  if (want_ham) {
    auto pair = treebal::ham_cycle_pair(g);
    report(opt, "ham_pair", pair ? "1" : "0");
    if (!pair) return kExitNo;
    for (int which = 0; which < 2; ++which) {
      const auto& ids = which == 0 ? pair->cycle1 : pair->cycle2;
      auto order = treebal::cycle_vertex_order(g, ids);
      std::ostringstream line;
      for (size_t i = 0; i < order.size(); ++i) line << (i ? " " : "") << order[i];
      report(opt, "cycle" + std::to_string(which + 1) + "_vertices", line.str());
      std::ostringstream eline;
      for (size_t i = 0; i < ids.size(); ++i) eline << (i ? " " : "") << ids[i];
      report(opt, "cycle" + std::to_string(which + 1) + "_edges", eline.str());
    }
    return kExitYes;
  }
  throw CLI::ValidationError("oracle", "pick one of --min-imbalance, --pbdt, --ham-pair");
}

int run_reduce_np(const Options& opt, const std::string& path, int jobs,
                  const std::string& out_prefix) {
  auto g = load_graph(path);
  if (!treebal::is_regular(g, 4)) {
    report(opt, "error", "instance is not 4-regular");
    return kExitError;
  }
  for (int pairing = 0; pairing < treebal::kNumPairings; ++pairing) {
    auto split = treebal::split_vertex(g, pairing);
    if (out_prefix.empty()) {
      report(opt, "pairing", pairing);
      treebal::serialize_graph(split, std::cout);
    } else {
      std::string name = out_prefix + std::to_string(pairing) + ".graph";
      std::ofstream out(name);
      if (!out) throw std::runtime_error("cannot write " + name);
      treebal::serialize_graph(split, out);
      report(opt, "wrote", name);
    }
  }
  auto decision = treebal::decide_via_reduction(g, jobs);
  report(opt, "decision", decision.yes ? "yes" : "no");
  if (!decision.yes) return kExitNo;
  report(opt, "yes_pairing", decision.pairing);
  auto split = treebal::split_vertex(g, decision.pairing);
  auto pair = treebal::map_witness(g, split, decision.witness);
  for (int which = 0; which < 2; ++which) {
    const auto& ids = which == 0 ? pair.cycle1 : pair.cycle2;
    auto order = treebal::cycle_vertex_order(g, ids);
    std::ostringstream line;
    for (size_t i = 0; i < order.size(); ++i) line << (i ? " " : "") << order[i];
    report(opt, "cycle" + std::to_string(which + 1) + "_vertices", line.str());
  }
  return kExitYes;
}

int run_gen(const Options& opt, const std::string& family, int n, int k, unsigned long long seed,
            int extra) {
  (void)opt;
  if (family == "arb") {
    treebal::serialize_digraph(treebal::gen_arborescence_family(n, k), std::cout);
  } else if (family == "strong") {
    treebal::serialize_digraph(treebal::gen_strong_family(n, k), std::cout);
  } else if (family == "random-doubletree") {
    auto g = extra > 0 ? treebal::random_double_tree_plus(n, extra, seed)
                       : treebal::random_double_tree(n, seed);
    treebal::serialize_graph(g, std::cout);
  } else {
    throw CLI::ValidationError("gen", "family must be arb, strong or random-doubletree");
  }
  return kExitYes;
}

int run_certify(const Options& opt, const std::string& path, int arb_root, bool strong, int k) {
  auto d = load_digraph(path);
  std::vector<treebal::ArcPartition> parts;
  if (arb_root > 0)
    parts = treebal::enumerate_arborescence_partitions(d, arb_root, k);
  else if (strong)
    parts = treebal::enumerate_strong_partitions(d, k);
  else
    throw CLI::ValidationError("certify", "pick --arb-root <v> or --strong");
  report(opt, "partitions", static_cast<long long>(parts.size()));
  if (!parts.empty()) {
    auto imb = treebal::out_imbalance(d, parts.front());
    report(opt, "imbalance", imb.value);
    report(opt, "argmax_vertex", imb.vertex);
    if (!opt.porcelain)
      std::cout << (parts.size() == 1 ? "unique" : "not unique") << "; imbalance " << imb.value
                << " at v" << imb.vertex << '\n';
  } else if (!opt.porcelain) {
    std::cout << "no partition\n";
  }
  return parts.size() == 1 ? kExitYes : kExitNo;
}

std::string sixths(long long x6) {
  long long g = std::gcd(x6, 6LL);
  long long num = x6 / g, den = 6 / g;
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

int run_audit(const Options& opt, const std::string& path, int c) {
  auto g = load_graph(path);
  auto packed = treebal::pack_double_tree(g);
  if (!packed.feasible) {
    report(opt, "feasible", "0");
    treebal::serialize_partition(packed.witness, std::cout);
    return kExitNo;
  }
  auto audit = treebal::charge_audit(g, packed.split, c);
  report(opt, "total_charge", sixths(audit.total6));
  report(opt, "min_charge_vertex", audit.min_vertex);
  report(opt, "min_charge", sixths(audit.min_g6));
  for (int v = 1; v <= g.vertex_count(); ++v) {
    std::ostringstream line;
    line << "f " << sixths(audit.f6[v]) << " g " << sixths(audit.g6[v]);
    report(opt, "vertex " + std::to_string(v), line.str());
  }
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced double tree decomposition toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--porcelain", opt.porcelain, "machine-readable key-value output");

  std::string path, decomp_path, out_path, out_prefix, family;
  int c = 4, jobs = 1, n = 0, k = 2, arb_root = 0, extra = 0;
  unsigned long long seed = 1;
  bool trace = false, want_min = false, want_pbdt = false, want_ham = false, strong = false;

  auto* pack = app.add_subcommand("pack", "split a graph into a double tree plus leftover edges");
  pack->add_option("graph", path, "graph file ('-' for stdin)")->required();

  auto* balance = app.add_subcommand("balance", "compute a c-balanced decomposition");
  balance->add_option("graph", path)->required();
  balance->add_option("--c", c, "balance bound (guarantees proven for 4)")
      ->default_val(4)
      ->check(CLI::Range(2, 1000));
  balance->add_flag("--trace", trace, "print the reduction/reconstruction trace");
  balance->add_option("-o,--output", out_path, "write the decomposition to a file");

  auto* verify = app.add_subcommand("verify", "validate a decomposition and report imbalance");
  verify->add_option("graph", path)->required();
  verify->add_option("decomposition", decomp_path)->required();

  auto* oracle = app.add_subcommand("oracle", "exact exponential-time baselines");
  oracle->add_option("graph", path)->required();
  oracle->add_flag("--min-imbalance", want_min, "exact minimum imbalance over all decompositions");
  oracle->add_flag("--pbdt", want_pbdt, "perfectly balanced double tree decision");
  oracle->add_flag("--ham-pair", want_ham, "two edge-disjoint Hamiltonian cycles");
  oracle->add_option("--jobs", jobs, "parallel workers")->default_val(1)->check(CLI::Range(1, 256));

  auto* reduce_np = app.add_subcommand("reduce-np", "split-vertex gadget graphs and decision");
  reduce_np->add_option("graph", path)->required();
  reduce_np->add_option("--jobs", jobs)->default_val(1)->check(CLI::Range(1, 256));
  reduce_np->add_option("--out-prefix", out_prefix, "write gadgets to <prefix><k>.graph");

  auto* gen = app.add_subcommand("gen", "generate family instances");
  gen->add_option("--family", family, "arb | strong | random-doubletree")->required();
  gen->add_option("--n", n, "size parameter")->required();
  gen->add_option("--k", k, "number of classes (directed families)")->default_val(2);
  gen->add_option("--seed", seed, "random seed")->default_val(1);
  gen->add_option("--extra", extra, "extra random edges on top of the double tree")
      ->default_val(0);

  auto* certify = app.add_subcommand("certify", "enumerate directed partitions and certify");
  certify->add_option("digraph", path)->required();
  certify->add_option("--arb-root", arb_root, "arborescence partitions rooted here");
  certify->add_flag("--strong", strong, "spanning strongly connected partitions");
  certify->add_option("--k", k)->default_val(2);

  auto* audit = app.add_subcommand("audit", "discharging charge tables");
  audit->add_option("graph", path)->required();
  audit->add_option("--c", c)->default_val(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help/error; 0 only for --help/--version
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (pack->parsed()) return run_pack(opt, path);
    if (balance->parsed()) return run_balance(opt, path, c, trace, out_path);
    if (verify->parsed()) return run_verify(opt, path, decomp_path);
    if (oracle->parsed()) return run_oracle(opt, path, want_min, want_pbdt, want_ham, jobs);
    if (reduce_np->parsed()) return run_reduce_np(opt, path, jobs, out_prefix);
    if (gen->parsed()) return run_gen(opt, family, n, k, seed, extra);
    if (certify->parsed()) return run_certify(opt, path, arb_root, strong, k);
    if (audit->parsed()) return run_audit(opt, path, c);
  } catch (const treebal::ParseError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitError;
  } catch (const CLI::Error& ex) {
    app.exit(ex);
    return kExitError;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
