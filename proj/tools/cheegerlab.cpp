// Command-line front end: batch runs, schema, generators, one-off
// certificates and partitions.

#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cheeger/errors.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/graph_io.hpp"
#include "cheeger/harness/config.hpp"
#include "cheeger/harness/runner.hpp"
#include "cheeger/harness/suites.hpp"
#include "cheeger/pagerank.hpp"
#include "cheeger/partitioner.hpp"
#include "cheeger/spectral.hpp"
#include "cheeger/walks.hpp"

namespace {

using namespace cheeger;
using namespace cheeger::harness;
using json = nlohmann::ordered_json;

bool looks_numeric(const std::string& s) {
  double d = 0.0;
  std::istringstream in(s);
  in >> d;
  return !s.empty() && in && in.peek() == std::char_traits<char>::eof();
}

// Validates key=value tokens through the config grammar so the CLI and the
// config file accept exactly the same parameters.
std::map<std::string, Scalar> parse_params(const std::string& generator,
                                           const std::vector<std::string>& tokens,
                                           std::uint64_t& seed) {
  std::string text = "suites = []\n[[family]]\ngenerator = \"" + generator + "\"\n";
  bool have_seed = false;
  for (const std::string& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + tok + "'", 0);
    const std::string key = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    if (key == "seed") {
      seed = std::stoull(value);
      have_seed = true;
      continue;
    }
    const bool bare = looks_numeric(value) || value == "true" || value == "false";
    text += key + " = " + (bare ? value : json(value).dump()) + "\n";
  }
  text += "seeds = [" + std::to_string(have_seed ? seed : 0) + "]\n";
  ExperimentConfig config;
  try {
    config = parse_config(text);
  } catch (const ConfigError& e) {
    // Line numbers refer to the synthesized text; drop them.
    const std::string msg = e.what();
    throw ConfigError(msg.substr(msg.find(": ") + 2), 0);
  }
  std::map<std::string, Scalar> params;
  for (const auto& [key, values] : config.families.front().params) {
    if (values.size() != 1) throw ConfigError("'" + key + "' needs a single value", 0);
    params[key] = values.front();
  }
  return params;
}

Instance load_instance(const std::string& path, bool normalize) {
  std::map<std::string, Scalar> params = {{"path", path}};
  if (normalize) params["normalize"] = true;
  return make_instance("file", params, 0);
}

Vertex resolve_vertex(const Instance& inst, const std::string& name) {
  for (std::size_t i = 0; i < inst.labels.size(); ++i) {
    if (inst.labels[i] == name) return static_cast<Vertex>(i);
  }
  throw PreconditionError("no vertex labelled '" + name + "'");
}

VertexSet resolve_set(const Instance& inst, const std::string& list) {
  std::vector<Vertex> members;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) members.push_back(resolve_vertex(inst, item));
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return VertexSet(inst.graph.num_vertices(), members);
}

json describe(const Instance& inst, const ExpansionStats& s) {
  std::vector<std::string> labels;
  for (const Vertex v : s.set.members()) labels.push_back(inst.labels[v]);
  return {{"size", s.set.size()},
          {"phi", s.phi},
          {"boundary_weight", s.boundary_weight},
          {"phi_v", s.phi_v},
          {"members", labels}};
}

// Default size target: the largest T >= 2 with 3 T ln T <= n.
std::size_t default_size_target(std::size_t n) {
  std::size_t best = 2;
  for (std::size_t t = 2; 2 * t <= n; ++t) {
    if (3.0 * t * std::log(static_cast<double>(t)) <= static_cast<double>(n)) best = t;
  }
  return best;
}

struct PartitionArgs {
  std::string method;
  std::string graph;
  bool normalize = false;
  std::string seed_vertex;
  std::optional<double> phi_target;
  double epsilon = 0.5;
  std::optional<std::size_t> size_target;
  std::string mode;
};

int do_partition(const PartitionArgs& a) {
  const Instance inst = load_instance(a.graph, a.normalize);
  const WeightedGraph& g = inst.graph;
  const std::size_t n = g.num_vertices();
  const Vertex s = a.seed_vertex.empty() ? 0 : resolve_vertex(inst, a.seed_vertex);
  const std::size_t target = a.size_target.value_or(default_size_target(n));
  json out = {{"method", a.method}, {"n", n}};

  if (a.method == "spectral") {
    const EigenPair pair = second_eigenpair(g);
    out["lambda2"] = pair.value;
    out["set"] = describe(inst, sweep_cut(g, pair.vector).best);
  } else if (a.method == "pagerank") {
    const PagerankMode mode = a.mode == "push" ? PagerankMode::kPush : PagerankMode::kExact;
    out["mode"] = mode == PagerankMode::kPush ? "push" : "exact";
    out["seed_vertex"] = inst.labels[s];
    out["size_target"] = target;
    std::vector<double> grid;
    if (a.phi_target) {
      grid.push_back(*a.phi_target);
    } else {
      // alpha = 3 phi_target with phi_target = 2^-j
      grid = phi_target_grid(n, 1.0);
      out["grid_search"] = true;
    }
    std::optional<PagerankPartitionResult> best;
    json tried = json::array();
    for (const double phi : grid) {
      PagerankPartitionResult res = pagerank_partition(g, s, phi, target, mode);
      tried.push_back({{"phi_target", phi}, {"alpha", res.alpha}, {"phi", res.best.phi}});
      if (!best || res.best.phi < best->best.phi) best = std::move(res);
    }
    if (grid.size() > 1) out["grid"] = tried;
    out["alpha"] = best->alpha;
    out["size_cap"] = best->size_cap;
    out["set"] = describe(inst, best->best);
  } else {
    const WalkMode mode = a.mode == "truncated" ? WalkMode::kTruncated : WalkMode::kExact;
    out["mode"] = mode == WalkMode::kTruncated ? "truncated" : "exact";
    out["seed_vertex"] = inst.labels[s];
    out["size_target"] = target;
    out["epsilon"] = a.epsilon;
    std::vector<double> grid;
    if (a.phi_target) {
      grid.push_back(*a.phi_target);
    } else {
      grid = phi_target_grid(n, 0.25);
      out["grid_search"] = true;
    }
    std::optional<WalkPartitionResult> best;
    json tried = json::array();
    for (const double phi : grid) {
      WalkPartitionResult res = walk_partition(g, s, phi, target, a.epsilon, mode);
      tried.push_back({{"phi_target", phi}, {"steps", res.steps}, {"phi", res.best.phi}});
      if (!best || res.best.phi < best->best.phi) best = std::move(res);
    }
    if (grid.size() > 1) out["grid"] = tried;
    out["steps"] = best->steps;
    out["support_cap"] = best->support_cap;
    out["set"] = describe(inst, best->best);
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph partitioning laboratory: certificates, local algorithms, batch runs."};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t workers = 0;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
  run_cmd->add_option("config", config_path, "Config file")->required();
  run_cmd->add_option("--out", out_dir, "Override the output directory");
  run_cmd->add_option("--workers", workers, "Worker threads (overrides the env var and config)");

  app.add_subcommand("schema", "Print the report JSON schema and CSV column contracts");

  std::string gen_family, gen_output;
  std::vector<std::string> gen_params;
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated graph");
  gen_cmd->add_option("family", gen_family, "Generator name")->required();
  gen_cmd->add_option("params", gen_params, "key=value parameters (seed=... for planted)");
  gen_cmd->add_option("-o,--output", gen_output, "Output file")->required();

  std::string cert_suite, cert_graph, cert_set;
  bool cert_normalize = false;
  std::uint64_t cert_seed = 0;
  auto* cert_cmd = app.add_subcommand("certify", "Run one suite on a graph file");
  cert_cmd->add_option("suite", cert_suite, "Suite name")->required();
  cert_cmd->add_option("-g,--graph", cert_graph, "Graph file")->required();
  cert_cmd->add_flag("--normalize", cert_normalize, "Rebalance to unit degree on load");
  cert_cmd->add_option("--seed", cert_seed, "Seed for sampled checks");
  cert_cmd->add_option("--set", cert_set, "Comma-separated target set (file labels)");

  PartitionArgs part;
  auto* part_cmd = app.add_subcommand("partition", "Find a sparse cut");
  part_cmd->add_option("method", part.method, "spectral, pagerank or walk")
      ->required()
      ->check(CLI::IsMember({"spectral", "pagerank", "walk"}));
  part_cmd->add_option("-g,--graph", part.graph, "Graph file")->required();
  part_cmd->add_flag("--normalize", part.normalize, "Rebalance to unit degree on load");
  part_cmd->add_option("--seed-vertex", part.seed_vertex, "Seed vertex label");
  part_cmd->add_option("--phi-target", part.phi_target, "Estimate of phi(S); grid search when absent");
  part_cmd->add_option("--epsilon", part.epsilon, "Walk size exponent")->check(CLI::Range(1e-9, 1.0));
  part_cmd->add_option("--size-target", part.size_target, "Estimate of |S|");
  part_cmd->add_option("--mode", part.mode, "exact, push (pagerank) or truncated (walk)")
      ->check(CLI::IsMember({"exact", "push", "truncated"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      RunOptions opts;
      if (!out_dir.empty()) opts.output_dir = out_dir;
      if (workers > 0) opts.workers = workers;
      return run(config_path, std::cerr, opts);
    }
    if (app.got_subcommand("schema")) {
      std::cout << report_schema() << '\n';
      return 0;
    }
    if (gen_cmd->parsed()) {
      std::uint64_t seed = 0;
      const auto params = parse_params(gen_family, gen_params, seed);
      save_graph(gen_output, make_instance(gen_family, params, seed).graph);
      return 0;
    }
    if (cert_cmd->parsed()) {
      if (std::find(suite_names().begin(), suite_names().end(), cert_suite) == suite_names().end()) {
        std::cerr << "unknown suite '" << cert_suite << "'\n";
        return 2;
      }
      Instance inst = load_instance(cert_graph, cert_normalize);
      inst.seed = cert_seed;
      if (!cert_set.empty()) inst.planted = resolve_set(inst, cert_set);
      const SuiteOutput out = run_suite(cert_suite, inst, Tolerances{});
      if (!out.skipped.empty()) std::cerr << "skipped: " << out.skipped << '\n';
      TaskRecord rec;
      rec.family = inst.family();
      rec.n = inst.graph.num_vertices();
      rec.seed = cert_seed;
      rec.suite = cert_suite;
      int code = 0;
      for (const CertificateReport& r : out.reports) {
        std::cout << report_line(rec, inst, r) << '\n';
        if (r.gating && !r.pass) {
          std::cerr << "FAIL " << r.theorem_id << ": " << r.counterexample << '\n';
          code = 1;
        }
      }
      return code;
    }
    if (part_cmd->parsed()) return do_partition(part);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const GraphParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
