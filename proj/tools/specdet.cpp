// Command-line driver: generate, detect, bounds, sweep, verify.
//
// Exit codes: 0 ok, 2 usage or bad input, 3 generation failure, 4 numerical
// failure, 5 verification failure.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specdet/detect.hpp"
#include "specdet/error.hpp"
#include "specdet/experiments.hpp"
#include "specdet/generators.hpp"
#include "specdet/io.hpp"
#include "specdet/phase.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace specdet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitNumerics = 4;
constexpr int kExitVerification = 5;

constexpr const char* kSeedEnv = "SPECDET_SEED";

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidParams, std::string(kSeedEnv) + " is not an unsigned integer");
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConnectivityFailure: return kExitGeneration;
    case ErrorCode::kConvergenceFailure:
    case ErrorCode::kDisconnectedGraph:
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kEmptyGraph:
    case ErrorCode::kNoAdmissibleSplit:
    case ErrorCode::kInsufficientSpan: return kExitNumerics;
    default: return kExitUsage;
  }
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string model;
  std::size_t n = 0, n1 = 0, n2 = 0, k = 0;
  double q = 0.0, p = 0.0, p1 = 0.0, p2 = 0.0, beta = 0.0;
  std::string block1, block2;
  bool connected = false;
  std::optional<std::uint64_t> seed;
  std::string out, labels_out;
};

int run_generate(const GenerateArgs& a) {
  const Seed seed{a.seed.value_or(default_seed())};
  json config = {{"model", a.model}, {"seed", seed.value}};
  std::optional<LabeledGraph> labeled;
  Graph g;
  if (a.model == "er") {
    config.update({{"n", a.n}, {"q", a.q}, {"connected", a.connected}});
    g = a.connected ? gen_er_connected(a.n, a.q, seed) : gen_er(a.n, a.q, seed);
  } else if (a.model == "sbm") {
    config.update({{"n1", a.n1}, {"n2", a.n2}, {"p1", a.p1}, {"p2", a.p2}, {"p", a.p}});
    labeled = gen_sbm({a.n1, a.n2, a.p1, a.p2, a.p}, seed);
  } else if (a.model == "two-block") {
    if (a.block1.empty() || a.block2.empty()) {
      throw Error(ErrorCode::kInvalidParams, "two-block needs --block1 and --block2 edge lists");
    }
    config.update({{"block1", a.block1}, {"block2", a.block2}, {"p", a.p}});
    labeled = gen_two_block({read_edge_list(a.block1).graph, read_edge_list(a.block2).graph, a.p}, seed);
  } else if (a.model == "ws") {
    config.update({{"n", a.n}, {"k", a.k}, {"beta", a.beta}, {"connected", a.connected}});
    const WsSpec spec{a.n, a.k, a.beta};
    g = a.connected ? gen_ws_connected(spec, seed) : gen_ws(spec, seed);
  } else {
    throw Error(ErrorCode::kInvalidParams, "unknown model '" + a.model + "'");
  }
  if (labeled) g = labeled->graph;

  write_file_atomic(a.out, format_edge_list(g));
  if (!a.labels_out.empty()) {
    if (!labeled) throw Error(ErrorCode::kInvalidParams, "--labels-out needs a block model");
    std::vector<std::string> ids;
    for (Node i = 0; i < g.node_count(); ++i) ids.push_back(std::to_string(i));
    write_file_atomic(a.labels_out, format_labels(ids, labeled->truth));
  }
  return kExitOk;
}

// ---- detect / bounds --------------------------------------------------------

struct GraphInput {
  EdgeList edges;
  std::optional<EncodedLabels> truth;
};

GraphInput load_graph(const std::string& graph, const std::string& labels,
                      const std::vector<std::string>& unscored) {
  GraphInput in{read_edge_list(graph), std::nullopt};
  if (!labels.empty()) {
    const auto raw = read_labels(labels, in.edges);
    in.truth = encode_labels(raw, unscored);
  }
  return in;
}

json round_json(const Graph& g, const BisectionRound& round, const GraphInput& in,
                const SolverOptions& options) {
  const SubgraphIndex sub = induced_subgraph(g, round.target);
  json j = {{"target_size", round.target.size()},
            {"fiedler_value", round.fiedler_value},
            {"split_by_components", round.split_by_components},
            {"local", to_json(round.local)},
            {"communities", round.partition.sizes}};
  if (round.local.communities() == 2) {
    j["verdict"] = to_json(estimate_reliability(sub.local, round.local, options));
  }
  if (in.truth) {
    j["detectability"] = detectability(round.partition.labels, in.truth->ids);
    j["baseline"] = baseline_fraction(in.truth->ids);
  }
  return j;
}

json report_json(const DetectReport& r) {
  json j = {{"partition", to_json(r.partition)},
            {"cut_size", r.partition.cut_edges.size()},
            {"eigenvalue", r.eigenvalue}};
  if (r.detectability) j["detectability"] = *r.detectability;
  if (r.baseline) j["baseline"] = *r.baseline;
  return j;
}

struct DetectArgs {
  std::string graph, labels, method = "spectral", out, partition_out;
  std::vector<std::string> unscored;
  std::size_t rounds = 1;
};

int run_detect(const DetectArgs& a) {
  const SolverOptions options;
  const GraphInput in = load_graph(a.graph, a.labels, a.unscored);
  const Graph& g = in.edges.graph;
  std::span<const int> truth;
  if (in.truth) truth = in.truth->ids;

  json config = {{"graph", a.graph}, {"method", a.method}, {"rounds", a.rounds}};
  if (!a.labels.empty()) config["labels"] = a.labels;
  if (!a.unscored.empty()) config["unscored_labels"] = a.unscored;
  json results = {{"n", g.node_count()}, {"m", g.edge_count()}};

  std::optional<Partition> saved;
  if (a.method == "spectral" || a.method == "both") {
    const DetectReport r = spectral_bisect(g, truth, options);
    results["spectral"] = report_json(r);
    results["spectral"]["verdict"] = to_json(estimate_reliability(g, r.partition, options));
    saved = r.partition;
    if (a.rounds > 1) {
      json rounds = json::array();
      for (const auto& round : recursive_bisect(g, a.rounds, options)) {
        rounds.push_back(round_json(g, round, in, options));
      }
      results["spectral"]["rounds"] = rounds;
    }
  }
  if (a.method == "modularity" || a.method == "both") {
    const DetectReport r = modularity_bisect(g, truth, options);
    results["modularity"] = report_json(r);
    results["modularity"]["verdict"] = to_json(estimate_reliability(g, r.partition, options));
    if (!saved) saved = r.partition;
  }
  if (!results.contains("spectral") && !results.contains("modularity")) {
    throw Error(ErrorCode::kInvalidParams, "unknown method '" + a.method + "'");
  }
  if (in.truth) results["label_classes"] = in.truth->names;

  if (!a.partition_out.empty()) {
    write_file_atomic(a.partition_out, format_labels(in.edges.ids, saved->labels));
  }
  write_file_atomic(a.out, dump_json(make_record("detect", config, results)));
  return kExitOk;
}

struct BoundsArgs {
  std::string graph, partition = "from-detect", partition_file, method = "spectral", out;
  std::size_t rounds = 1;
};

int run_bounds(const BoundsArgs& a) {
  const SolverOptions options;
  const EdgeList edges = read_edge_list(a.graph);
  const Graph& g = edges.graph;
  json config = {{"graph", a.graph}, {"partition", a.partition}};
  json results = {{"n", g.node_count()}, {"m", g.edge_count()}};

  if (a.partition == "from-file") {
    if (a.partition_file.empty()) throw Error(ErrorCode::kInvalidParams, "--partition-file is required");
    config["partition_file"] = a.partition_file;
    const EncodedLabels enc = encode_labels(read_labels(a.partition_file, edges));
    // Integer label files keep their numeric order rather than first appearance.
    Labels labels = enc.ids;
    std::vector<long long> values;
    for (const auto& name : enc.names) {
      long long v = 0;
      const auto res = std::from_chars(name.data(), name.data() + name.size(), v);
      if (res.ec != std::errc{} || res.ptr != name.data() + name.size()) break;
      values.push_back(v);
    }
    if (values.size() == enc.names.size()) {
      std::vector<int> rank(values.size());
      for (std::size_t k = 0; k < values.size(); ++k) {
        rank[k] = static_cast<int>(std::count_if(values.begin(), values.end(),
                                                 [&](long long v) { return v < values[k]; }));
      }
      for (int& l : labels) l = l < 0 ? l : rank[static_cast<std::size_t>(l)];
    }
    for (int l : labels) {
      if (l < 0) throw Error(ErrorCode::kInvalidParams, "partition file must label every node");
    }
    const Partition part = make_partition(g, labels, Method::kOracle);
    if (part.communities() != 2) throw Error(ErrorCode::kInvalidParams, "partition must have two classes");
    results["verdict"] = to_json(estimate_reliability(g, part, options));
  } else if (a.partition == "from-detect") {
    config["method"] = a.method;
    config["rounds"] = a.rounds;
    DetectReport r;
    if (a.method == "spectral") {
      r = spectral_bisect(g, {}, options);
    } else if (a.method == "modularity") {
      r = modularity_bisect(g, {}, options);
    } else {
      throw Error(ErrorCode::kInvalidParams, "unknown method '" + a.method + "'");
    }
    results["cut_size"] = r.partition.cut_edges.size();
    results["verdict"] = to_json(estimate_reliability(g, r.partition, options));
    if (a.rounds > 1) {
      json rounds = json::array();
      const GraphInput none{edges, std::nullopt};
      for (const auto& round : recursive_bisect(g, a.rounds, options)) {
        rounds.push_back(round_json(g, round, none, options));
      }
      results["rounds"] = rounds;
    }
  } else {
    throw Error(ErrorCode::kInvalidParams, "--partition must be from-detect or from-file");
  }
  write_file_atomic(a.out, dump_json(make_record("bounds", config, results)));
  return kExitOk;
}

// ---- sweep --------------------------------------------------------------------

struct SweepArgs {
  std::string config, out;
};

int run_sweep_cmd(const SweepArgs& a) {
  json doc;
  try {
    doc = json::parse(read_file(a.config));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed sweep config: ") + e.what());
  }
  const SweepConfig cfg = parse_sweep_config(doc);
  const SweepResult result = run_sweep(cfg);
  write_file_atomic(a.out + ".csv", format_sweep_csv(result));
  write_file_atomic(a.out + ".json", dump_json(make_record("sweep", to_json(cfg), to_json(result))));
  return kExitOk;
}

// ---- verify -------------------------------------------------------------------

struct VerifyArgs {
  std::string check = "all", out;
  std::vector<std::size_t> ladder{200, 500, 1000};
  double p = 0.1, q = 0.2;
  double sigma_tol = 0.02, sigma2_max = 0.05, er_tol = 0.03;
  std::size_t trials = 50;
  std::optional<std::uint64_t> seed;
};

int run_verify(const VerifyArgs& a) {
  const Seed seed{a.seed.value_or(default_seed())};
  const bool latala = a.check == "latala" || a.check == "all";
  const bool talagrand = a.check == "talagrand" || a.check == "all";
  const bool er = a.check == "er-lambda2" || a.check == "all";
  if (!latala && !talagrand && !er) {
    throw Error(ErrorCode::kInvalidParams, "unknown check '" + a.check + "'");
  }
  json config = {{"check", a.check}, {"ladder", a.ladder}, {"p", a.p},     {"q", a.q},
                 {"trials", a.trials}, {"seed", seed.value}, {"sigma_tol", a.sigma_tol},
                 {"sigma2_max", a.sigma2_max}, {"er_tol", a.er_tol}};
  json results = json::object();
  json checks = json::object();
  bool pass = true;

  if (latala || talagrand) {
    std::vector<std::pair<std::size_t, std::size_t>> ladder;
    for (std::size_t n : a.ladder) ladder.emplace_back(n, n);
    const SingularReport rep = check_singular_limits(ladder, a.p, a.trials, seed.stream(0));
    results["singular"] = to_json(rep);
    const SingularRow& last = rep.rows.back();
    if (latala) {
      const bool ok = rep.delta_decreasing.value_or(true);
      checks["latala"] = ok;
      pass = pass && ok;
    }
    if (talagrand) {
      const bool ok = std::abs(last.mean_sigma1 - a.p) <= a.sigma_tol &&
                      last.mean_sigma2 <= a.sigma2_max;
      checks["talagrand"] = ok;
      pass = pass && ok;
    }
  }
  if (er) {
    const ErReport rep = check_er_lambda2(a.ladder, a.q, a.trials, seed.stream(1));
    results["er_lambda2"] = to_json(rep);
    const bool ok = rep.rows.back().deviation <= a.er_tol && rep.deviation_decreasing.value_or(true);
    checks["er-lambda2"] = ok;
    pass = pass && ok;
  }
  results["checks"] = checks;
  results["pass"] = pass;
  write_file_atomic(a.out, dump_json(make_record("verify", config, results)));
  if (!pass) {
    std::cerr << "verify: concentration check failed: " << checks.dump() << "\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral community detection with phase-transition diagnostics"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Draw a random graph and write it as an edge list");
  generate->add_option("--model", gen.model, "er | sbm | two-block | ws")
      ->required()
      ->check(CLI::IsMember({"er", "sbm", "two-block", "ws"}));
  generate->add_option("--n", gen.n, "node count (er, ws)");
  generate->add_option("--q", gen.q, "edge probability (er)");
  generate->add_option("--n1", gen.n1, "first block size (sbm)");
  generate->add_option("--n2", gen.n2, "second block size (sbm)");
  generate->add_option("--p1", gen.p1, "first block probability (sbm)");
  generate->add_option("--p2", gen.p2, "second block probability (sbm)");
  generate->add_option("--p", gen.p, "cross-block probability (sbm, two-block)");
  generate->add_option("--k", gen.k, "lattice degree (ws)");
  generate->add_option("--beta", gen.beta, "rewiring probability (ws)");
  generate->add_option("--block1", gen.block1, "first block edge list (two-block)");
  generate->add_option("--block2", gen.block2, "second block edge list (two-block)");
  generate->add_flag("--connected", gen.connected, "resample until connected (er, ws)");
  generate->add_option("--seed", gen.seed, std::string("master seed; default from ") + kSeedEnv);
  generate->add_option("--out", gen.out, "edge list to write")->required();
  generate->add_option("--labels-out", gen.labels_out, "truth labels to write (block models)");

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Bisect a graph and score the result");
  detect->add_option("--graph", det.graph, "edge list")->required()->check(CLI::ExistingFile);
  detect->add_option("--method", det.method, "spectral | modularity | both")
      ->check(CLI::IsMember({"spectral", "modularity", "both"}));
  detect->add_option("--labels", det.labels, "truth labels")->check(CLI::ExistingFile);
  detect->add_option("--unscored-label", det.unscored,
                     "label value counted as wrong whatever its assignment (repeatable)");
  detect->add_option("--rounds", det.rounds, "spectral rounds, splitting the largest community each time")
      ->check(CLI::PositiveNumber);
  detect->add_option("--partition-out", det.partition_out, "write the first bisection as a label file");
  detect->add_option("--out", det.out, "JSON record to write")->required();

  BoundsArgs bnd;
  auto* bounds_cmd = app.add_subcommand("bounds", "Empirical phase-transition estimates for a bisection");
  bounds_cmd->add_option("--graph", bnd.graph, "edge list")->required()->check(CLI::ExistingFile);
  bounds_cmd->add_option("--partition", bnd.partition, "from-detect | from-file")
      ->check(CLI::IsMember({"from-detect", "from-file"}));
  bounds_cmd->add_option("--partition-file", bnd.partition_file, "label file with two classes")
      ->check(CLI::ExistingFile);
  bounds_cmd->add_option("--method", bnd.method, "detector for from-detect")
      ->check(CLI::IsMember({"spectral", "modularity"}));
  bounds_cmd->add_option("--rounds", bnd.rounds, "recursive spectral rounds")->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--out", bnd.out, "JSON record to write")->required();

  SweepArgs swp;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over the cross-block probability");
  sweep->add_option("--config", swp.config, "sweep config JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", swp.out, "output prefix; writes <prefix>.csv and <prefix>.json")->required();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Concentration checks along a size ladder");
  verify->add_option("--check", ver.check, "latala | talagrand | er-lambda2 | all")
      ->check(CLI::IsMember({"latala", "talagrand", "er-lambda2", "all"}));
  verify->add_option("--ladder", ver.ladder, "sizes, strictly increasing")->delimiter(',');
  verify->add_option("--p", ver.p, "Bernoulli probability of the cross block");
  verify->add_option("--q", ver.q, "Erdos-Renyi probability");
  verify->add_option("--trials", ver.trials, "trials per size")->check(CLI::PositiveNumber);
  verify->add_option("--sigma-tol", ver.sigma_tol, "allowed |sigma_1 - p| at the largest size");
  verify->add_option("--sigma2-max", ver.sigma2_max, "allowed sigma_2 at the largest size");
  verify->add_option("--er-tol", ver.er_tol, "allowed |lambda_2/n - q| at the largest size");
  verify->add_option("--seed", ver.seed, std::string("master seed; default from ") + kSeedEnv);
  verify->add_option("--out", ver.out, "JSON record to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return run_generate(gen);
    if (detect->parsed()) return run_detect(det);
    if (bounds_cmd->parsed()) return run_bounds(bnd);
    if (sweep->parsed()) return run_sweep_cmd(swp);
    if (verify->parsed()) return run_verify(ver);
  } catch (const Error& e) {
    std::cerr << "specdet: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "specdet: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
