#include "specdet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unistd.h>

#include "specdet/error.hpp"

namespace specdet {

using nlohmann::json;

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

bool skip_line(const std::vector<std::string>& toks) {
  return toks.empty() || toks.front().front() == '#';
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad field '") + key + "': " + e.what());
  }
}

Region region_from(std::string_view s) {
  for (Region r : {Region::kReliable, Region::kIntermediate, Region::kUnreliable}) {
    if (to_string(r) == s) return r;
  }
  throw Error(ErrorCode::kParseError, "unknown region '" + std::string(s) + "'");
}

Method method_from(std::string_view s) {
  for (Method m : {Method::kSpectral, Method::kModularity, Method::kOracle, Method::kBaseline}) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorCode::kParseError, "unknown method '" + std::string(s) + "'");
}

std::vector<double> grid_from(const json& g) {
  if (g.is_array()) return g.get<std::vector<double>>();
  if (g.is_object()) {
    const double start = require<double>(g, "start");
    const double stop = require<double>(g, "stop");
    const double step = require<double>(g, "step");
    if (!(step > 0.0) || stop < start) throw Error(ErrorCode::kParseError, "bad grid range");
    const auto count = static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
      // Snap to 12 decimals so 0.02 * 3 prints as 0.06.
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
  }
  throw Error(ErrorCode::kParseError, "grid must be an array or a {start, stop, step} object");
}

WsSpec ws_from(const json& j) {
  return {require<std::size_t>(j, "n"), require<std::size_t>(j, "k"), require<double>(j, "beta")};
}

json ws_to(const WsSpec& ws) { return {{"n", ws.n}, {"k", ws.k}, {"beta", ws.beta}}; }

}  // namespace

EdgeList parse_edge_list(std::istream& in) {
  std::unordered_map<std::string, Node> index;
  EdgeList out;
  std::vector<Edge> edges;
  auto id_of = [&](const std::string& name) {
    auto [it, fresh] = index.emplace(name, out.ids.size());
    if (fresh) out.ids.push_back(name);
    return it->second;
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokens_of(line);
    if (skip_line(toks)) continue;
    if (toks.size() == 1) {
      id_of(toks[0]);
      continue;
    }
    if (toks.size() != 2) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(lineno) + ": expected 'u v', got " +
                      std::to_string(toks.size()) + " fields");
    }
    const Node u = id_of(toks[0]);
    const Node v = id_of(toks[1]);
    if (u == v) {
      throw Error(ErrorCode::kSelfLoop, "line " + std::to_string(lineno) + ": self-loop on " + toks[0]);
    }
    edges.emplace_back(u, v);
  }
  out.graph = build_graph(out.ids.size(), edges);
  return out;
}

EdgeList read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_edge_list(in);
}

std::string format_edge_list(const Graph& g, std::span<const std::string> ids) {
  if (!ids.empty() && ids.size() != g.node_count()) {
    throw Error(ErrorCode::kLengthMismatch, "id list does not match the node count");
  }
  auto name = [&](Node i) { return ids.empty() ? std::to_string(i) : ids[i]; };
  std::string out;
  out += "# nodes " + std::to_string(g.node_count()) + " edges " + std::to_string(g.edge_count()) + "\n";
  for (Node i = 0; i < g.node_count(); ++i) out += name(i) + "\n";
  for (const auto& [u, v] : g.edges()) out += name(u) + " " + name(v) + "\n";
  return out;
}

std::vector<std::string> parse_labels(std::istream& in, const EdgeList& edges) {
  std::unordered_map<std::string, Node> index;
  for (Node i = 0; i < edges.ids.size(); ++i) index.emplace(edges.ids[i], i);
  std::vector<std::string> out(edges.ids.size());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokens_of(line);
    if (skip_line(toks)) continue;
    if (toks.size() != 2) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(lineno) + ": expected 'node_id label'");
    }
    const auto it = index.find(toks[0]);
    if (it == index.end()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(lineno) + ": unknown node '" + toks[0] + "'");
    }
    out[it->second] = toks[1];
  }
  return out;
}

std::vector<std::string> read_labels(const std::filesystem::path& path, const EdgeList& edges) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_labels(in, edges);
}

std::string format_labels(std::span<const std::string> ids, std::span<const int> labels) {
  if (ids.size() != labels.size()) throw Error(ErrorCode::kLengthMismatch, "ids and labels differ in length");
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += ids[i] + " " + std::to_string(labels[i]) + "\n";
  return out;
}

EncodedLabels encode_labels(std::span<const std::string> labels,
                            std::span<const std::string> unscored) {
  EncodedLabels out;
  std::unordered_map<std::string, int> index;
  for (const auto& label : labels) {
    const bool skip = label.empty() ||
                      std::find(unscored.begin(), unscored.end(), label) != unscored.end();
    if (skip) {
      out.ids.push_back(-1);
      continue;
    }
    auto [it, fresh] = index.emplace(label, static_cast<int>(out.names.size()));
    if (fresh) out.names.push_back(label);
    out.ids.push_back(it->second);
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_sweep_csv(const SweepResult& result) {
  std::string out = "p,mean_lambda2_over_n,stderr,detect_spec,detect_mod,block_sum_abs\n";
  for (const auto& pt : result.points) {
    out += format_double(pt.p) + "," + format_double(pt.mean_lambda2_over_n) + "," +
           format_double(pt.stderr_lambda2_over_n) + "," + format_double(pt.detect_spectral) + "," +
           format_double(pt.detect_modularity) + "," + format_double(pt.block_sum_abs) + "\n";
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIoError, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepConfig parse_sweep_config(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "sweep config must be a JSON object");
  SweepConfig cfg;
  const auto model = require<std::string>(doc, "model");
  if (model == "sbm") {
    cfg.blocks = SbmBlocks{require<std::size_t>(doc, "n1"), require<std::size_t>(doc, "n2"),
                           require<double>(doc, "p1"), require<double>(doc, "p2")};
  } else if (model == "ws") {
    if (!doc.contains("first") || !doc.contains("second")) {
      throw Error(ErrorCode::kParseError, "ws config needs 'first' and 'second' blocks");
    }
    cfg.blocks = WsBlocks{ws_from(doc.at("first")), ws_from(doc.at("second"))};
  } else {
    throw Error(ErrorCode::kParseError, "unknown model '" + model + "'");
  }
  if (!doc.contains("grid")) throw Error(ErrorCode::kParseError, "missing field 'grid'");
  cfg.grid = grid_from(doc.at("grid"));
  cfg.trials = doc.value("trials", std::size_t{100});
  cfg.seed = Seed{doc.value("seed", std::uint64_t{0})};
  cfg.modularity = doc.value("modularity", true);
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return cfg;
}

json to_json(const SweepConfig& cfg) {
  json j;
  if (const auto* sbm = std::get_if<SbmBlocks>(&cfg.blocks)) {
    j = {{"model", "sbm"}, {"n1", sbm->n1}, {"n2", sbm->n2}, {"p1", sbm->p1}, {"p2", sbm->p2}};
  } else {
    const auto& ws = std::get<WsBlocks>(cfg.blocks);
    j = {{"model", "ws"}, {"first", ws_to(ws.first)}, {"second", ws_to(ws.second)}};
  }
  j["grid"] = cfg.grid;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed.value;
  j["modularity"] = cfg.modularity;
  return j;
}

json to_json(const PhaseBounds& b) {
  json j = {{"p_lb", b.p_lb},           {"p_ub", b.p_ub}, {"c_star", b.c_star},
            {"lambda2_1", b.lambda2_1}, {"lambda2_2", b.lambda2_2},
            {"n1", b.n1},               {"n2", b.n2}};
  j["p_star"] = b.p_star ? json(*b.p_star) : json(nullptr);
  return j;
}

PhaseBounds phase_bounds_from_json(const json& j) {
  PhaseBounds b;
  b.p_lb = require<double>(j, "p_lb");
  b.p_ub = require<double>(j, "p_ub");
  b.c_star = require<double>(j, "c_star");
  b.lambda2_1 = require<double>(j, "lambda2_1");
  b.lambda2_2 = require<double>(j, "lambda2_2");
  b.n1 = require<std::size_t>(j, "n1");
  b.n2 = require<std::size_t>(j, "n2");
  if (j.contains("p_star") && !j.at("p_star").is_null()) b.p_star = j.at("p_star").get<double>();
  return b;
}

json to_json(const ReliabilityVerdict& v) {
  return {{"p_hat", v.p_hat},
          {"cut", v.cut},
          {"bounds", to_json(v.bounds)},
          {"region", std::string(to_string(v.region))},
          {"disconnected_subnetwork", v.disconnected_subnetwork}};
}

ReliabilityVerdict verdict_from_json(const json& j) {
  ReliabilityVerdict v;
  v.p_hat = require<double>(j, "p_hat");
  v.cut = require<std::size_t>(j, "cut");
  v.bounds = phase_bounds_from_json(j.at("bounds"));
  v.region = region_from(require<std::string>(j, "region"));
  v.disconnected_subnetwork = require<bool>(j, "disconnected_subnetwork");
  return v;
}

json to_json(const Partition& p) {
  json cut = json::array();
  for (const auto& [u, v] : p.cut_edges) cut.push_back({u, v});
  return {{"labels", p.labels},
          {"sizes", p.sizes},
          {"cut_edges", cut},
          {"cut_size", p.cut_edges.size()},
          {"method", std::string(to_string(p.method))}};
}

Partition partition_from_json(const json& j) {
  Partition p;
  p.labels = require<Labels>(j, "labels");
  p.sizes = require<std::vector<std::size_t>>(j, "sizes");
  for (const auto& e : j.at("cut_edges")) p.cut_edges.emplace_back(e.at(0).get<Node>(), e.at(1).get<Node>());
  p.method = method_from(require<std::string>(j, "method"));
  return p;
}

json to_json(const SweepResult& r) {
  json points = json::array();
  for (const auto& pt : r.points) {
    points.push_back({{"p", pt.p},
                      {"mean_lambda2_over_n", number_or_null(pt.mean_lambda2_over_n)},
                      {"stderr", number_or_null(pt.stderr_lambda2_over_n)},
                      {"detect_spec", number_or_null(pt.detect_spectral)},
                      {"detect_mod", number_or_null(pt.detect_modularity)},
                      {"block_sum_abs", number_or_null(pt.block_sum_abs)},
                      {"theory_case1", pt.case1},
                      {"theory_case2", pt.case2},
                      {"trials", pt.trials}});
  }
  json j = {{"points", points}, {"c_star", r.c_star}, {"failed_trials", r.failed_trials}};
  if (r.breakpoint) {
    j["breakpoint"] = {{"c_hat", r.breakpoint->c_hat},
                       {"breakpoint", r.breakpoint->breakpoint},
                       {"theory", r.breakpoint->theory},
                       {"sse", r.breakpoint->sse}};
  } else {
    j["breakpoint"] = {{"error", r.breakpoint_error}};
  }
  j["detectability_midpoint"] =
      r.detectability_midpoint ? json(*r.detectability_midpoint) : json(nullptr);
  return j;
}

SweepResult sweep_result_from_json(const json& j) {
  SweepResult r;
  for (const auto& pj : j.at("points")) {
    SweepPoint pt;
    pt.p = require<double>(pj, "p");
    pt.mean_lambda2_over_n = number_from(pj.at("mean_lambda2_over_n"));
    pt.stderr_lambda2_over_n = number_from(pj.at("stderr"));
    pt.detect_spectral = number_from(pj.at("detect_spec"));
    pt.detect_modularity = number_from(pj.at("detect_mod"));
    pt.block_sum_abs = number_from(pj.at("block_sum_abs"));
    pt.case1 = require<double>(pj, "theory_case1");
    pt.case2 = require<double>(pj, "theory_case2");
    pt.trials = require<std::size_t>(pj, "trials");
    r.points.push_back(pt);
  }
  r.c_star = require<double>(j, "c_star");
  r.failed_trials = require<std::size_t>(j, "failed_trials");
  const json& b = j.at("breakpoint");
  if (b.contains("breakpoint")) {
    r.breakpoint = BreakpointFit{require<double>(b, "c_hat"), require<double>(b, "breakpoint"),
                                 require<double>(b, "theory"), require<double>(b, "sse")};
  } else {
    r.breakpoint_error = require<std::string>(b, "error");
  }
  if (j.contains("detectability_midpoint") && !j.at("detectability_midpoint").is_null()) {
    r.detectability_midpoint = j.at("detectability_midpoint").get<double>();
  }
  return r;
}

json to_json(const SingularReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n1", row.n1},
                    {"n2", row.n2},
                    {"trials", row.trials},
                    {"mean_sigma1", row.mean_sigma1},
                    {"mean_sigma2", row.mean_sigma2},
                    {"mean_delta_sigma1", row.mean_delta_sigma1}});
  }
  auto flag = [](const std::optional<bool>& f) { return f ? json(*f) : json(nullptr); };
  return {{"p", r.p},
          {"targets", {{"sigma1", r.p}, {"sigma2", 0.0}, {"delta_sigma1", 0.0}}},
          {"rows", rows},
          {"delta_decreasing", flag(r.delta_decreasing)},
          {"sigma2_decreasing", flag(r.sigma2_decreasing)},
          {"sigma1_approaching", flag(r.sigma1_approaching)}};
}

json to_json(const ErReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"trials", row.trials},
                    {"mean_lambda2_over_n", row.mean_lambda2_over_n},
                    {"stderr", row.stderr_lambda2_over_n},
                    {"deviation", row.deviation}});
  }
  return {{"q", r.q},
          {"target", r.q},
          {"rows", rows},
          {"deviation_decreasing",
           r.deviation_decreasing ? json(*r.deviation_decreasing) : json(nullptr)}};
}

json make_record(std::string_view command, const json& config, const json& results) {
  return {{"schema_version", kRecordSchemaVersion},
          {"software", {{"name", "specdet"}, {"version", std::string(kSoftwareVersion)}}},
          {"command", std::string(command)},
          {"config", config},
          {"results", results}};
}

void validate_record(const json& record) {
  if (!record.is_object()) throw Error(ErrorCode::kParseError, "record must be an object");
  if (require<int>(record, "schema_version") != kRecordSchemaVersion) {
    throw Error(ErrorCode::kParseError, "unsupported schema version");
  }
  const json& sw = record.at("software");
  require<std::string>(sw, "name");
  require<std::string>(sw, "version");
  require<std::string>(record, "command");
  if (!record.contains("config") || !record.at("config").is_object()) {
    throw Error(ErrorCode::kParseError, "record needs a 'config' object");
  }
  if (!record.contains("results") || !record.at("results").is_object()) {
    throw Error(ErrorCode::kParseError, "record needs a 'results' object");
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace specdet
