#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "specdet/detect.hpp"
#include "specdet/experiments.hpp"
#include "specdet/graph.hpp"
#include "specdet/phase.hpp"

namespace specdet {

inline constexpr int kRecordSchemaVersion = 1;
inline constexpr std::string_view kSoftwareVersion = "0.1.0";

// Graph plus the external node ids; ids[i] names node i.
struct EdgeList {
  Graph graph;
  std::vector<std::string> ids;
};

// "u v" per line, whitespace separated. A line with a single token declares
// a node without edges. Ids are numbered in order of first appearance; '#'
// lines and blank lines are skipped; repeated or reversed pairs collapse.
// Throws Error{ParseError} with the line number.
EdgeList parse_edge_list(std::istream& in);
EdgeList read_edge_list(const std::filesystem::path& path);

// Node declarations first, so reading the text back reproduces the id order
// even for nodes that appear late in the edge list or not at all.
std::string format_edge_list(const Graph& g, std::span<const std::string> ids = {});

// "node_id label" per line. Every id must exist in `edges`; nodes without a
// line get an empty label.
std::vector<std::string> parse_labels(std::istream& in, const EdgeList& edges);
std::vector<std::string> read_labels(const std::filesystem::path& path, const EdgeList& edges);

std::string format_labels(std::span<const std::string> ids, std::span<const int> labels);

// Maps label strings to class ids in order of first appearance. Empty labels
// and any label listed in `unscored` become -1.
struct EncodedLabels {
  Labels ids;
  std::vector<std::string> names;  // names[k] is class k
};
EncodedLabels encode_labels(std::span<const std::string> labels,
                            std::span<const std::string> unscored = {});

// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_double(double x);

std::string format_sweep_csv(const SweepResult& result);

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

SweepConfig parse_sweep_config(const nlohmann::json& doc);
nlohmann::json to_json(const SweepConfig& cfg);

nlohmann::json to_json(const PhaseBounds& b);
PhaseBounds phase_bounds_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ReliabilityVerdict& v);
ReliabilityVerdict verdict_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepResult& r);
SweepResult sweep_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SingularReport& r);
nlohmann::json to_json(const ErReport& r);

// Top-level record written by every CLI command.
nlohmann::json make_record(std::string_view command, const nlohmann::json& config,
                           const nlohmann::json& results);

// Checks the fields every record must carry; throws Error{ParseError}.
void validate_record(const nlohmann::json& record);

std::string dump_json(const nlohmann::json& j);

}  // namespace specdet
