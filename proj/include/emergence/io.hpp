// File-format codecs and report helpers: CSV for matrices, distributions,
// partitions, edge lists, communities and traces; JSON for factorized systems
// and atom tables. Probabilities are printed with full round-trip precision
// so emitted files parse back bit-exact.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "emergence/coarse.hpp"
#include "emergence/network.hpp"
#include "emergence/phiid.hpp"
#include "emergence/prob.hpp"
#include "emergence/walk.hpp"

namespace emergence {

inline constexpr const char* kToolName = "emergence";
inline constexpr const char* kToolVersion = "0.1.0";

// %.17g -- enough digits to round-trip any double.
std::string format_g17(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Content fingerprint of raw bytes, "fnv1a64:<16 hex digits>".
std::string digest_bytes(const std::string& bytes);
std::string digest_file(const std::string& path);

// --- CSV codecs ---------------------------------------------------------------
// All CSV parsers accept an optional first header line and report malformed
// cells with their 1-based line number.

TransitionMatrix parse_tpm_csv(const std::string& text);
std::string tpm_to_csv(const TransitionMatrix& w, bool header = true);

ProbVector parse_prob_csv(const std::string& text);
std::string prob_to_csv(const ProbVector& p, bool header = true);

// Two columns micro_label,macro_label; every micro label exactly once.
Partition parse_partition_csv(const std::string& text,
                              const std::vector<std::string>& micro_labels);
std::string partition_to_csv(const Partition& p);

// Rows src,dst[,weight]; missing weight defaults to 1. Nodes are ordered
// numerically when every label is an integer, lexicographically otherwise.
// With `undirected`, every row adds both directed edges.
WeightedGraph parse_edge_list_csv(const std::string& text, bool undirected);

// Rows node,community; every graph node exactly once.
CommunityAssignment parse_communities_csv(const std::string& text,
                                          const std::vector<std::string>& node_labels);
std::string communities_to_csv(const CommunityAssignment& c,
                               const std::vector<std::string>& node_labels);

// Columns t,state,e_micro,e_macro,ratio,decoupling,flicker; cells of absent
// contexts (and undefined values) are empty.
std::string trace_to_csv(const WalkTrace& trace);

// --- JSON codecs ----------------------------------------------------------------

// {"element_cardinalities": [n1, n2], "tpm": [[...], ...], "prior": [...]}
// The joint index convention is element 1 most significant. `prior_override`
// replaces any file prior; the default without either is stationary.
FactorizedSystem parse_factorized_json(const std::string& text,
                                       std::optional<PriorPolicy> prior_override = std::nullopt);

// {"elements": k, "groups": [{"members": [...], "function": "AND"}, ...]}
Partition parse_boolean_json(const std::string& text);

// Finite values map to JSON numbers, infinities to "inf"/"-inf" strings,
// NaN to null.
nlohmann::json json_number(double v);

nlohmann::json atom_table_json(const AtomTable& table, const FactorizedSystem& sys);
nlohmann::json emergence_atoms_json(const EmergenceAtoms& atoms);
nlohmann::json classification_json(const TransitionClassification& c,
                                   const TransitionMatrix& micro,
                                   const Partition& partition);
nlohmann::json edge_classes_json(const EdgeClassCounts& counts);
nlohmann::json flicker_summary_json(const FlickerSummary& s);

// Common report envelope: tool version, analysis kind, input digests, options.
nlohmann::json report_envelope(const std::string& analysis,
                               const std::vector<std::pair<std::string, std::string>>& inputs,
                               const nlohmann::json& options);

} // namespace emergence
