// Network application: random-walker transition matrices from weighted
// graphs, community-based macro-nodes, per-edge local information maps, and
// within/between-community edge statistics.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emergence/coarse.hpp"
#include "emergence/prob.hpp"

namespace emergence {

// Directed weighted graph with dense adjacency. Self-loops permitted,
// negative weights rejected.
class WeightedGraph {
public:
    explicit WeightedGraph(std::vector<std::string> node_labels);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    double weight(int i, int j) const { return weights_[i][j]; }
    const std::vector<std::vector<double>>& weights() const { return weights_; }

    void add_edge(int src, int dst, double weight); // accumulates on repeats
    double out_strength(int i) const;
    int edge_count() const; // directed edges with positive weight

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<double>> weights_;
};

enum class CommunitySource { file, label_propagation };

struct CommunityAssignment {
    std::vector<int> community; // node -> community id, ids canonical by smallest member
    int community_count = 0;
    CommunitySource source = CommunitySource::file;

    Partition to_partition(const std::vector<std::string>& node_labels) const;
};

CommunityAssignment make_communities(std::vector<int> community, CommunitySource source);

struct WalkerSystem {
    TransitionMatrix tpm;
    std::vector<int> dangling; // nodes with zero out-strength, given a self-loop
};

// Row i is node i's out-weights normalized to 1. Dangling nodes receive a
// probability-1 self-loop and are flagged.
WalkerSystem walk_tpm(const WeightedGraph& g);

struct EdgeInfo {
    int src = 0;
    int dst = 0;
    double value = 0.0; // signed bits
    bool within = false;
};

struct EdgeInfoMap {
    std::vector<EdgeInfo> edges; // all edges with positive walk probability
    PriorPolicy prior_policy = PriorPolicy::uniform;
};

// Local excess entropy of every walker transition with positive probability.
EdgeInfoMap edge_info_map(const WeightedGraph& g, PriorPolicy prior = PriorPolicy::uniform);

void mark_within_community(EdgeInfoMap& map, const CommunityAssignment& c);

// Asynchronous label propagation with seeded node ordering; deterministic for
// a fixed seed. Ties go to the smallest label id. Communities are relabeled
// canonically by smallest member index.
CommunityAssignment label_propagation(const WeightedGraph& g, std::uint64_t seed);

struct EdgeClassCounts {
    int informative_within = 0;
    int informative_between = 0;
    int misinformative_within = 0;
    int misinformative_between = 0;

    // fractions within each sign family; 0 when the family is empty
    double frac_informative_within() const;
    double frac_informative_between() const;
    double frac_misinformative_within() const;
    double frac_misinformative_between() const;
};

struct NetworkEmergenceReport {
    NetworkEmergenceReport(WalkerSystem w, CommunityAssignment c)
        : walker(std::move(w)), communities(std::move(c)) {}

    WalkerSystem walker;
    CommunityAssignment communities;
    double micro_ei = 0.0;
    double micro_effectiveness = 0.0;
    std::optional<double> macro_ei;            // absent for a single community
    std::optional<double> macro_effectiveness;
    std::optional<double> emergence;           // log2 effectiveness ratio
    std::optional<TransitionClassification> classification;
    EdgeInfoMap edge_map;
    EdgeClassCounts edge_classes;
    std::vector<std::string> warnings;
};

// Full pipeline: micro walker TPM, community macro TPM (uniform weighting),
// expected measures, incongruity classification, and the four edge-class
// fractions. Edge sign classes use the chosen prior (uniform by default).
NetworkEmergenceReport network_emergence(const WeightedGraph& g, const CommunityAssignment& c,
                                         PriorPolicy prior = PriorPolicy::uniform);

} // namespace emergence
