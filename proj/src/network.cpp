#include "emergence/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "emergence/errors.hpp"

namespace emergence {

// --- WeightedGraph -------------------------------------------------------------

WeightedGraph::WeightedGraph(std::vector<std::string> node_labels)
    : labels_(std::move(node_labels)) {
    if (labels_.empty()) throw validation_error("WeightedGraph: no nodes");
    weights_.assign(labels_.size(), std::vector<double>(labels_.size(), 0.0));
}

void WeightedGraph::add_edge(int src, int dst, double weight) {
    if (src < 0 || src >= size() || dst < 0 || dst >= size()) {
        throw validation_error("add_edge: node index out of range");
    }
    if (weight < 0.0 || !std::isfinite(weight)) {
        throw validation_error("add_edge: weight must be a finite non-negative number");
    }
    weights_[src][dst] += weight;
}

double WeightedGraph::out_strength(int i) const {
    double s = 0.0;
    for (double w : weights_[i]) s += w;
    return s;
}

int WeightedGraph::edge_count() const {
    int c = 0;
    for (const auto& row : weights_)
        for (double w : row) c += (w > 0.0);
    return c;
}

// --- Communities ----------------------------------------------------------------

namespace {

// Relabel community ids so community k is the one whose smallest member node
// index is k-th smallest.
std::vector<int> canonical_communities(const std::vector<int>& raw, int& count_out) {
    std::map<int, int> first_member;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (!first_member.count(raw[i])) first_member[raw[i]] = static_cast<int>(i);
    }
    std::vector<std::pair<int, int>> order; // (first member, raw id)
    for (auto& [id, member] : first_member) order.emplace_back(member, id);
    std::sort(order.begin(), order.end());
    std::map<int, int> remap;
    for (size_t k = 0; k < order.size(); ++k) remap[order[k].second] = static_cast<int>(k);
    std::vector<int> out(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) out[i] = remap[raw[i]];
    count_out = static_cast<int>(order.size());
    return out;
}

} // namespace

CommunityAssignment make_communities(std::vector<int> community, CommunitySource source) {
    if (community.empty()) throw validation_error("CommunityAssignment: empty");
    for (int c : community) {
        if (c < 0) throw validation_error("CommunityAssignment: negative community id");
    }
    CommunityAssignment out;
    out.community = canonical_communities(community, out.community_count);
    out.source = source;
    return out;
}

Partition CommunityAssignment::to_partition(const std::vector<std::string>& node_labels) const {
    std::vector<std::string> macro_labels(community_count);
    for (int c = 0; c < community_count; ++c) macro_labels[c] = "c" + std::to_string(c);
    return Partition(community, node_labels, macro_labels);
}

// --- Walker TPM -----------------------------------------------------------------

WalkerSystem walk_tpm(const WeightedGraph& g) {
    const int n = g.size();
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    std::vector<int> dangling;
    for (int i = 0; i < n; ++i) {
        const double s = g.out_strength(i);
        if (s > 0.0) {
            for (int j = 0; j < n; ++j) rows[i][j] = g.weight(i, j) / s;
        } else {
            rows[i][i] = 1.0;
            dangling.push_back(i);
        }
    }
    return WalkerSystem{TransitionMatrix(std::move(rows), g.labels()), std::move(dangling)};
}

// --- Edge information map ----------------------------------------------------------

EdgeInfoMap edge_info_map(const WeightedGraph& g, PriorPolicy prior) {
    const WalkerSystem walker = walk_tpm(g);
    const TransitionMatrix& w = walker.tpm;
    const ProbVector p = make_prior(w, prior);
    const std::vector<double> pn = w.next_marginal(p.probs());

    EdgeInfoMap out;
    out.prior_policy = prior;
    for (int i = 0; i < w.size(); ++i) {
        if (p[i] <= 0.0) continue; // unreachable under the prior: no local value
        for (int j = 0; j < w.size(); ++j) {
            if (w.at(i, j) <= 0.0) continue;
            out.edges.push_back(EdgeInfo{i, j, std::log2(w.at(i, j) / pn[j]), false});
        }
    }
    return out;
}

void mark_within_community(EdgeInfoMap& map, const CommunityAssignment& c) {
    for (EdgeInfo& e : map.edges) e.within = c.community[e.src] == c.community[e.dst];
}

// --- Label propagation ---------------------------------------------------------------

CommunityAssignment label_propagation(const WeightedGraph& g, std::uint64_t seed) {
    const int n = g.size();
    std::vector<int> label(n);
    for (int i = 0; i < n; ++i) label[i] = i;

    std::mt19937_64 rng(seed);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        // Fisher-Yates with the raw engine keeps the stream portable.
        for (int i = n - 1; i > 0; --i) {
            std::swap(order[i], order[rng() % static_cast<std::uint64_t>(i + 1)]);
        }
        bool changed = false;
        for (int i : order) {
            std::map<int, double> votes; // label -> incident weight, self-loops excluded
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double w = g.weight(i, j) + g.weight(j, i);
                if (w > 0.0) votes[label[j]] += w;
            }
            if (votes.empty()) continue;
            int best_label = label[i];
            double best_w = -1.0;
            for (const auto& [lbl, w] : votes) { // map order: ties go to smallest label
                if (w > best_w) {
                    best_w = w;
                    best_label = lbl;
                }
            }
            if (best_label != label[i]) {
                label[i] = best_label;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return make_communities(std::move(label), CommunitySource::label_propagation);
}

// --- Network emergence pipeline --------------------------------------------------------

double EdgeClassCounts::frac_informative_within() const {
    const int d = informative_within + informative_between;
    return d > 0 ? static_cast<double>(informative_within) / d : 0.0;
}
double EdgeClassCounts::frac_informative_between() const {
    const int d = informative_within + informative_between;
    return d > 0 ? static_cast<double>(informative_between) / d : 0.0;
}
double EdgeClassCounts::frac_misinformative_within() const {
    const int d = misinformative_within + misinformative_between;
    return d > 0 ? static_cast<double>(misinformative_within) / d : 0.0;
}
double EdgeClassCounts::frac_misinformative_between() const {
    const int d = misinformative_within + misinformative_between;
    return d > 0 ? static_cast<double>(misinformative_between) / d : 0.0;
}

NetworkEmergenceReport network_emergence(const WeightedGraph& g, const CommunityAssignment& c,
                                         PriorPolicy prior) {
    if (static_cast<int>(c.community.size()) != g.size()) {
        throw validation_error("network_emergence: community assignment covers " +
                               std::to_string(c.community.size()) + " nodes, graph has " +
                               std::to_string(g.size()));
    }
    NetworkEmergenceReport rep{walk_tpm(g), c};
    for (int i : rep.walker.dangling) {
        rep.warnings.push_back("dangling node '" + g.labels()[i] + "' given a self-loop");
    }

    const TransitionMatrix& w = rep.walker.tpm;
    rep.micro_ei = effective_information(w);
    rep.micro_effectiveness = effectiveness(w);

    rep.edge_map = edge_info_map(g, prior);
    mark_within_community(rep.edge_map, c);
    for (const EdgeInfo& e : rep.edge_map.edges) {
        if (e.value > 0.0) {
            ++(e.within ? rep.edge_classes.informative_within
                        : rep.edge_classes.informative_between);
        } else if (e.value < 0.0) {
            ++(e.within ? rep.edge_classes.misinformative_within
                        : rep.edge_classes.misinformative_between);
        }
    }

    if (c.community_count < 2) {
        rep.warnings.push_back("macro-undefined: single community, no macro scale");
        return rep;
    }

    const Partition partition = c.to_partition(g.labels());
    const MacroScale macro = macro_tpm(w, partition, Weighting::uniform_within_group);
    rep.macro_ei = effective_information(macro.macro_tpm);
    rep.macro_effectiveness = effectiveness(macro.macro_tpm);
    if (rep.micro_effectiveness > 0.0 || *rep.macro_effectiveness > 0.0) {
        rep.emergence = emergence_score(w, macro);
    } else {
        rep.warnings.push_back("emergence-undefined: both effectiveness values are zero");
    }
    rep.classification = classify_transitions(w, macro, prior);
    return rep;
}

} // namespace emergence
