// Coarse-graining analysis: partitions of the state space, lumped macro
// transition matrices, effective information, emergence scores, per-transition
// incongruity classification, and search over partitions.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emergence/prob.hpp"

namespace emergence {

// Surjection from micro states onto macro states.
class Partition {
public:
    Partition(std::vector<int> assignment,
              std::vector<std::string> micro_labels = {},
              std::vector<std::string> macro_labels = {});

    static Partition identity(int n, std::vector<std::string> labels = {});

    int micro_count() const { return static_cast<int>(assignment_.size()); }
    int macro_count() const { return macro_count_; }
    int macro_of(int micro) const { return assignment_[micro]; }
    const std::vector<int>& assignment() const { return assignment_; }
    const std::vector<std::vector<int>>& groups() const { return groups_; }
    const std::vector<std::string>& micro_labels() const { return micro_labels_; }
    const std::vector<std::string>& macro_labels() const { return macro_labels_; }
    bool is_identity() const { return macro_count_ == micro_count(); }

    // Project a micro distribution onto macro states by summing group mass.
    std::vector<double> project(const std::vector<double>& micro_dist) const;

private:
    std::vector<int> assignment_;
    int macro_count_ = 0;
    std::vector<std::vector<int>> groups_;
    std::vector<std::string> micro_labels_;
    std::vector<std::string> macro_labels_;
};

enum class Weighting { uniform_within_group, stationary_within_group };

// A coarse-grained scale: partition plus the lumped transition matrix.
struct MacroScale {
    Partition partition;
    TransitionMatrix macro_tpm;
    Weighting weighting;
    // groups whose stationary mass was zero and fell back to uniform weights
    std::vector<int> weight_fallback_groups;
};

// Lumps W onto the partition: Wm(a,b) = sum_{i in a} w_i sum_{j in b} W(i,j)
// with within-group weights w given by `weighting` (renormalized per group).
MacroScale macro_tpm(const TransitionMatrix& w, const Partition& partition,
                     Weighting weighting = Weighting::uniform_within_group);

// Excess entropy under the uniform (maximum-entropy) prior. In [0, log2 N].
double effective_information(const TransitionMatrix& w);

// effective_information normalized by log2 N, in [0, 1]. Undefined for N = 1.
double effectiveness(const TransitionMatrix& w);

// log2 of the macro/micro effectiveness ratio; positive means the macro scale
// is the more effective description. Returns +infinity when only the micro
// effectiveness is zero; throws domain_error when both are zero.
double emergence_score(const TransitionMatrix& w, const MacroScale& macro);

enum class TransitionClass {
    congruent_informative,  // e_micro > 0 and e_macro > 0
    congruent_misinformative, // e_micro < 0 and e_macro < 0
    incongruous,            // e_micro > 0 and e_macro < 0
    anti_incongruous,       // e_micro < 0 and e_macro > 0
    zero                    // either value exactly 0 or undefined under the prior
};

const char* to_string(TransitionClass c);

struct ClassifiedTransition {
    int from = 0;
    int to = 0;
    double e_micro = 0.0; // signed bits; NaN when undefined under the prior
    double e_macro = 0.0;
    TransitionClass cls = TransitionClass::zero;
};

struct TransitionClassification {
    std::vector<ClassifiedTransition> transitions; // every (i,j) with W(i,j) > 0
    PriorPolicy prior_policy = PriorPolicy::uniform;

    int count(TransitionClass c) const;
    // (# incongruous) / (# with e_micro > 0 and e_macro != 0). 0 when the
    // denominator is empty; check fraction_defined.
    double incongruous_fraction() const;
    bool fraction_defined() const;
    // same statistic for the opposite direction (micro < 0, macro > 0)
    double anti_incongruous_fraction() const;
    bool all_zero() const;
};

// Classifies every positive-probability micro transition against its macro
// image. Transitions whose micro or macro local value is undefined under the
// prior are classed `zero` and excluded from the fractions.
TransitionClassification classify_transitions(const TransitionMatrix& w, const MacroScale& macro,
                                              PriorPolicy prior_policy = PriorPolicy::uniform);

enum class SearchMode { exhaustive, greedy };

struct SearchResult {
    Partition partition;
    double score = 0.0; // macro effectiveness under uniform weighting
    long candidates_evaluated = 0;
};

// Finds the partition maximizing macro effectiveness (uniform weighting).
// Ties prefer fewer macro states, then the lexicographically smallest
// canonical assignment. Exhaustive mode enumerates all set partitions and
// requires N <= 10; greedy mode merges agglomeratively from singletons.
SearchResult partition_search(const TransitionMatrix& w, SearchMode mode);

// Element-wise Boolean aggregation over a binary micro state space.
// Elements are bits of the micro state index, element 0 most significant.
// Groups must be disjoint and cover every element.
enum class BoolFn { AND, OR, XOR, MAJ };

BoolFn bool_fn_from_string(const std::string& s);

struct BoolGroup {
    std::vector<int> members;
    BoolFn fn = BoolFn::AND;
};

// Builds the state-level Partition induced by applying each group's Boolean
// function to its member bits. Micro labels are bitstrings of the elements,
// macro labels bitstrings of the group outputs.
Partition partition_from_boolean(int n_elements, const std::vector<BoolGroup>& groups);

} // namespace emergence
