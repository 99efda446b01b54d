#include "emergence/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "emergence/errors.hpp"

namespace emergence {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relabels an assignment so group ids appear in first-occurrence order
// (restricted-growth form). This is the canonical form used for tie-breaking.
std::vector<int> canonicalize(const std::vector<int>& assignment) {
    std::vector<int> remap(assignment.size(), -1);
    std::vector<int> out(assignment.size());
    int next = 0;
    for (size_t i = 0; i < assignment.size(); ++i) {
        int g = assignment[i];
        if (remap[g] < 0) remap[g] = next++;
        out[i] = remap[g];
    }
    return out;
}

} // namespace

// --- Partition ---------------------------------------------------------------

Partition::Partition(std::vector<int> assignment,
                     std::vector<std::string> micro_labels,
                     std::vector<std::string> macro_labels)
    : assignment_(std::move(assignment)), micro_labels_(std::move(micro_labels)),
      macro_labels_(std::move(macro_labels)) {
    if (assignment_.empty()) throw validation_error("Partition: no micro states");
    int maxg = -1;
    for (int g : assignment_) {
        if (g < 0) throw validation_error("Partition: negative macro index");
        maxg = std::max(maxg, g);
    }
    macro_count_ = maxg + 1;
    groups_.assign(macro_count_, {});
    for (size_t i = 0; i < assignment_.size(); ++i) {
        groups_[assignment_[i]].push_back(static_cast<int>(i));
    }
    for (int a = 0; a < macro_count_; ++a) {
        if (groups_[a].empty()) {
            throw validation_error("Partition: macro state " + std::to_string(a) +
                                   " has no members");
        }
    }
    if (micro_labels_.empty()) {
        for (size_t i = 0; i < assignment_.size(); ++i)
            micro_labels_.push_back("s" + std::to_string(i));
    }
    if (micro_labels_.size() != assignment_.size()) {
        throw validation_error("Partition: micro label count mismatch");
    }
    if (macro_labels_.empty()) {
        for (int a = 0; a < macro_count_; ++a) macro_labels_.push_back("m" + std::to_string(a));
    }
    if (static_cast<int>(macro_labels_.size()) != macro_count_) {
        throw validation_error("Partition: macro label count mismatch");
    }
}

Partition Partition::identity(int n, std::vector<std::string> labels) {
    std::vector<int> a(n);
    for (int i = 0; i < n; ++i) a[i] = i;
    auto macro = labels;
    return Partition(std::move(a), labels, macro);
}

std::vector<double> Partition::project(const std::vector<double>& micro_dist) const {
    if (micro_dist.size() != assignment_.size()) {
        throw validation_error("Partition::project: distribution length mismatch");
    }
    std::vector<double> out(macro_count_, 0.0);
    for (size_t i = 0; i < micro_dist.size(); ++i) out[assignment_[i]] += micro_dist[i];
    return out;
}

// --- Lumping -----------------------------------------------------------------

MacroScale macro_tpm(const TransitionMatrix& w, const Partition& partition, Weighting weighting) {
    const int n = w.size();
    if (partition.micro_count() != n) {
        throw validation_error("macro_tpm: partition covers " +
                               std::to_string(partition.micro_count()) + " states, TPM has " +
                               std::to_string(n));
    }
    const int m = partition.macro_count();

    std::vector<double> weights(n, 0.0);
    std::vector<int> fallback;
    if (weighting == Weighting::stationary_within_group) {
        const ProbVector pi = stationary(w);
        for (int a = 0; a < m; ++a) {
            const auto& members = partition.groups()[a];
            double mass = 0.0;
            for (int i : members) mass += pi[i];
            if (mass > 0.0) {
                for (int i : members) weights[i] = pi[i] / mass;
            } else {
                for (int i : members) weights[i] = 1.0 / members.size();
                fallback.push_back(a);
            }
        }
    } else {
        for (int a = 0; a < m; ++a) {
            const auto& members = partition.groups()[a];
            for (int i : members) weights[i] = 1.0 / members.size();
        }
    }

    std::vector<std::vector<double>> rows(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < n; ++i) {
        if (weights[i] == 0.0) continue;
        const int a = partition.macro_of(i);
        for (int j = 0; j < n; ++j) {
            rows[a][partition.macro_of(j)] += weights[i] * w.at(i, j);
        }
    }
    TransitionMatrix tpm(std::move(rows), partition.macro_labels());
    return MacroScale{partition, std::move(tpm), weighting, std::move(fallback)};
}

// --- Effective information ----------------------------------------------------

double effective_information(const TransitionMatrix& w) {
    return excess_entropy(w, ProbVector::uniform(w.size()));
}

double effectiveness(const TransitionMatrix& w) {
    if (w.size() < 2) {
        throw domain_error("effectiveness: undefined for a single-state system");
    }
    return effective_information(w) / std::log2(static_cast<double>(w.size()));
}

double emergence_score(const TransitionMatrix& w, const MacroScale& macro) {
    const double eff_micro = effectiveness(w);
    const double eff_macro = effectiveness(macro.macro_tpm);
    if (eff_micro == 0.0 && eff_macro == 0.0) {
        throw domain_error("emergence_score: both effectiveness values are zero");
    }
    if (eff_micro == 0.0) return std::numeric_limits<double>::infinity();
    if (eff_macro == 0.0) return neg_inf();
    return std::log2(eff_macro / eff_micro);
}

// --- Transition classification -------------------------------------------------

const char* to_string(TransitionClass c) {
    switch (c) {
        case TransitionClass::congruent_informative: return "congruent-informative";
        case TransitionClass::congruent_misinformative: return "congruent-misinformative";
        case TransitionClass::incongruous: return "incongruous";
        case TransitionClass::anti_incongruous: return "anti-incongruous";
        case TransitionClass::zero: return "zero";
    }
    return "?";
}

int TransitionClassification::count(TransitionClass c) const {
    int n = 0;
    for (const auto& t : transitions) n += (t.cls == c);
    return n;
}

double TransitionClassification::incongruous_fraction() const {
    const int inc = count(TransitionClass::incongruous);
    const int denom = inc + count(TransitionClass::congruent_informative);
    return denom > 0 ? static_cast<double>(inc) / denom : 0.0;
}

bool TransitionClassification::fraction_defined() const {
    return count(TransitionClass::incongruous) +
               count(TransitionClass::congruent_informative) > 0;
}

double TransitionClassification::anti_incongruous_fraction() const {
    const int anti = count(TransitionClass::anti_incongruous);
    const int denom = anti + count(TransitionClass::congruent_misinformative);
    return denom > 0 ? static_cast<double>(anti) / denom : 0.0;
}

bool TransitionClassification::all_zero() const {
    return count(TransitionClass::zero) == static_cast<int>(transitions.size());
}

TransitionClassification classify_transitions(const TransitionMatrix& w, const MacroScale& macro,
                                              PriorPolicy prior_policy) {
    const int n = w.size();
    if (macro.partition.micro_count() != n) {
        throw validation_error("classify_transitions: macro scale built for different N");
    }
    const ProbVector prior = make_prior(w, prior_policy);
    const std::vector<double> macro_prior = macro.partition.project(prior.probs());
    const std::vector<double> pn_micro = w.next_marginal(prior.probs());
    const std::vector<double> pn_macro = macro.macro_tpm.next_marginal(macro_prior);

    TransitionClassification out;
    out.prior_policy = prior_policy;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (w.at(i, j) <= 0.0) continue;
            ClassifiedTransition t;
            t.from = i;
            t.to = j;
            t.e_micro = (prior[i] > 0.0 && pn_micro[j] > 0.0)
                            ? std::log2(w.at(i, j) / pn_micro[j])
                            : kNaN;
            const int a = macro.partition.macro_of(i);
            const int b = macro.partition.macro_of(j);
            if (macro_prior[a] > 0.0 && pn_macro[b] > 0.0) {
                const double wm = macro.macro_tpm.at(a, b);
                t.e_macro = wm > 0.0 ? std::log2(wm / pn_macro[b]) : neg_inf();
            } else {
                t.e_macro = kNaN;
            }
            if (std::isnan(t.e_micro) || std::isnan(t.e_macro) || t.e_micro == 0.0 ||
                t.e_macro == 0.0) {
                t.cls = TransitionClass::zero;
            } else if (t.e_micro > 0.0) {
                t.cls = t.e_macro < 0.0 ? TransitionClass::incongruous
                                        : TransitionClass::congruent_informative;
            } else {
                t.cls = t.e_macro > 0.0 ? TransitionClass::anti_incongruous
                                        : TransitionClass::congruent_misinformative;
            }
            out.transitions.push_back(t);
        }
    }
    return out;
}

// --- Partition search -----------------------------------------------------------

namespace {

// Effectiveness of the lumped system; a single macro state resolves nothing
// and scores 0.
double search_score(const TransitionMatrix& w, const Partition& p) {
    if (p.macro_count() < 2) return 0.0;
    return effectiveness(macro_tpm(w, p, Weighting::uniform_within_group).macro_tpm);
}

struct Best {
    double score = -1.0;
    std::vector<int> assignment;
    int m = 0;

    // score desc, then fewer macro states, then lexicographically smallest
    void consider(double s, const std::vector<int>& canon, int m_cand) {
        constexpr double tie = 1e-12;
        if (assignment.empty() || s > score + tie) {
            score = s;
            assignment = canon;
            m = m_cand;
            return;
        }
        if (s >= score - tie) {
            if (m_cand < m || (m_cand == m && canon < assignment)) {
                assignment = canon;
                m = m_cand;
            }
        }
    }
};

} // namespace

SearchResult partition_search(const TransitionMatrix& w, SearchMode mode) {
    const int n = w.size();
    Best best;
    long evaluated = 0;

    if (mode == SearchMode::exhaustive) {
        if (n > 10) {
            throw domain_error("partition_search: exhaustive mode supports N <= 10 (got N = " +
                               std::to_string(n) + "); use greedy mode");
        }
        // enumerate restricted growth strings
        std::vector<int> a(n, 0);
        std::function<void(int, int)> rec = [&](int i, int maxg) {
            if (i == n) {
                ++evaluated;
                Partition p(a, w.labels());
                best.consider(search_score(w, p), a, p.macro_count());
                return;
            }
            for (int g = 0; g <= maxg + 1; ++g) {
                a[i] = g;
                rec(i + 1, std::max(maxg, g));
            }
        };
        a[0] = 0;
        rec(1, 0);
    } else {
        std::vector<int> current(n);
        for (int i = 0; i < n; ++i) current[i] = i;
        double current_score = search_score(w, Partition(current, w.labels()));
        ++evaluated;
        int m = n;
        while (m > 1) {
            Best round;
            for (int a_id = 0; a_id < m; ++a_id) {
                for (int b_id = a_id + 1; b_id < m; ++b_id) {
                    std::vector<int> merged = current;
                    for (int& g : merged) {
                        if (g == b_id) g = a_id;
                    }
                    merged = canonicalize(merged);
                    ++evaluated;
                    round.consider(search_score(w, Partition(merged, w.labels())), merged, m - 1);
                }
            }
            if (round.score < current_score - 1e-12) break; // no merge at least as good
            current = round.assignment;
            current_score = round.score;
            --m;
        }
        best.consider(current_score, current, m);
    }

    Partition result(best.assignment, w.labels());
    return SearchResult{std::move(result), best.score, evaluated};
}

// --- Boolean aggregation helper ---------------------------------------------------

BoolFn bool_fn_from_string(const std::string& s) {
    if (s == "AND") return BoolFn::AND;
    if (s == "OR") return BoolFn::OR;
    if (s == "XOR") return BoolFn::XOR;
    if (s == "MAJ") return BoolFn::MAJ;
    throw validation_error("unknown Boolean function '" + s + "' (expected AND, OR, XOR, MAJ)");
}

Partition partition_from_boolean(int n_elements, const std::vector<BoolGroup>& groups) {
    if (n_elements < 1 || n_elements > 20) {
        throw validation_error("partition_from_boolean: element count must be in [1, 20]");
    }
    if (groups.empty()) throw validation_error("partition_from_boolean: no groups");
    std::vector<int> owner(n_elements, -1);
    for (size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].members.empty()) {
            throw validation_error("partition_from_boolean: empty group " + std::to_string(g));
        }
        for (int e : groups[g].members) {
            if (e < 0 || e >= n_elements) {
                throw validation_error("partition_from_boolean: element " + std::to_string(e) +
                                       " out of range");
            }
            if (owner[e] >= 0) {
                throw validation_error("partition_from_boolean: element " + std::to_string(e) +
                                       " appears in two groups");
            }
            owner[e] = static_cast<int>(g);
        }
    }
    for (int e = 0; e < n_elements; ++e) {
        if (owner[e] < 0) {
            throw validation_error("partition_from_boolean: element " + std::to_string(e) +
                                   " not covered by any group");
        }
    }

    const int n_micro = 1 << n_elements;
    const int n_groups = static_cast<int>(groups.size());
    const int n_macro = 1 << n_groups;

    auto bit_of = [&](int state, int element) {
        return (state >> (n_elements - 1 - element)) & 1; // element 0 most significant
    };

    std::vector<int> assignment(n_micro);
    std::vector<std::string> micro_labels(n_micro), macro_labels(n_macro);
    for (int s = 0; s < n_micro; ++s) {
        std::string lbl(n_elements, '0');
        for (int e = 0; e < n_elements; ++e) lbl[e] = static_cast<char>('0' + bit_of(s, e));
        micro_labels[s] = lbl;
        int macro = 0;
        for (int g = 0; g < n_groups; ++g) {
            int ones = 0;
            for (int e : groups[g].members) ones += bit_of(s, e);
            const int k = static_cast<int>(groups[g].members.size());
            int out = 0;
            switch (groups[g].fn) {
                case BoolFn::AND: out = (ones == k); break;
                case BoolFn::OR: out = (ones > 0); break;
                case BoolFn::XOR: out = (ones % 2); break;
                case BoolFn::MAJ: out = (2 * ones > k); break; // strict majority, ties -> 0
            }
            macro = (macro << 1) | out;
        }
        assignment[s] = macro;
    }
    for (int a = 0; a < n_macro; ++a) {
        std::string lbl(n_groups, '0');
        for (int g = 0; g < n_groups; ++g) lbl[g] = static_cast<char>('0' + ((a >> (n_groups - 1 - g)) & 1));
        macro_labels[a] = lbl;
    }
    return Partition(std::move(assignment), std::move(micro_labels), std::move(macro_labels));
}

} // namespace emergence
