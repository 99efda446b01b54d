#include "emergence/phiid.hpp"

#include <algorithm>
#include <cmath>

#include "emergence/errors.hpp"

namespace emergence {

namespace {

constexpr int kCollections = 4;

// collection_leq as a flat table: row = a, col = b, true when a below-or-equal b
constexpr bool kLeq[kCollections][kCollections] = {
    {true, true, true, true},    // separate
    {false, true, false, true},  // first
    {false, false, true, true},  // second
    {false, false, false, true}, // joint
};

int rank_of(SourceCollection c) {
    switch (c) {
        case SourceCollection::separate: return 0;
        case SourceCollection::first:
        case SourceCollection::second: return 1;
        case SourceCollection::joint: return 2;
    }
    return 0;
}

// Does joint state `u` belong to the event "at least one subset of the
// collection matches its realized state"?
bool in_event(SourceCollection c, int u1, int u2, int r1, int r2) {
    switch (c) {
        case SourceCollection::separate: return u1 == r1 || u2 == r2;
        case SourceCollection::first: return u1 == r1;
        case SourceCollection::second: return u2 == r2;
        case SourceCollection::joint: return u1 == r1 && u2 == r2;
    }
    return false;
}

// Atoms listed bottom-up (by rank) for the Mobius recursion.
std::vector<int> mobius_order() {
    std::vector<int> order(kAtomCount);
    for (int i = 0; i < kAtomCount; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [](int a, int b) {
        const PhiAtom& pa = all_atoms()[a];
        const PhiAtom& pb = all_atoms()[b];
        return rank_of(pa.source) + rank_of(pa.target) < rank_of(pb.source) + rank_of(pb.target);
    });
    return order;
}

// Mobius inversion: phi(atom) = I(atom) - sum of phi over atoms strictly below.
std::array<double, kAtomCount> mobius_invert(const std::array<double, kAtomCount>& redundancy) {
    static const std::vector<int> order = mobius_order();
    std::array<double, kAtomCount> phi{};
    for (int idx : order) {
        const PhiAtom& atom = all_atoms()[idx];
        double below = 0.0;
        for (int other = 0; other < kAtomCount; ++other) {
            if (other == idx) continue;
            if (atom_leq(all_atoms()[other], atom)) below += phi[other];
        }
        phi[idx] = redundancy[idx] - below;
    }
    return phi;
}

} // namespace

// --- Lattice -------------------------------------------------------------------

std::string to_string(SourceCollection c) {
    switch (c) {
        case SourceCollection::separate: return "{1}{2}";
        case SourceCollection::first: return "{1}";
        case SourceCollection::second: return "{2}";
        case SourceCollection::joint: return "{12}";
    }
    return "?";
}

bool collection_leq(SourceCollection a, SourceCollection b) {
    return kLeq[static_cast<int>(a)][static_cast<int>(b)];
}

std::string to_string(const PhiAtom& a) {
    return to_string(a.source) + "->" + to_string(a.target);
}

PhiAtom atom_from_string(const std::string& s) {
    const auto arrow = s.find("->");
    if (arrow == std::string::npos) throw validation_error("bad atom string '" + s + "'");
    auto parse = [&](const std::string& part) {
        if (part == "{1}{2}") return SourceCollection::separate;
        if (part == "{1}") return SourceCollection::first;
        if (part == "{2}") return SourceCollection::second;
        if (part == "{12}") return SourceCollection::joint;
        throw validation_error("bad collection '" + part + "' in atom string");
    };
    return PhiAtom{parse(s.substr(0, arrow)), parse(s.substr(arrow + 2))};
}

int atom_index(const PhiAtom& a) {
    return static_cast<int>(a.source) * kCollections + static_cast<int>(a.target);
}

const std::array<PhiAtom, kAtomCount>& all_atoms() {
    static const std::array<PhiAtom, kAtomCount> atoms = [] {
        std::array<PhiAtom, kAtomCount> out{};
        for (int s = 0; s < kCollections; ++s) {
            for (int t = 0; t < kCollections; ++t) {
                out[s * kCollections + t] = PhiAtom{static_cast<SourceCollection>(s),
                                                    static_cast<SourceCollection>(t)};
            }
        }
        return out;
    }();
    return atoms;
}

bool atom_leq(const PhiAtom& a, const PhiAtom& b) {
    return collection_leq(a.source, b.source) && collection_leq(a.target, b.target);
}

LatticeRelation lattice_order(const PhiAtom& a, const PhiAtom& b) {
    const bool ab = atom_leq(a, b);
    const bool ba = atom_leq(b, a);
    if (ab && ba) return LatticeRelation::equal;
    if (ab) return LatticeRelation::below;
    if (ba) return LatticeRelation::above;
    return LatticeRelation::incomparable;
}

std::vector<std::pair<PhiAtom, PhiAtom>> covering_pairs() {
    std::vector<std::pair<PhiAtom, PhiAtom>> covers;
    for (const PhiAtom& lo : all_atoms()) {
        for (const PhiAtom& hi : all_atoms()) {
            if (lo == hi || !atom_leq(lo, hi)) continue;
            bool direct = true;
            for (const PhiAtom& mid : all_atoms()) {
                if (mid == lo || mid == hi) continue;
                if (atom_leq(lo, mid) && atom_leq(mid, hi)) {
                    direct = false;
                    break;
                }
            }
            if (direct) covers.emplace_back(lo, hi);
        }
    }
    return covers;
}

// --- FactorizedSystem ------------------------------------------------------------

FactorizedSystem::FactorizedSystem(int n1, int n2, TransitionMatrix tpm,
                                   std::optional<ProbVector> prior)
    : n1_(n1), n2_(n2), tpm_(std::move(tpm)),
      prior_(prior ? std::move(*prior) : stationary(tpm_)) {
    if (n1_ < 2 || n2_ < 2) {
        throw validation_error("FactorizedSystem: element cardinalities must be >= 2");
    }
    if (tpm_.size() != n1_ * n2_) {
        throw validation_error("FactorizedSystem: TPM is " + std::to_string(tpm_.size()) +
                               "x" + std::to_string(tpm_.size()) + " but n1*n2 = " +
                               std::to_string(n1_ * n2_));
    }
    if (prior_.size() != tpm_.size()) {
        throw validation_error("FactorizedSystem: prior length mismatch");
    }
    next_marginal_ = tpm_.next_marginal(prior_.probs());
}

// --- Double redundancy ------------------------------------------------------------

double double_redundancy_local(const FactorizedSystem& sys, const PhiAtom& atom,
                               const Realization& r) {
    const int n = sys.joint_size();
    const auto [a1, a2] = sys.split(r.prev);
    const auto [b1, b2] = sys.split(r.next);

    std::vector<char> in_s(n), in_t(n);
    for (int u = 0; u < n; ++u) {
        const auto [u1, u2] = sys.split(u);
        in_s[u] = in_event(atom.source, u1, u2, a1, a2);
        in_t[u] = in_event(atom.target, u1, u2, b1, b2);
    }

    double p_s = 0.0, p_t = 0.0, p_st = 0.0;
    for (int u = 0; u < n; ++u) {
        if (in_t[u]) p_t += sys.next_marginal()[u];
        if (!in_s[u]) continue;
        p_s += sys.prior()[u];
        for (int v = 0; v < n; ++v) {
            if (in_t[v]) p_st += sys.prior()[u] * sys.tpm().at(u, v);
        }
    }
    if (p_s <= 0.0) {
        throw undefined_conditional("double_redundancy: source event has zero probability");
    }
    if (p_t <= 0.0 || p_st <= 0.0) return neg_inf(); // impossible target event
    return std::log2(p_st / (p_s * p_t));
}

double double_redundancy_expected(const FactorizedSystem& sys, const PhiAtom& atom) {
    const int n = sys.joint_size();
    double acc = 0.0;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            const double p = sys.transition_probability({x, y});
            if (p <= 0.0) continue;
            acc += p * double_redundancy_local(sys, atom, {x, y});
        }
    }
    return acc;
}

// --- Solvers ----------------------------------------------------------------------

double AtomTable::sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

LocalRedundancyFn shared_exclusions_redundancy() {
    return [](const FactorizedSystem& sys, const PhiAtom& atom, const Realization& r) {
        return double_redundancy_local(sys, atom, r);
    };
}

AtomTable solve_local(const FactorizedSystem& sys, const Realization& r,
                      const LocalRedundancyFn& redundancy) {
    const int n = sys.joint_size();
    if (r.prev < 0 || r.prev >= n || r.next < 0 || r.next >= n) {
        throw validation_error("solve_local: realization out of range");
    }
    if (sys.transition_probability(r) <= 0.0) {
        throw undefined_realization("undefined-realization: transition " +
                                    std::to_string(r.prev) + "->" + std::to_string(r.next) +
                                    " has zero probability");
    }
    std::array<double, kAtomCount> red{};
    for (int i = 0; i < kAtomCount; ++i) {
        red[i] = redundancy(sys, all_atoms()[i], r);
        if (!std::isfinite(red[i])) {
            throw undefined_realization("undefined-realization: redundancy of " +
                                        to_string(all_atoms()[i]) + " is not finite");
        }
    }
    AtomTable table;
    table.values = mobius_invert(red);
    table.scope = AtomScope::local;
    table.realization = r;
    return table;
}

AtomTable solve_expected(const FactorizedSystem& sys, const LocalRedundancyFn& redundancy) {
    const int n = sys.joint_size();
    std::array<double, kAtomCount> red{};
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            const double p = sys.transition_probability({x, y});
            if (p <= 0.0) continue;
            for (int i = 0; i < kAtomCount; ++i) {
                red[i] += p * redundancy(sys, all_atoms()[i], {x, y});
            }
        }
    }
    AtomTable table;
    table.values = mobius_invert(red);
    table.scope = AtomScope::expected;
    return table;
}

// --- Integration heuristic ----------------------------------------------------------

double phi_heuristic(const FactorizedSystem& sys) {
    const double whole = excess_entropy(sys.tpm(), sys.prior());

    auto element_ee = [&](bool first_element, int cardinality) {
        std::vector<std::vector<double>> cells(cardinality, std::vector<double>(cardinality, 0.0));
        const int n = sys.joint_size();
        for (int x = 0; x < n; ++x) {
            if (sys.prior()[x] == 0.0) continue;
            const auto [x1, x2] = sys.split(x);
            const int a = first_element ? x1 : x2;
            for (int y = 0; y < n; ++y) {
                const auto [y1, y2] = sys.split(y);
                cells[a][first_element ? y1 : y2] += sys.prior()[x] * sys.tpm().at(x, y);
            }
        }
        return expected_mi(JointDist(std::move(cells)));
    };

    return whole - element_ee(true, sys.n1()) - element_ee(false, sys.n2());
}

EmergenceAtoms emergence_atoms(const AtomTable& table, std::optional<double> expected_decoupling) {
    const PhiAtom top{SourceCollection::joint, SourceCollection::joint};
    EmergenceAtoms out;
    out.causal_decoupling = table.value(top);
    for (SourceCollection t :
         {SourceCollection::first, SourceCollection::second, SourceCollection::separate}) {
        const PhiAtom atom{SourceCollection::joint, t};
        out.downward[to_string(atom)] = table.value(atom);
    }
    out.incongruous = table.scope == AtomScope::local && expected_decoupling.has_value() &&
                      *expected_decoupling > 0.0 && out.causal_decoupling < 0.0;
    return out;
}

} // namespace emergence
