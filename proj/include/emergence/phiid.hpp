// Temporal information decomposition for two-element systems: the 16-atom
// double-redundancy lattice, the shared-exclusions double-redundancy function
// (local and expected), Mobius inversion of the lattice, the integration
// heuristic, and extraction of the emergence-relevant atoms.
#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emergence/prob.hpp"

namespace emergence {

// A collection of element subsets forming an antichain. For two elements only
// four exist: {1}{2} (both parts separately), {1}, {2}, and {12} (the whole).
enum class SourceCollection : int { separate = 0, first = 1, second = 2, joint = 3 };

std::string to_string(SourceCollection c);

// Collection order: {1}{2} below {1} and {2}, which are both below {12};
// {1} and {2} are incomparable.
bool collection_leq(SourceCollection a, SourceCollection b);

// One source->target dependency of the lattice.
struct PhiAtom {
    SourceCollection source = SourceCollection::separate;
    SourceCollection target = SourceCollection::separate;

    bool operator==(const PhiAtom&) const = default;
};

std::string to_string(const PhiAtom& a);
PhiAtom atom_from_string(const std::string& s);

inline constexpr int kAtomCount = 16;
int atom_index(const PhiAtom& a);
const std::array<PhiAtom, kAtomCount>& all_atoms();

enum class LatticeRelation { below, above, equal, incomparable };

// Componentwise product order on (source, target).
LatticeRelation lattice_order(const PhiAtom& a, const PhiAtom& b);
bool atom_leq(const PhiAtom& a, const PhiAtom& b);

// Covering relations of the product order (the drawn edges of the lattice).
std::vector<std::pair<PhiAtom, PhiAtom>> covering_pairs();

// One joint transition (prev -> next), as joint state indices.
struct Realization {
    int prev = 0;
    int next = 0;

    bool operator==(const Realization&) const = default;
};

// A two-element system: joint TPM over the product state space with a fixed
// index bijection (element 1 most significant) and a prior over joint states.
class FactorizedSystem {
public:
    // Omitting the prior selects the stationary distribution of the TPM.
    FactorizedSystem(int n1, int n2, TransitionMatrix tpm,
                     std::optional<ProbVector> prior = std::nullopt);

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int joint_size() const { return tpm_.size(); }
    const TransitionMatrix& tpm() const { return tpm_; }
    const ProbVector& prior() const { return prior_; }
    const std::vector<double>& next_marginal() const { return next_marginal_; }

    int joint_index(int e1, int e2) const { return e1 * n2_ + e2; }
    std::pair<int, int> split(int joint) const { return {joint / n2_, joint % n2_}; }

    // prior(prev) * W(prev, next)
    double transition_probability(const Realization& r) const {
        return prior_[r.prev] * tpm_.at(r.prev, r.next);
    }

private:
    int n1_;
    int n2_;
    TransitionMatrix tpm_;
    ProbVector prior_;
    std::vector<double> next_marginal_;
};

// Shared-exclusions double redundancy, localized to one realization:
// log2[ p(T | S) / p(T) ] where S is the event that at least one source
// subset's realized state occurred at t-1 and T likewise at t.
double double_redundancy_local(const FactorizedSystem& sys, const PhiAtom& atom,
                               const Realization& r);

// Probability-weighted mean of the local values over all realizations.
double double_redundancy_expected(const FactorizedSystem& sys, const PhiAtom& atom);

enum class AtomScope { local, expected };

// Solved lattice: one signed value per atom. The 16 values sum to the
// (local or expected) excess entropy of the system.
struct AtomTable {
    std::array<double, kAtomCount> values{};
    AtomScope scope = AtomScope::expected;
    std::optional<Realization> realization;

    double value(const PhiAtom& a) const { return values[atom_index(a)]; }
    double sum() const;
};

// Pluggable redundancy seam: any localizable redundancy function can drive
// the same Mobius inversion.
using LocalRedundancyFn =
    std::function<double(const FactorizedSystem&, const PhiAtom&, const Realization&)>;

LocalRedundancyFn shared_exclusions_redundancy();

// Solves all 16 atoms bottom-up for one realization. Throws
// undefined_realization when the realization has zero probability or the
// redundancy function yields a non-finite value.
AtomTable solve_local(const FactorizedSystem& sys, const Realization& r,
                      const LocalRedundancyFn& redundancy = shared_exclusions_redundancy());

// Solves the expected lattice (prior-transition-weighted).
AtomTable solve_expected(const FactorizedSystem& sys,
                         const LocalRedundancyFn& redundancy = shared_exclusions_redundancy());

// Whole-system excess entropy minus the sum of the elements' marginal excess
// entropies. Zero when the elements evolve independently; can be negative.
double phi_heuristic(const FactorizedSystem& sys);

// Emergence-relevant extract of a solved table.
struct EmergenceAtoms {
    double causal_decoupling = 0.0;          // {12}->{12}
    std::map<std::string, double> downward;  // {12}->{1}, {12}->{2}, {12}->{1}{2}
    // local scope only: expected decoupling positive but this realization's negative
    bool incongruous = false;
};

EmergenceAtoms emergence_atoms(const AtomTable& table,
                               std::optional<double> expected_decoupling = std::nullopt);

} // namespace emergence
