#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "emergence/errors.hpp"
#include "emergence/io.hpp"
#include "emergence/phiid.hpp"
#include "helpers.hpp"
#include "phiid_oracle.hpp"

using namespace emergence;

namespace {

const PhiAtom kBottom{SourceCollection::separate, SourceCollection::separate};
const PhiAtom kTop{SourceCollection::joint, SourceCollection::joint};

FactorizedSystem copy_system() {
    return FactorizedSystem(2, 2, TransitionMatrix::identity(4), ProbVector::uniform(4));
}

FactorizedSystem committed_system() {
    return parse_factorized_json(read_file(testutil::data_path("phiid4.json")));
}

FactorizedSystem random_system(std::mt19937_64& rng, int n1 = 2, int n2 = 2) {
    return FactorizedSystem(n1, n2, testutil::random_tpm(rng, n1 * n2),
                            ProbVector(testutil::random_dist(rng, n1 * n2)));
}

} // namespace

TEST_CASE("lattice order: bottom, top, incomparable middle") {
    for (const PhiAtom& a : all_atoms()) {
        if (a == kBottom) continue;
        CHECK(lattice_order(kBottom, a) == LatticeRelation::below);
        CHECK(lattice_order(a, kBottom) == LatticeRelation::above);
    }
    for (const PhiAtom& a : all_atoms()) {
        if (a == kTop) continue;
        CHECK(lattice_order(kTop, a) == LatticeRelation::above);
    }
    const PhiAtom left{SourceCollection::first, SourceCollection::joint};
    const PhiAtom right{SourceCollection::second, SourceCollection::joint};
    CHECK(lattice_order(left, right) == LatticeRelation::incomparable);
    CHECK(lattice_order(left, left) == LatticeRelation::equal);
}

TEST_CASE("lattice order: agrees with the set-arithmetic definition") {
    for (const PhiAtom& a : all_atoms()) {
        for (const PhiAtom& b : all_atoms()) {
            const phiid_oracle::Atom oa{phiid_oracle::to_antichain(a.source),
                                        phiid_oracle::to_antichain(a.target)};
            const phiid_oracle::Atom ob{phiid_oracle::to_antichain(b.source),
                                        phiid_oracle::to_antichain(b.target)};
            CHECK(atom_leq(a, b) == phiid_oracle::atom_leq(oa, ob));
        }
    }
}

TEST_CASE("lattice shape: 16 vertices, 32 covering edges, unique extremes") {
    CHECK(all_atoms().size() == 16);
    const auto covers = covering_pairs();
    CHECK(covers.size() == 32);

    // spot-check drawn edges
    auto is_cover = [&](const PhiAtom& lo, const PhiAtom& hi) {
        for (const auto& [l, h] : covers) {
            if (l == lo && h == hi) return true;
        }
        return false;
    };
    CHECK(is_cover(PhiAtom{SourceCollection::separate, SourceCollection::first},
                   PhiAtom{SourceCollection::second, SourceCollection::first}));
    CHECK(is_cover(PhiAtom{SourceCollection::second, SourceCollection::first},
                   PhiAtom{SourceCollection::joint, SourceCollection::first}));
    CHECK(is_cover(PhiAtom{SourceCollection::first, SourceCollection::second},
                   PhiAtom{SourceCollection::first, SourceCollection::joint}));
    CHECK_FALSE(is_cover(kBottom, kTop));

    int bottom_count = 0, top_count = 0;
    for (const PhiAtom& a : all_atoms()) {
        bool has_below = false, has_above = false;
        for (const PhiAtom& b : all_atoms()) {
            if (b == a) continue;
            if (atom_leq(b, a)) has_below = true;
            if (atom_leq(a, b)) has_above = true;
        }
        if (!has_below) {
            ++bottom_count;
            CHECK(a == kBottom);
        }
        if (!has_above) {
            ++top_count;
            CHECK(a == kTop);
        }
    }
    CHECK(bottom_count == 1);
    CHECK(top_count == 1);
}

TEST_CASE("atom strings round-trip") {
    for (const PhiAtom& a : all_atoms()) CHECK(atom_from_string(to_string(a)) == a);
    CHECK(to_string(kBottom) == "{1}{2}->{1}{2}");
    CHECK(to_string(kTop) == "{12}->{12}");
    CHECK_THROWS_AS(atom_from_string("{3}->{1}"), validation_error);
}

TEST_CASE("double redundancy: independent copy elements, hand values") {
    FactorizedSystem sys = copy_system();
    const Realization r{0, 0}; // (0,0) -> (0,0)
    CHECK(double_redundancy_local(sys, kTop, r) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(double_redundancy_local(sys, kBottom, r) ==
          doctest::Approx(0.41503749927884376).epsilon(1e-12));
    // the top atom's local value is exactly the local excess entropy
    CHECK(double_redundancy_local(sys, kTop, r) ==
          local_excess_entropy(sys.tpm(), sys.prior(), 0, 0));
}

TEST_CASE("double redundancy: memoryless system scores zero everywhere") {
    TransitionMatrix flat({{0.5, 0.25, 0.125, 0.125},
                           {0.5, 0.25, 0.125, 0.125},
                           {0.5, 0.25, 0.125, 0.125},
                           {0.5, 0.25, 0.125, 0.125}});
    FactorizedSystem sys(2, 2, flat, ProbVector::uniform(4));
    for (const PhiAtom& a : all_atoms()) {
        CHECK(double_redundancy_expected(sys, a) == 0.0);
        CHECK(double_redundancy_local(sys, a, {1, 2}) == 0.0);
    }
    AtomTable table = solve_expected(sys);
    for (double v : table.values) CHECK(v == 0.0);
}

TEST_CASE("mobius: golden table for the copy system at (0,0)->(0,0)") {
    FactorizedSystem sys = copy_system();
    AtomTable t = solve_local(sys, {0, 0});

    const double third = 0.41503749927884376;  // log2(4/3)
    const double halfup = 0.58496250072115619; // log2(3/2)
    auto v = [&](const char* s) { return t.value(atom_from_string(s)); };
    CHECK(v("{1}{2}->{1}{2}") == doctest::Approx(third).epsilon(1e-12));
    CHECK(v("{1}{2}->{1}") == doctest::Approx(0.0));
    CHECK(v("{1}{2}->{2}") == doctest::Approx(0.0));
    CHECK(v("{1}{2}->{12}") == doctest::Approx(0.0));
    CHECK(v("{1}->{1}{2}") == doctest::Approx(0.0));
    CHECK(v("{2}->{1}{2}") == doctest::Approx(0.0));
    CHECK(v("{1}->{1}") == doctest::Approx(halfup).epsilon(1e-12));
    CHECK(v("{2}->{2}") == doctest::Approx(halfup).epsilon(1e-12));
    CHECK(v("{1}->{2}") == doctest::Approx(-third).epsilon(1e-12));
    CHECK(v("{2}->{1}") == doctest::Approx(-third).epsilon(1e-12));
    CHECK(v("{1}->{12}") == doctest::Approx(third).epsilon(1e-12));
    CHECK(v("{2}->{12}") == doctest::Approx(third).epsilon(1e-12));
    CHECK(v("{12}->{1}") == doctest::Approx(third).epsilon(1e-12));
    CHECK(v("{12}->{2}") == doctest::Approx(third).epsilon(1e-12));
    CHECK(v("{12}->{1}{2}") == doctest::Approx(0.0));
    CHECK(v("{12}->{12}") == doctest::Approx(-third).epsilon(1e-12));
    CHECK(t.sum() == doctest::Approx(2.0).epsilon(1e-12));

    // full cross-check against the set-arithmetic oracle
    const auto oracle = phiid_oracle::solve(sys, {0, 0});
    for (const PhiAtom& a : all_atoms()) {
        CHECK(t.value(a) == doctest::Approx(phiid_oracle::value(oracle, a)).epsilon(1e-12));
    }
}

TEST_CASE("mobius: telescoping and oracle agreement on random systems") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 12; ++trial) {
        FactorizedSystem sys = random_system(rng);
        const int n = sys.joint_size();

        AtomTable expected = solve_expected(sys);
        CHECK(expected.sum() ==
              doctest::Approx(excess_entropy(sys.tpm(), sys.prior())).epsilon(1e-9));

        std::array<double, kAtomCount> weighted{};
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                const Realization r{x, y};
                const double p = sys.transition_probability(r);
                if (p <= 0.0) continue;
                AtomTable local = solve_local(sys, r);
                CHECK(local.sum() ==
                      doctest::Approx(local_excess_entropy(sys.tpm(), sys.prior(), x, y))
                          .epsilon(1e-9));
                for (int i = 0; i < kAtomCount; ++i) weighted[i] += p * local.values[i];
                if (trial < 3) {
                    const auto oracle = phiid_oracle::solve(sys, r);
                    for (const PhiAtom& a : all_atoms()) {
                        CHECK(local.value(a) ==
                              doctest::Approx(phiid_oracle::value(oracle, a)).epsilon(1e-10));
                    }
                }
            }
        }
        // expected lattice is the transition-weighted mean of the local ones
        for (int i = 0; i < kAtomCount; ++i) {
            CHECK(expected.values[i] == doctest::Approx(weighted[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("solve_local: zero-probability realizations are undefined") {
    FactorizedSystem sys = copy_system();
    CHECK_THROWS_AS(solve_local(sys, {0, 3}), undefined_realization);
    CHECK_THROWS_AS(solve_local(sys, {0, 99}), validation_error);
}

TEST_CASE("solve_local: custom redundancy function drives the same inversion") {
    FactorizedSystem sys = copy_system();
    auto constant = [](const FactorizedSystem&, const PhiAtom&, const Realization&) {
        return 0.75;
    };
    AtomTable t = solve_local(sys, {0, 0}, constant);
    CHECK(t.value(kBottom) == 0.75);
    for (const PhiAtom& a : all_atoms()) {
        if (!(a == kBottom)) CHECK(t.value(a) == doctest::Approx(0.0));
    }
}

TEST_CASE("phi heuristic: independent parts cancel, joint-only structure counts") {
    CHECK(phi_heuristic(copy_system()) == doctest::Approx(0.0).epsilon(1e-12));

    // joint update (x1, x2) -> (x1 xor x2, x1): element futures are uniform
    // and independent of their own pasts, all structure is joint
    TransitionMatrix xor_tpm({{1.0, 0.0, 0.0, 0.0},
                              {0.0, 0.0, 1.0, 0.0},
                              {0.0, 0.0, 0.0, 1.0},
                              {0.0, 1.0, 0.0, 0.0}});
    FactorizedSystem xs(2, 2, xor_tpm, ProbVector::uniform(4));

    // brute-force oracle: temporal marginalization with raw loops
    auto marginal_ee = [&](int element) {
        double cells[2][2] = {{0, 0}, {0, 0}};
        for (int x = 0; x < 4; ++x) {
            for (int y = 0; y < 4; ++y) {
                const int a = element == 1 ? x / 2 : x % 2;
                const int b = element == 1 ? y / 2 : y % 2;
                cells[a][b] += 0.25 * xor_tpm.at(x, y);
            }
        }
        double pa[2] = {cells[0][0] + cells[0][1], cells[1][0] + cells[1][1]};
        double pb[2] = {cells[0][0] + cells[1][0], cells[0][1] + cells[1][1]};
        double mi = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                if (cells[a][b] > 0.0) mi += cells[a][b] * std::log2(cells[a][b] / (pa[a] * pb[b]));
        return mi;
    };
    const double oracle_phi =
        excess_entropy(xor_tpm, ProbVector::uniform(4)) - marginal_ee(1) - marginal_ee(2);
    CHECK(oracle_phi == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(phi_heuristic(xs) == doctest::Approx(oracle_phi).epsilon(1e-12));
}

TEST_CASE("phi heuristic: vanishes for random product systems") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const int n1 = 2 + static_cast<int>(rng() % 2);
        const int n2 = 2 + static_cast<int>(rng() % 2);
        TransitionMatrix w1 = testutil::random_tpm(rng, n1);
        TransitionMatrix w2 = testutil::random_tpm(rng, n2);
        std::vector<double> p1 = testutil::random_dist(rng, n1);
        std::vector<double> p2 = testutil::random_dist(rng, n2);

        std::vector<std::vector<double>> rows(n1 * n2, std::vector<double>(n1 * n2));
        std::vector<double> prior(n1 * n2);
        for (int a1 = 0; a1 < n1; ++a1) {
            for (int a2 = 0; a2 < n2; ++a2) {
                prior[a1 * n2 + a2] = p1[a1] * p2[a2];
                for (int b1 = 0; b1 < n1; ++b1)
                    for (int b2 = 0; b2 < n2; ++b2)
                        rows[a1 * n2 + a2][b1 * n2 + b2] = w1.at(a1, b1) * w2.at(a2, b2);
            }
        }
        FactorizedSystem sys(n1, n2, TransitionMatrix(std::move(rows)),
                             ProbVector(std::move(prior)));
        CHECK(std::abs(phi_heuristic(sys)) <= 1e-9);
    }
}

TEST_CASE("emergence atoms: extraction and the incongruity flag") {
    FactorizedSystem sys = committed_system();
    AtomTable expected = solve_expected(sys);
    const double exp_dec = expected.value(kTop);
    CHECK(exp_dec == doctest::Approx(0.034951965071512985).epsilon(1e-6));
    CHECK(exp_dec > 0.0);

    EmergenceAtoms exp_atoms = emergence_atoms(expected);
    CHECK(exp_atoms.causal_decoupling == exp_dec);
    CHECK(exp_atoms.downward.size() == 3);
    CHECK(exp_atoms.downward.count("{12}->{1}") == 1);
    CHECK(exp_atoms.downward.count("{12}->{2}") == 1);
    CHECK(exp_atoms.downward.count("{12}->{1}{2}") == 1);
    CHECK_FALSE(exp_atoms.incongruous); // expected scope never flags

    // the committed system's negative-decoupling realizations, found by search
    const std::set<std::pair<int, int>> expected_negative{{0, 2}, {1, 1}, {2, 1},
                                                          {2, 3}, {3, 0}, {3, 3}};
    std::set<std::pair<int, int>> negative;
    double negative_mass = 0.0;
    for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 4; ++y) {
            AtomTable local = solve_local(sys, {x, y});
            EmergenceAtoms atoms = emergence_atoms(local, exp_dec);
            if (local.value(kTop) < 0.0) {
                negative.insert({x, y});
                negative_mass += sys.transition_probability({x, y});
                CHECK(atoms.incongruous);
            } else {
                CHECK_FALSE(atoms.incongruous);
            }
        }
    }
    CHECK(negative == expected_negative);
    CHECK(negative_mass == doctest::Approx(0.27005594980165759).epsilon(1e-6));
}

TEST_CASE("factorized system validation") {
    CHECK_THROWS_AS(FactorizedSystem(2, 3, TransitionMatrix::identity(4)), validation_error);
    CHECK_THROWS_AS(FactorizedSystem(1, 4, TransitionMatrix::identity(4)), validation_error);
    CHECK_THROWS_AS(
        FactorizedSystem(2, 2, TransitionMatrix::identity(4), ProbVector::uniform(3)),
        validation_error);
    FactorizedSystem ok(2, 3, TransitionMatrix::identity(6), ProbVector::uniform(6));
    CHECK(ok.joint_index(1, 2) == 5);
    CHECK(ok.split(4) == std::pair<int, int>{1, 1});
}
