#include <doctest.h>

#include <cmath>
#include <random>

#include "emergence/errors.hpp"
#include "emergence/io.hpp"
#include "helpers.hpp"

using namespace emergence;

TEST_CASE("tpm csv: round-trips bit-exact at 17 significant digits") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        TransitionMatrix w = testutil::random_tpm(rng, 2 + static_cast<int>(rng() % 6));
        TransitionMatrix back = parse_tpm_csv(tpm_to_csv(w));
        REQUIRE(back.size() == w.size());
        for (int i = 0; i < w.size(); ++i)
            for (int j = 0; j < w.size(); ++j) CHECK(back.at(i, j) == w.at(i, j));
        CHECK(back.labels() == w.labels());
    }
}

TEST_CASE("tpm csv: header detection and error reporting") {
    TransitionMatrix with_header = parse_tpm_csv("x,y\n0.5,0.5\n0.25,0.75\n");
    CHECK(with_header.labels() == std::vector<std::string>{"x", "y"});

    TransitionMatrix bare = parse_tpm_csv("0.5,0.5\n0.25,0.75\n");
    CHECK(bare.labels() == std::vector<std::string>{"s0", "s1"});

    // a row that sums to 0.8 is rejected with the row named
    try {
        parse_tpm_csv("0.5,0.5\n0.5,0.3\n");
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }

    // unparseable cells carry the file line
    try {
        parse_tpm_csv("a,b\n0.5,0.5\n0.5,oops\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 3);
    }

    // near-valid rows are renormalized and flagged
    TransitionMatrix renorm = parse_tpm_csv("0.5,0.5000004\n0.5,0.5\n");
    CHECK(renorm.renormalized());
    CHECK_THROWS_AS(parse_tpm_csv(""), parse_error);
    CHECK_THROWS_AS(parse_tpm_csv("0.5,0.5\n"), validation_error); // not square
}

TEST_CASE("prob csv: single row with optional header") {
    ProbVector p = parse_prob_csv("a,b,c\n0.2,0.3,0.5\n");
    CHECK(p.size() == 3);
    CHECK(p[2] == 0.5);
    CHECK_THROWS_AS(parse_prob_csv("0.5,0.5\n0.5,0.5\n"), parse_error);
    ProbVector q = parse_prob_csv(prob_to_csv(p));
    for (int i = 0; i < 3; ++i) CHECK(q[i] == p[i]);
}

TEST_CASE("partition csv: coverage and canonical macro ids") {
    const std::vector<std::string> micro{"a", "b", "c"};
    Partition p = parse_partition_csv("micro_label,macro_label\nb,hi\na,lo\nc,hi\n", micro);
    CHECK(p.macro_count() == 2);
    // macro ids ordered by first appearance in micro index order: a -> lo first
    CHECK(p.macro_labels() == std::vector<std::string>{"lo", "hi"});
    CHECK(p.macro_of(0) == 0);
    CHECK(p.macro_of(1) == 1);
    CHECK(p.macro_of(2) == 1);

    Partition back = parse_partition_csv(partition_to_csv(p), micro);
    CHECK(back.assignment() == p.assignment());

    CHECK_THROWS_AS(parse_partition_csv("a,x\nb,x\n", micro), validation_error); // c missing
    CHECK_THROWS_AS(parse_partition_csv("a,x\na,y\nb,x\nc,x\n", micro), parse_error);
    CHECK_THROWS_AS(parse_partition_csv("a,x\nb,x\nc,x\nz,x\n", micro), validation_error);
}

TEST_CASE("edge list csv: weights, ordering, direction") {
    WeightedGraph g = parse_edge_list_csv("src,dst,weight\n2,0\n0,1,2.5\n", false);
    CHECK(g.labels() == std::vector<std::string>{"0", "1", "2"}); // numeric sort
    CHECK(g.weight(2, 0) == 1.0);  // default weight
    CHECK(g.weight(0, 1) == 2.5);
    CHECK(g.weight(1, 0) == 0.0);  // directed

    WeightedGraph u = parse_edge_list_csv("0,1,2.5\n", true);
    CHECK(u.weight(0, 1) == 2.5);
    CHECK(u.weight(1, 0) == 2.5);

    WeightedGraph named = parse_edge_list_csv("beta,alpha\n", false);
    CHECK(named.labels() == std::vector<std::string>{"alpha", "beta"}); // lexicographic

    CHECK_THROWS_AS(parse_edge_list_csv("0,1,-2\n", false), parse_error);
    CHECK_THROWS_AS(parse_edge_list_csv("", false), parse_error);
}

TEST_CASE("community csv: unknown and missing nodes are named") {
    const std::vector<std::string> nodes{"0", "1"};
    CommunityAssignment c = parse_communities_csv("node,community\n1,b\n0,a\n", nodes);
    CHECK(c.community == std::vector<int>{0, 1}); // canonical by smallest member

    try {
        parse_communities_csv("0,a\n1,a\n9,a\n", nodes);
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("'9'") != std::string::npos);
    }
    try {
        parse_communities_csv("0,a\n", nodes);
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("'1'") != std::string::npos);
    }
}

TEST_CASE("factorized json: parsing, defaults, prior override") {
    FactorizedSystem sys = parse_factorized_json(read_file(testutil::data_path("copy2.json")));
    CHECK(sys.n1() == 2);
    CHECK(sys.prior()[0] == 0.25); // explicit file prior

    FactorizedSystem uni = parse_factorized_json(read_file(testutil::data_path("phiid4.json")),
                                                 PriorPolicy::uniform);
    CHECK(uni.prior()[0] == 0.25);

    FactorizedSystem stat = parse_factorized_json(read_file(testutil::data_path("phiid4.json")));
    CHECK(stat.prior()[0] == doctest::Approx(0.13649548329383965).epsilon(1e-6));

    CHECK_THROWS_AS(parse_factorized_json("{"), parse_error);
    CHECK_THROWS_AS(parse_factorized_json("{\"tpm\": []}"), validation_error);
}

TEST_CASE("boolean json: induces the expected partition") {
    Partition p = parse_boolean_json(
        R"({"elements": 2, "groups": [{"members": [0, 1], "function": "AND"}]})");
    CHECK(p.assignment() == std::vector<int>{0, 0, 0, 1});
    CHECK_THROWS_AS(parse_boolean_json(R"({"groups": []})"), validation_error);
}

TEST_CASE("json numbers: sentinels survive serialization") {
    CHECK(json_number(0.5) == nlohmann::json(0.5));
    CHECK(json_number(neg_inf()) == nlohmann::json("-inf"));
    CHECK(json_number(-neg_inf()) == nlohmann::json("inf"));
    CHECK(json_number(std::nan("")).is_null());
}

TEST_CASE("atom table json: 16 canonical keys plus realization") {
    FactorizedSystem sys = parse_factorized_json(read_file(testutil::data_path("copy2.json")));
    AtomTable t = solve_local(sys, {0, 0});
    nlohmann::json j = atom_table_json(t, sys);
    CHECK(j["scope"] == "local");
    CHECK(j["atoms"].size() == 16);
    CHECK(j["atoms"].contains("{1}{2}->{12}"));
    CHECK(j["realization"]["prev_elements"] == nlohmann::json({0, 0}));
    CHECK(j["sum"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("digest: stable fingerprint") {
    CHECK(digest_bytes("abc") == "fnv1a64:e71fa2190541574b");
    CHECK(digest_bytes("") == "fnv1a64:cbf29ce484222325");
    CHECK(digest_bytes("abc") == digest_bytes("abc"));
    CHECK(digest_bytes("abd") != digest_bytes("abc"));
}

TEST_CASE("trace csv: layout and empty cells for absent contexts") {
    TransitionMatrix w({{0.0, 1.0}, {1.0, 0.0}});
    AnnotationContext ctx;
    ctx.prior_policy = PriorPolicy::uniform;
    WalkTrace t = annotate(w, simulate(w, 0, 3, 9), 9, ctx);
    const std::string csv = trace_to_csv(t);
    CHECK(csv.find("t,state,e_micro,e_macro,ratio,decoupling,flicker\n") == 0);
    CHECK(csv.find("0,0,,,,,\n") != std::string::npos);
    CHECK(csv.find("1,1,1,,,,0\n") != std::string::npos); // one bit, no macro/decoupling
}

TEST_CASE("report envelope: deterministic output") {
    const std::string path = testutil::data_path("coarse4.csv");
    nlohmann::json a = report_envelope("coarse-grain", {{"tpm", path}}, {{"prior", "uniform"}});
    nlohmann::json b = report_envelope("coarse-grain", {{"tpm", path}}, {{"prior", "uniform"}});
    CHECK(a.dump(2) == b.dump(2));
    CHECK(a["inputs"]["tpm"]["digest"].get<std::string>().substr(0, 8) == "fnv1a64:");
    CHECK(a["version"] == kToolVersion);
}
