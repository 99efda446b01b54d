// Command-line surface tying the library into reproducible batch analyses.
// Exit codes: 0 success, 2 input/validation error, 3 undefined-quantity
// outcome, 1 unexpected failure.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "emergence/coarse.hpp"
#include "emergence/errors.hpp"
#include "emergence/io.hpp"
#include "emergence/network.hpp"
#include "emergence/phiid.hpp"
#include "emergence/prob.hpp"
#include "emergence/walk.hpp"

namespace {

using emergence::json_number;
using nlohmann::json;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        emergence::write_file(out_path, content);
    }
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

struct AnalyzeArgs {
    std::string tpm_path;
    std::string partition_path;
    std::string boolean_path;
    std::string prior = "uniform";
    std::string weighting = "uniform";
    std::string out;
};

int cmd_analyze(const AnalyzeArgs& a) {
    const emergence::TransitionMatrix w = emergence::parse_tpm_csv(emergence::read_file(a.tpm_path));
    const emergence::PriorPolicy prior = emergence::prior_policy_from_string(a.prior);
    const emergence::Weighting weighting = a.weighting == "stationary"
                                               ? emergence::Weighting::stationary_within_group
                                               : emergence::Weighting::uniform_within_group;

    std::vector<std::pair<std::string, std::string>> inputs{{"tpm", a.tpm_path}};
    std::optional<emergence::Partition> partition;
    if (!a.partition_path.empty()) {
        partition = emergence::parse_partition_csv(emergence::read_file(a.partition_path),
                                                   w.labels());
        inputs.emplace_back("partition", a.partition_path);
    } else if (!a.boolean_path.empty()) {
        partition = emergence::parse_boolean_json(emergence::read_file(a.boolean_path));
        if (partition->micro_count() != w.size()) {
            throw emergence::validation_error("boolean spec induces " +
                                              std::to_string(partition->micro_count()) +
                                              " micro states, TPM has " +
                                              std::to_string(w.size()));
        }
        inputs.emplace_back("boolean", a.boolean_path);
    }

    json report = emergence::report_envelope(
        "coarse-grain", inputs, json{{"prior", a.prior}, {"weighting", a.weighting}});
    json warnings = json::array();
    if (w.renormalized()) warnings.push_back("tpm rows renormalized");

    const emergence::ProbVector micro_prior = emergence::make_prior(w, prior);
    report["micro"] = json{{"states", w.size()},
                           {"effective_information", emergence::effective_information(w)},
                           {"effectiveness", json_number(emergence::effectiveness(w))},
                           {"excess_entropy", emergence::excess_entropy(w, micro_prior)}};

    if (partition) {
        const emergence::MacroScale macro = emergence::macro_tpm(w, *partition, weighting);
        for (int g : macro.weight_fallback_groups) {
            warnings.push_back("group '" + partition->macro_labels()[g] +
                               "' has zero stationary mass; uniform weights used");
        }
        const std::vector<double> macro_prior = partition->project(micro_prior.probs());
        json macro_json{{"states", partition->macro_count()},
                        {"effective_information",
                         emergence::effective_information(macro.macro_tpm)},
                        {"excess_entropy",
                         emergence::excess_entropy(
                             macro.macro_tpm,
                             emergence::ProbVector(macro_prior, macro.macro_tpm.labels()))}};
        json assignment = json::object();
        for (int i = 0; i < partition->micro_count(); ++i) {
            assignment[partition->micro_labels()[i]] =
                partition->macro_labels()[partition->macro_of(i)];
        }
        report["partition"] = json{{"macro_states", partition->macro_count()},
                                   {"assignment", assignment}};
        if (partition->macro_count() >= 2) {
            macro_json["effectiveness"] = json_number(emergence::effectiveness(macro.macro_tpm));
            report["emergence_score"] = json_number(emergence::emergence_score(w, macro));
        } else {
            warnings.push_back("macro-undefined: single macro state, "
                               "effectiveness and emergence score omitted");
        }
        report["macro"] = macro_json;
        report["classification"] =
            emergence::classification_json(emergence::classify_transitions(w, macro, prior), w,
                                           *partition);
    }
    report["warnings"] = warnings;
    emit(a.out, dump(report));
    return 0;
}

struct SearchArgs {
    std::string tpm_path;
    std::string mode = "exhaustive";
    std::string out;
    std::string partition_out;
};

int cmd_search(const SearchArgs& a) {
    const emergence::TransitionMatrix w = emergence::parse_tpm_csv(emergence::read_file(a.tpm_path));
    const emergence::SearchMode mode = a.mode == "greedy" ? emergence::SearchMode::greedy
                                                          : emergence::SearchMode::exhaustive;
    if (a.mode != "greedy" && a.mode != "exhaustive") {
        throw emergence::validation_error("unknown search mode '" + a.mode + "'");
    }
    const emergence::SearchResult result = emergence::partition_search(w, mode);

    json assignment = json::object();
    for (int i = 0; i < result.partition.micro_count(); ++i) {
        assignment[result.partition.micro_labels()[i]] =
            result.partition.macro_labels()[result.partition.macro_of(i)];
    }
    json report = emergence::report_envelope("partition-search", {{"tpm", a.tpm_path}},
                                             json{{"mode", a.mode}});
    report["best"] = json{{"score", result.score},
                          {"macro_states", result.partition.macro_count()},
                          {"assignment", assignment},
                          {"candidates_evaluated", result.candidates_evaluated}};
    if (!a.partition_out.empty()) {
        emergence::write_file(a.partition_out, emergence::partition_to_csv(result.partition));
    }
    emit(a.out, dump(report));
    return 0;
}

struct PhiidArgs {
    std::string system_path;
    std::string realization;
    bool expected = false;
    std::string prior; // empty = file prior / stationary default
    std::string out;
};

emergence::Realization parse_realization(const emergence::FactorizedSystem& sys,
                                         const std::string& spec) {
    const auto arrow = spec.find("->");
    if (arrow == std::string::npos) {
        throw emergence::validation_error(
            "realization must look like a1,a2->b1,b2 (element states)");
    }
    auto parse_pair = [&](const std::string& part, int& e1, int& e2) {
        const auto comma = part.find(',');
        if (comma == std::string::npos) {
            throw emergence::validation_error("bad realization part '" + part + "'");
        }
        try {
            e1 = std::stoi(part.substr(0, comma));
            e2 = std::stoi(part.substr(comma + 1));
        } catch (const std::exception&) {
            throw emergence::validation_error("bad realization part '" + part + "'");
        }
    };
    int a1, a2, b1, b2;
    parse_pair(spec.substr(0, arrow), a1, a2);
    parse_pair(spec.substr(arrow + 2), b1, b2);
    if (a1 < 0 || a1 >= sys.n1() || b1 < 0 || b1 >= sys.n1() || a2 < 0 || a2 >= sys.n2() ||
        b2 < 0 || b2 >= sys.n2()) {
        throw emergence::validation_error("realization element state out of range");
    }
    return emergence::Realization{sys.joint_index(a1, a2), sys.joint_index(b1, b2)};
}

int cmd_phiid(const PhiidArgs& a) {
    std::optional<emergence::PriorPolicy> prior_override;
    if (!a.prior.empty()) prior_override = emergence::prior_policy_from_string(a.prior);
    const emergence::FactorizedSystem sys =
        emergence::parse_factorized_json(emergence::read_file(a.system_path), prior_override);

    json report = emergence::report_envelope(
        "phiid", {{"system", a.system_path}},
        json{{"prior", a.prior.empty() ? "file-or-stationary" : a.prior}});
    report["phi_heuristic"] = json_number(emergence::phi_heuristic(sys));

    const emergence::AtomTable expected = emergence::solve_expected(sys);
    const emergence::PhiAtom top{emergence::SourceCollection::joint,
                                 emergence::SourceCollection::joint};
    if (!a.realization.empty() && !a.expected) {
        const emergence::Realization r = parse_realization(sys, a.realization);
        const emergence::AtomTable local = emergence::solve_local(sys, r);
        report["table"] = emergence::atom_table_json(local, sys);
        report["emergence_atoms"] =
            emergence::emergence_atoms_json(emergence::emergence_atoms(local,
                                                                       expected.value(top)));
        report["expected_causal_decoupling"] = json_number(expected.value(top));
    } else {
        report["table"] = emergence::atom_table_json(expected, sys);
        report["emergence_atoms"] =
            emergence::emergence_atoms_json(emergence::emergence_atoms(expected));
    }
    emit(a.out, dump(report));
    return 0;
}

struct WalkArgs {
    std::string tpm_path;
    int steps = 0;
    std::uint64_t seed = 0;
    int start_state = 0;
    bool start_prior = false;
    std::string partition_path;
    std::string system_path;
    std::string prior = "stationary";
    std::string out;
    std::string summary_path;
};

int cmd_walk(const WalkArgs& a) {
    if (a.steps < 1) throw emergence::validation_error("--steps must be >= 1");
    const emergence::TransitionMatrix w = emergence::parse_tpm_csv(emergence::read_file(a.tpm_path));

    emergence::AnnotationContext ctx;
    ctx.prior_policy = emergence::prior_policy_from_string(a.prior);
    if (!a.partition_path.empty()) {
        ctx.partition = emergence::parse_partition_csv(emergence::read_file(a.partition_path),
                                                       w.labels());
    }
    if (!a.system_path.empty()) {
        ctx.factorized = emergence::parse_factorized_json(emergence::read_file(a.system_path),
                                                          ctx.prior_policy);
    }

    std::vector<int> states =
        a.start_prior
            ? emergence::simulate(w, emergence::make_prior(w, ctx.prior_policy), a.steps, a.seed)
            : emergence::simulate(w, a.start_state, a.steps, a.seed);
    const emergence::WalkTrace trace = emergence::annotate(w, std::move(states), a.seed, ctx);
    const emergence::FlickerSummary summary = emergence::flicker_summary(trace);

    emit(a.out, emergence::trace_to_csv(trace));

    json sj{{"seed", trace.seed},
            {"steps", trace.transition_count()},
            {"prior", a.prior},
            {"expected_e_micro", json_number(trace.expected_e_micro)},
            {"expected_e_macro", json_number(trace.expected_e_macro)},
            {"expected_decoupling", json_number(trace.expected_decoupling)},
            {"flicker", emergence::flicker_summary_json(summary)}};
    if (a.summary_path.empty()) {
        std::cerr << dump(sj);
    } else {
        emergence::write_file(a.summary_path, dump(sj));
    }
    return 0;
}

struct NetworkArgs {
    std::string edges_path;
    std::string communities_path;
    bool label_prop = false;
    std::uint64_t seed = 0;
    bool undirected = false;
    std::string prior = "uniform";
    std::string out;
};

int cmd_network(const NetworkArgs& a) {
    const emergence::WeightedGraph g =
        emergence::parse_edge_list_csv(emergence::read_file(a.edges_path), a.undirected);

    std::vector<std::pair<std::string, std::string>> inputs{{"edges", a.edges_path}};
    emergence::CommunityAssignment communities;
    if (!a.communities_path.empty()) {
        communities = emergence::parse_communities_csv(emergence::read_file(a.communities_path),
                                                       g.labels());
        inputs.emplace_back("communities", a.communities_path);
    } else if (a.label_prop) {
        communities = emergence::label_propagation(g, a.seed);
    } else {
        throw emergence::validation_error("need --communities FILE or --label-prop");
    }

    const emergence::PriorPolicy prior = emergence::prior_policy_from_string(a.prior);
    const emergence::NetworkEmergenceReport rep = emergence::network_emergence(g, communities,
                                                                               prior);

    json report = emergence::report_envelope(
        "network", inputs,
        json{{"prior", a.prior},
             {"undirected", a.undirected},
             {"communities",
              a.communities_path.empty() ? json{{"source", "label-propagation"}, {"seed", a.seed}}
                                         : json{{"source", "file"}}}});
    json comm = json::object();
    for (int i = 0; i < g.size(); ++i) comm[g.labels()[i]] = communities.community[i];
    report["graph"] = json{{"nodes", g.size()}, {"directed_edges", g.edge_count()}};
    report["communities"] = json{{"count", communities.community_count}, {"assignment", comm}};
    report["micro"] = json{{"effective_information", rep.micro_ei},
                           {"effectiveness", json_number(rep.micro_effectiveness)}};
    if (rep.macro_ei) {
        report["macro"] = json{{"effective_information", *rep.macro_ei},
                               {"effectiveness", json_number(*rep.macro_effectiveness)}};
    }
    if (rep.emergence) report["emergence_score"] = json_number(*rep.emergence);
    if (rep.classification) {
        report["classification"] = emergence::classification_json(
            *rep.classification, rep.walker.tpm, communities.to_partition(g.labels()));
    }
    json edges = json::array();
    for (const auto& e : rep.edge_map.edges) {
        edges.push_back(json{{"src", g.labels()[e.src]},
                             {"dst", g.labels()[e.dst]},
                             {"value", json_number(e.value)},
                             {"within", e.within}});
    }
    report["edges"] = edges;
    report["edge_classes"] = emergence::edge_classes_json(rep.edge_classes);
    report["warnings"] = rep.warnings;
    emit(a.out, dump(report));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"information-theoretic emergence analysis for discrete Markov systems"};
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* an = app.add_subcommand("analyze", "coarse-graining emergence report for a TPM");
    an->add_option("tpm", analyze.tpm_path, "transition matrix CSV")->required();
    an->add_option("--partition", analyze.partition_path, "partition CSV (micro_label,macro_label)");
    an->add_option("--boolean", analyze.boolean_path, "Boolean aggregation JSON spec");
    an->add_option("--prior", analyze.prior, "prior over past states (uniform|stationary)");
    an->add_option("--weighting", analyze.weighting, "within-group lumping weights (uniform|stationary)");
    an->add_option("--out", analyze.out, "write the JSON report here instead of stdout");

    SearchArgs search;
    auto* se = app.add_subcommand("search", "find the partition maximizing macro effectiveness");
    se->add_option("tpm", search.tpm_path, "transition matrix CSV")->required();
    se->add_option("--mode", search.mode, "exhaustive (N <= 10) or greedy");
    se->add_option("--out", search.out, "write the JSON report here instead of stdout");
    se->add_option("--partition-out", search.partition_out, "also write the winning partition CSV");

    PhiidArgs phiid;
    auto* ph = app.add_subcommand("phiid", "16-atom temporal information decomposition");
    ph->add_option("system", phiid.system_path, "factorized system JSON")->required();
    ph->add_option("--realization", phiid.realization, "local transition a1,a2->b1,b2");
    ph->add_flag("--expected", phiid.expected, "solve the expected lattice (default)");
    ph->add_option("--prior", phiid.prior, "override the prior (uniform|stationary)");
    ph->add_option("--out", phiid.out, "write the JSON report here instead of stdout");

    WalkArgs walk;
    auto* wa = app.add_subcommand("walk", "seeded random walk with local annotations");
    wa->add_option("tpm", walk.tpm_path, "transition matrix CSV")->required();
    wa->add_option("--steps", walk.steps, "number of transitions (>= 1)")->required();
    wa->add_option("--seed", walk.seed, "PRNG seed");
    wa->add_option("--start", walk.start_state, "fixed start state index (default 0)");
    wa->add_flag("--start-prior", walk.start_prior, "draw the start state from the prior");
    wa->add_option("--partition", walk.partition_path, "partition CSV for macro annotations");
    wa->add_option("--system", walk.system_path, "factorized system JSON for decoupling annotations");
    wa->add_option("--prior", walk.prior, "prior policy (uniform|stationary)");
    wa->add_option("--out", walk.out, "write the trace CSV here instead of stdout");
    wa->add_option("--summary", walk.summary_path, "write the flicker summary JSON here (default stderr)");

    NetworkArgs network;
    auto* ne = app.add_subcommand("network", "random-walker emergence analysis of a graph");
    ne->add_option("edges", network.edges_path, "edge list CSV (src,dst[,weight])")->required();
    ne->add_option("--communities", network.communities_path, "community CSV (node,community)");
    ne->add_flag("--label-prop", network.label_prop, "detect communities by label propagation");
    ne->add_option("--seed", network.seed, "label propagation seed");
    ne->add_flag("--undirected", network.undirected, "treat each edge row as bidirectional");
    ne->add_option("--prior", network.prior, "prior for edge-local values (uniform|stationary)");
    ne->add_option("--out", network.out, "write the JSON report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage problems follow the validation exit code
    }

    try {
        if (an->parsed()) return cmd_analyze(analyze);
        if (se->parsed()) return cmd_search(search);
        if (ph->parsed()) return cmd_phiid(phiid);
        if (wa->parsed()) return cmd_walk(walk);
        if (ne->parsed()) return cmd_network(network);
    } catch (const emergence::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const emergence::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
