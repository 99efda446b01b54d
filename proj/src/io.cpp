#include "emergence/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "emergence/errors.hpp"

namespace emergence {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write file: " + path);
    out << contents;
}

std::string digest_bytes(const std::string& bytes) {
    // FNV-1a, 64 bit
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string digest_file(const std::string& path) {
    return digest_bytes(read_file(path));
}

// --- CSV scaffolding ------------------------------------------------------------

namespace {

struct CsvLine {
    long number = 0; // 1-based line in the file
    std::vector<std::string> cells;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<CsvLine> csv_lines(const std::string& text) {
    std::vector<CsvLine> out;
    std::string line;
    std::istringstream in(text);
    long number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        CsvLine cl;
        cl.number = number;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cl.cells.push_back(trim(cell));
        if (!line.empty() && line.back() == ',') cl.cells.push_back("");
        out.push_back(std::move(cl));
    }
    return out;
}

bool try_parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size();
}

double parse_cell(const std::string& s, long line) {
    double v;
    if (!try_parse_double(s, v)) throw parse_error("cannot parse number '" + s + "'", line);
    return v;
}

bool all_numeric(const CsvLine& l) {
    double v;
    for (const auto& c : l.cells) {
        if (!try_parse_double(c, v)) return false;
    }
    return !l.cells.empty();
}

bool integer_like(const std::string& s, long& value) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    value = std::strtol(s.c_str(), &end, 10);
    return errno == 0 && end == s.c_str() + s.size();
}

} // namespace

// --- TPM / ProbVector --------------------------------------------------------------

TransitionMatrix parse_tpm_csv(const std::string& text) {
    auto lines = csv_lines(text);
    if (lines.empty()) throw parse_error("empty TPM file");
    std::vector<std::string> labels;
    size_t first = 0;
    if (!all_numeric(lines[0])) {
        labels = lines[0].cells;
        first = 1;
    }
    if (first >= lines.size()) throw parse_error("TPM file has a header but no rows");
    std::vector<std::vector<double>> rows;
    for (size_t k = first; k < lines.size(); ++k) {
        std::vector<double> row;
        row.reserve(lines[k].cells.size());
        for (const auto& c : lines[k].cells) row.push_back(parse_cell(c, lines[k].number));
        rows.push_back(std::move(row));
    }
    return TransitionMatrix(std::move(rows), std::move(labels));
}

std::string tpm_to_csv(const TransitionMatrix& w, bool header) {
    std::ostringstream out;
    if (header) {
        for (int j = 0; j < w.size(); ++j) out << (j ? "," : "") << w.label(j);
        out << "\n";
    }
    for (int i = 0; i < w.size(); ++i) {
        for (int j = 0; j < w.size(); ++j) out << (j ? "," : "") << format_g17(w.at(i, j));
        out << "\n";
    }
    return out.str();
}

ProbVector parse_prob_csv(const std::string& text) {
    auto lines = csv_lines(text);
    if (lines.empty()) throw parse_error("empty distribution file");
    std::vector<std::string> labels;
    size_t first = 0;
    if (!all_numeric(lines[0])) {
        labels = lines[0].cells;
        first = 1;
    }
    if (first >= lines.size()) throw parse_error("distribution file has a header but no row");
    if (lines.size() - first != 1) {
        throw parse_error("expected a single data row", lines[first + 1].number);
    }
    std::vector<double> p;
    for (const auto& c : lines[first].cells) p.push_back(parse_cell(c, lines[first].number));
    return ProbVector(std::move(p), std::move(labels));
}

std::string prob_to_csv(const ProbVector& p, bool header) {
    std::ostringstream out;
    if (header && !p.labels().empty()) {
        for (int i = 0; i < p.size(); ++i) out << (i ? "," : "") << p.labels()[i];
        out << "\n";
    }
    for (int i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_g17(p[i]);
    out << "\n";
    return out.str();
}

// --- Partition -----------------------------------------------------------------------

Partition parse_partition_csv(const std::string& text,
                              const std::vector<std::string>& micro_labels) {
    auto lines = csv_lines(text);
    size_t first = 0;
    if (!lines.empty() && lines[0].cells.size() == 2 && lines[0].cells[0] == "micro_label" &&
        lines[0].cells[1] == "macro_label") {
        first = 1;
    }
    std::map<std::string, std::string> macro_of;
    for (size_t k = first; k < lines.size(); ++k) {
        if (lines[k].cells.size() != 2) {
            throw parse_error("expected micro_label,macro_label", lines[k].number);
        }
        if (macro_of.count(lines[k].cells[0])) {
            throw parse_error("micro state '" + lines[k].cells[0] + "' assigned twice",
                              lines[k].number);
        }
        macro_of[lines[k].cells[0]] = lines[k].cells[1];
    }
    std::vector<int> assignment(micro_labels.size());
    std::vector<std::string> macro_labels;
    std::map<std::string, int> macro_ids;
    for (size_t i = 0; i < micro_labels.size(); ++i) {
        auto it = macro_of.find(micro_labels[i]);
        if (it == macro_of.end()) {
            throw validation_error("partition file does not assign micro state '" +
                                   micro_labels[i] + "'");
        }
        auto [mit, inserted] = macro_ids.try_emplace(it->second,
                                                     static_cast<int>(macro_labels.size()));
        if (inserted) macro_labels.push_back(it->second);
        assignment[i] = mit->second;
        macro_of.erase(it);
    }
    if (!macro_of.empty()) {
        throw validation_error("partition file names unknown micro state '" +
                               macro_of.begin()->first + "'");
    }
    return Partition(std::move(assignment), micro_labels, std::move(macro_labels));
}

std::string partition_to_csv(const Partition& p) {
    std::ostringstream out;
    out << "micro_label,macro_label\n";
    for (int i = 0; i < p.micro_count(); ++i) {
        out << p.micro_labels()[i] << "," << p.macro_labels()[p.macro_of(i)] << "\n";
    }
    return out.str();
}

// --- Graph / communities -----------------------------------------------------------------

WeightedGraph parse_edge_list_csv(const std::string& text, bool undirected) {
    auto lines = csv_lines(text);
    size_t first = 0;
    if (!lines.empty() && lines[0].cells.size() >= 2 && lines[0].cells[0] == "src" &&
        lines[0].cells[1] == "dst") {
        first = 1;
    }
    struct Edge {
        std::string src, dst;
        double w;
    };
    std::vector<Edge> edges;
    std::vector<std::string> labels;
    std::map<std::string, int> seen;
    auto note = [&](const std::string& l) {
        if (seen.try_emplace(l, 0).second) labels.push_back(l);
    };
    for (size_t k = first; k < lines.size(); ++k) {
        const auto& cells = lines[k].cells;
        if (cells.size() != 2 && cells.size() != 3) {
            throw parse_error("expected src,dst[,weight]", lines[k].number);
        }
        double w = 1.0;
        if (cells.size() == 3 && !cells[2].empty()) w = parse_cell(cells[2], lines[k].number);
        if (w < 0.0) throw parse_error("negative edge weight", lines[k].number);
        edges.push_back(Edge{cells[0], cells[1], w});
        note(cells[0]);
        note(cells[1]);
    }
    if (labels.empty()) throw parse_error("edge list has no nodes");

    // canonical node order: numeric when every label is an integer
    bool numeric = true;
    std::vector<std::pair<long, std::string>> keyed;
    for (const auto& l : labels) {
        long v = 0;
        if (!integer_like(l, v)) {
            numeric = false;
            break;
        }
        keyed.emplace_back(v, l);
    }
    if (numeric) {
        std::sort(keyed.begin(), keyed.end());
        labels.clear();
        for (auto& [v, l] : keyed) labels.push_back(l);
    } else {
        std::sort(labels.begin(), labels.end());
    }
    std::map<std::string, int> index;
    for (size_t i = 0; i < labels.size(); ++i) index[labels[i]] = static_cast<int>(i);

    WeightedGraph g(labels);
    for (const auto& e : edges) {
        const int s = index[e.src];
        const int d = index[e.dst];
        g.add_edge(s, d, e.w);
        if (undirected && s != d) g.add_edge(d, s, e.w);
    }
    return g;
}

CommunityAssignment parse_communities_csv(const std::string& text,
                                          const std::vector<std::string>& node_labels) {
    auto lines = csv_lines(text);
    size_t first = 0;
    if (!lines.empty() && lines[0].cells.size() == 2 && lines[0].cells[0] == "node" &&
        lines[0].cells[1] == "community") {
        first = 1;
    }
    std::map<std::string, int> index;
    for (size_t i = 0; i < node_labels.size(); ++i) index[node_labels[i]] = static_cast<int>(i);
    std::vector<int> community(node_labels.size(), -1);
    std::map<std::string, int> community_ids;
    for (size_t k = first; k < lines.size(); ++k) {
        const auto& cells = lines[k].cells;
        if (cells.size() != 2) throw parse_error("expected node,community", lines[k].number);
        auto it = index.find(cells[0]);
        if (it == index.end()) {
            throw validation_error("community file names unknown node '" + cells[0] + "'");
        }
        if (community[it->second] >= 0) {
            throw parse_error("node '" + cells[0] + "' assigned twice", lines[k].number);
        }
        auto [cit, _] =
            community_ids.try_emplace(cells[1], static_cast<int>(community_ids.size()));
        community[it->second] = cit->second;
    }
    for (size_t i = 0; i < community.size(); ++i) {
        if (community[i] < 0) {
            throw validation_error("community file does not assign node '" + node_labels[i] + "'");
        }
    }
    return make_communities(std::move(community), CommunitySource::file);
}

std::string communities_to_csv(const CommunityAssignment& c,
                               const std::vector<std::string>& node_labels) {
    std::ostringstream out;
    out << "node,community\n";
    for (size_t i = 0; i < node_labels.size(); ++i) {
        out << node_labels[i] << "," << c.community[i] << "\n";
    }
    return out.str();
}

// --- Trace ----------------------------------------------------------------------------

namespace {

std::string csv_value(double v) {
    if (std::isnan(v)) return "";
    return format_g17(v);
}

} // namespace

std::string trace_to_csv(const WalkTrace& trace) {
    std::ostringstream out;
    out << "t,state,e_micro,e_macro,ratio,decoupling,flicker\n";
    out << "0," << trace.states[0] << ",,,,,\n";
    for (int t = 0; t < trace.transition_count(); ++t) {
        out << (t + 1) << "," << trace.states[t + 1];
        out << "," << csv_value(trace.e_micro[t]);
        out << "," << (trace.has_macro() ? csv_value(trace.e_macro[t]) : "");
        out << "," << (trace.has_macro() ? csv_value(trace.ratio[t]) : "");
        out << "," << (trace.has_decoupling() ? csv_value(trace.decoupling[t]) : "");
        out << "," << (trace.flicker[t] ? 1 : 0) << "\n";
    }
    return out.str();
}

// --- JSON ------------------------------------------------------------------------------

FactorizedSystem parse_factorized_json(const std::string& text,
                                       std::optional<PriorPolicy> prior_override) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad JSON: ") + e.what());
    }
    if (!j.contains("element_cardinalities") || !j["element_cardinalities"].is_array() ||
        j["element_cardinalities"].size() != 2) {
        throw validation_error("factorized system: element_cardinalities must be [n1, n2]");
    }
    const int n1 = j["element_cardinalities"][0].get<int>();
    const int n2 = j["element_cardinalities"][1].get<int>();
    if (!j.contains("tpm") || !j["tpm"].is_array()) {
        throw validation_error("factorized system: missing tpm");
    }
    std::vector<std::vector<double>> rows;
    for (const auto& r : j["tpm"]) rows.push_back(r.get<std::vector<double>>());

    std::vector<std::string> labels;
    if (j.contains("labels")) {
        labels = j["labels"].get<std::vector<std::string>>();
    } else {
        for (int a = 0; a < n1; ++a)
            for (int b = 0; b < n2; ++b)
                labels.push_back("(" + std::to_string(a) + "," + std::to_string(b) + ")");
        if (static_cast<int>(labels.size()) != static_cast<int>(rows.size())) labels.clear();
    }
    TransitionMatrix tpm(std::move(rows), std::move(labels));

    std::optional<ProbVector> prior;
    if (prior_override) {
        prior = make_prior(tpm, *prior_override);
    } else if (j.contains("prior")) {
        prior = ProbVector(j["prior"].get<std::vector<double>>(), tpm.labels());
    }
    return FactorizedSystem(n1, n2, std::move(tpm), std::move(prior));
}

Partition parse_boolean_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad JSON: ") + e.what());
    }
    if (!j.contains("elements")) throw validation_error("boolean spec: missing elements count");
    const int n = j["elements"].get<int>();
    std::vector<BoolGroup> groups;
    for (const auto& g : j.value("groups", json::array())) {
        BoolGroup bg;
        bg.members = g.at("members").get<std::vector<int>>();
        bg.fn = bool_fn_from_string(g.at("function").get<std::string>());
        groups.push_back(std::move(bg));
    }
    return partition_from_boolean(n, groups);
}

json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json atom_table_json(const AtomTable& table, const FactorizedSystem& sys) {
    json atoms = json::object();
    for (const PhiAtom& a : all_atoms()) atoms[to_string(a)] = json_number(table.value(a));
    json out;
    out["scope"] = table.scope == AtomScope::local ? "local" : "expected";
    out["atoms"] = atoms;
    out["sum"] = json_number(table.sum());
    if (table.realization) {
        const auto [a1, a2] = sys.split(table.realization->prev);
        const auto [b1, b2] = sys.split(table.realization->next);
        out["realization"] = {{"prev", table.realization->prev},
                              {"next", table.realization->next},
                              {"prev_elements", {a1, a2}},
                              {"next_elements", {b1, b2}}};
    }
    return out;
}

json emergence_atoms_json(const EmergenceAtoms& atoms) {
    json downward = json::object();
    for (const auto& [k, v] : atoms.downward) downward[k] = json_number(v);
    return json{{"causal_decoupling", json_number(atoms.causal_decoupling)},
                {"downward", downward},
                {"incongruous", atoms.incongruous}};
}

json classification_json(const TransitionClassification& c, const TransitionMatrix& micro,
                         const Partition& partition) {
    json rows = json::array();
    for (const auto& t : c.transitions) {
        rows.push_back(json{{"from", micro.label(t.from)},
                            {"to", micro.label(t.to)},
                            {"macro_from", partition.macro_labels()[partition.macro_of(t.from)]},
                            {"macro_to", partition.macro_labels()[partition.macro_of(t.to)]},
                            {"e_micro", json_number(t.e_micro)},
                            {"e_macro", json_number(t.e_macro)},
                            {"class", to_string(t.cls)}});
    }
    json counts = json::object();
    for (TransitionClass cls :
         {TransitionClass::congruent_informative, TransitionClass::congruent_misinformative,
          TransitionClass::incongruous, TransitionClass::anti_incongruous,
          TransitionClass::zero}) {
        counts[to_string(cls)] = c.count(cls);
    }
    return json{{"prior", to_string(c.prior_policy)},
                {"transitions", rows},
                {"counts", counts},
                {"incongruous_fraction", c.incongruous_fraction()},
                {"incongruous_fraction_defined", c.fraction_defined()},
                {"anti_incongruous_fraction", c.anti_incongruous_fraction()},
                {"all_zero", c.all_zero()}};
}

json edge_classes_json(const EdgeClassCounts& e) {
    return json{{"counts",
                 {{"informative_within", e.informative_within},
                  {"informative_between", e.informative_between},
                  {"misinformative_within", e.misinformative_within},
                  {"misinformative_between", e.misinformative_between}}},
                {"fractions",
                 {{"informative_within", e.frac_informative_within()},
                  {"informative_between", e.frac_informative_between()},
                  {"misinformative_within", e.frac_misinformative_within()},
                  {"misinformative_between", e.frac_misinformative_between()}}}};
}

json flicker_summary_json(const FlickerSummary& s) {
    return json{{"flagged", s.flagged},
                {"fraction", s.fraction},
                {"flagged_steps", s.flagged_steps},
                {"flagged_runs", s.flagged_runs},
                {"unflagged_runs", s.unflagged_runs}};
}

json report_envelope(const std::string& analysis,
                     const std::vector<std::pair<std::string, std::string>>& inputs,
                     const json& options) {
    json in = json::object();
    for (const auto& [name, path] : inputs) {
        in[name] = json{{"path", path}, {"digest", digest_file(path)}};
    }
    return json{{"tool", kToolName},
                {"version", kToolVersion},
                {"analysis", analysis},
                {"inputs", in},
                {"options", options}};
}

} // namespace emergence
