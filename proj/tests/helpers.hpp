// Shared test utilities: seeded random generators for distributions and
// transition matrices, paths to the committed data files, and a tiny
// subprocess runner for CLI checks.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "emergence/prob.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(TEST_DATA_DIR) + "/" + name;
}

inline std::string cli_path() {
    return EMERGENCE_CLI_PATH;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string temp_file(const std::string& hint) {
    static int counter = 0;
    return "/tmp/emergence_test_" + std::to_string(getpid()) + "_" + std::to_string(counter++) +
           "_" + hint;
}

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline CmdResult run_cli(const std::string& args) {
    const std::string out = temp_file("out");
    const std::string err = temp_file("err");
    const std::string cmd = cli_path() + " " + args + " > " + out + " 2> " + err;
    const int status = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    std::remove(out.c_str());
    std::remove(err.c_str());
    return r;
}

// Random strictly-positive weights normalized to 1.
inline std::vector<double> random_dist(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& v : p) sum += (v = u(rng));
    for (double& v : p) v /= sum;
    return p;
}

inline emergence::TransitionMatrix random_tpm(std::mt19937_64& rng, int n) {
    std::vector<std::vector<double>> rows(n);
    for (auto& row : rows) row = random_dist(rng, n);
    return emergence::TransitionMatrix(std::move(rows));
}

inline emergence::JointDist random_joint(std::mt19937_64& rng, int nx, int ny) {
    std::uniform_real_distribution<double> u(0.02, 1.0);
    std::vector<std::vector<double>> cells(nx, std::vector<double>(ny));
    double sum = 0.0;
    for (auto& row : cells)
        for (double& v : row) sum += (v = u(rng));
    for (auto& row : cells)
        for (double& v : row) v /= sum;
    return emergence::JointDist(std::move(cells));
}

} // namespace testutil
