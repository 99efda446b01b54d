#include "emergence/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emergence/errors.hpp"

namespace emergence {

namespace {

// Validates a raw weight vector as a distribution. Renormalizes in place when
// the total is off by more than kSumTol but within kRenormTol of 1.
// Returns true when renormalization happened.
bool validate_distribution(std::vector<double>& p, const std::string& what) {
    if (p.empty()) {
        throw validation_error(what + ": empty distribution");
    }
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) {
            throw validation_error(what + ": negative entry " + std::to_string(v));
        }
        if (!std::isfinite(v)) {
            throw validation_error(what + ": non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) <= kSumTol) {
        return false;
    }
    if (std::abs(sum - 1.0) <= kRenormTol) {
        for (double& v : p) v /= sum;
        return true;
    }
    throw validation_error(what + ": entries sum to " + std::to_string(sum) + ", not 1");
}

void check_labels(const std::vector<std::string>& labels, size_t n, const std::string& what) {
    if (!labels.empty() && labels.size() != n) {
        throw validation_error(what + ": " + std::to_string(labels.size()) + " labels for " +
                               std::to_string(n) + " states");
    }
}

} // namespace

double neg_inf() {
    return -std::numeric_limits<double>::infinity();
}

// --- ProbVector --------------------------------------------------------------

ProbVector::ProbVector(std::vector<double> probs, std::vector<std::string> labels)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
    renormalized_ = validate_distribution(probs_, "ProbVector");
    check_labels(labels_, probs_.size(), "ProbVector");
}

ProbVector ProbVector::uniform(int n) {
    if (n < 1) throw validation_error("uniform: need at least one state");
    return ProbVector(std::vector<double>(n, 1.0 / n));
}

ProbVector ProbVector::point_mass(int n, int state) {
    if (n < 1 || state < 0 || state >= n) throw validation_error("point_mass: state out of range");
    std::vector<double> p(n, 0.0);
    p[state] = 1.0;
    return ProbVector(std::move(p));
}

// --- JointDist ---------------------------------------------------------------

JointDist::JointDist(std::vector<std::vector<double>> table,
                     std::vector<std::string> row_labels,
                     std::vector<std::string> col_labels)
    : table_(std::move(table)), row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)) {
    if (table_.empty() || table_[0].empty()) {
        throw validation_error("JointDist: empty table");
    }
    const size_t nc = table_[0].size();
    double total = 0.0;
    for (const auto& row : table_) {
        if (row.size() != nc) throw validation_error("JointDist: ragged table");
        for (double v : row) {
            if (v < 0.0 || !std::isfinite(v)) {
                throw validation_error("JointDist: invalid cell " + std::to_string(v));
            }
            total += v;
        }
    }
    if (std::abs(total - 1.0) > kSumTol) {
        if (std::abs(total - 1.0) <= kRenormTol) {
            for (auto& row : table_)
                for (double& v : row) v /= total;
        } else {
            throw validation_error("JointDist: cells sum to " + std::to_string(total) + ", not 1");
        }
    }
    check_labels(row_labels_, table_.size(), "JointDist");
    check_labels(col_labels_, nc, "JointDist");

    row_marginal_.assign(table_.size(), 0.0);
    col_marginal_.assign(nc, 0.0);
    for (size_t i = 0; i < table_.size(); ++i) {
        for (size_t j = 0; j < nc; ++j) {
            row_marginal_[i] += table_[i][j];
            col_marginal_[j] += table_[i][j];
        }
    }
}

JointDist JointDist::transposed() const {
    std::vector<std::vector<double>> t(cols(), std::vector<double>(rows()));
    for (int i = 0; i < rows(); ++i)
        for (int j = 0; j < cols(); ++j) t[j][i] = table_[i][j];
    return JointDist(std::move(t), col_labels_, row_labels_);
}

// --- TransitionMatrix --------------------------------------------------------

TransitionMatrix::TransitionMatrix(std::vector<std::vector<double>> rows,
                                   std::vector<std::string> labels)
    : rows_(std::move(rows)), labels_(std::move(labels)) {
    if (rows_.empty()) throw validation_error("TransitionMatrix: empty");
    const size_t n = rows_.size();
    for (size_t i = 0; i < n; ++i) {
        if (rows_[i].size() != n) {
            throw validation_error("TransitionMatrix: row " + std::to_string(i) +
                                   " has " + std::to_string(rows_[i].size()) +
                                   " entries, expected " + std::to_string(n));
        }
        try {
            renormalized_ = validate_distribution(rows_[i], "row " + std::to_string(i)) ||
                            renormalized_;
        } catch (const validation_error&) {
            throw; // message already names the row
        }
    }
    if (labels_.empty()) {
        labels_.reserve(n);
        for (size_t i = 0; i < n; ++i) labels_.push_back("s" + std::to_string(i));
    }
    check_labels(labels_, n, "TransitionMatrix");
}

TransitionMatrix TransitionMatrix::identity(int n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) rows[i][i] = 1.0;
    return TransitionMatrix(std::move(rows));
}

int TransitionMatrix::label_index(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

std::vector<double> TransitionMatrix::next_marginal(const std::vector<double>& prior) const {
    const int n = size();
    if (static_cast<int>(prior.size()) != n) {
        throw validation_error("next_marginal: prior length mismatch");
    }
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (prior[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) out[j] += prior[i] * rows_[i][j];
    }
    return out;
}

// --- PriorPolicy -------------------------------------------------------------

const char* to_string(PriorPolicy p) {
    return p == PriorPolicy::uniform ? "uniform" : "stationary";
}

PriorPolicy prior_policy_from_string(const std::string& s) {
    if (s == "uniform") return PriorPolicy::uniform;
    if (s == "stationary") return PriorPolicy::stationary;
    throw validation_error("unknown prior policy '" + s + "' (expected uniform or stationary)");
}

// --- Information measures ----------------------------------------------------

double entropy(const ProbVector& p) {
    double h = 0.0;
    for (double v : p.probs()) {
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h < 0.0 ? 0.0 : h;
}

double expected_mi(const JointDist& j) {
    const auto& px = j.row_marginal();
    const auto& py = j.col_marginal();
    double mi = 0.0;
    for (int x = 0; x < j.rows(); ++x) {
        for (int y = 0; y < j.cols(); ++y) {
            const double pxy = j.at(x, y);
            if (pxy > 0.0) mi += pxy * std::log2(pxy / (px[x] * py[y]));
        }
    }
    // mathematically >= 0; rounding can leave a dust-sized negative
    return (mi < 0.0 && mi > -1e-12) ? 0.0 : mi;
}

double local_mi(const JointDist& j, int x, int y) {
    const double px = j.row_marginal()[x];
    const double py = j.col_marginal()[y];
    if (px <= 0.0 || py <= 0.0) {
        throw undefined_conditional("local_mi: zero marginal at (" + std::to_string(x) + "," +
                                    std::to_string(y) + ")");
    }
    const double pxy = j.at(x, y);
    if (pxy == 0.0) return neg_inf();
    return std::log2(pxy / (px * py));
}

ProbVector stationary(const TransitionMatrix& w) {
    // Averaged power iteration from the uniform start: iterate the half-lazy
    // chain (W + I)/2, which has the same stationary set as W but is
    // aperiodic, so periodic chains converge too. Reducible chains yield the
    // stationary mixture reachable from uniform.
    const int n = w.size();
    std::vector<double> v(n, 1.0 / n);
    const int max_iters = 100000;
    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<double> wv = w.next_marginal(v);
        residual = 0.0;
        for (int i = 0; i < n; ++i) residual = std::max(residual, std::abs(wv[i] - v[i]));
        if (residual <= 1e-10) {
            double sum = 0.0;
            for (double x : v) sum += x;
            for (double& x : v) x /= sum;
            return ProbVector(std::move(v), w.labels());
        }
        for (int i = 0; i < n; ++i) v[i] = 0.5 * (v[i] + wv[i]);
    }
    throw numeric_error("stationary: no convergence after " + std::to_string(max_iters) +
                            " iterations",
                        residual);
}

JointDist joint_from_tpm(const TransitionMatrix& w, const ProbVector& prior) {
    const int n = w.size();
    if (prior.size() != n) {
        throw validation_error("joint_from_tpm: prior has " + std::to_string(prior.size()) +
                               " entries for " + std::to_string(n) + " states");
    }
    std::vector<std::vector<double>> cells(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cells[i][j] = prior[i] * w.at(i, j);
    return JointDist(std::move(cells), w.labels(), w.labels());
}

ProbVector make_prior(const TransitionMatrix& w, PriorPolicy policy) {
    if (policy == PriorPolicy::uniform) {
        std::vector<double> p(w.size(), 1.0 / w.size());
        return ProbVector(std::move(p), w.labels());
    }
    return stationary(w);
}

double excess_entropy(const TransitionMatrix& w, const ProbVector& prior) {
    return expected_mi(joint_from_tpm(w, prior));
}

double local_excess_entropy(const TransitionMatrix& w, const ProbVector& prior, int i, int j) {
    if (prior.size() != w.size()) {
        throw validation_error("local_excess_entropy: prior length mismatch");
    }
    if (prior[i] <= 0.0) {
        throw undefined_conditional("local_excess_entropy: zero prior mass on state " +
                                    std::to_string(i));
    }
    const double pn = w.next_marginal(prior.probs())[j];
    if (pn <= 0.0) {
        throw undefined_conditional("local_excess_entropy: next-state marginal is zero at " +
                                    std::to_string(j));
    }
    if (w.at(i, j) == 0.0) return neg_inf();
    return std::log2(w.at(i, j) / pn);
}

} // namespace emergence
