// Discrete probability foundation: distributions, joint distributions,
// transition matrices, entropies, expected and local mutual information.
// All quantities are in bits (base-2 logarithms) and all types are
// immutable value types once constructed.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace emergence {

// Validation tolerances. A distribution whose total is within kSumTol of 1
// is accepted as-is; within kRenormTol it is renormalized (and flagged);
// anything further off is rejected so malformed files are not silently fixed.
inline constexpr double kSumTol = 1e-9;
inline constexpr double kRenormTol = 1e-6;

// Negative local value standing in for log2(0) when an event of zero
// probability is scored against positive marginals.
double neg_inf();

// A distribution over a finite support. Entries are >= 0 and sum to 1.
class ProbVector {
public:
    explicit ProbVector(std::vector<double> probs, std::vector<std::string> labels = {});

    static ProbVector uniform(int n);
    static ProbVector point_mass(int n, int state);

    int size() const { return static_cast<int>(probs_.size()); }
    double operator[](int i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool renormalized() const { return renormalized_; }

private:
    std::vector<double> probs_;
    std::vector<std::string> labels_;
    bool renormalized_ = false;
};

// A joint distribution p(x, y) over two finite supports.
class JointDist {
public:
    JointDist(std::vector<std::vector<double>> table,
              std::vector<std::string> row_labels = {},
              std::vector<std::string> col_labels = {});

    int rows() const { return static_cast<int>(table_.size()); }
    int cols() const { return static_cast<int>(table_[0].size()); }
    double at(int x, int y) const { return table_[x][y]; }
    const std::vector<std::vector<double>>& table() const { return table_; }
    const std::vector<double>& row_marginal() const { return row_marginal_; }
    const std::vector<double>& col_marginal() const { return col_marginal_; }
    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }

    JointDist transposed() const;

private:
    std::vector<std::vector<double>> table_;
    std::vector<double> row_marginal_;
    std::vector<double> col_marginal_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
};

// Row-stochastic matrix of conditional probabilities P(next = j | prev = i).
class TransitionMatrix {
public:
    explicit TransitionMatrix(std::vector<std::vector<double>> rows,
                              std::vector<std::string> labels = {});

    static TransitionMatrix identity(int n);

    int size() const { return static_cast<int>(rows_.size()); }
    double at(int i, int j) const { return rows_[i][j]; }
    const std::vector<double>& row(int i) const { return rows_[i]; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_[i]; }
    bool renormalized() const { return renormalized_; }
    int label_index(const std::string& label) const; // -1 when absent

    // prior * W, the distribution over next states.
    std::vector<double> next_marginal(const std::vector<double>& prior) const;

private:
    std::vector<std::vector<double>> rows_;
    std::vector<std::string> labels_;
    bool renormalized_ = false;
};

// Which distribution over past states grounds an expectation.
enum class PriorPolicy { uniform, stationary };

const char* to_string(PriorPolicy p);
PriorPolicy prior_policy_from_string(const std::string& s);

// Shannon entropy -sum p log2 p, with 0 log 0 = 0. Result in [0, log2 N].
double entropy(const ProbVector& p);

// Expected mutual information sum p(x,y) log2[p(x,y) / p(x)p(y)], >= 0.
double expected_mi(const JointDist& j);

// Pointwise mutual information log2[p(x,y) / p(x)p(y)]. Negative exactly
// when p(x,y) < p(x)p(y). Returns neg_inf() when p(x,y) = 0 with both
// marginals positive; throws undefined_conditional on a zero marginal.
double local_mi(const JointDist& j, int x, int y);

// Stationary distribution of W reachable from the uniform start, found by
// averaged power iteration (see implementation note). Satisfies
// pi = pi * W within 1e-8 or throws numeric_error with the residual.
ProbVector stationary(const TransitionMatrix& w);

// Materializes p(prev, next) = prior(prev) * W(prev, next).
JointDist joint_from_tpm(const TransitionMatrix& w, const ProbVector& prior);

ProbVector make_prior(const TransitionMatrix& w, PriorPolicy policy);

// One-step predictive mutual information I(X_{t-1}; X_t) under the prior.
double excess_entropy(const TransitionMatrix& w, const ProbVector& prior);

// Signed per-transition value log2[W(i,j) / (prior W)(j)]. Requires
// prior(i) > 0 and (prior W)(j) > 0; returns neg_inf() when W(i,j) = 0.
double local_excess_entropy(const TransitionMatrix& w, const ProbVector& prior, int i, int j);

} // namespace emergence
