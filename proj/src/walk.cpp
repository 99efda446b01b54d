#include "emergence/walk.hpp"

#include <cmath>
#include <limits>

#include "emergence/errors.hpp"

namespace emergence {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRatioGuard = 1e-12;
} // namespace

int WalkRng::draw(const std::vector<double>& dist) {
    const double u = next_unit();
    double cum = 0.0;
    int last_positive = -1;
    for (size_t j = 0; j < dist.size(); ++j) {
        if (dist[j] <= 0.0) continue;
        cum += dist[j];
        last_positive = static_cast<int>(j);
        if (u < cum) return last_positive;
    }
    if (last_positive < 0) throw validation_error("draw: distribution has no positive mass");
    return last_positive; // u landed in the rounding tail
}

std::vector<int> simulate(const TransitionMatrix& w, int start_state, int steps,
                          std::uint64_t seed) {
    if (start_state < 0 || start_state >= w.size()) {
        throw validation_error("simulate: start state " + std::to_string(start_state) +
                               " out of range for " + std::to_string(w.size()) + " states");
    }
    if (steps < 1) throw validation_error("simulate: steps must be >= 1");
    WalkRng rng(seed);
    std::vector<int> states;
    states.reserve(steps + 1);
    states.push_back(start_state);
    for (int t = 0; t < steps; ++t) {
        states.push_back(rng.draw(w.row(states.back())));
    }
    return states;
}

std::vector<int> simulate(const TransitionMatrix& w, const ProbVector& start_dist, int steps,
                          std::uint64_t seed) {
    if (start_dist.size() != w.size()) {
        throw validation_error("simulate: start distribution length mismatch");
    }
    if (steps < 1) throw validation_error("simulate: steps must be >= 1");
    WalkRng rng(seed);
    std::vector<int> states;
    states.reserve(steps + 1);
    states.push_back(rng.draw(start_dist.probs()));
    for (int t = 0; t < steps; ++t) {
        states.push_back(rng.draw(w.row(states.back())));
    }
    return states;
}

WalkTrace annotate(const TransitionMatrix& w, std::vector<int> states, std::uint64_t seed,
                   const AnnotationContext& ctx) {
    if (states.size() < 2) throw validation_error("annotate: need at least one transition");
    for (size_t t = 1; t < states.size(); ++t) {
        if (w.at(states[t - 1], states[t]) <= 0.0) {
            throw validation_error("annotate: impossible transition at step " + std::to_string(t));
        }
    }

    const ProbVector prior = make_prior(w, ctx.prior_policy);
    const std::vector<double> pn = w.next_marginal(prior.probs());

    WalkTrace trace;
    trace.seed = seed;
    trace.states = std::move(states);
    const int T = trace.transition_count();
    trace.e_micro.resize(T, kNaN);
    trace.flicker.assign(T, false);
    trace.expected_e_micro = excess_entropy(w, prior);
    trace.expected_e_macro = kNaN;
    trace.expected_decoupling = kNaN;

    // coarse-graining context: per-transition macro local values
    std::optional<MacroScale> macro;
    std::vector<double> macro_prior, pn_macro;
    if (ctx.partition) {
        if (ctx.partition->micro_count() != w.size()) {
            throw validation_error("annotate: partition covers " +
                                   std::to_string(ctx.partition->micro_count()) +
                                   " states, TPM has " + std::to_string(w.size()));
        }
        macro = macro_tpm(w, *ctx.partition, Weighting::uniform_within_group);
        macro_prior = ctx.partition->project(prior.probs());
        pn_macro = macro->macro_tpm.next_marginal(macro_prior);
        trace.e_macro.resize(T, kNaN);
        trace.ratio.resize(T, kNaN);
        trace.expected_e_macro =
            excess_entropy(macro->macro_tpm, ProbVector(macro_prior, macro->macro_tpm.labels()));
    }

    // factorized context: precompute the local decoupling atom per realization
    std::vector<std::vector<double>> local_decoupling;
    if (ctx.factorized) {
        const FactorizedSystem& sys = *ctx.factorized;
        if (sys.joint_size() != w.size()) {
            throw validation_error("annotate: factorized system size mismatch");
        }
        const PhiAtom top{SourceCollection::joint, SourceCollection::joint};
        trace.expected_decoupling = solve_expected(sys).value(top);
        local_decoupling.assign(w.size(), std::vector<double>(w.size(), kNaN));
        for (int x = 0; x < w.size(); ++x) {
            for (int y = 0; y < w.size(); ++y) {
                if (sys.transition_probability({x, y}) <= 0.0) continue;
                local_decoupling[x][y] = solve_local(sys, {x, y}).value(top);
            }
        }
        trace.decoupling.resize(T, kNaN);
    }

    for (int t = 0; t < T; ++t) {
        const int i = trace.states[t];
        const int j = trace.states[t + 1];
        if (prior[i] > 0.0 && pn[j] > 0.0) {
            trace.e_micro[t] = std::log2(w.at(i, j) / pn[j]);
        }
        bool flag = false;
        if (macro) {
            const int a = ctx.partition->macro_of(i);
            const int b = ctx.partition->macro_of(j);
            if (macro_prior[a] > 0.0 && pn_macro[b] > 0.0) {
                const double wm = macro->macro_tpm.at(a, b);
                trace.e_macro[t] = wm > 0.0 ? std::log2(wm / pn_macro[b]) : neg_inf();
            }
            if (std::abs(trace.e_micro[t]) >= kRatioGuard && !std::isnan(trace.e_macro[t])) {
                trace.ratio[t] = trace.e_macro[t] / trace.e_micro[t];
            }
            flag = flag || (!std::isnan(trace.e_micro[t]) && !std::isnan(trace.e_macro[t]) &&
                            trace.e_micro[t] > 0.0 && trace.e_macro[t] < 0.0);
        }
        if (ctx.factorized) {
            trace.decoupling[t] = local_decoupling[i][j];
            flag = flag || (trace.expected_decoupling > 0.0 && !std::isnan(trace.decoupling[t]) &&
                            trace.decoupling[t] < 0.0);
        }
        trace.flicker[t] = flag;
    }
    return trace;
}

FlickerSummary flicker_summary(const WalkTrace& trace) {
    FlickerSummary s;
    const int T = trace.transition_count();
    if (T <= 0) return s;
    bool current = trace.flicker[0];
    int run = 0;
    for (int t = 0; t < T; ++t) {
        const bool f = trace.flicker[t];
        if (f) {
            ++s.flagged;
            s.flagged_steps.push_back(t + 1);
        }
        if (f == current) {
            ++run;
        } else {
            (current ? s.flagged_runs : s.unflagged_runs).push_back(run);
            current = f;
            run = 1;
        }
    }
    (current ? s.flagged_runs : s.unflagged_runs).push_back(run);
    s.fraction = static_cast<double>(s.flagged) / T;
    return s;
}

} // namespace emergence
