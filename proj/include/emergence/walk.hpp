// Seeded random-walk simulation with per-step annotation of local information
// measures and flickering-emergence event extraction.
//
// Generator contract: mt19937_64 seeded directly with the given seed; unit
// doubles are the engine's top 53 bits scaled by 2^-53; states are drawn by
// inverse CDF over the row in label (index) order. This stream is fully
// specified by the C++ standard, so traces are reproducible across platforms.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "emergence/coarse.hpp"
#include "emergence/phiid.hpp"
#include "emergence/prob.hpp"

namespace emergence {

class WalkRng {
public:
    explicit WalkRng(std::uint64_t seed) : engine_(seed) {}

    double next_unit() { return (engine_() >> 11) * 0x1.0p-53; }

    // Inverse-CDF draw from a distribution, cells scanned in index order.
    int draw(const std::vector<double>& dist);

private:
    std::mt19937_64 engine_;
};

// x_0 fixed at start_state, then `steps` transitions.
std::vector<int> simulate(const TransitionMatrix& w, int start_state, int steps,
                          std::uint64_t seed);

// x_0 drawn from start_dist (consuming the first variate), then `steps`
// transitions.
std::vector<int> simulate(const TransitionMatrix& w, const ProbVector& start_dist, int steps,
                          std::uint64_t seed);

// What to annotate along a trace. Expected counterparts are computed once
// from (W, prior) and reused for every step's flicker comparison.
struct AnnotationContext {
    PriorPolicy prior_policy = PriorPolicy::stationary;
    std::optional<Partition> partition;
    std::optional<FactorizedSystem> factorized;
};

struct WalkTrace {
    std::uint64_t seed = 0;
    std::vector<int> states; // x_0 .. x_T

    // one entry per transition (size T); NaN marks a value undefined under
    // the prior
    std::vector<double> e_micro;
    std::vector<double> e_macro;     // empty without a partition context
    std::vector<double> ratio;       // e_macro / e_micro; NaN when |e_micro| < 1e-12
    std::vector<double> decoupling;  // empty without a factorized context
    std::vector<bool> flicker;

    // expected counterparts (NaN when the context is absent)
    double expected_e_micro = 0.0;
    double expected_e_macro = 0.0;
    double expected_decoupling = 0.0;

    bool has_macro() const { return !e_macro.empty(); }
    bool has_decoupling() const { return !decoupling.empty(); }
    int transition_count() const { return static_cast<int>(states.size()) - 1; }
};

// Annotates a simulated state sequence. With a partition: per-step macro
// local values and the macro/micro ratio; a step flickers when its transition
// is incongruous (micro informative, macro misinformative). With a factorized
// system: the per-step local {12}->{12} atom; a step flickers when the
// expected decoupling is positive but the local value is negative.
WalkTrace annotate(const TransitionMatrix& w, std::vector<int> states, std::uint64_t seed,
                   const AnnotationContext& ctx);

struct FlickerSummary {
    int flagged = 0;
    double fraction = 0.0;
    std::vector<int> flagged_steps;   // t indices (1-based transitions)
    std::vector<int> flagged_runs;    // dwell lengths of consecutive flagged steps
    std::vector<int> unflagged_runs;
};

FlickerSummary flicker_summary(const WalkTrace& trace);

} // namespace emergence
