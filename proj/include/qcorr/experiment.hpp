#pragma once

#include <cstdint>
#include <vector>

#include "qcorr/correlations.hpp"

namespace qcorr {

// One simulated setting: model + initial state + noise + evolution grid,
// swept over a list of interaction strengths v = V/T. All v runs share the
// same noise histories (common random numbers), so comparisons across v are
// not washed out by Monte-Carlo fluctuations.
struct Scenario {
    HubbardParams params{};            // interaction is overridden by v_list entries
    StateLabel state = StateLabel::PsiB;
    std::vector<double> v_list{0.0};
    NoiseParams noise{};
    EvolutionConfig evolution{};
    Bipartition partition{};           // empty -> standard partition for the model
    MeasuredParty measured = MeasuredParty::B;
    DiscordSettings discord{};
    std::uint64_t seed = 0;
};

// One time sample of every tracked quantity.
struct CorrelationRecord {
    double tau;      // dimensionless time |T| t
    double p11;      // one-particle-per-party probability
    double e_modes;  // register entanglement of formation
    double e_p;      // p11 * e_modes
    double d_p;      // sector-weighted register discord
    double purity;
    double s_d;      // normalized decoherence entropy
    double conv;     // trace distance between full and half-ensemble averages
};

struct ScenarioResult {
    double v;
    std::vector<CorrelationRecord> records;
};

std::vector<ScenarioResult> run_scenario(const Scenario& scenario);

// Samples whose convergence diagnostic exceeds the threshold.
int convergence_flags(const ScenarioResult& result, double threshold = 0.01);

}  // namespace qcorr
