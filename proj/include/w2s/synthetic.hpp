#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "w2s/confidence.hpp"
#include "w2s/decomposition.hpp"

namespace w2s {

// Knobs for a synthetic weak-to-strong scenario. Per prompt a target mean is
// drawn uniformly from [target_mean_lo, target_mean_hi]; per trial
//   r_star   = clamp(mu + N(0, target_noise_sd))
//   r_weak   = clamp(r_star + weak_bias + N(0, weak_noise_sd))
//   r_strong = clamp(r_star + strong_coupling * (r_weak - r_star)
//                    + N(0, strong_noise_sd))
// with clamp to [0, 1]. strong_coupling interpolates the strong proxy
// between the target (0) and the weak proxy (1).
struct ScenarioConfig {
    std::size_t n_prompts = 100;
    std::size_t n_trials = 10;
    double target_mean_lo = 0.2;
    double target_mean_hi = 0.8;
    double weak_bias = 0.0;
    double weak_noise_sd = 0.05;
    double strong_coupling = 0.5;
    double strong_noise_sd = 0.05;
    double target_noise_sd = 0.05;
    std::uint64_t seed = 0;
};

// Throws ValidationError naming the offending field.
void validate_config(const ScenarioConfig& cfg);

// Plain-text "key = value" config with '#' comments; unknown keys are
// rejected by name. Missing keys keep their defaults.
ScenarioConfig parse_scenario_config(std::istream& in);
ScenarioConfig read_scenario_config(const std::filesystem::path& path);

// Deterministic generation: per-prompt RNG streams derived from
// (seed, prompt index), so output is a pure function of the config.
std::vector<PromptTrialSet> generate_scenario(const ScenarioConfig& cfg);

// Residuals and bound checks from re-deriving every risk with flat loops
// (no centering shortcuts) and comparing against the decomposition module.
// max_residual_cross_term also covers the direct risk_w2s agreement.
struct OracleReport {
    double max_residual_weak_identity = 0.0;
    double max_residual_misfit_identity = 0.0;
    double max_residual_cross_term = 0.0;
    std::size_t bound_violations = 0;
    std::size_t samples_checked = 0;
};

OracleReport run_oracles(std::span<const PromptTrialSet> data);

// Bernoulli labels with probability bradley_terry_prob(pair); deterministic
// for a fixed seed.
std::vector<int> sample_preference_labels(std::span<const RewardPair> rewards, std::uint64_t seed);

}  // namespace w2s
