#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace w2s {

// One sampled trial for a prompt: the weak model's confidence on the
// ground-truth-ordered pair (r_star), the weak model's confidence on the
// weak-labeled pair (r_weak), and the strong model's confidence on the same
// weak-labeled pair (r_strong). All three live in [0, 1].
struct TrialProxies {
    double r_star = 0.0;
    double r_weak = 0.0;
    double r_strong = 0.0;
};

struct PromptTrialSet {
    std::string prompt_id;
    std::vector<TrialProxies> trials;
};

// Variance/covariance normalizer. kPopulation (1/N) is the contract default;
// kSample (1/(N-1)) is opt-in only and requires N >= 2.
enum class Normalizer { kPopulation, kSample };

// Per-prompt means and second moments over the trials of one prompt.
struct PromptMoments {
    double mean_star = 0.0;
    double mean_weak = 0.0;
    double mean_strong = 0.0;
    double var_star = 0.0;
    double var_weak = 0.0;
    double var_strong = 0.0;
    double cov_star_weak = 0.0;
    double cov_strong_weak = 0.0;
    std::size_t n_trials = 0;
};

// Setting-level decomposition terms: unweighted prompt averages of the
// per-prompt squared biases, variances, and covariances.
struct DecompositionTerms {
    double bias2_weak = 0.0;
    double var_weak = 0.0;
    double var_star = 0.0;
    double cov_star_weak = 0.0;
    double bias2_strong_given_weak = 0.0;
    double var_strong = 0.0;
    double cov_strong_weak = 0.0;
};

struct RiskSummary {
    double risk_weak = 0.0;
    double misfit = 0.0;
    double bound = 0.0;
    // Present only when computed from trials rather than from bare terms.
    std::optional<double> risk_w2s_direct;
    std::optional<double> cross_term_epsilon;
};

// Two-pass sample moments over one prompt's trials. Throws ValidationError
// on an empty trial list, or when kSample is requested with N == 1.
PromptMoments estimate_prompt_moments(const PromptTrialSet& p,
                                      Normalizer norm = Normalizer::kPopulation);

// Unweighted average of per-prompt contributions. Each prompt contributes
// its own squared bias (difference of its means), variance, and covariance.
DecompositionTerms aggregate_terms(std::span<const PromptMoments> per_prompt);

// bias2_weak + var_weak + var_star - 2 cov_star_weak
double risk_weak_from_terms(const DecompositionTerms& t);

// bias2_strong_given_weak + var_strong + var_weak - 2 cov_strong_weak
double misfit_from_terms(const DecompositionTerms& t);

// Direct per-sample risks: prompt-averaged means of (r_star - r_weak)^2,
// (r_strong - r_weak)^2, (r_star - r_strong)^2, and the cross term
// (r_star - r_strong)(r_strong - r_weak). Populates every RiskSummary field.
RiskSummary direct_risks(std::span<const PromptTrialSet> per_prompt);

// (sqrt(risk_weak) + sqrt(misfit))^2. Negative or non-finite input throws.
double misfit_bound(double risk_weak, double misfit);

// Risks and bound from externally supplied terms (e.g. a published table).
// Implied risks that come out slightly negative through input rounding are
// clamped to zero; each clamp increments *clamp_count when provided.
RiskSummary summary_from_terms(const DecompositionTerms& t, int* clamp_count = nullptr);

// Number of prompts that contributed only a single trial (variances are
// identically zero there); reported as a warning counter by callers.
std::size_t single_trial_count(std::span<const PromptMoments> per_prompt);

}  // namespace w2s
