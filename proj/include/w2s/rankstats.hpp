#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "w2s/settings.hpp"

namespace w2s {

// Paired observations for rank correlation; lengths match and n >= 2.
struct PairedSeries {
    std::vector<std::string> labels;
    std::vector<double> xs;
    std::vector<double> ys;
};

enum class PValueMethod { kExactPermutation, kTApproximation };

struct CorrelationResult {
    double rho = 0.0;
    double p_two_sided = 1.0;
    std::size_t n = 0;
    PValueMethod method = PValueMethod::kExactPermutation;
};

// Average ranks (ties share the mean of their rank range), 1-based.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rho: Pearson correlation of the average-rank vectors. Throws
// ValidationError for mismatched lengths, n < 2, non-finite values, or a
// constant series (undefined correlation).
double spearman_rho(const PairedSeries& s);

// Two-sided p-value by full enumeration of the n! rank permutations when
// n <= max_exact_n; counts |rho_perm| >= |rho_obs| - 1e-12 so the observed
// arrangement always counts. Larger n falls back to the t approximation and
// labels the method accordingly.
CorrelationResult exact_permutation_p(const PairedSeries& s, std::size_t max_exact_n = 9);

// Two-sided p from t = rho * sqrt((n-2) / (1 - rho^2)) with n-2 degrees of
// freedom; clamped into (0, 1].
double t_approximation_p(double rho, std::size_t n);

// One line of a correlation table: a decomposition term against one
// deception column across settings.
struct CorrelationCell {
    std::string term;
    std::string deception_col;
    std::size_t n = 0;
    std::size_t n_skipped = 0;  // settings dropped for an undefined deception value
    double rho = 0.0;
    std::optional<double> p_exact;  // absent when n exceeded the exact cutoff
    double p_t = 1.0;
};

// Known term names: the seven decomposition fields plus the derived
// risk_weak, misfit, bound, and the published risk_w2s column.
double term_value(const SettingRow& row, std::string_view term);

// One cell per (term, deception column) pair, in the given order. Settings
// whose deception value is undefined are skipped; fewer than 3 usable rows
// throws ValidationError.
std::vector<CorrelationCell> correlation_matrix(std::span<const SettingRow> settings,
                                                std::span<const std::string> terms,
                                                std::span<const std::string> deception_cols,
                                                std::size_t max_exact_n = 9);

}  // namespace w2s
