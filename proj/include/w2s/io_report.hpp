#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "w2s/confidence.hpp"
#include "w2s/deception.hpp"
#include "w2s/decomposition.hpp"
#include "w2s/rankstats.hpp"
#include "w2s/settings.hpp"

namespace w2s {

// ---------------------------------------------------------------------------
// JSONL schemas. One record per line; every rejection names the 1-based line
// and the offending field.
// ---------------------------------------------------------------------------

// Trial rows: {"prompt_id", "trial", "c_gt_weak", "c_weak_weak",
// "c_strong_weak"}, confidences in [0, 1]. Rows are grouped by prompt_id in
// first-seen order; trial order within a prompt follows the file.
std::vector<PromptTrialSet> read_trial_jsonl(std::istream& in, const std::string& source);
std::vector<PromptTrialSet> read_trial_jsonl(const std::filesystem::path& path);
void write_trial_jsonl(std::ostream& out, std::span<const PromptTrialSet> data);
void write_trial_jsonl(const std::filesystem::path& path, std::span<const PromptTrialSet> data);

// Confidence rows: {"prompt_id", "c_strong", "c_weak", "y_gt", "y_strong"?},
// confidences strictly inside (0, 1), labels binary.
std::vector<ConfidenceRecord> read_confidence_jsonl(std::istream& in, const std::string& source);
std::vector<ConfidenceRecord> read_confidence_jsonl(const std::filesystem::path& path);
void write_confidence_jsonl(std::ostream& out, std::span<const ConfidenceRecord> records);
void write_confidence_jsonl(const std::filesystem::path& path,
                            std::span<const ConfidenceRecord> records);

// Log-prob rows: {"prompt_id", "completion_role": "chosen"|"rejected",
// "token_logprobs": [...]}, entries finite and <= 0, list non-empty.
std::vector<CompletionLogProbs> read_logprob_jsonl(std::istream& in, const std::string& source);
std::vector<CompletionLogProbs> read_logprob_jsonl(const std::filesystem::path& path);

// Pairs each prompt's chosen and rejected completions (exactly one of each
// required) into a confidence score, in first-seen prompt order.
std::vector<ConfidencePair> pair_confidences(std::span<const CompletionLogProbs> rows,
                                             PairOrdering ordering = PairOrdering::kGtOrdered);

// ---------------------------------------------------------------------------
// Settings CSV. Header-keyed; canonical columns: dataset, pipeline,
// bias2_weak, var_weak, var_star, cov_star_weak, bias2_strong_given_weak,
// var_strong, cov_strong_weak, risk_w2s, d_bs_0.25, d_broad_0.25, plus any
// further d_bs_*/d_broad_* columns. '#' lines are comments. Deception cells
// may hold the undefined marker (em dash or empty).
// ---------------------------------------------------------------------------

std::vector<SettingRow> read_settings_csv(std::istream& in, const std::string& source);
std::vector<SettingRow> read_settings_csv(const std::filesystem::path& path);

// Lossless (shortest round-trip) numeric formatting, canonical column order.
void write_settings_csv(std::ostream& out, std::span<const SettingRow> rows);
void write_settings_csv(const std::filesystem::path& path, std::span<const SettingRow> rows);

// ---------------------------------------------------------------------------
// Report tables. Cells are pre-rendered strings so markdown and CSV
// emissions agree cell for cell; numeric cells carry 6 decimals for
// decomposition terms and 3 for deception values, undefined cells an em dash.
// ---------------------------------------------------------------------------

struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct ReportBundle {
    std::vector<ReportTable> tables;
    std::vector<std::string> warnings;
    std::vector<std::string> provenance;
};

enum class ReportFormat { kMarkdown, kCsv };

std::string format_term(double v);              // %.6f, -0 normalized
std::string format_deception(double v);         // %.3f
inline constexpr const char* kUndefinedCell = "—";

// Strong-variance / risk-bound / blind-spot summary, one row per setting.
ReportTable build_summary_table(std::span<const SettingRow> settings);
// Full seven-term decomposition with bound and tau=0.25 deception columns.
ReportTable build_decomposition_table(std::span<const SettingRow> settings);
// One row per setting, one column per tau for the given metric prefix
// ("d_bs" or "d_broad"), columns in settings file order.
ReportTable build_deception_sweep_table(std::span<const SettingRow> settings,
                                        const std::string& metric_prefix);
// Sweep results for one record set: rows = metric, columns = tau.
ReportTable build_sweep_results_table(std::span<const DeceptionResult> results);
ReportTable build_correlation_table(std::span<const CorrelationCell> cells);

std::string render_table(const ReportTable& table, ReportFormat format);

// Writes <name>.<ext> per table plus warnings.txt / provenance.txt when
// non-empty; byte-deterministic for identical bundles. Returns written paths.
std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle, ReportFormat format,
                                               const std::filesystem::path& out_dir);

}  // namespace w2s
