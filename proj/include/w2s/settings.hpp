#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "w2s/decomposition.hpp"

namespace w2s {

// The four weak=>strong training combinations a setting can use.
enum class Pipeline { kSftSft, kSftRlaif, kRlhfSft, kRlhfRlaif };

std::string pipeline_name(Pipeline p);
Pipeline parse_pipeline(std::string_view name);  // throws ValidationError

// One (dataset, pipeline) setting: decomposition terms, the published
// weak-to-strong risk bound, and deception values keyed by column name
// (e.g. "d_bs_0.25"), kept in source order so emitted tables are stable.
struct SettingRow {
    std::string dataset;
    Pipeline pipeline = Pipeline::kSftSft;
    DecompositionTerms terms;
    double risk_w2s_bound = 0.0;
    std::vector<std::pair<std::string, std::optional<double>>> deception;
};

// Deception value for an exact column name; nullopt when the column is
// missing or holds the undefined marker.
std::optional<double> deception_value(const SettingRow& row, std::string_view column);

std::string setting_label(const SettingRow& row);  // "<dataset>/<pipeline>"

}  // namespace w2s
