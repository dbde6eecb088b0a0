#include "w2s/settings.hpp"

#include "w2s/errors.hpp"

namespace w2s {

std::string pipeline_name(Pipeline p) {
    switch (p) {
        case Pipeline::kSftSft: return "sft_sft";
        case Pipeline::kSftRlaif: return "sft_rlaif";
        case Pipeline::kRlhfSft: return "rlhf_sft";
        case Pipeline::kRlhfRlaif: return "rlhf_rlaif";
    }
    throw InternalError("pipeline_name: unreachable enum value");
}

Pipeline parse_pipeline(std::string_view name) {
    if (name == "sft_sft") return Pipeline::kSftSft;
    if (name == "sft_rlaif") return Pipeline::kSftRlaif;
    if (name == "rlhf_sft") return Pipeline::kRlhfSft;
    if (name == "rlhf_rlaif") return Pipeline::kRlhfRlaif;
    throw ValidationError("unknown pipeline '" + std::string(name) +
                          "' (expected sft_sft, sft_rlaif, rlhf_sft, or rlhf_rlaif)");
}

std::optional<double> deception_value(const SettingRow& row, std::string_view column) {
    for (const auto& [name, value] : row.deception) {
        if (name == column) return value;
    }
    return std::nullopt;
}

std::string setting_label(const SettingRow& row) {
    return row.dataset + "/" + pipeline_name(row.pipeline);
}

}  // namespace w2s
