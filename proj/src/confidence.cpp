#include "w2s/confidence.hpp"

#include <cmath>

#include "w2s/errors.hpp"

namespace w2s {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double average_log_prob(const CompletionLogProbs& c) {
    if (c.token_logprobs.empty()) {
        throw ValidationError("average_log_prob: empty completion (prompt '" + c.prompt_id + "')");
    }
    double sum = 0.0;
    for (double lp : c.token_logprobs) {
        if (!std::isfinite(lp)) {
            throw ValidationError("average_log_prob: non-finite token log-prob (prompt '" +
                                  c.prompt_id + "')");
        }
        sum += lp;
    }
    return sum / static_cast<double>(c.token_logprobs.size());
}

double confidence_score(double chosen_avg, double rejected_avg) {
    if (!std::isfinite(chosen_avg) || !std::isfinite(rejected_avg)) {
        throw ValidationError("confidence_score: non-finite input");
    }
    return sigmoid(chosen_avg - rejected_avg);
}

double bradley_terry_prob(const RewardPair& r) {
    if (!std::isfinite(r.reward_1) || !std::isfinite(r.reward_2)) {
        throw ValidationError("bradley_terry_prob: non-finite reward");
    }
    return sigmoid(r.reward_1 - r.reward_2);
}

int predicted_label(const ConfidencePair& c) {
    if (c.ordering != PairOrdering::kGtOrdered) {
        throw ValidationError("predicted_label: label derivation requires gt-ordered pair");
    }
    return c.confidence >= 0.5 ? 1 : 0;
}

}  // namespace w2s
