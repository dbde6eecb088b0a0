#pragma once

#include <string>
#include <vector>

namespace w2s {

enum class CompletionRole { kChosen, kRejected };

// Per-token natural-log probabilities for one completion of a preference
// pair. Producers resolve tokenization questions; entries must be finite
// and <= 0.
struct CompletionLogProbs {
    std::string prompt_id;
    CompletionRole role = CompletionRole::kChosen;
    std::vector<double> token_logprobs;
};

// Which label convention ordered the pair: ground truth or weak-model label.
enum class PairOrdering { kGtOrdered, kWeakOrdered };

struct ConfidencePair {
    std::string prompt_id;
    double confidence = 0.5;
    PairOrdering ordering = PairOrdering::kGtOrdered;
};

struct RewardPair {
    double reward_1 = 0.0;
    double reward_2 = 0.0;
};

// Numerically stable logistic sigmoid, branch form; never overflows.
double sigmoid(double z);

// Arithmetic mean of the token log-probs. Throws ValidationError on an
// empty completion or non-finite entries.
double average_log_prob(const CompletionLogProbs& c);

// sigmoid(chosen_avg - rejected_avg): how strongly the model prefers the
// first completion over the second. Both inputs must be finite.
double confidence_score(double chosen_avg, double rejected_avg);

// Preference probability sigmoid(reward_1 - reward_2). Identical sigmoid of
// a difference as confidence_score; the exp-ratio form agrees to 1e-12.
double bradley_terry_prob(const RewardPair& r);

// 1 iff the model agrees with the ground-truth ordering (confidence >= 0.5,
// ties count as agreement). Requires a gt-ordered pair.
int predicted_label(const ConfidencePair& c);

}  // namespace w2s
