#include "w2s/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <string>

#include "w2s/errors.hpp"
#include "w2s/parallel.hpp"

namespace w2s {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; avoids the implementation-defined
// std distributions so streams are stable across platforms.
double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Box-Muller from fully specified uniforms; one variate per call.
double normal01(std::mt19937_64& g) {
    const double u1 = (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ValidationError("scenario config: field '" + field + "' " + why);
}

// Mixed relative residual with a unit floor; proxies live in [0, 1] so every
// risk is bounded by 1 and the floor never hides a real disagreement.
double residual(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

struct DirectPromptRisks {
    double risk_weak = 0.0;
    double misfit = 0.0;
    double risk_w2s = 0.0;
    double epsilon = 0.0;
};

// Flat per-trial loops, plain summation, no centering.
DirectPromptRisks flat_prompt_risks(const PromptTrialSet& p) {
    DirectPromptRisks r;
    for (const TrialProxies& t : p.trials) {
        r.risk_weak += (t.r_star - t.r_weak) * (t.r_star - t.r_weak);
        r.misfit += (t.r_strong - t.r_weak) * (t.r_strong - t.r_weak);
        r.risk_w2s += (t.r_star - t.r_strong) * (t.r_star - t.r_strong);
        r.epsilon += (t.r_star - t.r_strong) * (t.r_strong - t.r_weak);
    }
    const double nd = static_cast<double>(p.trials.size());
    r.risk_weak /= nd;
    r.misfit /= nd;
    r.risk_w2s /= nd;
    r.epsilon /= nd;
    return r;
}

}  // namespace

void validate_config(const ScenarioConfig& cfg) {
    require(cfg.n_prompts >= 1, "n_prompts", "must be >= 1");
    require(cfg.n_trials >= 1, "n_trials", "must be >= 1");
    require(std::isfinite(cfg.target_mean_lo) && cfg.target_mean_lo >= 0.0 &&
                cfg.target_mean_lo <= 1.0,
            "target_mean_lo", "must lie in [0, 1]");
    require(std::isfinite(cfg.target_mean_hi) && cfg.target_mean_hi >= 0.0 &&
                cfg.target_mean_hi <= 1.0,
            "target_mean_hi", "must lie in [0, 1]");
    require(cfg.target_mean_lo <= cfg.target_mean_hi, "target_mean_lo", "must be <= target_mean_hi");
    require(std::isfinite(cfg.weak_bias), "weak_bias", "must be finite");
    require(std::isfinite(cfg.weak_noise_sd) && cfg.weak_noise_sd >= 0.0, "weak_noise_sd",
            "must be >= 0");
    require(std::isfinite(cfg.strong_coupling) && cfg.strong_coupling >= 0.0 &&
                cfg.strong_coupling <= 1.0,
            "strong_coupling", "must lie in [0, 1]");
    require(std::isfinite(cfg.strong_noise_sd) && cfg.strong_noise_sd >= 0.0, "strong_noise_sd",
            "must be >= 0");
    require(std::isfinite(cfg.target_noise_sd) && cfg.target_noise_sd >= 0.0, "target_noise_sd",
            "must be >= 0");
}

ScenarioConfig parse_scenario_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("scenario config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ValidationError("scenario config line " + std::to_string(lineno) +
                                  ": empty key or value");
        }
        auto as_double = [&](const char* field) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != value.size()) {
                throw ValidationError("scenario config line " + std::to_string(lineno) +
                                      ": field '" + field + "' is not a number");
            }
            return v;
        };
        auto as_u64 = [&](const char* field) {
            std::size_t pos = 0;
            unsigned long long v = 0;
            try {
                v = std::stoull(value, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != value.size()) {
                throw ValidationError("scenario config line " + std::to_string(lineno) +
                                      ": field '" + field + "' is not a non-negative integer");
            }
            return static_cast<std::uint64_t>(v);
        };
        if (key == "n_prompts") {
            cfg.n_prompts = static_cast<std::size_t>(as_u64("n_prompts"));
        } else if (key == "n_trials") {
            cfg.n_trials = static_cast<std::size_t>(as_u64("n_trials"));
        } else if (key == "target_mean_lo") {
            cfg.target_mean_lo = as_double("target_mean_lo");
        } else if (key == "target_mean_hi") {
            cfg.target_mean_hi = as_double("target_mean_hi");
        } else if (key == "weak_bias") {
            cfg.weak_bias = as_double("weak_bias");
        } else if (key == "weak_noise_sd") {
            cfg.weak_noise_sd = as_double("weak_noise_sd");
        } else if (key == "strong_coupling") {
            cfg.strong_coupling = as_double("strong_coupling");
        } else if (key == "strong_noise_sd") {
            cfg.strong_noise_sd = as_double("strong_noise_sd");
        } else if (key == "target_noise_sd") {
            cfg.target_noise_sd = as_double("target_noise_sd");
        } else if (key == "seed") {
            cfg.seed = as_u64("seed");
        } else {
            throw ValidationError("scenario config line " + std::to_string(lineno) +
                                  ": unknown field '" + key + "'");
        }
    }
    validate_config(cfg);
    return cfg;
}

ScenarioConfig read_scenario_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open scenario config '" + path.string() + "'");
    }
    return parse_scenario_config(in);
}

std::vector<PromptTrialSet> generate_scenario(const ScenarioConfig& cfg) {
    validate_config(cfg);
    std::vector<PromptTrialSet> out(cfg.n_prompts);
    parallel_chunks(cfg.n_prompts, 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            // Independent stream per prompt: generation order never matters.
            std::mt19937_64 rng(splitmix64(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (p + 1))));
            PromptTrialSet& set = out[p];
            set.prompt_id = "p" + std::to_string(p);
            set.trials.resize(cfg.n_trials);
            const double mu =
                cfg.target_mean_lo + uniform01(rng) * (cfg.target_mean_hi - cfg.target_mean_lo);
            for (TrialProxies& t : set.trials) {
                const double g_target = normal01(rng);
                const double g_weak = normal01(rng);
                const double g_strong = normal01(rng);
                t.r_star = clamp01(mu + g_target * cfg.target_noise_sd);
                t.r_weak = clamp01(t.r_star + cfg.weak_bias + g_weak * cfg.weak_noise_sd);
                // Interpolation written as target + coupling * (weak - target)
                // so the noiseless case keeps r_strong == r_star bit-exactly.
                t.r_strong = clamp01(t.r_star + cfg.strong_coupling * (t.r_weak - t.r_star) +
                                     g_strong * cfg.strong_noise_sd);
            }
        }
    });
    return out;
}

OracleReport run_oracles(std::span<const PromptTrialSet> data) {
    if (data.empty()) {
        throw ValidationError("run_oracles: empty data");
    }
    const std::size_t np = data.size();
    std::vector<DirectPromptRisks> per_prompt(np);
    std::vector<PromptMoments> moments(np);
    std::size_t samples = 0;
    for (const PromptTrialSet& p : data) {
        if (p.trials.empty()) {
            throw ValidationError("run_oracles: empty trial set (prompt '" + p.prompt_id + "')");
        }
        samples += p.trials.size();
    }

    double max_per_prompt_cross = 0.0;
    std::size_t per_prompt_violations = 0;
    parallel_chunks(np, 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            per_prompt[i] = flat_prompt_risks(data[i]);
            moments[i] = estimate_prompt_moments(data[i]);
        }
    });
    for (const DirectPromptRisks& r : per_prompt) {
        // The add-and-subtract identity and the bound hold per prompt too.
        max_per_prompt_cross = std::max(
            max_per_prompt_cross, residual(r.risk_weak, r.risk_w2s + r.misfit + 2.0 * r.epsilon));
        const double root = std::sqrt(r.risk_weak) + std::sqrt(r.misfit);
        if (r.risk_w2s > root * root + 1e-10) ++per_prompt_violations;
    }

    // Aggregate flat-loop values (plain sums, fixed order).
    DirectPromptRisks flat;
    for (const DirectPromptRisks& r : per_prompt) {
        flat.risk_weak += r.risk_weak;
        flat.misfit += r.misfit;
        flat.risk_w2s += r.risk_w2s;
        flat.epsilon += r.epsilon;
    }
    const double npd = static_cast<double>(np);
    flat.risk_weak /= npd;
    flat.misfit /= npd;
    flat.risk_w2s /= npd;
    flat.epsilon /= npd;

    // Library routes: term assembly and the direct estimator.
    const DecompositionTerms terms = aggregate_terms(moments);
    const double rw_terms = risk_weak_from_terms(terms);
    const double m_terms = misfit_from_terms(terms);
    const RiskSummary lib = direct_risks(data);

    OracleReport rep;
    rep.samples_checked = samples;
    rep.max_residual_weak_identity =
        std::max(residual(rw_terms, flat.risk_weak), residual(lib.risk_weak, flat.risk_weak));
    rep.max_residual_misfit_identity =
        std::max(residual(m_terms, flat.misfit), residual(lib.misfit, flat.misfit));
    rep.max_residual_cross_term = std::max(
        {max_per_prompt_cross,
         residual(flat.risk_weak, flat.risk_w2s + flat.misfit + 2.0 * flat.epsilon),
         residual(*lib.risk_w2s_direct, flat.risk_w2s), residual(*lib.cross_term_epsilon, flat.epsilon)});

    rep.bound_violations = per_prompt_violations;
    const double root = std::sqrt(flat.risk_weak) + std::sqrt(flat.misfit);
    if (flat.risk_w2s > root * root + 1e-10) ++rep.bound_violations;
    if (*lib.risk_w2s_direct > lib.bound + 1e-10) ++rep.bound_violations;
    return rep;
}

std::vector<int> sample_preference_labels(std::span<const RewardPair> rewards, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed));
    std::vector<int> labels;
    labels.reserve(rewards.size());
    for (const RewardPair& r : rewards) {
        const double p = bradley_terry_prob(r);
        labels.push_back(uniform01(rng) < p ? 1 : 0);
    }
    return labels;
}

}  // namespace w2s
