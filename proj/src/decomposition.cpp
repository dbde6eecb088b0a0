#include "w2s/decomposition.hpp"

#include <cmath>

#include "w2s/errors.hpp"

namespace w2s {

namespace {

// Compensated accumulator; keeps identity checks at 1e-10 honest on large
// prompt sets.
class KahanSum {
 public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

 private:
    double s_ = 0.0;
    double c_ = 0.0;
};

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string("non-finite value for ") + what);
    }
}

}  // namespace

PromptMoments estimate_prompt_moments(const PromptTrialSet& p, Normalizer norm) {
    const std::size_t n = p.trials.size();
    if (n == 0) {
        throw ValidationError("estimate_prompt_moments: empty trial set (prompt '" + p.prompt_id +
                              "')");
    }
    if (norm == Normalizer::kSample && n < 2) {
        throw ValidationError("estimate_prompt_moments: 1/(N-1) normalizer needs N >= 2 (prompt '" +
                              p.prompt_id + "')");
    }

    KahanSum s_star, s_weak, s_strong;
    for (const TrialProxies& t : p.trials) {
        s_star.add(t.r_star);
        s_weak.add(t.r_weak);
        s_strong.add(t.r_strong);
    }
    const double nd = static_cast<double>(n);
    PromptMoments m;
    m.n_trials = n;
    m.mean_star = s_star.value() / nd;
    m.mean_weak = s_weak.value() / nd;
    m.mean_strong = s_strong.value() / nd;

    KahanSum v_star, v_weak, v_strong, c_sw, c_ssw;
    for (const TrialProxies& t : p.trials) {
        const double d_star = t.r_star - m.mean_star;
        const double d_weak = t.r_weak - m.mean_weak;
        const double d_strong = t.r_strong - m.mean_strong;
        v_star.add(d_star * d_star);
        v_weak.add(d_weak * d_weak);
        v_strong.add(d_strong * d_strong);
        c_sw.add(d_star * d_weak);
        c_ssw.add(d_strong * d_weak);
    }
    const double denom = norm == Normalizer::kPopulation ? nd : nd - 1.0;
    m.var_star = v_star.value() / denom;
    m.var_weak = v_weak.value() / denom;
    m.var_strong = v_strong.value() / denom;
    m.cov_star_weak = c_sw.value() / denom;
    m.cov_strong_weak = c_ssw.value() / denom;
    return m;
}

DecompositionTerms aggregate_terms(std::span<const PromptMoments> per_prompt) {
    if (per_prompt.empty()) {
        throw ValidationError("aggregate_terms: empty moment list");
    }
    KahanSum b2w, vw, vs, csw, b2s, vstr, cssw;
    for (const PromptMoments& m : per_prompt) {
        const double bias_w = m.mean_weak - m.mean_star;
        const double bias_s = m.mean_strong - m.mean_weak;
        b2w.add(bias_w * bias_w);
        vw.add(m.var_weak);
        vs.add(m.var_star);
        csw.add(m.cov_star_weak);
        b2s.add(bias_s * bias_s);
        vstr.add(m.var_strong);
        cssw.add(m.cov_strong_weak);
    }
    const double nd = static_cast<double>(per_prompt.size());
    DecompositionTerms t;
    t.bias2_weak = b2w.value() / nd;
    t.var_weak = vw.value() / nd;
    t.var_star = vs.value() / nd;
    t.cov_star_weak = csw.value() / nd;
    t.bias2_strong_given_weak = b2s.value() / nd;
    t.var_strong = vstr.value() / nd;
    t.cov_strong_weak = cssw.value() / nd;
    return t;
}

double risk_weak_from_terms(const DecompositionTerms& t) {
    require_finite(t.bias2_weak, "bias2_weak");
    require_finite(t.var_weak, "var_weak");
    require_finite(t.var_star, "var_star");
    require_finite(t.cov_star_weak, "cov_star_weak");
    return t.bias2_weak + t.var_weak + t.var_star - 2.0 * t.cov_star_weak;
}

double misfit_from_terms(const DecompositionTerms& t) {
    require_finite(t.bias2_strong_given_weak, "bias2_strong_given_weak");
    require_finite(t.var_strong, "var_strong");
    require_finite(t.var_weak, "var_weak");
    require_finite(t.cov_strong_weak, "cov_strong_weak");
    return t.bias2_strong_given_weak + t.var_strong + t.var_weak - 2.0 * t.cov_strong_weak;
}

RiskSummary direct_risks(std::span<const PromptTrialSet> per_prompt) {
    if (per_prompt.empty()) {
        throw ValidationError("direct_risks: empty prompt list");
    }
    KahanSum risk_weak, misfit, risk_w2s, eps;
    for (const PromptTrialSet& p : per_prompt) {
        if (p.trials.empty()) {
            throw ValidationError("direct_risks: empty trial set (prompt '" + p.prompt_id + "')");
        }
        KahanSum rw, m, rs, e;
        for (const TrialProxies& t : p.trials) {
            const double dw = t.r_star - t.r_weak;
            const double ds = t.r_strong - t.r_weak;
            const double dt = t.r_star - t.r_strong;
            rw.add(dw * dw);
            m.add(ds * ds);
            rs.add(dt * dt);
            e.add(dt * ds);
        }
        const double nd = static_cast<double>(p.trials.size());
        risk_weak.add(rw.value() / nd);
        misfit.add(m.value() / nd);
        risk_w2s.add(rs.value() / nd);
        eps.add(e.value() / nd);
    }
    const double np = static_cast<double>(per_prompt.size());
    RiskSummary s;
    s.risk_weak = risk_weak.value() / np;
    s.misfit = misfit.value() / np;
    s.risk_w2s_direct = risk_w2s.value() / np;
    s.cross_term_epsilon = eps.value() / np;
    s.bound = misfit_bound(s.risk_weak, s.misfit);
    return s;
}

double misfit_bound(double risk_weak, double misfit) {
    require_finite(risk_weak, "risk_weak");
    require_finite(misfit, "misfit");
    if (risk_weak < 0.0 || misfit < 0.0) {
        throw ValidationError("misfit_bound: negative input");
    }
    const double root = std::sqrt(risk_weak) + std::sqrt(misfit);
    return root * root;
}

RiskSummary summary_from_terms(const DecompositionTerms& t, int* clamp_count) {
    double rw = risk_weak_from_terms(t);
    double m = misfit_from_terms(t);
    // Rounded table inputs can push an implied risk a hair below zero; clamp
    // rather than abort so published rows stay reproducible.
    if (rw < 0.0) {
        rw = 0.0;
        if (clamp_count) ++*clamp_count;
    }
    if (m < 0.0) {
        m = 0.0;
        if (clamp_count) ++*clamp_count;
    }
    RiskSummary s;
    s.risk_weak = rw;
    s.misfit = m;
    s.bound = misfit_bound(rw, m);
    return s;
}

std::size_t single_trial_count(std::span<const PromptMoments> per_prompt) {
    std::size_t n = 0;
    for (const PromptMoments& m : per_prompt) {
        if (m.n_trials == 1) ++n;
    }
    return n;
}

}  // namespace w2s
