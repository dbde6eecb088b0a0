#include "w2s/rankstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "w2s/errors.hpp"

namespace w2s {

namespace {

void validate_series(const PairedSeries& s) {
    if (s.xs.size() != s.ys.size()) {
        throw ValidationError("paired series: xs and ys lengths differ");
    }
    if (!s.labels.empty() && s.labels.size() != s.xs.size()) {
        throw ValidationError("paired series: labels length differs from values");
    }
    if (s.xs.size() < 2) {
        throw ValidationError("paired series: need at least 2 pairs");
    }
    for (double v : s.xs) {
        if (!std::isfinite(v)) throw ValidationError("paired series: non-finite x value");
    }
    for (double v : s.ys) {
        if (!std::isfinite(v)) throw ValidationError("paired series: non-finite y value");
    }
    const bool xs_const = std::all_of(s.xs.begin(), s.xs.end(), [&](double v) { return v == s.xs[0]; });
    const bool ys_const = std::all_of(s.ys.begin(), s.ys.end(), [&](double v) { return v == s.ys[0]; });
    if (xs_const || ys_const) {
        throw ValidationError("undefined correlation: constant series");
    }
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const double nd = static_cast<double>(n);
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= nd;
    mb /= nd;
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xa = a[i] - ma;
        const double xb = b[i] - mb;
        num += xa * xb;
        da += xa * xa;
        db += xb * xb;
    }
    return num / std::sqrt(da * db);
}

std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Tied run [i, j] shares the average of ranks i+1 .. j+1.
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(const PairedSeries& s) {
    validate_series(s);
    const std::vector<double> rx = average_ranks(s.xs);
    const std::vector<double> ry = average_ranks(s.ys);
    return pearson(rx, ry);
}

double t_approximation_p(double rho, std::size_t n) {
    if (n < 3) {
        throw ValidationError("t approximation needs n >= 3");
    }
    const double df = static_cast<double>(n - 2);
    const double denom = 1.0 - rho * rho;
    double p;
    if (denom <= 0.0) {
        p = 0.0;  // |rho| == 1: clamp below
    } else {
        const double t = std::abs(rho) * std::sqrt(df / denom);
        const boost::math::students_t dist(df);
        p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    }
    return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

CorrelationResult exact_permutation_p(const PairedSeries& s, std::size_t max_exact_n) {
    const double rho_obs = spearman_rho(s);
    const std::size_t n = s.xs.size();

    CorrelationResult res;
    res.rho = rho_obs;
    res.n = n;
    if (n > max_exact_n) {
        res.method = PValueMethod::kTApproximation;
        res.p_two_sided = t_approximation_p(rho_obs, n);
        return res;
    }

    const std::vector<double> rx = average_ranks(s.xs);
    const std::vector<double> ry = average_ranks(s.ys);
    const double nd = static_cast<double>(n);
    const double mean_rank = (nd + 1.0) / 2.0;  // ranks always average to (n+1)/2
    std::vector<double> cx(n), cy(n);
    double sx2 = 0.0, sy2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cx[i] = rx[i] - mean_rank;
        cy[i] = ry[i] - mean_rank;
        sx2 += cx[i] * cx[i];
        sy2 += cy[i] * cy[i];
    }
    const double denom = std::sqrt(sx2 * sy2);
    const double threshold = std::abs(rho_obs) - 1e-12;

    // Permuting indices covers all n! arrangements; the sum of squares is
    // permutation-invariant so only the cross term changes.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t hits = 0;
    do {
        double cross = 0.0;
        for (std::size_t i = 0; i < n; ++i) cross += cx[i] * cy[perm[i]];
        if (std::abs(cross / denom) >= threshold) ++hits;
    } while (std::next_permutation(perm.begin(), perm.end()));

    res.method = PValueMethod::kExactPermutation;
    res.p_two_sided = static_cast<double>(hits) / static_cast<double>(factorial(n));
    return res;
}

double term_value(const SettingRow& row, std::string_view term) {
    const DecompositionTerms& t = row.terms;
    if (term == "bias2_weak") return t.bias2_weak;
    if (term == "var_weak") return t.var_weak;
    if (term == "var_star") return t.var_star;
    if (term == "cov_star_weak") return t.cov_star_weak;
    if (term == "bias2_strong_given_weak") return t.bias2_strong_given_weak;
    if (term == "var_strong") return t.var_strong;
    if (term == "cov_strong_weak") return t.cov_strong_weak;
    if (term == "risk_weak") return risk_weak_from_terms(t);
    if (term == "misfit") return misfit_from_terms(t);
    if (term == "bound") return summary_from_terms(t).bound;
    if (term == "risk_w2s") return row.risk_w2s_bound;
    throw ValidationError("unknown term '" + std::string(term) + "'");
}

std::vector<CorrelationCell> correlation_matrix(std::span<const SettingRow> settings,
                                                std::span<const std::string> terms,
                                                std::span<const std::string> deception_cols,
                                                std::size_t max_exact_n) {
    std::vector<CorrelationCell> out;
    out.reserve(terms.size() * deception_cols.size());
    for (const std::string& term : terms) {
        for (const std::string& dcol : deception_cols) {
            PairedSeries series;
            std::size_t skipped = 0;
            for (const SettingRow& row : settings) {
                const std::optional<double> d = deception_value(row, dcol);
                if (!d) {
                    ++skipped;
                    continue;
                }
                series.labels.push_back(setting_label(row));
                series.xs.push_back(term_value(row, term));
                series.ys.push_back(*d);
            }
            if (series.xs.size() < 3) {
                throw ValidationError("correlation for '" + term + "' vs '" + dcol +
                                      "': fewer than 3 usable settings");
            }
            CorrelationCell cell;
            cell.term = term;
            cell.deception_col = dcol;
            cell.n = series.xs.size();
            cell.n_skipped = skipped;
            const CorrelationResult r = exact_permutation_p(series, max_exact_n);
            cell.rho = r.rho;
            if (r.method == PValueMethod::kExactPermutation) cell.p_exact = r.p_two_sided;
            cell.p_t = t_approximation_p(r.rho, cell.n);
            out.push_back(std::move(cell));
        }
    }
    return out;
}

}  // namespace w2s
