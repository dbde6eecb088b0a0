// w2sdiag: weak-to-strong alignment diagnostics from model confidence scores.
//
// Subcommands: decompose, deception, bound, correlate, simulate, report.
// Exit codes: 0 success, 64 usage error, 65 input validation error,
// 70 internal invariant failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "w2s/deception.hpp"
#include "w2s/decomposition.hpp"
#include "w2s/errors.hpp"
#include "w2s/io_report.hpp"
#include "w2s/manifest.hpp"
#include "w2s/rankstats.hpp"
#include "w2s/settings.hpp"
#include "w2s/synthetic.hpp"
#include "w2s/version.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitValidation = 65;
constexpr int kExitInternal = 70;

struct InputText {
    std::string name;     // path or "<stdin>"
    std::string content;  // full bytes, also digested for the manifest
};

InputText slurp_input(const std::string& path_flag) {
    InputText in;
    if (path_flag == "-") {
        in.name = "<stdin>";
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        in.content = buf.str();
        return in;
    }
    std::ifstream f(path_flag, std::ios::binary);
    if (!f) {
        throw w2s::ValidationError("cannot open input file '" + path_flag + "'");
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    in.name = path_flag;
    in.content = buf.str();
    return in;
}

// Writes to the path, or stdout when the flag is "-". Returns whether a
// real file was written (manifests are only written next to real files).
bool write_output(const std::string& path_flag, const std::string& bytes) {
    if (path_flag == "-") {
        std::cout << bytes;
        return false;
    }
    std::ofstream out(path_flag, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw w2s::ValidationError("cannot open output file '" + path_flag + "'");
    }
    out << bytes;
    return true;
}

void emit_manifest(const std::string& subcommand,
                   const std::map<std::string, std::string>& flags,
                   const std::vector<std::pair<std::string, std::string>>& inputs,
                   std::optional<std::uint64_t> seed, const std::string& out_flag,
                   bool out_is_dir = false) {
    if (out_flag == "-") return;  // streaming output carries no sidecar
    w2s::RunManifest m;
    m.subcommand = subcommand;
    m.flags = flags;
    m.inputs = inputs;
    m.seed = seed;
    m.tool_version = w2s::kVersion;
    const std::filesystem::path path = out_is_dir
                                           ? std::filesystem::path(out_flag) / "manifest.json"
                                           : std::filesystem::path(out_flag + ".manifest.json");
    w2s::write_manifest(m, path);
}

w2s::ReportFormat parse_format(const std::string& name) {
    if (name == "markdown" || name == "md") return w2s::ReportFormat::kMarkdown;
    if (name == "csv") return w2s::ReportFormat::kCsv;
    throw w2s::ValidationError("unknown format '" + name + "' (expected markdown or csv)");
}

std::string format_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

struct DecomposeOpts {
    std::string trials;
    std::string out;
    std::string normalizer = "population";
};

void run_decompose(const DecomposeOpts& o) {
    const InputText in = slurp_input(o.trials);
    std::istringstream stream(in.content);
    const std::vector<w2s::PromptTrialSet> data = w2s::read_trial_jsonl(stream, in.name);
    if (data.empty()) {
        throw w2s::ValidationError(in.name + ": no trial records");
    }
    const bool population = o.normalizer == "population";
    if (!population && o.normalizer != "sample") {
        throw w2s::ValidationError("unknown normalizer '" + o.normalizer +
                                   "' (expected population or sample)");
    }

    std::vector<w2s::PromptMoments> moments;
    moments.reserve(data.size());
    std::size_t n_trials_total = 0;
    for (const w2s::PromptTrialSet& p : data) {
        moments.push_back(w2s::estimate_prompt_moments(
            p, population ? w2s::Normalizer::kPopulation : w2s::Normalizer::kSample));
        n_trials_total += p.trials.size();
    }
    const w2s::DecompositionTerms terms = w2s::aggregate_terms(moments);
    const double rw_terms = w2s::risk_weak_from_terms(terms);
    const double m_terms = w2s::misfit_from_terms(terms);
    const w2s::RiskSummary direct = w2s::direct_risks(data);
    const std::size_t singles = w2s::single_trial_count(moments);

    auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
    };

    nlohmann::json doc;
    doc["n_prompts"] = data.size();
    doc["n_trials_total"] = n_trials_total;
    doc["single_trial_prompts"] = singles;
    doc["normalizer"] = o.normalizer;
    doc["terms"] = {{"bias2_weak", terms.bias2_weak},
                    {"var_weak", terms.var_weak},
                    {"var_star", terms.var_star},
                    {"cov_star_weak", terms.cov_star_weak},
                    {"bias2_strong_given_weak", terms.bias2_strong_given_weak},
                    {"var_strong", terms.var_strong},
                    {"cov_strong_weak", terms.cov_strong_weak}};
    doc["risks"] = {{"risk_weak", direct.risk_weak},
                    {"misfit", direct.misfit},
                    {"risk_w2s_direct", *direct.risk_w2s_direct},
                    {"cross_term_epsilon", *direct.cross_term_epsilon},
                    {"bound", direct.bound}};

    std::ostream& note = o.out == "-" ? std::cerr : std::cout;
    if (population) {
        const double res_weak = rel(rw_terms, direct.risk_weak);
        const double res_misfit = rel(m_terms, direct.misfit);
        const double res_cross = rel(
            direct.risk_weak,
            *direct.risk_w2s_direct + direct.misfit + 2.0 * *direct.cross_term_epsilon);
        doc["residuals"] = {{"weak_identity", res_weak},
                            {"misfit_identity", res_misfit},
                            {"cross_term", res_cross}};
        note << "identity residuals: weak=" << format_sci(res_weak)
             << " misfit=" << format_sci(res_misfit) << " cross_term=" << format_sci(res_cross)
             << "\n";
        if (res_weak > 1e-10 || res_misfit > 1e-10 || res_cross > 1e-10) {
            throw w2s::InternalError("decomposition identity residual above 1e-10");
        }
        if (*direct.risk_w2s_direct > direct.bound + 1e-10) {
            throw w2s::InternalError("risk_w2s_direct exceeds the misfit bound");
        }
    } else {
        note << "identity residuals skipped: 1/(N-1) normalizer decouples terms from direct risks\n";
    }
    if (singles > 0) {
        note << "warning: " << singles << " prompt(s) contributed a single trial\n";
    }

    write_output(o.out, doc.dump(2) + "\n");
    emit_manifest("decompose",
                  {{"trials", o.trials}, {"out", o.out}, {"normalizer", o.normalizer}},
                  {{in.name, w2s::digest_bytes(in.content)}}, std::nullopt, o.out);
}

// ---------------------------------------------------------------------------
// deception
// ---------------------------------------------------------------------------

struct DeceptionOpts {
    std::string records;
    std::vector<double> taus{w2s::kDefaultTauGrid.begin(), w2s::kDefaultTauGrid.end()};
    std::string metric = "both";
    std::string out = "-";
    std::string format = "markdown";
};

void run_deception(const DeceptionOpts& o) {
    const InputText in = slurp_input(o.records);
    std::istringstream stream(in.content);
    const std::vector<w2s::ConfidenceRecord> records = w2s::read_confidence_jsonl(stream, in.name);
    if (records.empty()) {
        throw w2s::ValidationError(in.name + ": no confidence records");
    }

    w2s::DeceptionStats stats;
    std::vector<w2s::DeceptionResult> results;
    if (o.metric == "both") {
        results = w2s::threshold_sweep(records, o.taus, &stats);
    } else if (o.metric == "bs") {
        results = w2s::sweep_metric(records, o.taus, w2s::DeceptionMetric::kBlindSpot, &stats);
    } else if (o.metric == "broad") {
        results = w2s::sweep_metric(records, o.taus, w2s::DeceptionMetric::kBroad, &stats);
    } else {
        throw w2s::ValidationError("unknown metric '" + o.metric + "' (expected bs, broad, both)");
    }

    const w2s::ReportTable table = w2s::build_sweep_results_table(results);
    const std::string rendered = w2s::render_table(table, parse_format(o.format));
    const bool wrote_file = write_output(o.out, rendered);
    if (wrote_file) std::cout << rendered;

    if (!results.empty() && results.front().denominator == 0) {
        std::cerr << "note: no strong errors; deception undefined at every tau\n";
    } else if (!results.empty()) {
        std::cerr << "strong errors: " << results.front().denominator << " of " << records.size()
                  << " records\n";
    }
    if (stats.label_conflicts > 0) {
        std::cerr << "warning: " << stats.label_conflicts
                  << " record(s) carry a y_strong that contradicts the c_strong-derived label\n";
    }

    std::ostringstream taus_flag;
    for (std::size_t i = 0; i < o.taus.size(); ++i) {
        if (i) taus_flag << ',';
        taus_flag << o.taus[i];
    }
    emit_manifest("deception",
                  {{"records", o.records},
                   {"tau", taus_flag.str()},
                   {"metric", o.metric},
                   {"out", o.out},
                   {"format", o.format}},
                  {{in.name, w2s::digest_bytes(in.content)}}, std::nullopt, o.out);
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

struct BoundOpts {
    std::string settings;
    double tolerance = 5e-4;
    std::string out = "-";
    std::string format = "markdown";
};

void run_bound(const BoundOpts& o) {
    const InputText in = slurp_input(o.settings);
    std::istringstream stream(in.content);
    const std::vector<w2s::SettingRow> rows = w2s::read_settings_csv(stream, in.name);

    w2s::ReportTable table;
    table.name = "bound_check";
    table.columns = {"dataset", "pipeline", "risk_weak", "misfit",
                     "bound",   "risk_w2s", "abs_diff",  "status"};
    int clamped = 0;
    std::size_t flagged = 0;
    for (const w2s::SettingRow& row : rows) {
        const w2s::RiskSummary s = w2s::summary_from_terms(row.terms, &clamped);
        const double diff = std::abs(s.bound - row.risk_w2s_bound);
        const bool flag = diff > o.tolerance;
        if (flag) ++flagged;
        table.rows.push_back({row.dataset, pipeline_name(row.pipeline),
                              w2s::format_term(s.risk_weak), w2s::format_term(s.misfit),
                              w2s::format_term(s.bound), w2s::format_term(row.risk_w2s_bound),
                              format_sci(diff), flag ? "FLAG" : "ok"});
    }
    const std::string rendered = w2s::render_table(table, parse_format(o.format));
    const bool wrote_file = write_output(o.out, rendered);
    if (wrote_file) std::cout << rendered;
    if (clamped > 0) {
        std::cerr << "warning: " << clamped
                  << " implied risk(s) below zero were clamped before the square root\n";
    }
    std::cout << rows.size() << " row(s), " << flagged << " flagged (tolerance "
              << format_sci(o.tolerance) << ")\n";

    emit_manifest("bound",
                  {{"settings", o.settings},
                   {"tolerance", format_sci(o.tolerance)},
                   {"out", o.out},
                   {"format", o.format}},
                  {{in.name, w2s::digest_bytes(in.content)}}, std::nullopt, o.out);
}

// ---------------------------------------------------------------------------
// correlate
// ---------------------------------------------------------------------------

struct CorrelateOpts {
    std::string settings;
    std::string deception_col = "d_bs_0.25";
    std::vector<std::string> terms = {"var_strong", "risk_w2s", "cov_strong_weak"};
    std::size_t max_exact_n = 9;
    std::string out = "-";
    std::string format = "markdown";
};

void run_correlate(const CorrelateOpts& o) {
    const InputText in = slurp_input(o.settings);
    std::istringstream stream(in.content);
    const std::vector<w2s::SettingRow> rows = w2s::read_settings_csv(stream, in.name);

    const std::vector<std::string> dcols = {o.deception_col};
    const std::vector<w2s::CorrelationCell> cells =
        w2s::correlation_matrix(rows, o.terms, dcols, o.max_exact_n);

    const w2s::ReportTable table = w2s::build_correlation_table(cells);
    const std::string rendered = w2s::render_table(table, parse_format(o.format));
    const bool wrote_file = write_output(o.out, rendered);
    if (wrote_file) std::cout << rendered;
    for (const w2s::CorrelationCell& c : cells) {
        if (c.n_skipped > 0) {
            std::cerr << "warning: " << c.term << " vs " << c.deception_col << ": skipped "
                      << c.n_skipped << " setting(s) with undefined deception\n";
        }
    }

    std::ostringstream terms_flag;
    for (std::size_t i = 0; i < o.terms.size(); ++i) {
        if (i) terms_flag << ',';
        terms_flag << o.terms[i];
    }
    emit_manifest("correlate",
                  {{"settings", o.settings},
                   {"deception-col", o.deception_col},
                   {"terms", terms_flag.str()},
                   {"max-exact-n", std::to_string(o.max_exact_n)},
                   {"out", o.out},
                   {"format", o.format}},
                  {{in.name, w2s::digest_bytes(in.content)}}, std::nullopt, o.out);
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
    std::string config;
    std::string out;
    bool validate = false;
    std::optional<std::uint64_t> seed;
};

void run_simulate(const SimulateOpts& o) {
    const InputText in = slurp_input(o.config);
    std::istringstream stream(in.content);
    w2s::ScenarioConfig cfg = w2s::parse_scenario_config(stream);
    if (o.seed) cfg.seed = *o.seed;

    const std::vector<w2s::PromptTrialSet> data = w2s::generate_scenario(cfg);
    std::ostringstream jsonl;
    w2s::write_trial_jsonl(jsonl, data);
    write_output(o.out, jsonl.str());

    if (o.validate) {
        const w2s::OracleReport rep = w2s::run_oracles(data);
        std::ostream& note = o.out == "-" ? std::cerr : std::cout;
        note << "oracle report: samples=" << rep.samples_checked
             << " weak_identity=" << format_sci(rep.max_residual_weak_identity)
             << " misfit_identity=" << format_sci(rep.max_residual_misfit_identity)
             << " cross_term=" << format_sci(rep.max_residual_cross_term)
             << " bound_violations=" << rep.bound_violations << "\n";
        if (rep.bound_violations > 0 || rep.max_residual_weak_identity > 1e-10 ||
            rep.max_residual_misfit_identity > 1e-10 || rep.max_residual_cross_term > 1e-10) {
            throw w2s::InternalError("oracle validation failed");
        }
    }

    emit_manifest("simulate",
                  {{"config", o.config},
                   {"out", o.out},
                   {"validate", o.validate ? "true" : "false"},
                   {"seed", std::to_string(cfg.seed)}},
                  {{in.name, w2s::digest_bytes(in.content)}}, cfg.seed, o.out);
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportOpts {
    std::string settings;
    std::string out;
    std::string format = "markdown";
};

void run_report(const ReportOpts& o) {
    const InputText in = slurp_input(o.settings);
    std::istringstream stream(in.content);
    const std::vector<w2s::SettingRow> rows = w2s::read_settings_csv(stream, in.name);

    w2s::ReportBundle bundle;
    bundle.tables.push_back(w2s::build_summary_table(rows));
    bundle.tables.push_back(w2s::build_decomposition_table(rows));
    bundle.tables.push_back(w2s::build_deception_sweep_table(rows, "d_bs"));
    bundle.tables.push_back(w2s::build_deception_sweep_table(rows, "d_broad"));
    bundle.provenance.push_back("tool_version " + std::string(w2s::kVersion));
    bundle.provenance.push_back("input " + in.name + " " + w2s::digest_bytes(in.content));

    const auto written = w2s::emit_report(bundle, parse_format(o.format), o.out);
    for (const auto& path : written) {
        std::cout << "wrote " << path.string() << "\n";
    }
    emit_manifest("report", {{"settings", o.settings}, {"out", o.out}, {"format", o.format}},
                  {{in.name, w2s::digest_bytes(in.content)}}, std::nullopt, o.out,
                  /*out_is_dir=*/true);
}

std::string schema_help() {
    return "Schemas:\n"
           "  trial JSONL      {\"prompt_id\": str, \"trial\": int, \"c_gt_weak\": [0,1],\n"
           "                    \"c_weak_weak\": [0,1], \"c_strong_weak\": [0,1]}\n"
           "                   c_gt_weak: weak confidence on the ground-truth-ordered pair;\n"
           "                   c_weak_weak / c_strong_weak: weak / strong confidence on the\n"
           "                   weak-labeled pair. One trial per line.\n"
           "  confidence JSONL {\"prompt_id\": str, \"c_strong\": (0,1), \"c_weak\": (0,1),\n"
           "                    \"y_gt\": 0|1, \"y_strong\": 0|1 optional}\n"
           "                   confidences on the ground-truth-ordered pair; y_strong is\n"
           "                   derived from c_strong (>= 0.5 agrees, ties agree) when absent.\n"
           "  settings CSV     header-keyed columns: dataset, pipeline, bias2_weak, var_weak,\n"
           "                   var_star, cov_star_weak, bias2_strong_given_weak, var_strong,\n"
           "                   cov_strong_weak, risk_w2s, d_bs_0.25, d_broad_0.25, plus any\n"
           "                   extra d_bs_*/d_broad_* columns; pipeline is one of sft_sft,\n"
           "                   sft_rlaif, rlhf_sft, rlhf_rlaif; '#' starts a comment line.\n"
           "  scenario config  key = value lines: n_prompts, n_trials, target_mean_lo,\n"
           "                   target_mean_hi, weak_bias, weak_noise_sd, strong_coupling,\n"
           "                   strong_noise_sd, target_noise_sd, seed.\n"
           "\n"
           "Paths accept '-' for stdin/stdout on JSONL subcommands. Every file output gets\n"
           "a <out>.manifest.json sidecar; rerunning with the recorded flags reproduces the\n"
           "output byte for byte. W2S_THREADS caps worker threads (0 = auto).\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak-to-strong alignment diagnostics from model confidence scores"};
    app.set_version_flag("--version", std::string(w2s::kVersion));
    app.require_subcommand(1);
    app.footer(schema_help());

    const auto tau_check = CLI::Validator(
        [](std::string& s) -> std::string {
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0') return "tau is not a number: " + s;
            if (!(v > 0.0 && v < 0.5)) return "tau must lie strictly inside (0, 0.5): " + s;
            return {};
        },
        "TAU");

    DecomposeOpts dec;
    auto* cmd_decompose = app.add_subcommand(
        "decompose", "Estimate the bias/variance/covariance terms, risks, and bound from trials");
    cmd_decompose->add_option("--trials", dec.trials, "trial JSONL path ('-' = stdin)")->required();
    cmd_decompose->add_option("--out", dec.out, "output JSON path ('-' = stdout)")->required();
    cmd_decompose
        ->add_option("--normalizer", dec.normalizer,
                     "variance normalizer: population (1/N) or sample (1/(N-1)); identity "
                     "residual checks apply to population only")
        ->check(CLI::IsMember({"population", "sample"}))
        ->capture_default_str();
    cmd_decompose->callback([&] { run_decompose(dec); });

    DeceptionOpts dcp;
    auto* cmd_deception = app.add_subcommand(
        "deception", "Blind-spot and broad deception over confidence records, swept over tau");
    cmd_deception->add_option("--records", dcp.records, "confidence JSONL path ('-' = stdin)")
        ->required();
    cmd_deception
        ->add_option("--tau", dcp.taus,
                     "thresholds in (0, 0.5); default 0.10 0.20 0.25 0.30 0.40 0.49")
        ->check(tau_check);
    cmd_deception->add_option("--metric", dcp.metric, "bs, broad, or both")
        ->check(CLI::IsMember({"bs", "broad", "both"}))
        ->capture_default_str();
    cmd_deception->add_option("--out", dcp.out, "table output path ('-' = stdout)")
        ->capture_default_str();
    cmd_deception->add_option("--format", dcp.format, "markdown or csv")->capture_default_str();
    cmd_deception->callback([&] { run_deception(dcp); });

    BoundOpts bnd;
    auto* cmd_bound = app.add_subcommand(
        "bound", "Recompute risk_weak, misfit, and the bound per setting row; flag mismatches");
    cmd_bound->add_option("--settings", bnd.settings, "settings CSV path ('-' = stdin)")
        ->required();
    cmd_bound
        ->add_option("--tolerance", bnd.tolerance,
                     "max |bound - risk_w2s| before a row is flagged")
        ->capture_default_str();
    cmd_bound->add_option("--out", bnd.out, "table output path ('-' = stdout)")
        ->capture_default_str();
    cmd_bound->add_option("--format", bnd.format, "markdown or csv")->capture_default_str();
    cmd_bound->callback([&] { run_bound(bnd); });

    CorrelateOpts cor;
    auto* cmd_correlate = app.add_subcommand(
        "correlate", "Spearman rank correlations between terms and a deception column");
    cmd_correlate->add_option("--settings", cor.settings, "settings CSV path ('-' = stdin)")
        ->required();
    cmd_correlate
        ->add_option("--deception-col", cor.deception_col, "deception column name to correlate")
        ->capture_default_str();
    cmd_correlate
        ->add_option("--terms", cor.terms,
                     "comma-separated terms: bias2_weak var_weak var_star cov_star_weak "
                     "bias2_strong_given_weak var_strong cov_strong_weak risk_weak misfit "
                     "bound risk_w2s")
        ->delimiter(',')
        ->capture_default_str();
    cmd_correlate
        ->add_option("--max-exact-n", cor.max_exact_n,
                     "largest n for exact permutation p-values; larger n uses the t approximation")
        ->capture_default_str();
    cmd_correlate->add_option("--out", cor.out, "table output path ('-' = stdout)")
        ->capture_default_str();
    cmd_correlate->add_option("--format", cor.format, "markdown or csv")->capture_default_str();
    cmd_correlate->callback([&] { run_correlate(cor); });

    SimulateOpts sim;
    auto* cmd_simulate = app.add_subcommand(
        "simulate", "Generate a synthetic scenario as trial JSONL; optionally run the oracles");
    cmd_simulate->add_option("--config", sim.config, "scenario config path ('-' = stdin)")
        ->required();
    cmd_simulate->add_option("--out", sim.out, "trial JSONL output path ('-' = stdout)")
        ->required();
    cmd_simulate->add_flag("--validate", sim.validate,
                           "re-derive risks with flat-loop oracles and fail on any violation");
    cmd_simulate->add_option("--seed", sim.seed, "override the config seed (recorded)");
    cmd_simulate->callback([&] { run_simulate(sim); });

    ReportOpts rep;
    auto* cmd_report = app.add_subcommand(
        "report", "Render summary, decomposition, and deception sweep tables from settings");
    cmd_report->add_option("--settings", rep.settings, "settings CSV path ('-' = stdin)")
        ->required();
    cmd_report->add_option("--out", rep.out, "output directory")->required();
    cmd_report->add_option("--format", rep.format, "markdown or csv")->capture_default_str();
    cmd_report->callback([&] { run_report(rep); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const w2s::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const w2s::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
