#include "w2s/io_report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "w2s/errors.hpp"

namespace w2s {

namespace {

using nlohmann::json;

[[noreturn]] void fail_line(const std::string& source, std::size_t line, const std::string& what) {
    throw ValidationError(source + ":" + std::to_string(line) + ": " + what);
}

json parse_json_line(const std::string& line, const std::string& source, std::size_t lineno) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        fail_line(source, lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) fail_line(source, lineno, "record is not a JSON object");
    return j;
}

std::string get_string(const json& j, const char* field, const std::string& source,
                       std::size_t lineno) {
    if (!j.contains(field)) fail_line(source, lineno, std::string("missing field '") + field + "'");
    if (!j[field].is_string()) {
        fail_line(source, lineno, std::string("field '") + field + "' must be a string");
    }
    return j[field].get<std::string>();
}

double get_number(const json& j, const char* field, const std::string& source, std::size_t lineno) {
    if (!j.contains(field)) fail_line(source, lineno, std::string("missing field '") + field + "'");
    if (!j[field].is_number()) {
        fail_line(source, lineno, std::string("field '") + field + "' must be a number");
    }
    return j[field].get<double>();
}

std::int64_t get_integer(const json& j, const char* field, const std::string& source,
                         std::size_t lineno) {
    if (!j.contains(field)) fail_line(source, lineno, std::string("missing field '") + field + "'");
    if (!j[field].is_number_integer()) {
        fail_line(source, lineno, std::string("field '") + field + "' must be an integer");
    }
    return j[field].get<std::int64_t>();
}

int get_binary(const json& j, const char* field, const std::string& source, std::size_t lineno) {
    const std::int64_t v = get_integer(j, field, source, lineno);
    if (v != 0 && v != 1) {
        fail_line(source, lineno, std::string("field '") + field + "' must be 0 or 1");
    }
    return static_cast<int>(v);
}

double get_unit_interval(const json& j, const char* field, const std::string& source,
                         std::size_t lineno, bool open) {
    const double v = get_number(j, field, source, lineno);
    const bool ok = open ? (v > 0.0 && v < 1.0) : (v >= 0.0 && v <= 1.0);
    if (!std::isfinite(v) || !ok) {
        fail_line(source, lineno,
                  std::string("field '") + field + "' out of range " + (open ? "(0, 1)" : "[0, 1]"));
    }
    return v;
}

// Shortest representation that round-trips a double.
std::string shortest_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open input file '" + path.string() + "'");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ValidationError("cannot open output file '" + path.string() + "'");
    }
    return out;
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trial JSONL
// ---------------------------------------------------------------------------

std::vector<PromptTrialSet> read_trial_jsonl(std::istream& in, const std::string& source) {
    std::vector<PromptTrialSet> out;
    std::unordered_map<std::string, std::size_t> index;
    std::unordered_map<std::string, std::unordered_set<std::int64_t>> seen_trials;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const json j = parse_json_line(line, source, lineno);
        const std::string prompt_id = get_string(j, "prompt_id", source, lineno);
        const std::int64_t trial = get_integer(j, "trial", source, lineno);
        if (trial < 0) fail_line(source, lineno, "field 'trial' must be >= 0");
        TrialProxies t;
        t.r_star = get_unit_interval(j, "c_gt_weak", source, lineno, /*open=*/false);
        t.r_weak = get_unit_interval(j, "c_weak_weak", source, lineno, /*open=*/false);
        t.r_strong = get_unit_interval(j, "c_strong_weak", source, lineno, /*open=*/false);
        if (!seen_trials[prompt_id].insert(trial).second) {
            fail_line(source, lineno,
                      "duplicate (prompt_id, trial) = ('" + prompt_id + "', " +
                          std::to_string(trial) + ")");
        }
        auto [it, inserted] = index.try_emplace(prompt_id, out.size());
        if (inserted) {
            out.push_back(PromptTrialSet{prompt_id, {}});
        }
        out[it->second].trials.push_back(t);
    }
    return out;
}

std::vector<PromptTrialSet> read_trial_jsonl(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    return read_trial_jsonl(in, path.string());
}

void write_trial_jsonl(std::ostream& out, std::span<const PromptTrialSet> data) {
    for (const PromptTrialSet& p : data) {
        std::int64_t trial = 0;
        for (const TrialProxies& t : p.trials) {
            json j;
            j["prompt_id"] = p.prompt_id;
            j["trial"] = trial++;
            j["c_gt_weak"] = t.r_star;
            j["c_weak_weak"] = t.r_weak;
            j["c_strong_weak"] = t.r_strong;
            out << j.dump() << '\n';
        }
    }
}

void write_trial_jsonl(const std::filesystem::path& path, std::span<const PromptTrialSet> data) {
    std::ofstream out = open_output(path);
    write_trial_jsonl(out, data);
}

// ---------------------------------------------------------------------------
// Confidence JSONL
// ---------------------------------------------------------------------------

std::vector<ConfidenceRecord> read_confidence_jsonl(std::istream& in, const std::string& source) {
    std::vector<ConfidenceRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const json j = parse_json_line(line, source, lineno);
        ConfidenceRecord r;
        r.prompt_id = get_string(j, "prompt_id", source, lineno);
        r.c_strong = get_unit_interval(j, "c_strong", source, lineno, /*open=*/true);
        r.c_weak = get_unit_interval(j, "c_weak", source, lineno, /*open=*/true);
        r.y_gt = get_binary(j, "y_gt", source, lineno);
        if (j.contains("y_strong") && !j["y_strong"].is_null()) {
            r.y_strong = get_binary(j, "y_strong", source, lineno);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ConfidenceRecord> read_confidence_jsonl(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    return read_confidence_jsonl(in, path.string());
}

void write_confidence_jsonl(std::ostream& out, std::span<const ConfidenceRecord> records) {
    for (const ConfidenceRecord& r : records) {
        json j;
        j["prompt_id"] = r.prompt_id;
        j["c_strong"] = r.c_strong;
        j["c_weak"] = r.c_weak;
        j["y_gt"] = r.y_gt;
        if (r.y_strong) j["y_strong"] = *r.y_strong;
        out << j.dump() << '\n';
    }
}

void write_confidence_jsonl(const std::filesystem::path& path,
                            std::span<const ConfidenceRecord> records) {
    std::ofstream out = open_output(path);
    write_confidence_jsonl(out, records);
}

// ---------------------------------------------------------------------------
// Completion log-prob JSONL
// ---------------------------------------------------------------------------

std::vector<CompletionLogProbs> read_logprob_jsonl(std::istream& in, const std::string& source) {
    std::vector<CompletionLogProbs> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const json j = parse_json_line(line, source, lineno);
        CompletionLogProbs c;
        c.prompt_id = get_string(j, "prompt_id", source, lineno);
        const std::string role = get_string(j, "completion_role", source, lineno);
        if (role == "chosen") {
            c.role = CompletionRole::kChosen;
        } else if (role == "rejected") {
            c.role = CompletionRole::kRejected;
        } else {
            fail_line(source, lineno, "field 'completion_role' must be 'chosen' or 'rejected'");
        }
        if (!j.contains("token_logprobs") || !j["token_logprobs"].is_array()) {
            fail_line(source, lineno, "field 'token_logprobs' must be an array");
        }
        for (const auto& v : j["token_logprobs"]) {
            if (!v.is_number()) {
                fail_line(source, lineno, "field 'token_logprobs' must contain numbers only");
            }
            const double lp = v.get<double>();
            if (!std::isfinite(lp) || lp > 0.0) {
                fail_line(source, lineno, "field 'token_logprobs' entries must be finite and <= 0");
            }
            c.token_logprobs.push_back(lp);
        }
        if (c.token_logprobs.empty()) {
            fail_line(source, lineno, "field 'token_logprobs' must be non-empty");
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CompletionLogProbs> read_logprob_jsonl(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    return read_logprob_jsonl(in, path.string());
}

std::vector<ConfidencePair> pair_confidences(std::span<const CompletionLogProbs> rows,
                                             PairOrdering ordering) {
    struct Slot {
        std::optional<double> chosen_avg;
        std::optional<double> rejected_avg;
    };
    std::vector<std::string> order;
    std::map<std::string, Slot> slots;
    for (const CompletionLogProbs& row : rows) {
        auto [it, inserted] = slots.try_emplace(row.prompt_id);
        if (inserted) order.push_back(row.prompt_id);
        auto& slot = row.role == CompletionRole::kChosen ? it->second.chosen_avg
                                                         : it->second.rejected_avg;
        if (slot) {
            throw ValidationError("pair_confidences: duplicate " +
                                  std::string(row.role == CompletionRole::kChosen ? "chosen"
                                                                                  : "rejected") +
                                  " completion for prompt '" + row.prompt_id + "'");
        }
        slot = average_log_prob(row);
    }
    std::vector<ConfidencePair> out;
    out.reserve(order.size());
    for (const std::string& id : order) {
        const Slot& slot = slots[id];
        if (!slot.chosen_avg || !slot.rejected_avg) {
            throw ValidationError("pair_confidences: prompt '" + id +
                                  "' needs one chosen and one rejected completion");
        }
        out.push_back(ConfidencePair{id, confidence_score(*slot.chosen_avg, *slot.rejected_avg),
                                     ordering});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Settings CSV
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kRequiredColumns = {
    "dataset",       "pipeline",   "bias2_weak",      "var_weak",
    "var_star",      "cov_star_weak", "bias2_strong_given_weak", "var_strong",
    "cov_strong_weak", "risk_w2s", "d_bs_0.25",       "d_broad_0.25"};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    for (std::string& s : cells) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    return cells;
}

bool is_deception_column(const std::string& name) {
    return name.rfind("d_bs_", 0) == 0 || name.rfind("d_broad_", 0) == 0;
}

bool is_undefined_marker(const std::string& cell) {
    return cell.empty() || cell == kUndefinedCell;
}

double parse_cell_number(const std::string& cell, const std::string& source, std::size_t lineno,
                         const std::string& column) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        fail_line(source, lineno, "non-numeric cell in column '" + column + "': '" + cell + "'");
    }
    return v;
}

}  // namespace

std::vector<SettingRow> read_settings_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) {
        throw ValidationError(source + ": missing header row");
    }
    std::unordered_map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!col.try_emplace(header[i], i).second) {
            throw ValidationError(source + ": duplicate column '" + header[i] + "'");
        }
    }
    for (const std::string& required : kRequiredColumns) {
        if (!col.count(required)) {
            throw ValidationError(source + ": missing required column '" + required + "'");
        }
    }
    std::vector<std::string> deception_cols;
    for (const std::string& name : header) {
        if (is_deception_column(name)) deception_cols.push_back(name);
    }

    std::vector<SettingRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            fail_line(source, lineno,
                      "expected " + std::to_string(header.size()) + " cells, found " +
                          std::to_string(cells.size()));
        }
        auto cell = [&](const std::string& name) -> const std::string& {
            return cells[col.at(name)];
        };
        auto num = [&](const std::string& name) {
            return parse_cell_number(cell(name), source, lineno, name);
        };
        SettingRow row;
        row.dataset = cell("dataset");
        if (row.dataset.empty()) fail_line(source, lineno, "empty cell in column 'dataset'");
        try {
            row.pipeline = parse_pipeline(cell("pipeline"));
        } catch (const ValidationError& e) {
            fail_line(source, lineno, e.what());
        }
        row.terms.bias2_weak = num("bias2_weak");
        row.terms.var_weak = num("var_weak");
        row.terms.var_star = num("var_star");
        row.terms.cov_star_weak = num("cov_star_weak");
        row.terms.bias2_strong_given_weak = num("bias2_strong_given_weak");
        row.terms.var_strong = num("var_strong");
        row.terms.cov_strong_weak = num("cov_strong_weak");
        row.risk_w2s_bound = num("risk_w2s");
        for (const std::string& dcol : deception_cols) {
            const std::string& c = cell(dcol);
            if (is_undefined_marker(c)) {
                row.deception.emplace_back(dcol, std::nullopt);
            } else {
                const double v = parse_cell_number(c, source, lineno, dcol);
                if (!(v >= 0.0 && v <= 1.0)) {
                    fail_line(source, lineno, "column '" + dcol + "' out of range [0, 1]");
                }
                row.deception.emplace_back(dcol, v);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ValidationError(source + ": no data rows");
    }
    return rows;
}

std::vector<SettingRow> read_settings_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    return read_settings_csv(in, path.string());
}

void write_settings_csv(std::ostream& out, std::span<const SettingRow> rows) {
    // Union of deception columns across rows, in first-seen order.
    std::vector<std::string> deception_cols;
    for (const SettingRow& row : rows) {
        for (const auto& [name, _] : row.deception) {
            if (std::find(deception_cols.begin(), deception_cols.end(), name) ==
                deception_cols.end()) {
                deception_cols.push_back(name);
            }
        }
    }
    out << "dataset,pipeline,bias2_weak,var_weak,var_star,cov_star_weak,"
           "bias2_strong_given_weak,var_strong,cov_strong_weak,risk_w2s";
    for (const std::string& name : deception_cols) out << ',' << name;
    out << '\n';
    for (const SettingRow& row : rows) {
        out << csv_escape(row.dataset) << ',' << pipeline_name(row.pipeline) << ','
            << shortest_double(row.terms.bias2_weak) << ',' << shortest_double(row.terms.var_weak)
            << ',' << shortest_double(row.terms.var_star) << ','
            << shortest_double(row.terms.cov_star_weak) << ','
            << shortest_double(row.terms.bias2_strong_given_weak) << ','
            << shortest_double(row.terms.var_strong) << ','
            << shortest_double(row.terms.cov_strong_weak) << ','
            << shortest_double(row.risk_w2s_bound);
        for (const std::string& name : deception_cols) {
            const std::optional<double> v = deception_value(row, name);
            out << ',' << (v ? shortest_double(*v) : std::string(kUndefinedCell));
        }
        out << '\n';
    }
}

void write_settings_csv(const std::filesystem::path& path, std::span<const SettingRow> rows) {
    std::ofstream out = open_output(path);
    write_settings_csv(out, rows);
}

// ---------------------------------------------------------------------------
// Report tables
// ---------------------------------------------------------------------------

namespace {

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    std::string s(buf);
    if (s.find_first_of("123456789") == std::string::npos && s[0] == '-') {
        s.erase(0, 1);  // normalize -0.000 to 0.000
    }
    return s;
}

}  // namespace

std::string format_term(double v) { return format_fixed(v, 6); }

std::string format_deception(double v) { return format_fixed(v, 3); }

ReportTable build_summary_table(std::span<const SettingRow> settings) {
    ReportTable t;
    t.name = "summary";
    t.columns = {"dataset", "pipeline", "var_strong", "risk_w2s", "d_bs_0.25"};
    for (const SettingRow& row : settings) {
        const std::optional<double> dbs = deception_value(row, "d_bs_0.25");
        t.rows.push_back({row.dataset, pipeline_name(row.pipeline),
                          format_term(row.terms.var_strong), format_term(row.risk_w2s_bound),
                          dbs ? format_deception(*dbs) : kUndefinedCell});
    }
    return t;
}

ReportTable build_decomposition_table(std::span<const SettingRow> settings) {
    ReportTable t;
    t.name = "decomposition";
    t.columns = {"dataset",       "pipeline",   "bias2_weak",      "var_weak",
                 "var_star",      "cov_star_weak", "bias2_strong_given_weak", "var_strong",
                 "cov_strong_weak", "risk_w2s", "d_bs_0.25",       "d_broad_0.25"};
    for (const SettingRow& row : settings) {
        const std::optional<double> dbs = deception_value(row, "d_bs_0.25");
        const std::optional<double> dbroad = deception_value(row, "d_broad_0.25");
        t.rows.push_back({row.dataset, pipeline_name(row.pipeline),
                          format_term(row.terms.bias2_weak), format_term(row.terms.var_weak),
                          format_term(row.terms.var_star), format_term(row.terms.cov_star_weak),
                          format_term(row.terms.bias2_strong_given_weak),
                          format_term(row.terms.var_strong),
                          format_term(row.terms.cov_strong_weak),
                          format_term(row.risk_w2s_bound),
                          dbs ? format_deception(*dbs) : kUndefinedCell,
                          dbroad ? format_deception(*dbroad) : kUndefinedCell});
    }
    return t;
}

ReportTable build_deception_sweep_table(std::span<const SettingRow> settings,
                                        const std::string& metric_prefix) {
    ReportTable t;
    t.name = metric_prefix + "_sweep";
    t.columns = {"dataset", "pipeline"};
    // Column order follows the first row that carries each column.
    std::vector<std::string> dcols;
    const std::string prefix = metric_prefix + "_";
    for (const SettingRow& row : settings) {
        for (const auto& [name, _] : row.deception) {
            if (name.rfind(prefix, 0) == 0 &&
                std::find(dcols.begin(), dcols.end(), name) == dcols.end()) {
                dcols.push_back(name);
            }
        }
    }
    for (const std::string& name : dcols) {
        t.columns.push_back("tau=" + name.substr(prefix.size()));
    }
    for (const SettingRow& row : settings) {
        std::vector<std::string> cells = {row.dataset, pipeline_name(row.pipeline)};
        for (const std::string& name : dcols) {
            const std::optional<double> v = deception_value(row, name);
            cells.push_back(v ? format_deception(*v) : kUndefinedCell);
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

ReportTable build_sweep_results_table(std::span<const DeceptionResult> results) {
    ReportTable t;
    t.name = "deception_sweep";
    // Collect taus in first-seen order; one row per metric present.
    std::vector<double> taus;
    bool has_bs = false, has_broad = false;
    for (const DeceptionResult& r : results) {
        if (std::find(taus.begin(), taus.end(), r.tau) == taus.end()) taus.push_back(r.tau);
        (r.metric == DeceptionMetric::kBlindSpot ? has_bs : has_broad) = true;
    }
    t.columns = {"metric"};
    for (double tau : taus) t.columns.push_back("tau=" + format_fixed(tau, 2));
    auto row_for = [&](DeceptionMetric metric, const std::string& label) {
        std::vector<std::string> cells = {label};
        for (double tau : taus) {
            std::string cell = kUndefinedCell;
            for (const DeceptionResult& r : results) {
                if (r.metric == metric && r.tau == tau) {
                    cell = r.value ? format_deception(*r.value) : kUndefinedCell;
                }
            }
            cells.push_back(cell);
        }
        t.rows.push_back(std::move(cells));
    };
    if (has_bs) row_for(DeceptionMetric::kBlindSpot, "blind_spot");
    if (has_broad) row_for(DeceptionMetric::kBroad, "broad");
    return t;
}

ReportTable build_correlation_table(std::span<const CorrelationCell> cells) {
    ReportTable t;
    t.name = "correlations";
    t.columns = {"term", "deception", "n", "skipped", "rho", "p_exact", "p_t_approx"};
    for (const CorrelationCell& c : cells) {
        t.rows.push_back({c.term, c.deception_col, std::to_string(c.n), std::to_string(c.n_skipped),
                          format_fixed(c.rho, 6),
                          c.p_exact ? format_fixed(*c.p_exact, 6) : kUndefinedCell,
                          format_fixed(c.p_t, 6)});
    }
    return t;
}

std::string render_table(const ReportTable& table, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::kCsv) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(table.columns[i]);
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                out << csv_escape(row[i]);
            }
            out << '\n';
        }
        return out.str();
    }
    // Markdown: pad to column width for readability; deterministic.
    std::vector<std::size_t> width(table.columns.size(), 0);
    for (std::size_t i = 0; i < table.columns.size(); ++i) width[i] = table.columns[i].size();
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    auto emit_row = [&](const std::vector<std::string>& cells) {
        out << '|';
        for (std::size_t i = 0; i < width.size(); ++i) {
            const std::string& cell = i < cells.size() ? cells[i] : std::string();
            out << ' ' << cell << std::string(width[i] - std::min(width[i], cell.size()), ' ')
                << " |";
        }
        out << '\n';
    };
    emit_row(table.columns);
    out << '|';
    for (std::size_t i = 0; i < width.size(); ++i) {
        out << ' ' << std::string(width[i], '-') << " |";
    }
    out << '\n';
    for (const auto& row : table.rows) emit_row(row);
    return out.str();
}

std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle, ReportFormat format,
                                               const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw ValidationError("cannot create output directory '" + out_dir.string() +
                              "': " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    const char* ext = format == ReportFormat::kMarkdown ? ".md" : ".csv";
    for (const ReportTable& table : bundle.tables) {
        const std::filesystem::path path = out_dir / (table.name + ext);
        std::ofstream out = open_output(path);
        out << render_table(table, format);
        written.push_back(path);
    }
    if (!bundle.warnings.empty()) {
        const std::filesystem::path path = out_dir / "warnings.txt";
        std::ofstream out = open_output(path);
        for (const std::string& w : bundle.warnings) out << w << '\n';
        written.push_back(path);
    }
    if (!bundle.provenance.empty()) {
        const std::filesystem::path path = out_dir / "provenance.txt";
        std::ofstream out = open_output(path);
        for (const std::string& p : bundle.provenance) out << p << '\n';
        written.push_back(path);
    }
    return written;
}

}  // namespace w2s
