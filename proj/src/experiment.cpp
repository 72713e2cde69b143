#include "hiersynth/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "hiersynth/crc64.hpp"

namespace hiersynth {

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void validate(const ExperimentSpec& spec) {
    if (spec.epsilons.empty()) {
        throw DomainError("experiment needs at least one epsilon");
    }
    for (double e : spec.epsilons) {
        if (!(e > 0.0)) {
            throw DomainError("epsilons must be strictly positive");
        }
    }
    if (spec.forced_targets.empty() && spec.target_count < 1) {
        throw DomainError("target count must be >= 1");
    }
}

ExperimentRow summarize(double epsilon, const std::vector<SynthesisResult>& results) {
    ExperimentRow row;
    row.epsilon = epsilon;
    row.n = results.size();
    double mean = 0.0;
    for (const SynthesisResult& r : results) {
        mean += r.cost;
    }
    mean /= static_cast<double>(results.size());
    row.mean_cost = mean;
    if (results.size() > 1) {
        double ss = 0.0;
        for (const SynthesisResult& r : results) {
            ss += (r.cost - mean) * (r.cost - mean);
        }
        double var = ss / static_cast<double>(results.size() - 1);
        row.stderr_cost = std::sqrt(var / static_cast<double>(results.size()));
    }
    return row;
}

double parse_double_field(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) {
        throw FormatError("malformed numeric field: " + text);
    }
    return v;
}

std::uint64_t parse_u64_field(const std::string& text, int base = 10) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &used, base);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) {
        throw FormatError("malformed integer field: " + text);
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::vector<GateElement> experiment_targets(const ExperimentSpec& spec) {
    validate(spec);
    if (!spec.forced_targets.empty()) {
        return spec.forced_targets;
    }
    Rng rng(spec.seed);
    std::vector<GateElement> targets;
    targets.reserve(spec.target_count);
    for (std::size_t i = 0; i < spec.target_count; ++i) {
        targets.push_back(haar_random_gate(rng));
    }
    return targets;
}

std::uint64_t hash_targets(const std::vector<GateElement>& targets) {
    Crc64 crc;
    for (const GateElement& g : targets) {
        crc.update_value(g.w);
        crc.update_value(g.x);
        crc.update_value(g.y);
        crc.update_value(g.z);
    }
    return crc.value();
}

ExperimentTable run_experiment(const ExperimentSpec& spec, SequenceDatabase& db) {
    validate(spec);
    if (db.gate_set().fingerprint != build_gate_set(spec.set_spec).fingerprint ||
        !(db.cost_model() == spec.cost_model)) {
        throw DomainError("database gate set or cost model does not match the experiment");
    }
    std::vector<GateElement> targets = experiment_targets(spec);

    // coarsest accuracy first, so every step reuses the previous watermark
    std::vector<std::size_t> order(spec.epsilons.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return spec.epsilons[a] > spec.epsilons[b];
    });

    GrowthPolicy policy;
    policy.increment = spec.growth_increment;
    policy.ceiling = spec.growth_ceiling;
    Synthesizer synth(db, policy);

    ExperimentTable table;
    table.target_hash = hash_targets(targets);
    std::vector<std::optional<ExperimentRow>> rows(spec.epsilons.size());
    for (std::size_t idx : order) {
        double epsilon = spec.epsilons[idx];
        try {
            std::vector<SynthesisResult> results = synth.synthesize_batch(targets, epsilon);
            rows[idx] = summarize(epsilon, results);
        } catch (const ResourceLimitError& err) {
            for (const auto& row : rows) {
                if (row) {
                    table.rows.push_back(*row);
                }
            }
            table.final_watermark = db.watermark();
            table.partial = true;
            throw ExperimentAbort(err.what(), std::move(table));
        }
    }
    for (const auto& row : rows) {
        table.rows.push_back(*row);
    }
    table.final_watermark = db.watermark();
    return table;
}

ExperimentTable run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    SequenceDatabase db(build_gate_set(spec.set_spec), spec.cost_model);
    return run_experiment(spec, db);
}

void emit_table_csv(const ExperimentTable& table, std::ostream& out) {
    char hashbuf[32];
    std::snprintf(hashbuf, sizeof(hashbuf), "%016llx",
                  static_cast<unsigned long long>(table.target_hash));
    out << "# target_hash=" << hashbuf << "\n";
    out << "# final_watermark=" << fmt12(table.final_watermark) << "\n";
    out << "# partial=" << (table.partial ? 1 : 0) << "\n";
    out << "epsilon,mean_cost,stderr_cost,n\n";
    for (const ExperimentRow& row : table.rows) {
        out << fmt12(row.epsilon) << ',' << fmt12(row.mean_cost) << ','
            << fmt12(row.stderr_cost) << ',' << row.n << "\n";
    }
}

ExperimentTable parse_table_csv(std::istream& in) {
    ExperimentTable table;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::size_t eq = line.find('=');
            if (eq == std::string::npos) {
                throw FormatError("metadata line without '=': " + line);
            }
            std::string key = line.substr(2, eq - 2);
            std::string value = line.substr(eq + 1);
            if (key == "target_hash") {
                table.target_hash = parse_u64_field(value, 16);
            } else if (key == "final_watermark") {
                table.final_watermark = parse_double_field(value);
            } else if (key == "partial") {
                table.partial = parse_u64_field(value) != 0;
            } else {
                throw FormatError("unknown metadata key: " + key);
            }
            continue;
        }
        if (!saw_header) {
            if (line != "epsilon,mean_cost,stderr_cost,n") {
                throw FormatError("unexpected table header: " + line);
            }
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw FormatError("expected 4 fields per row: " + line);
        }
        ExperimentRow row;
        row.epsilon = parse_double_field(fields[0]);
        row.mean_cost = parse_double_field(fields[1]);
        row.stderr_cost = parse_double_field(fields[2]);
        row.n = parse_u64_field(fields[3]);
        table.rows.push_back(row);
    }
    if (!saw_header) {
        throw FormatError("missing table header");
    }
    return table;
}

std::string table_to_json(const ExperimentTable& table) {
    nlohmann::json j;
    char hashbuf[32];
    std::snprintf(hashbuf, sizeof(hashbuf), "%016llx",
                  static_cast<unsigned long long>(table.target_hash));
    j["target_hash"] = hashbuf;
    j["final_watermark"] = table.final_watermark;
    j["partial"] = table.partial;
    j["rows"] = nlohmann::json::array();
    for (const ExperimentRow& row : table.rows) {
        j["rows"].push_back({{"epsilon", row.epsilon},
                             {"mean_cost", row.mean_cost},
                             {"stderr_cost", row.stderr_cost},
                             {"n", row.n}});
    }
    return j.dump(2) + "\n";
}

ExperimentTable table_from_json(const std::string& text) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        ExperimentTable table;
        table.target_hash = parse_u64_field(j.at("target_hash").get<std::string>(), 16);
        table.final_watermark = j.at("final_watermark").get<double>();
        table.partial = j.at("partial").get<bool>();
        for (const nlohmann::json& row : j.at("rows")) {
            ExperimentRow r;
            r.epsilon = row.at("epsilon").get<double>();
            r.mean_cost = row.at("mean_cost").get<double>();
            r.stderr_cost = row.at("stderr_cost").get<double>();
            r.n = row.at("n").get<std::uint64_t>();
            table.rows.push_back(r);
        }
        return table;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad experiment json: ") + e.what());
    }
}

void emit_fit_csv(const FitResult& fit, std::ostream& out) {
    out << "slope,intercept,slope_ci,intercept_ci,residual_stddev,n\n";
    out << fmt12(fit.slope) << ',' << fmt12(fit.intercept) << ',' << fmt12(fit.slope_ci)
        << ',' << fmt12(fit.intercept_ci) << ',' << fmt12(fit.residual_stddev) << ','
        << fit.n << "\n";
}

FitResult parse_fit_csv(std::istream& in) {
    std::string header;
    std::string line;
    if (!std::getline(in, header) || !std::getline(in, line)) {
        throw FormatError("fit csv needs a header and one row");
    }
    if (!header.empty() && header.back() == '\r') {
        header.pop_back();
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (header != "slope,intercept,slope_ci,intercept_ci,residual_stddev,n") {
        throw FormatError("unexpected fit header: " + header);
    }
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 6) {
        throw FormatError("expected 6 fit fields: " + line);
    }
    FitResult fit;
    fit.slope = parse_double_field(fields[0]);
    fit.intercept = parse_double_field(fields[1]);
    fit.slope_ci = parse_double_field(fields[2]);
    fit.intercept_ci = parse_double_field(fields[3]);
    fit.residual_stddev = parse_double_field(fields[4]);
    fit.n = parse_u64_field(fields[5]);
    return fit;
}

std::string fit_to_json(const FitResult& fit) {
    nlohmann::json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["slope_ci"] = fit.slope_ci;
    j["intercept_ci"] = fit.intercept_ci;
    j["residual_stddev"] = fit.residual_stddev;
    j["n"] = fit.n;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << content;
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace hiersynth
