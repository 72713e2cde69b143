// hier-synth: generate, grow, query, and analyze cost-optimal gate-sequence
// databases from the command line.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hiersynth/experiment.hpp"
#include "hiersynth/gate.hpp"
#include "hiersynth/gate_set.hpp"
#include "hiersynth/proportions.hpp"
#include "hiersynth/sequence_db.hpp"
#include "hiersynth/stats.hpp"
#include "hiersynth/synthesizer.hpp"

#include <json.hpp>

namespace {

using namespace hiersynth;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitIo = 4;

GateSetSpec parse_set_flag(const std::string& flag) {
    if (flag.rfind("set", 0) == 0) {
        return GateSetSpec::set_k(std::stoi(flag.substr(3)));
    }
    if (flag.rfind("L=", 0) == 0 || flag.rfind("l=", 0) == 0) {
        return GateSetSpec::for_max_order(std::stoi(flag.substr(2)));
    }
    throw DomainError("unrecognized gate set '" + flag + "' (use setK or L=<order>)");
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            throw DomainError("empty entry in list: " + text);
        }
        out.push_back(std::stod(item));
    }
    if (out.empty()) {
        throw DomainError("expected a comma-separated list, got: " + text);
    }
    return out;
}

void write_out(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
    } else {
        write_text_file(path, content);
    }
}

std::string proportions_csv(const std::map<int, double>& p) {
    std::string out = "order,proportion\n";
    char buf[64];
    for (const auto& [order, value] : p) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g\n", order, value);
        out += buf;
    }
    return out;
}

std::string proportions_json(const std::map<int, double>& p, const double* log_total) {
    nlohmann::json j;
    for (const auto& [order, value] : p) {
        j["p"][std::to_string(order)] = value;
    }
    if (log_total != nullptr) {
        j["log_total_configs"] = *log_total;
    }
    return j.dump(2) + "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"cost-optimal single-qubit gate sequence toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a sequence database");
    std::string gen_set = "set1";
    std::string gen_model = "catalyst-direct";
    double gen_max_cost = 0.0;
    std::string gen_out;
    std::uint64_t gen_ceiling = kDefaultNodeCeiling;
    gen->add_option("--set", gen_set, "gate set: setK or L=<max order>");
    gen->add_option("--cost-model", gen_model,
                    "catalyst-direct | catalyst-magic | distillation:<mu> | custom:<path>");
    gen->add_option("--max-cost", gen_max_cost, "cost budget")->required();
    gen->add_option("--out", gen_out, "output database path")->required();
    gen->add_option("--node-ceiling", gen_ceiling, "abort past this many nodes");

    // grow
    auto* grow = app.add_subcommand("grow", "extend a database to a higher budget");
    std::string grow_db;
    double grow_max_cost = 0.0;
    std::string grow_out;
    grow->add_option("--db", grow_db, "database path")->required();
    grow->add_option("--max-cost", grow_max_cost, "new cost budget")->required();
    grow->add_option("--out", grow_out, "output path (default: rewrite --db)");

    // synth
    auto* synth = app.add_subcommand("synth", "approximate a target gate");
    std::string synth_db;
    std::string synth_target;
    double synth_eps = 0.0;
    double synth_ceiling = 10000.0;
    std::string synth_emit = "text";
    std::string synth_out;
    synth->add_option("--db", synth_db, "database path")->required();
    synth->add_option("--target", synth_target, "gate literal, e.g. 'H T H' or 'Rz(0.3)'")
        ->required();
    synth->add_option("--epsilon", synth_eps, "trace-distance bound")->required();
    synth->add_option("--grow-ceiling", synth_ceiling, "stop growing past this budget");
    synth->add_option("--emit", synth_emit, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    synth->add_option("--out", synth_out, "write result here instead of stdout");

    // experiment
    auto* exp = app.add_subcommand("experiment", "mean synthesis cost over an epsilon grid");
    std::string exp_set = "set1";
    std::string exp_model = "catalyst-direct";
    std::string exp_eps;
    std::size_t exp_targets = 100;
    std::uint64_t exp_seed = 1;
    double exp_ceiling = 10000.0;
    std::string exp_cache;
    std::string exp_out;
    std::string exp_emit = "csv";
    exp->add_option("--set", exp_set, "gate set: setK or L=<max order>");
    exp->add_option("--cost-model", exp_model, "cost model flag");
    exp->add_option("--epsilons", exp_eps, "comma-separated accuracies")->required();
    exp->add_option("--targets", exp_targets, "number of random targets");
    exp->add_option("--seed", exp_seed, "target pool seed");
    exp->add_option("--grow-ceiling", exp_ceiling, "stop growing past this budget");
    exp->add_option("--db-cache", exp_cache, "load/save the database here");
    exp->add_option("--out", exp_out, "write the table here instead of stdout");
    exp->add_option("--emit", exp_emit, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    // fit
    auto* fit = app.add_subcommand("fit", "least-squares line through a cost table");
    std::string fit_in;
    std::string fit_out;
    std::string fit_emit = "csv";
    fit->add_option("--in", fit_in, "table csv from 'experiment'")->required();
    fit->add_option("--out", fit_out, "write the fit here instead of stdout");
    fit->add_option("--emit", fit_emit, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    // proportions
    auto* prop = app.add_subcommand("proportions", "gate proportions, model or measured");
    prop->require_subcommand(1);
    auto* prop_model = prop->add_subcommand("model", "combinatorial model");
    int pm_order = 5;
    std::string pm_costs;
    std::string pm_sizes = "auto";
    double pm_max_cost = 0.0;
    std::string pm_emit = "csv";
    std::string pm_out;
    prop_model->add_option("--L", pm_order, "highest rotation order");
    prop_model->add_option("--costs", pm_costs, "comma-separated costs for orders 3..L")
        ->required();
    prop_model->add_option("--sizes", pm_sizes, "auto or comma-separated layer sizes");
    prop_model->add_option("--max-cost", pm_max_cost, "sequence budget")->required();
    prop_model->add_option("--emit", pm_emit, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    prop_model->add_option("--out", pm_out, "write here instead of stdout");

    auto* prop_emp = prop->add_subcommand("empirical", "measured from synthesis runs");
    std::string pe_db;
    double pe_eps = 0.0;
    std::size_t pe_targets = 100;
    std::uint64_t pe_seed = 1;
    double pe_ceiling = 10000.0;
    std::string pe_emit = "csv";
    std::string pe_out;
    prop_emp->add_option("--db", pe_db, "database path")->required();
    prop_emp->add_option("--epsilon", pe_eps, "trace-distance bound")->required();
    prop_emp->add_option("--targets", pe_targets, "number of random targets");
    prop_emp->add_option("--seed", pe_seed, "target pool seed");
    prop_emp->add_option("--grow-ceiling", pe_ceiling, "stop growing past this budget");
    prop_emp->add_option("--emit", pe_emit, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    prop_emp->add_option("--out", pe_out, "write here instead of stdout");

    // selftest
    auto* self = app.add_subcommand("selftest", "quick built-in sanity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (gen->parsed()) {
        GateSet set = build_gate_set(parse_set_flag(gen_set));
        CostModel model = CostModel::parse_flag(gen_model, set.spec.max_order);
        SequenceDatabase db = SequenceDatabase::generate(set, model, gen_max_cost, gen_ceiling);
        db.save(gen_out);
        DbStats st = db.stats();
        std::printf("accepted %llu sequences up to cost %.12g -> %s\n",
                    static_cast<unsigned long long>(st.accepted_total), db.watermark(),
                    gen_out.c_str());
        return kExitOk;
    }

    if (grow->parsed()) {
        SequenceDatabase db = SequenceDatabase::load(grow_db);
        db.grow(grow_max_cost);
        const std::string& out = grow_out.empty() ? grow_db : grow_out;
        db.save(out);
        DbStats st = db.stats();
        std::printf("accepted %llu sequences up to cost %.12g -> %s\n",
                    static_cast<unsigned long long>(st.accepted_total), db.watermark(),
                    out.c_str());
        return kExitOk;
    }

    if (synth->parsed()) {
        SequenceDatabase db = SequenceDatabase::load(synth_db);
        GateElement target = parse_gate(synth_target);
        GrowthPolicy policy;
        policy.ceiling = synth_ceiling;
        Synthesizer s(db, policy);
        SynthesisResult r = s.synthesize(target, synth_eps);
        std::string text;
        if (synth_emit == "json") {
            nlohmann::json j;
            j["sequence"] = r.gate_labels;
            j["cost"] = r.cost;
            j["achieved_error"] = r.achieved_error;
            j["epsilon"] = r.epsilon;
            j["node_id"] = r.node_id;
            j["grew_to"] = r.grew_to;
            text = j.dump(2) + "\n";
        } else {
            std::string seq;
            for (const std::string& label : r.gate_labels) {
                if (!seq.empty()) {
                    seq += ' ';
                }
                seq += label;
            }
            char buf[256];
            std::snprintf(buf, sizeof(buf),
                          "sequence: %s\ncost: %.12g\nerror: %.12g\nwatermark: %.12g\n",
                          seq.empty() ? "I" : seq.c_str(), r.cost, r.achieved_error,
                          r.grew_to);
            text = buf;
        }
        write_out(synth_out, text);
        return kExitOk;
    }

    if (exp->parsed()) {
        ExperimentSpec spec;
        spec.set_spec = parse_set_flag(exp_set);
        spec.cost_model = CostModel::parse_flag(exp_model, spec.set_spec.max_order);
        spec.epsilons = parse_double_list(exp_eps);
        spec.target_count = exp_targets;
        spec.seed = exp_seed;
        spec.growth_ceiling = exp_ceiling;

        GateSet set = build_gate_set(spec.set_spec);
        SequenceDatabase db = [&]() {
            if (!exp_cache.empty()) {
                std::ifstream probe(exp_cache);
                if (probe.good()) {
                    return SequenceDatabase::load(exp_cache);
                }
            }
            return SequenceDatabase(set, spec.cost_model);
        }();
        ExperimentTable table = run_experiment(spec, db);
        if (!exp_cache.empty()) {
            db.save(exp_cache);
        }
        std::string text;
        if (exp_emit == "json") {
            text = table_to_json(table);
        } else {
            std::ostringstream out;
            emit_table_csv(table, out);
            text = out.str();
        }
        write_out(exp_out, text);
        return kExitOk;
    }

    if (fit->parsed()) {
        std::ifstream in(fit_in);
        if (!in) {
            throw IoError("cannot open for reading: " + fit_in);
        }
        ExperimentTable table = parse_table_csv(in);
        std::vector<FitPoint> points;
        points.reserve(table.rows.size());
        for (const ExperimentRow& row : table.rows) {
            points.push_back({std::log10(1.0 / row.epsilon), row.mean_cost});
        }
        FitResult result = ols_fit(points);
        std::string text;
        if (fit_emit == "json") {
            text = fit_to_json(result);
        } else {
            std::ostringstream out;
            emit_fit_csv(result, out);
            text = out.str();
        }
        write_out(fit_out, text);
        return kExitOk;
    }

    if (prop_model->parsed()) {
        ProportionParams params;
        params.max_order = pm_order;
        params.costs = parse_double_list(pm_costs);
        if (pm_sizes != "auto") {
            for (double s : parse_double_list(pm_sizes)) {
                params.set_sizes.push_back(static_cast<std::uint64_t>(s));
            }
        }
        params.max_cost = pm_max_cost;
        ProportionResult result = proportions(params);
        std::string text = pm_emit == "json"
                               ? proportions_json(result.p, &result.log_total_configs)
                               : proportions_csv(result.p);
        write_out(pm_out, text);
        return kExitOk;
    }

    if (prop_emp->parsed()) {
        SequenceDatabase db = SequenceDatabase::load(pe_db);
        ExperimentSpec spec;
        spec.epsilons = {pe_eps};
        spec.target_count = pe_targets;
        spec.seed = pe_seed;
        std::vector<GateElement> targets = experiment_targets(spec);
        GrowthPolicy policy;
        policy.ceiling = pe_ceiling;
        Synthesizer s(db, policy);
        std::vector<SynthesisResult> results = s.synthesize_batch(targets, pe_eps);
        std::map<int, double> p = empirical_proportions(db.gate_set(), results);
        std::string text = pe_emit == "json" ? proportions_json(p, nullptr)
                                             : proportions_csv(p);
        write_out(pe_out, text);
        return kExitOk;
    }

    if (self->parsed()) {
        int failures = 0;
        auto check = [&](const char* name, bool ok) {
            std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
            if (!ok) {
                ++failures;
            }
        };
        check("compose(H, H) is the identity",
              trace_distance(compose(gate_h(), gate_h()), identity_gate()) < 1e-12);
        check("clifford group has 24 elements", clifford_group().size() == 24);
        GateSet s1 = build_gate_set(GateSetSpec::set_k(1));
        check("set1 has 26 gates", s1.size() == 26);
        SequenceDatabase db = SequenceDatabase::generate(s1, CostModel::catalyst_direct(3), 2.0);
        check("set1 reaches 240 sequences at cost 2", db.size() == 240);
        Synthesizer s(db, GrowthPolicy{0.0, 6.0});
        SynthesisResult r = s.synthesize(gate_t(), 1e-9);
        check("T synthesizes to itself at cost 1", r.cost == 1.0 && r.achieved_error < 1e-12);
        ProportionParams pp;
        pp.max_order = 4;
        pp.costs = {1.0, 3.0};
        pp.max_cost = 3.0;
        ProportionResult pr = proportions(pp);
        check("proportion model matches hand-computed 34/38",
              std::abs(pr.p[3] - 34.0 / 38.0) < 1e-12);
        FitResult f = ols_fit({{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}});
        check("exact line fits with zero interval", f.slope == 2.0 && f.slope_ci == 0.0);
        return failures == 0 ? kExitOk : 1;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ResourceLimitError& e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return kExitResource;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return kExitIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
