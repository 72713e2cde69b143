#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "hiersynth/errors.hpp"
#include "hiersynth/experiment.hpp"
#include "hiersynth/gate.hpp"

using namespace hiersynth;

namespace {

ExperimentSpec quick_spec() {
    ExperimentSpec spec;
    spec.set_spec = GateSetSpec::set_k(2);
    spec.cost_model = CostModel::catalyst_magic(4);
    spec.epsilons = {0.1, 0.05, 0.02};
    spec.target_count = 40;
    spec.seed = 7;
    spec.growth_ceiling = 60.0;
    return spec;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("target pools are seeded and hashed") {
    ExperimentSpec spec = quick_spec();
    auto a = experiment_targets(spec);
    auto b = experiment_targets(spec);
    REQUIRE(a.size() == spec.target_count);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].w == b[i].w);
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].z == b[i].z);
    }
    CHECK(hash_targets(a) == hash_targets(b));

    spec.seed = 8;
    auto c = experiment_targets(spec);
    CHECK(hash_targets(a) != hash_targets(c));

    spec.forced_targets = {gate_h(), gate_s()};
    auto forced = experiment_targets(spec);
    REQUIRE(forced.size() == 2);
    CHECK(trace_distance(forced[0], gate_h()) < 1e-7);
}

TEST_CASE("forced in-library targets cost nothing") {
    ExperimentSpec spec = quick_spec();
    spec.epsilons = {1e-6};
    spec.forced_targets = {identity_gate(), gate_h(), gate_s(), gate_z()};
    auto table = run_experiment(spec);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].epsilon == 1e-6);
    CHECK(table.rows[0].mean_cost == 0.0);
    CHECK(table.rows[0].stderr_cost == 0.0);
    CHECK(table.rows[0].n == 4);
    CHECK(!table.partial);
}

TEST_CASE("same seed reproduces the table exactly") {
    ExperimentSpec spec = quick_spec();
    auto t1 = run_experiment(spec);
    auto t2 = run_experiment(spec);
    REQUIRE(t1.rows.size() == t2.rows.size());
    CHECK(t1.target_hash == t2.target_hash);
    CHECK(t1.final_watermark == t2.final_watermark);
    for (std::size_t i = 0; i < t1.rows.size(); ++i) {
        CHECK(t1.rows[i].epsilon == t2.rows[i].epsilon);
        CHECK(t1.rows[i].mean_cost == t2.rows[i].mean_cost);
        CHECK(t1.rows[i].stderr_cost == t2.rows[i].stderr_cost);
        CHECK(t1.rows[i].n == t2.rows[i].n);
    }
}

TEST_CASE("rows keep input order and tighten monotonically") {
    ExperimentSpec spec = quick_spec();
    spec.epsilons = {0.02, 0.1, 0.05};  // deliberately shuffled
    auto table = run_experiment(spec);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].epsilon == 0.02);
    CHECK(table.rows[1].epsilon == 0.1);
    CHECK(table.rows[2].epsilon == 0.05);
    // tighter accuracy can never be cheaper on the shared pool
    CHECK(table.rows[0].mean_cost >= table.rows[2].mean_cost);
    CHECK(table.rows[2].mean_cost >= table.rows[1].mean_cost);
    for (const auto& row : table.rows) {
        CHECK(row.n == spec.target_count);
        CHECK(row.stderr_cost >= 0.0);
    }
    CHECK(table.final_watermark >= table.rows[0].mean_cost);
}

TEST_CASE("a reused database gives the same table as a fresh one") {
    ExperimentSpec spec = quick_spec();
    auto fresh = run_experiment(spec);

    auto db = SequenceDatabase::generate(build_gate_set(spec.set_spec),
                                         spec.cost_model, 3.0);
    auto reused = run_experiment(spec, db);
    REQUIRE(reused.rows.size() == fresh.rows.size());
    for (std::size_t i = 0; i < fresh.rows.size(); ++i) {
        CHECK(reused.rows[i].mean_cost == fresh.rows[i].mean_cost);
        CHECK(reused.rows[i].stderr_cost == fresh.rows[i].stderr_cost);
    }
    CHECK(db.watermark() == fresh.final_watermark);
}

TEST_CASE("growth ceiling aborts with the finished rows attached") {
    ExperimentSpec spec = quick_spec();
    spec.epsilons = {0.1, 1e-7};  // the second accuracy is unreachable
    spec.growth_ceiling = 6.0;
    try {
        run_experiment(spec);
        FAIL("expected ExperimentAbort");
    } catch (const ExperimentAbort& abort) {
        CHECK(abort.partial.partial);
        REQUIRE(abort.partial.rows.size() == 1);
        CHECK(abort.partial.rows[0].epsilon == 0.1);
        CHECK(abort.partial.rows[0].n == spec.target_count);
        CHECK(abort.partial.final_watermark == 6.0);
    }
}

TEST_CASE("csv round trip is byte stable") {
    ExperimentSpec spec = quick_spec();
    spec.epsilons = {0.1, 0.03};
    auto table = run_experiment(spec);

    std::ostringstream first;
    emit_table_csv(table, first);
    std::istringstream back(first.str());
    auto parsed = parse_table_csv(back);
    std::ostringstream second;
    emit_table_csv(parsed, second);
    CHECK(first.str() == second.str());

    CHECK(parsed.target_hash == table.target_hash);
    CHECK(parsed.partial == table.partial);
    REQUIRE(parsed.rows.size() == table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(parsed.rows[i].epsilon == doctest::Approx(table.rows[i].epsilon).epsilon(1e-11));
        CHECK(parsed.rows[i].mean_cost ==
              doctest::Approx(table.rows[i].mean_cost).epsilon(1e-11));
        CHECK(parsed.rows[i].n == table.rows[i].n);
    }
}

TEST_CASE("json round trip preserves the table") {
    ExperimentSpec spec = quick_spec();
    spec.epsilons = {0.08, 0.04};
    auto table = run_experiment(spec);
    auto parsed = table_from_json(table_to_json(table));
    CHECK(table_to_json(parsed) == table_to_json(table));
    CHECK(parsed.target_hash == table.target_hash);
    CHECK(parsed.final_watermark == table.final_watermark);
    REQUIRE(parsed.rows.size() == table.rows.size());
}

TEST_CASE("fit serialization round trips") {
    FitResult fit;
    fit.slope = -3.25;
    fit.intercept = 12.5;
    fit.slope_ci = 0.125;
    fit.intercept_ci = 0.5;
    fit.residual_stddev = 0.75;
    fit.n = 9;

    std::ostringstream out;
    emit_fit_csv(fit, out);
    std::istringstream in(out.str());
    auto parsed = parse_fit_csv(in);
    CHECK(parsed.slope == fit.slope);
    CHECK(parsed.intercept == fit.intercept);
    CHECK(parsed.slope_ci == fit.slope_ci);
    CHECK(parsed.intercept_ci == fit.intercept_ci);
    CHECK(parsed.residual_stddev == fit.residual_stddev);
    CHECK(parsed.n == fit.n);

    CHECK(fit_to_json(fit).find("\"slope\"") != std::string::npos);
}

TEST_CASE("malformed tables are rejected") {
    auto reject = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_table_csv(in), FormatError);
    };
    reject("");
    reject("epsilon,mean_cost\n0.1,2.0\n");
    reject("# target_hash=zzzz\nepsilon,mean_cost,stderr_cost,n\n");
    reject("epsilon,mean_cost,stderr_cost,n\n0.1,not_a_number,0.0,5\n");
    CHECK_THROWS_AS(table_from_json("{\"rows\": 12}"), FormatError);
    CHECK_THROWS_AS(table_from_json("not json at all"), FormatError);

    std::istringstream fit_in("slope\n1.0\n");
    CHECK_THROWS_AS(parse_fit_csv(fit_in), FormatError);
}

TEST_CASE("text files write and read back") {
    std::string path = "/tmp/hiersynth_test_textfile.csv";
    write_text_file(path, "hello\nworld\n");
    CHECK(read_text_file(path) == "hello\nworld\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file(path), IoError);
    CHECK_THROWS_AS(write_text_file("/no/such/dir/file.csv", "x"), IoError);
}

TEST_CASE("experiment specs are validated") {
    ExperimentSpec spec = quick_spec();
    spec.epsilons = {};
    CHECK_THROWS_AS(run_experiment(spec), DomainError);

    spec = quick_spec();
    spec.target_count = 0;
    CHECK_THROWS_AS(run_experiment(spec), DomainError);

    spec = quick_spec();
    spec.epsilons = {0.1, -0.2};
    CHECK_THROWS_AS(run_experiment(spec), DomainError);

    // database built for a different gate set than the experiment asks for
    spec = quick_spec();
    auto other = SequenceDatabase::generate(build_gate_set(GateSetSpec::set_k(1)),
                                            CostModel::catalyst_direct(3), 1.0);
    CHECK_THROWS_AS(run_experiment(spec, other), DomainError);
}

}  // TEST_SUITE
