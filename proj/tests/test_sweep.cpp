#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "dkposc/sweep.hpp"

using namespace dkposc;
using Catch::Approx;

TEST_CASE("preset parameter blocks match the published unit-value assignments") {
    const SweepSpec fig1 = preset_spec("fig1");
    CHECK(fig1.swept == SweptParam::alpha);
    CHECK(fig1.hi == 1.0);
    CHECK(fig1.base.a == 1.0);
    CHECK(fig1.base.m == 1);
    CHECK(fig1.base.k == 1.0);
    CHECK(fig1.base.M == 1.0);
    CHECK(fig1.base.omega == 1.0);
    CHECK(fig1.base.delta1 == 1.0);
    CHECK(fig1.base.delta2 == 1.0);
    CHECK(fig1.levels == std::vector<int>{0, 1, 2, 3});
    CHECK(fig1.steps >= 25);

    const SweepSpec fig2 = preset_spec("fig2");
    CHECK(fig2.swept == SweptParam::omega);
    CHECK(fig2.base.alpha == 1.0);
    CHECK(fig2.base.a == 1.0);

    const SweepSpec fig3 = preset_spec("fig3");
    CHECK(fig3.swept == SweptParam::a);
    CHECK(fig3.lo == 0.0);
    CHECK(fig3.hi == 1.0);
    CHECK(fig3.base.omega == 1.0);
    CHECK(fig3.base.alpha == 1.0);

    const SweepSpec fig4 = preset_spec("fig4");
    CHECK(fig4.swept == SweptParam::delta1);
    CHECK(fig4.levels == std::vector<int>{1});
    CHECK(fig4.base.delta2 == 1.0);
    CHECK(fig4.base.a == 1.0);

    const SweepSpec fig5 = preset_spec("fig5");
    CHECK(fig5.swept == SweptParam::delta2);
    CHECK(fig5.base.delta1 == 1.0);
    CHECK(fig5.base.omega == 1.0);
    CHECK(fig5.levels == std::vector<int>{0, 1, 2, 3});

    CHECK_THROWS_AS(preset_spec("fig6"), SpecError);
}

TEST_CASE("spec validation catches malformed sweeps") {
    SweepSpec spec = preset_spec("fig3");
    spec.lo = 0.9;
    spec.hi = 0.2;
    CHECK_THROWS_AS(validate_spec(spec), SpecError);

    spec = preset_spec("fig3");
    spec.steps = 1;
    CHECK_THROWS_AS(validate_spec(spec), SpecError);

    spec = preset_spec("fig3");
    spec.levels.clear();
    CHECK_THROWS_AS(validate_spec(spec), SpecError);

    spec = preset_spec("fig3");
    spec.levels = {0, -1};
    CHECK_THROWS_AS(validate_spec(spec), SpecError);

    spec = preset_spec("fig1");
    spec.hi = 1.2;  // alpha must stay within (0, 1]
    CHECK_THROWS_AS(validate_spec(spec), SpecError);

    spec = preset_spec("fig4");
    spec.lo = 0.0;  // delta1 = 0 disables the spectrum
    CHECK_THROWS_AS(validate_spec(spec), SpecError);

    // levels are sorted and deduplicated
    spec = preset_spec("fig3");
    spec.levels = {2, 0, 2, 1};
    CHECK(validate_spec(spec).levels == std::vector<int>{0, 1, 2});
}

TEST_CASE("sweep grid hits both endpoints exactly") {
    SweepSpec spec = preset_spec("fig1");
    spec.steps = 7;
    CHECK(sweep_value(spec, 0) == 0.2);
    CHECK(sweep_value(spec, 6) == 1.0);
}

TEST_CASE("small sweep solves every point in order") {
    SweepSpec spec = preset_spec("fig3");
    spec.steps = 5;
    spec.levels = {0, 1};
    const SweepTable table = run_sweep(spec);
    REQUIRE(table.rows.size() == 10);
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        const SweepRow& r0 = table.rows[i];
        const SweepRow& r1 = table.rows[i + 1];
        CHECK((r0.value < r1.value || (r0.value == r1.value && r0.n < r1.n)));
    }
    // energies increase with the spin parameter for each level
    for (int n = 0; n < 2; ++n) {
        double prev = -1e300;
        for (const SweepRow& row : table.rows) {
            if (row.n != n) continue;
            REQUIRE(row.error.empty());
            CHECK(std::isfinite(row.energy));
            CHECK(row.energy > prev);
            prev = row.energy;
        }
    }
}

TEST_CASE("worker pool width does not change the output") {
    SweepSpec spec = preset_spec("fig1");
    spec.steps = 6;
    spec.levels = {0, 1, 2};
    const std::string serial = to_csv(run_sweep(spec, 1));
    const std::string parallel = to_csv(run_sweep(spec, 4));
    CHECK(serial == parallel);
}

TEST_CASE("reruns are byte-identical") {
    SweepSpec spec = preset_spec("fig5");
    spec.steps = 4;
    spec.levels = {0, 1};
    CHECK(to_csv(run_sweep(spec)) == to_csv(run_sweep(spec)));
}

TEST_CASE("failed points become explicit gap rows") {
    SweepSpec spec = preset_spec("fig2");
    spec.steps = 3;
    spec.levels = {0};
    SolveOptions opts;
    opts.e_max = 0.05;  // far below every root: every point fails
    const SweepTable table = run_sweep(spec, 1, opts);
    REQUIRE(table.rows.size() == 3);
    for (const SweepRow& row : table.rows) {
        CHECK(row.error == "NoRootError");
        CHECK(std::isnan(row.energy));
    }
    const std::string csv = to_csv(table);
    CHECK(csv.find("nan,NoRootError") != std::string::npos);
    CHECK(read_csv_string(csv) == table);
}

TEST_CASE("CSV round trip reproduces the table exactly") {
    SweepSpec spec = preset_spec("fig3");
    spec.steps = 4;
    spec.levels = {0, 2};
    const SweepTable table = run_sweep(spec);
    const std::string csv = to_csv(table);

    CHECK(csv.find("param,value,n,E,residual\n") != std::string::npos);
    CHECK(csv.rfind("# dkposc", 0) == 0);

    const SweepTable parsed = read_csv_string(csv);
    CHECK(parsed == table);
    CHECK(to_csv(parsed) == csv);
}

TEST_CASE("CSV parser rejects corrupted input") {
    SweepSpec spec = preset_spec("fig3");
    spec.steps = 3;
    spec.levels = {0};
    std::string csv = to_csv(run_sweep(spec));
    CHECK_THROWS_AS(read_csv_string("not,a,table\n"), SpecError);
    const std::string no_header = csv.substr(0, csv.find("param,"));
    CHECK_THROWS_AS(read_csv_string(no_header), SpecError);
    std::string bad = csv;
    bad.replace(bad.find("param,value"), 5, "parax");
    CHECK_THROWS_AS(read_csv_string(bad), SpecError);
}
