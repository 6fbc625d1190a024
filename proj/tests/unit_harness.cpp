#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ncmart/harness.hpp"

using namespace ncmart;
using nlohmann::json;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.dim = 8;
    c.depth = 3;
    c.trials = 4;
    c.seed = 12345;
    return c;
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("round trip") {
        ExperimentConfig c = small_config();
        ExperimentConfig d = ExperimentConfig::from_json(c.to_json());
        CHECK(d.dim == c.dim);
        CHECK(d.seed == c.seed);
        CHECK(d.p_grid == c.p_grid);
    }
    SUBCASE("unknown keys rejected") {
        json j{{"dimension", 8}, {"bogus", 1}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
    }
    SUBCASE("invalid values rejected") {
        CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"alpha", 2.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"kind", "nope"}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"p_grid", {0.5}}}),
                        std::invalid_argument);
    }
}

TEST_CASE("operator JSON round trip") {
    TracialContext ctx{3};
    Rng rng(9);
    Operator x = ginibre(ctx, rng);
    Operator y = operator_from_json(operator_to_json(x));
    CHECK((x - y).max_abs() == 0.0);
}

TEST_CASE("verification suite on a small ensemble") {
    ExperimentReport rep = run_verification_suite(small_config());
    CHECK(rep.all_pass());
    CHECK(!rep.rows.empty());
    // summary equals the fold of the rows
    auto s = rep.summarize();
    for (const auto& [name, c] : s) {
        CHECK(c.max_ratio == rep.max_ratio(name));
        CHECK(c.total >= 1);
    }
    // the suite exercises every named family of checks
    for (const char* name :
         {"lemma11", "lemma12_ii", "lemma12_v", "thm31_i", "thm31_iii", "thm31_iv",
          "lemma34", "prop13", "prop32_d", "prop33_b", "replay_prop_a",
          "replay_prop_d", "replay_supermartingale"})
        CHECK(s.count(name) == 1);
}

TEST_CASE("zero trials gives an empty but valid report") {
    ExperimentConfig c = small_config();
    c.trials = 0;
    ExperimentReport rep = run_verification_suite(c);
    CHECK(rep.rows.empty());
    CHECK(rep.to_csv() == "trial,check,lhs,rhs,ratio,pass\n");
    CHECK(rep.all_pass());
}

TEST_CASE("determinism of the CSV body") {
    ExperimentConfig c = small_config();
    std::string a = run_verification_suite(c).to_csv();
    std::string b = run_verification_suite(c).to_csv();
    CHECK(a == b);
}

TEST_CASE("bg sweep") {
    ExperimentConfig c = small_config();
    c.trials = 3;
    ExperimentReport rep = bg_constant_sweep(c);
    CHECK(rep.all_pass());
    // alpha_2 = 1 to high accuracy
    for (const auto& r : rep.rows)
        if (r.check == "bg_p=2")
            CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("llogl report") {
    ExperimentConfig c = small_config();
    c.trials = 3;
    ExperimentReport rep = llogl_check(c);
    CHECK(rep.rows.size() == 3);
    for (const auto& r : rep.rows) {
        CHECK(r.check == "llogl");
        CHECK(r.rhs >= 1.0);  // 1 + LlogL of a positive normalized final term
        CHECK(std::isfinite(r.ratio));
    }
}

TEST_CASE("calibration baseline round trip") {
    CalibrationBaseline b;
    b.seed = 42;
    b.khat = 1.5;
    b.llogl_ratio = 0.8;
    b.alpha_products["1.05"] = 0.1;
    CalibrationBaseline c = CalibrationBaseline::from_json(b.to_json());
    CHECK(c.seed == b.seed);
    CHECK(c.khat == b.khat);
    CHECK(c.alpha_products == b.alpha_products);
}
