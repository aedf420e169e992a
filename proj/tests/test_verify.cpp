#include <doctest.h>

#include <sstream>

#include "wpl/verify.hpp"

using wpl::ExactScalar;

TEST_SUITE("verify") {
    TEST_CASE("default sweep passes") {
        const auto report = wpl::run_verification({});
        CHECK(report.passed());
        for (const char* name : {"cross_moment.closed_vs_oracle.uniform", "cross_moment.closed_vs_oracle.geometric",
                                 "moments.variance", "moments.mu3_star", "polyomino.perimeter"}) {
            CAPTURE(name);
            const auto* id = report.find(name);
            REQUIRE(id != nullptr);
            CHECK(id->passed());
            CHECK(!id->instances.empty());
        }
        CHECK(report.find("cross_moment.closed_vs_oracle.uniform")->max_deviation() == 0.0);
        CHECK(report.find("cross_moment.closed_vs_oracle.geometric")->max_deviation() <= 1e-10);
        // k = 1..12, n = 4..40
        CHECK(report.find("moments.variance")->instances.size() == 17 * 37);
    }

    TEST_CASE("mu3* is zero at k = 2") {
        wpl::VerifyOptions opt;
        opt.k_max = 2;
        opt.p_list.clear();
        opt.n_max = 4;
        opt.include_perimeter = false;
        const auto report = wpl::run_verification(opt);
        CHECK(report.passed());
        bool seen = false;
        for (const auto& rec : report.find("moments.mu3_star")->instances) {
            if (rec.label.rfind("uniform(k=2)", 0) == 0) {
                CHECK(rec.value == "0");
                seen = true;
            }
        }
        CHECK(seen);
    }

    TEST_CASE("a corrupted closed form is caught and named") {
        wpl::VerifyOptions opt;
        opt.k_max = 6;
        opt.n_max = 6;
        opt.closed_form = [](const wpl::ModelSpec& m, const wpl::MultiIndex& idx, bool centered) {
            ExactScalar v = wpl::cross_moment_closed(m, idx, centered);
            if (m.is_uniform() && m.k() == 5 && idx == wpl::MultiIndex(0, 1, 1, 0) && !centered) {
                v += ExactScalar(1, 1000);
            }
            return v;
        };
        const auto report = wpl::run_verification(opt);
        CHECK_FALSE(report.passed());
        const auto* id = report.find("cross_moment.closed_vs_oracle.uniform");
        REQUIRE(id != nullptr);
        CHECK_FALSE(id->passed());
        REQUIRE(id->first_failure() != nullptr);
        CHECK(id->first_failure()->label == "uniform(k=5) T_{0,1,1,0}");
        std::ostringstream out;
        wpl::print_report(out, report);
        CHECK(out.str().find("FAIL  cross_moment.closed_vs_oracle.uniform") != std::string::npos);
        CHECK(out.str().find("uniform(k=5) T_{0,1,1,0}") != std::string::npos);
    }

    TEST_CASE("a corrupted geometric closed form beyond the tolerance is caught") {
        wpl::VerifyOptions opt;
        opt.k_max = 1;
        opt.p_list = {ExactScalar(1, 4)};
        opt.n_max = 4;
        opt.include_perimeter = false;
        opt.closed_form = [](const wpl::ModelSpec& m, const wpl::MultiIndex& idx, bool centered) {
            ExactScalar v = wpl::cross_moment_closed(m, idx, centered);
            return m.is_geometric() ? ExactScalar(v * ExactScalar(1000000001, 1000000000)) : v;
        };
        const auto report = wpl::run_verification(opt);
        CHECK_FALSE(report.find("cross_moment.closed_vs_oracle.geometric")->passed());
    }

    TEST_CASE("option validation") {
        wpl::VerifyOptions opt;
        opt.k_max = 0;
        CHECK_THROWS_AS(wpl::run_verification(opt), std::invalid_argument);
        opt.k_max = 3;
        opt.n_max = 3;
        CHECK_THROWS_AS(wpl::run_verification(opt), std::invalid_argument);
    }
}
