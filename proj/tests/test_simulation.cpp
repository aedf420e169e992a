#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wpl/moment_formulas.hpp"
#include "wpl/simulation.hpp"

using wpl::ExactScalar;
using wpl::ModelSpec;
using wpl::SimulationConfig;

namespace {

SimulationConfig small(std::int64_t m, std::int64_t n, bool paths = false) {
    SimulationConfig c;
    c.gaps = m;
    c.trajectories = n;
    c.seed = 42;
    c.record_full_paths = paths;
    return c;
}

}  // namespace

TEST_SUITE("simulation") {
    TEST_CASE("one gap: the endpoint is the single gap") {
        auto c = small(1, 1, true);
        for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
            c.seed = seed;
            const auto e = wpl::simulate(c);
            wpl::CounterStream s(seed, 0);
            const auto x0 = wpl::sample_letter(c.model, s);
            const auto x1 = wpl::sample_letter(c.model, s);
            CHECK(e.endpoints[0] == std::abs(x1 - x0));
            CHECK(e.path(0)[0] == 0);
            CHECK(e.path(0)[1] == e.endpoints[0]);
        }
    }

    TEST_CASE("paths are partial sums of gaps of the same word") {
        auto c = small(20, 5, true);
        const auto e = wpl::simulate(c);
        for (std::size_t l = 0; l < 5; ++l) {
            wpl::CounterStream s(c.seed, l);
            std::int64_t prev = wpl::sample_letter(c.model, s);
            std::int64_t q = 0;
            for (std::int64_t j = 1; j <= 20; ++j) {
                const auto x = wpl::sample_letter(c.model, s);
                q += std::abs(x - prev);
                prev = x;
                CHECK(e.path(l)[static_cast<std::size_t>(j)] == q);
            }
            CHECK(e.endpoints[l] == q);
            const double z = (static_cast<double>(q) - 20 * 35.0 / 18) / (std::sqrt(259.0 / 108) * std::sqrt(20.0));
            CHECK(e.z[l] == doctest::Approx(z).epsilon(1e-12));
        }
    }

    TEST_CASE("thread count does not change results") {
        auto c = small(50, 3000, true);
        c.threads = 1;
        const auto a = wpl::simulate(c);
        c.threads = 7;
        const auto b = wpl::simulate(c);
        CHECK(a.endpoints == b.endpoints);
        CHECK(a.paths == b.paths);
        CHECK(a.z == b.z);
        const auto ma = wpl::empirical_moments(a), mb = wpl::empirical_moments(b);
        CHECK(ma.mean_z == mb.mean_z);
        CHECK(ma.mean_cubed_deviation == mb.mean_cubed_deviation);
    }

    TEST_CASE("degenerate model gives z = 0") {
        auto c = small(10, 4);
        c.model = ModelSpec::uniform(1);
        const auto e = wpl::simulate(c);
        CHECK(e.degenerate);
        for (double z : e.z) {
            CHECK(z == 0.0);
        }
        CHECK(e.endpoints[0] == 0);
    }

    TEST_CASE("geometric ensemble mean") {
        auto c = small(100, 20000);
        c.model = ModelSpec::geometric(ExactScalar(1, 2));
        const auto e = wpl::simulate(c);
        const auto em = wpl::empirical_moments(e);
        // mean z has standard error 1/sqrt(N)
        CHECK(std::abs(em.mean_z) < 5 / std::sqrt(20000.0));
        CHECK(std::abs(em.mean_sq_z - 1) < 0.05);
    }

    TEST_CASE("normalized path") {
        auto c = small(8, 2, true);
        const auto e = wpl::simulate(c);
        const std::vector<double> grid{0.0, 0.5, 1.0};
        const auto w = wpl::normalized_path(e, 1, grid);
        CHECK(w[0] == 0.0);
        CHECK(w[2] == doctest::Approx(e.z[1]).epsilon(1e-12));
        const double mid = (static_cast<double>(e.path(1)[4]) - 35.0 / 18 * 4) / (e.sigma * std::sqrt(8.0));
        CHECK(w[1] == doctest::Approx(mid).epsilon(1e-12));
        CHECK_THROWS_AS(wpl::normalized_path(e, 2, grid), std::out_of_range);
        CHECK_THROWS_AS(wpl::normalized_path(e, 0, std::vector<double>{1.5}), std::invalid_argument);
        CHECK_THROWS_AS(wpl::normalized_path(wpl::simulate(small(8, 2)), 0, grid), std::invalid_argument);
    }

    TEST_CASE("validation and memory budget") {
        CHECK_THROWS_AS(wpl::simulate(small(0, 1)), std::invalid_argument);
        CHECK_THROWS_AS(wpl::simulate(small(1, 0)), std::invalid_argument);
        auto c = small(500, 100000, true);
        c.memory_budget = 1 << 20;
        CHECK_THROWS_AS(wpl::simulate(c), wpl::ResourceLimitError);
    }

    TEST_CASE("CSV round trip") {
        const auto e = wpl::simulate(small(6, 4, true));
        std::stringstream ends, paths;
        wpl::write_endpoints_csv(ends, e);
        wpl::write_paths_csv(paths, e);
        const auto t = wpl::read_endpoints_csv(ends);
        CHECK(t.endpoints == e.endpoints);
        CHECK(t.z == e.z);
        const auto p = wpl::read_paths_csv(paths);
        CHECK(p.trajectories == 4);
        CHECK(p.gaps == 6);
        CHECK(p.values == e.paths);
    }

    TEST_CASE("CSV schema errors") {
        std::istringstream bad_header("a,b,c\n0,1,0.5\n");
        CHECK_THROWS_AS(wpl::read_endpoints_csv(bad_header), wpl::SchemaError);
        std::istringstream bad_row("trajectory,endpoint,z\n0,1\n");
        CHECK_THROWS_AS(wpl::read_endpoints_csv(bad_row), wpl::SchemaError);
        std::istringstream bad_number("trajectory,endpoint,z\n0,x,0.5\n");
        CHECK_THROWS_AS(wpl::read_endpoints_csv(bad_number), wpl::SchemaError);
        std::istringstream bad_order("trajectory,j,Q\n0,0,0\n0,2,3\n");
        CHECK_THROWS_AS(wpl::read_paths_csv(bad_order), wpl::SchemaError);
    }
}
