#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "wpl/distributions.hpp"
#include "wpl/errors.hpp"
#include "wpl/exact.hpp"

namespace wpl {

struct SimulationConfig {
    ModelSpec model = ModelSpec::uniform(6);
    std::int64_t gaps = 500;            // m
    std::int64_t trajectories = 100000;  // N
    std::uint64_t seed = 1;
    bool record_full_paths = false;
    /// Upper bound on the bytes held by recorded paths.
    std::size_t memory_budget = std::size_t{2} << 30;
    /// Worker count, 0 = resolve_threads default. Never affects results.
    unsigned threads = 0;
};

/// Simulated partial-sum paths Q_m(j) = y_1 + ... + y_j, j = 0..m, of
/// independent words of m+1 letters, with z_l = (Q_m(m) - mM) / (sigma sqrt(m)).
struct TrajectoryEnsemble {
    SimulationConfig config;
    ExactScalar mean_gap;  // M
    double sigma = 0.0;
    /// sigma == 0 (constant words): every z is defined as 0.
    bool degenerate = false;
    std::vector<std::int64_t> endpoints;
    std::vector<double> z;
    /// Row-major trajectories x (m+1), empty unless record_full_paths.
    std::vector<std::int64_t> paths;

    bool has_paths() const { return !paths.empty(); }
    std::span<const std::int64_t> path(std::size_t trajectory) const;
};

/// Trajectory l draws its letters from CounterStream(seed, l), so the result
/// is identical for any thread count. Throws ResourceLimitError when recorded
/// paths would exceed the memory budget, std::invalid_argument for m < 1 or
/// N < 1.
TrajectoryEnsemble simulate(const SimulationConfig& config);

/// W(t) = (Q_m(floor(mt)) - M m t) / (sigma sqrt(m)) for every t in `grid`.
/// Throws std::out_of_range for a bad trajectory index and
/// std::invalid_argument when paths were not recorded or t is outside [0,1].
std::vector<double> normalized_path(const TrajectoryEnsemble& ensemble, std::size_t trajectory,
                                    std::span<const double> grid);

struct EmpiricalMoments {
    double mean_z = 0.0;
    double mean_sq_z = 0.0;
    /// sum over l of (Q_m(m) - mM)^3, divided by N. Compared with m mu3*.
    double mean_cubed_deviation = 0.0;
};

EmpiricalMoments empirical_moments(const TrajectoryEnsemble& ensemble);

/// Header "trajectory,endpoint,z".
void write_endpoints_csv(std::ostream& out, const TrajectoryEnsemble& ensemble);
/// Header "trajectory,j,Q", long format. Requires recorded paths.
void write_paths_csv(std::ostream& out, const TrajectoryEnsemble& ensemble);

struct EndpointTable {
    std::vector<std::int64_t> endpoints;
    std::vector<double> z;
};

/// Reads the endpoint CSV written by write_endpoints_csv. Throws SchemaError
/// on a header or row mismatch.
EndpointTable read_endpoints_csv(std::istream& in);

struct PathTable {
    std::int64_t trajectories = 0;
    std::int64_t gaps = 0;
    std::vector<std::int64_t> values;  // row-major

    std::span<const std::int64_t> path(std::size_t trajectory) const;
};

/// Reads the long-format path CSV. Rows must be grouped by trajectory with
/// j = 0..m in order. Throws SchemaError otherwise.
PathTable read_paths_csv(std::istream& in);

nlohmann::json model_json(const ModelSpec& model);
nlohmann::json config_json(const SimulationConfig& config);

}  // namespace wpl
