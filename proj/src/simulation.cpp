#include "wpl/simulation.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "wpl/cross_moments.hpp"
#include "wpl/moment_formulas.hpp"
#include "wpl/parallel.hpp"
#include "wpl/rng.hpp"
#include "wpl/summation.hpp"

namespace wpl {

std::span<const std::int64_t> TrajectoryEnsemble::path(std::size_t trajectory) const {
    if (!has_paths()) {
        throw std::invalid_argument("paths were not recorded for this ensemble");
    }
    if (trajectory >= endpoints.size()) {
        throw std::out_of_range("trajectory index out of range");
    }
    const auto stride = static_cast<std::size_t>(config.gaps + 1);
    return std::span<const std::int64_t>(paths).subspan(trajectory * stride, stride);
}

TrajectoryEnsemble simulate(const SimulationConfig& config) {
    if (config.gaps < 1) {
        throw std::invalid_argument("simulation needs at least one gap (m >= 1)");
    }
    if (config.trajectories < 1) {
        throw std::invalid_argument("simulation needs at least one trajectory");
    }
    const auto n_traj = static_cast<std::size_t>(config.trajectories);
    const auto stride = static_cast<std::size_t>(config.gaps) + 1;
    if (config.record_full_paths) {
        const double bytes = static_cast<double>(n_traj) * static_cast<double>(stride) * sizeof(std::int64_t);
        if (bytes > static_cast<double>(config.memory_budget)) {
            throw ResourceLimitError(fmt::format("recording {} paths of {} points needs {:.0f} bytes, budget is {}",
                                                 n_traj, stride, bytes, config.memory_budget));
        }
    }

    TrajectoryEnsemble ens;
    ens.config = config;
    ens.mean_gap = cross_moment_closed(config.model, MultiIndex{0, 1, 0, 0}, false);
    ens.sigma = vstar_sigma(config.model).sigma;
    ens.degenerate = !(ens.sigma > 0.0);
    ens.endpoints.resize(n_traj);
    ens.z.resize(n_traj);
    if (config.record_full_paths) {
        ens.paths.resize(n_traj * stride);
    }

    const double drift = to_double(ExactScalar{ens.mean_gap * static_cast<long>(config.gaps)});
    const double scale = ens.sigma * std::sqrt(static_cast<double>(config.gaps));
    const LetterSampler sampler{config.model};

    parallel_for(n_traj, resolve_threads(config.threads), [&](std::size_t begin, std::size_t end) {
        for (std::size_t l = begin; l < end; ++l) {
            CounterStream stream{config.seed, l};
            std::int64_t prev = sampler(stream);
            std::int64_t q = 0;
            std::int64_t* row = config.record_full_paths ? ens.paths.data() + l * stride : nullptr;
            if (row != nullptr) {
                row[0] = 0;
            }
            for (std::size_t j = 1; j < stride; ++j) {
                const std::int64_t x = sampler(stream);
                q += x > prev ? x - prev : prev - x;
                prev = x;
                if (row != nullptr) {
                    row[j] = q;
                }
            }
            ens.endpoints[l] = q;
            ens.z[l] = ens.degenerate ? 0.0 : (static_cast<double>(q) - drift) / scale;
        }
    });
    return ens;
}

std::vector<double> normalized_path(const TrajectoryEnsemble& ensemble, std::size_t trajectory,
                                    std::span<const double> grid) {
    const auto row = ensemble.path(trajectory);
    const double m = static_cast<double>(ensemble.config.gaps);
    const double mean = to_double(ensemble.mean_gap);
    const double scale = ensemble.sigma * std::sqrt(m);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw std::invalid_argument("path times must lie in [0,1]");
        }
        auto j = static_cast<std::size_t>(std::floor(m * t));
        j = std::min(j, row.size() - 1);
        out.push_back(ensemble.degenerate ? 0.0 : (static_cast<double>(row[j]) - mean * m * t) / scale);
    }
    return out;
}

EmpiricalMoments empirical_moments(const TrajectoryEnsemble& ensemble) {
    const auto n = ensemble.z.size();
    const double drift =
        to_double(ExactScalar{ensemble.mean_gap * static_cast<long>(ensemble.config.gaps)});
    std::vector<double> sq(n);
    std::vector<double> cubes(n);
    for (std::size_t l = 0; l < n; ++l) {
        sq[l] = ensemble.z[l] * ensemble.z[l];
        const double dev = static_cast<double>(ensemble.endpoints[l]) - drift;
        cubes[l] = dev * dev * dev;
    }
    const double count = static_cast<double>(n);
    return EmpiricalMoments{pairwise_sum(ensemble.z) / count, pairwise_sum(sq) / count,
                            pairwise_sum(cubes) / count};
}

void write_endpoints_csv(std::ostream& out, const TrajectoryEnsemble& ensemble) {
    out << "trajectory,endpoint,z\n";
    for (std::size_t l = 0; l < ensemble.endpoints.size(); ++l) {
        out << fmt::format("{},{},{}\n", l, ensemble.endpoints[l], ensemble.z[l]);
    }
}

void write_paths_csv(std::ostream& out, const TrajectoryEnsemble& ensemble) {
    if (!ensemble.has_paths()) {
        throw std::invalid_argument("paths were not recorded for this ensemble");
    }
    out << "trajectory,j,Q\n";
    std::string buffer;
    for (std::size_t l = 0; l < ensemble.endpoints.size(); ++l) {
        const auto row = ensemble.path(l);
        buffer.clear();
        for (std::size_t j = 0; j < row.size(); ++j) {
            fmt::format_to(std::back_inserter(buffer), "{},{},{}\n", l, j, row[j]);
        }
        out << buffer;
    }
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw SchemaError(fmt::format("line {}: cannot parse field '{}'", line_no, field));
    }
    return value;
}

double parse_double_field(std::string_view field, std::size_t line_no) {
    std::string copy(field);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(copy, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != copy.size() || copy.empty()) {
        throw SchemaError(fmt::format("line {}: cannot parse number '{}'", line_no, field));
    }
    return v;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

}  // namespace

EndpointTable read_endpoints_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "trajectory,endpoint,z") {
        throw SchemaError("expected header 'trajectory,endpoint,z'");
    }
    EndpointTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = strip_cr(line);
        if (view.empty()) {
            continue;
        }
        const auto fields = split_fields(view);
        if (fields.size() != 3) {
            throw SchemaError(fmt::format("line {}: expected 3 fields, found {}", line_no, fields.size()));
        }
        const auto index = parse_field<std::int64_t>(fields[0], line_no);
        if (index != static_cast<std::int64_t>(table.z.size())) {
            throw SchemaError(fmt::format("line {}: trajectory index {} out of sequence", line_no, index));
        }
        table.endpoints.push_back(parse_field<std::int64_t>(fields[1], line_no));
        table.z.push_back(parse_double_field(fields[2], line_no));
    }
    if (table.z.empty()) {
        throw SchemaError("endpoint table has no rows");
    }
    return table;
}

std::span<const std::int64_t> PathTable::path(std::size_t trajectory) const {
    if (trajectory >= static_cast<std::size_t>(trajectories)) {
        throw std::out_of_range("trajectory index out of range");
    }
    const auto stride = static_cast<std::size_t>(gaps + 1);
    return std::span<const std::int64_t>(values).subspan(trajectory * stride, stride);
}

PathTable read_paths_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "trajectory,j,Q") {
        throw SchemaError("expected header 'trajectory,j,Q'");
    }
    PathTable table;
    std::int64_t current = -1;
    std::int64_t expected_j = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = strip_cr(line);
        if (view.empty()) {
            continue;
        }
        const auto fields = split_fields(view);
        if (fields.size() != 3) {
            throw SchemaError(fmt::format("line {}: expected 3 fields, found {}", line_no, fields.size()));
        }
        const auto traj = parse_field<std::int64_t>(fields[0], line_no);
        const auto j = parse_field<std::int64_t>(fields[1], line_no);
        const auto q = parse_field<std::int64_t>(fields[2], line_no);
        if (traj != current) {
            if (traj != current + 1 || j != 0) {
                throw SchemaError(fmt::format("line {}: rows must be grouped by trajectory starting at j=0", line_no));
            }
            if (current == 0) {
                table.gaps = expected_j - 1;
            } else if (current > 0 && expected_j - 1 != table.gaps) {
                throw SchemaError(fmt::format("line {}: trajectory {} has a different length", line_no, current));
            }
            current = traj;
            expected_j = 0;
        }
        if (j != expected_j) {
            throw SchemaError(fmt::format("line {}: expected j={}, found {}", line_no, expected_j, j));
        }
        table.values.push_back(q);
        ++expected_j;
    }
    if (current < 0) {
        throw SchemaError("path table has no rows");
    }
    if (current == 0) {
        table.gaps = expected_j - 1;
    } else if (expected_j - 1 != table.gaps) {
        throw SchemaError(fmt::format("trajectory {} has a different length", current));
    }
    if (table.gaps < 1) {
        throw SchemaError("paths need at least one gap");
    }
    table.trajectories = current + 1;
    return table;
}

nlohmann::json model_json(const ModelSpec& model) {
    if (model.is_uniform()) {
        return {{"kind", "uniform"}, {"k", model.k()}};
    }
    return {{"kind", "geometric"}, {"p", to_string(model.p())}};
}

nlohmann::json config_json(const SimulationConfig& config) {
    return {{"model", model_json(config.model)},
            {"gaps", config.gaps},
            {"trajectories", config.trajectories},
            {"seed", config.seed},
            {"record_full_paths", config.record_full_paths}};
}

}  // namespace wpl
