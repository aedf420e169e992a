#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wpl/cross_moments.hpp"
#include "wpl/empirics.hpp"
#include "wpl/errors.hpp"
#include "wpl/manifest.hpp"
#include "wpl/moment_formulas.hpp"
#include "wpl/plots.hpp"
#include "wpl/polyomino.hpp"
#include "wpl/simulation.hpp"

namespace wpl::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ModelFlags {
    std::string model = "uniform";
    std::int64_t k = 0;
    std::string p;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "Letter distribution")
            ->check(CLI::IsMember({"uniform", "geometric"}))
            ->capture_default_str();
        cmd->add_option("--k", k, "Uniform support size");
        cmd->add_option("--p", p, "Geometric success probability, e.g. 1/2");
    }

    ModelSpec resolve() const {
        if (model == "uniform") {
            if (!p.empty()) {
                throw std::invalid_argument("--p only applies to --model geometric");
            }
            if (k == 0) {
                throw std::invalid_argument("--model uniform needs --k");
            }
            return ModelSpec::uniform(k);
        }
        if (k != 0) {
            throw std::invalid_argument("--k only applies to --model uniform");
        }
        if (p.empty()) {
            throw std::invalid_argument("--model geometric needs --p");
        }
        return ModelSpec::geometric(parse_rational(p));
    }
};

json exact_json(const ExactScalar& v) {
    return {{"exact", to_string(v)}, {"decimal", to_decimal(v)}};
}

std::string csv_row(const std::string& name, const ExactScalar& v) {
    return fmt::format("{},{},{}\n", name, to_string(v), to_decimal(v));
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    f << content;
    if (!f.flush()) {
        throw std::runtime_error(fmt::format("write to {} failed", path.string()));
    }
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    }
    writer(f);
    if (!f.flush()) {
        throw std::runtime_error(fmt::format("write to {} failed", path.string()));
    }
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    }
    return f;
}

fs::path manifest_path(const fs::path& out) {
    return fs::path{out.string() + ".manifest.json"};
}

void write_manifest(const std::vector<std::string>& args, const json& config, const std::vector<fs::path>& outputs,
                    std::ostream& out) {
    std::vector<std::string> command{"wpl"};
    command.insert(command.end(), args.begin(), args.end());
    const auto path = manifest_path(outputs.front());
    write_text_file(path, make_manifest(command, config, outputs).dump(2) + "\n");
    out << "manifest: " << path.string() << "\n";
}

double parse_delta(const std::string& text) {
    const ExactScalar d = parse_rational(text);
    if (d <= 0) {
        throw std::invalid_argument("--delta must be positive");
    }
    const ExactScalar cells = ExactScalar{6} / d;
    if (cells.get_den() != 1) {
        throw std::invalid_argument(fmt::format("6/delta must be an integer, got 6/({}) = {}", text, to_string(cells)));
    }
    return to_double(d);
}

// Rebuilds the ensemble view needed by the path plots.
TrajectoryEnsemble ensemble_from_paths(const PathTable& table, const ModelSpec& model) {
    TrajectoryEnsemble ens;
    ens.config.model = model;
    ens.config.gaps = table.gaps;
    ens.config.trajectories = table.trajectories;
    ens.config.record_full_paths = true;
    ens.mean_gap = cross_moment_closed(model, MultiIndex{0, 1, 0, 0}, false);
    const auto vs = vstar_sigma(model);
    ens.sigma = vs.sigma;
    ens.degenerate = vs.vstar == 0;
    ens.paths = table.values;
    const auto stride = static_cast<std::size_t>(table.gaps + 1);
    for (std::int64_t l = 0; l < table.trajectories; ++l) {
        ens.endpoints.push_back(table.values[static_cast<std::size_t>(l) * stride + stride - 1]);
    }
    return ens;
}

class Runner {
  public:
    Runner(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks)
        : args_(args), out_(out), err_(err), hooks_(hooks) {}

    int run() {
        CLI::App app{"Exact perimeter moments of random words and Monte Carlo limit checks", "wpl"};
        app.require_subcommand(1);
        app.add_option("--threads", threads_, "Worker threads (default: WPL_THREADS, else all cores)");
        app.set_version_flag("--version", library_version());

        auto* moments = app.add_subcommand("moments", "Exact mean, variance and third-moment constants of P_n");
        ModelFlags moments_model;
        moments_model.attach(moments);
        std::int64_t n = 0;
        std::string format = "json";
        moments->add_option("--n", n, "Word length")->required();
        moments->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

        auto* xmoment = app.add_subcommand("xmoment", "One cross-moment T_{a,b,c,d}");
        ModelFlags x_model;
        x_model.attach(xmoment);
        std::string index;
        bool centered = false;
        std::string method = "both";
        xmoment->add_option("--index", index, "Exponents, e.g. 0,1,1")->required();
        xmoment->add_flag("--centered", centered, "Center each gap at M");
        xmoment->add_option("--method", method)
            ->check(CLI::IsMember({"closed", "oracle", "both"}))
            ->capture_default_str();
        xmoment->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

        auto* verify = app.add_subcommand("verify", "Check every closed form against brute force");
        VerifyOptions vopt;
        std::string p_list = "1/10,1/4,1/2,3/4,9/10";
        bool verbose = false;
        verify->add_option("--k-max", vopt.k_max)->capture_default_str();
        verify->add_option("--p-list", p_list)->capture_default_str();
        verify->add_option("--n-max", vopt.n_max)->capture_default_str();
        verify->add_flag("--verbose", verbose, "List every instance");

        auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble of gap partial sums");
        ModelFlags sim_model;
        sim_model.attach(simulate);
        SimulationConfig sim;
        std::string sim_out;
        std::size_t budget_mib = sim.memory_budget >> 20;
        simulate->add_option("--m", sim.gaps, "Gaps per word")->capture_default_str();
        simulate->add_option("--trajectories", sim.trajectories)->capture_default_str();
        simulate->add_option("--seed", sim.seed)->capture_default_str();
        simulate->add_flag("--paths", sim.record_full_paths, "Also write every trajectory to <out>.paths.csv");
        simulate->add_option("--memory-budget-mib", budget_mib)->capture_default_str();
        simulate->add_option("--out", sim_out, "Endpoint CSV")->required();

        auto* histogram = app.add_subcommand("histogram", "Cell histogram of normalized endpoints");
        std::string hist_in, hist_out, delta = "1/2";
        histogram->add_option("--input", hist_in, "Endpoint CSV")->required();
        histogram->add_option("--delta", delta)->capture_default_str();
        histogram->add_option("--out", hist_out, "Histogram CSV")->required();

        auto* plot = app.add_subcommand("plot", "SVG plots");
        ModelFlags plot_model;
        plot_model.attach(plot);
        std::string kind, plot_in, plot_out;
        std::size_t trajectory = 0;
        std::int64_t max_letter = 0;
        plot->add_option("--kind", kind)
            ->required()
            ->check(CLI::IsMember({"pmf", "trajectory", "normalized", "histogram", "cumulative"}));
        plot->add_option("--input", plot_in, "Paths CSV (trajectory, normalized) or endpoint CSV (histogram, cumulative)");
        plot->add_option("--out", plot_out)->required();
        plot->add_option("--trajectory", trajectory)->capture_default_str();
        plot->add_option("--delta", delta)->capture_default_str();
        plot->add_option("--max-letter", max_letter, "pmf range (default: k, or 10 for geometric)");

        auto* render = app.add_subcommand("render", "Draw the polyomino of a word");
        std::string word_text, render_out;
        RenderOptions ropt;
        render->add_option("--word", word_text, "Letters, e.g. 2,3,1,3")->required();
        render->add_option("--out", render_out, "SVG file (default: stdout)");
        render->add_option("--cell-size", ropt.cell_size)->capture_default_str();

        try {
            std::vector<std::string> reversed(args_.rbegin(), args_.rend());
            app.parse(reversed);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out_, err_);
            return code == 0 ? kOk : kUsage;
        }

        try {
            if (*moments) {
                return cmd_moments(moments_model.resolve(), n, format);
            }
            if (*xmoment) {
                return cmd_xmoment(x_model.resolve(), MultiIndex::parse(index), centered, method, format);
            }
            if (*verify) {
                vopt.p_list.clear();
                std::stringstream ss(p_list);
                for (std::string item; std::getline(ss, item, ',');) {
                    vopt.p_list.push_back(parse_rational(item));
                }
                return cmd_verify(vopt, verbose);
            }
            if (*simulate) {
                sim.model = sim_model.resolve();
                sim.memory_budget = budget_mib << 20;
                return cmd_simulate(sim, sim_out);
            }
            if (*histogram) {
                return cmd_histogram(hist_in, parse_delta(delta), hist_out);
            }
            if (*plot) {
                return cmd_plot(kind, plot_model, plot_in, plot_out, trajectory, parse_delta(delta), max_letter);
            }
            if (*render) {
                return cmd_render(Word::parse(word_text), ropt, render_out);
            }
        } catch (const std::invalid_argument& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        } catch (const std::out_of_range& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        } catch (const std::exception& e) {
            err_ << "error: " << e.what() << "\n";
            return kFailure;
        }
        return kUsage;
    }

  private:
    int cmd_moments(const ModelSpec& model, std::int64_t n, const std::string& format) {
        const MomentReport r = moment_report(model, n);
        if (format == "csv") {
            out_ << "quantity,exact,decimal\n";
            out_ << csv_row("mean_P", r.mean_P) << csv_row("mean_R", r.mean_R) << csv_row("mean_Q", r.mean_Q)
                 << csv_row("var_P", r.var_P) << csv_row("mu3_dominant", r.mu3_dominant)
                 << csv_row("mu3_star", r.mu3_star) << csv_row("vstar", r.vstar);
            out_ << fmt::format("sigma,,{:.17g}\n", r.sigma);
            return kOk;
        }
        const json j{{"model", model_json(model)},
                     {"n", r.n},
                     {"m", r.m},
                     {"mean_P", exact_json(r.mean_P)},
                     {"mean_R", exact_json(r.mean_R)},
                     {"mean_Q", exact_json(r.mean_Q)},
                     {"var_P", exact_json(r.var_P)},
                     {"mu3_dominant", exact_json(r.mu3_dominant)},
                     {"mu3_star", exact_json(r.mu3_star)},
                     {"vstar", exact_json(r.vstar)},
                     {"sigma", {{"decimal", fmt::format("{:.17g}", r.sigma)}}}};
        out_ << j.dump(2) << "\n";
        return kOk;
    }

    int cmd_xmoment(const ModelSpec& model, const MultiIndex& idx, bool centered, const std::string& method,
                    const std::string& format) {
        json j{{"model", model_json(model)}, {"index", idx.label(centered)}};
        if (method != "oracle") {
            j["closed"] = exact_json(cross_moment_closed(model, idx, centered));
        }
        if (method != "closed") {
            const auto r = cross_moment_oracle(model, idx, centered);
            j["oracle"] = exact_json(r.value);
            j["oracle"]["truncation_bound"] = r.truncation_bound;
            if (model.is_geometric()) {
                j["oracle"]["cutoff"] = tail_cutoff(model);
            }
        }
        if (format == "csv") {
            out_ << "index,method,exact,decimal\n";
            for (const char* m : {"closed", "oracle"}) {
                if (j.contains(m)) {
                    out_ << fmt::format("{},{},{},{}\n", idx.label(centered), m, j[m]["exact"].get<std::string>(),
                                        j[m]["decimal"].get<std::string>());
                }
            }
            return kOk;
        }
        out_ << j.dump(2) << "\n";
        return kOk;
    }

    int cmd_verify(VerifyOptions options, bool verbose) {
        options.threads = threads_;
        if (hooks_.closed_form) {
            options.closed_form = hooks_.closed_form;
        }
        const VerifyReport report = run_verification(options);
        print_report(out_, report, verbose);
        return report.passed() ? kOk : kFailure;
    }

    int cmd_simulate(SimulationConfig config, const std::string& out_path) {
        config.threads = threads_;
        const TrajectoryEnsemble ens = simulate(config);
        const fs::path endpoints{out_path};
        std::vector<fs::path> outputs{endpoints};
        write_file(endpoints, [&](std::ostream& f) { write_endpoints_csv(f, ens); });
        if (config.record_full_paths) {
            fs::path paths = endpoints;
            paths.replace_extension(".paths.csv");
            write_file(paths, [&](std::ostream& f) { write_paths_csv(f, ens); });
            outputs.push_back(paths);
        }

        const EmpiricalMoments em = empirical_moments(ens);
        const ExactScalar third = ExactScalar{config.gaps} * mu3_star(config.model);
        out_ << fmt::format("model          {}\n", config.model.describe());
        out_ << fmt::format("m              {}\n", config.gaps);
        out_ << fmt::format("trajectories   {}\n", config.trajectories);
        out_ << fmt::format("seed           {}\n", config.seed);
        out_ << fmt::format("M              {} = {}\n", to_string(ens.mean_gap), to_decimal(ens.mean_gap));
        out_ << fmt::format("sigma          {:.15g}\n", ens.sigma);
        out_ << fmt::format("{:<26}{:>22}  {}\n", "statistic", "observed", "theoretical");
        out_ << fmt::format("{:<26}{:>22.10g}  0\n", "mean z", em.mean_z);
        out_ << fmt::format("{:<26}{:>22.10g}  1\n", "mean z^2", em.mean_sq_z);
        out_ << fmt::format("{:<26}{:>22.10g}  m mu3* = {} = {}\n", "mean (Q - mM)^3", em.mean_cubed_deviation,
                            to_string(third), to_decimal(third, 16));
        for (const auto& p : outputs) {
            out_ << "wrote: " << p.string() << "\n";
        }
        json cfg = config_json(config);
        write_manifest(args_, cfg, outputs, out_);
        return kOk;
    }

    int cmd_histogram(const std::string& input, double delta, const std::string& output) {
        auto in = open_input(input);
        const EndpointTable table = read_endpoints_csv(in);
        const Histogram h = build_histogram(table.z, delta);
        write_file(output, [&](std::ostream& f) { write_histogram_csv(f, h); });
        const GofReport g = goodness_of_fit(table.z, delta);
        out_ << fmt::format("samples             {}\n", h.total);
        out_ << fmt::format("cells               {}\n", h.layout.size());
        out_ << fmt::format("ks_statistic        {:.6g}\n", g.ks_statistic);
        out_ << fmt::format("max_cell_abs_error  {:.6g}\n", g.max_cell_abs_error);
        out_ << "wrote: " << output << "\n";
        write_manifest(args_, {{"input", fs::path{input}.filename().string()}, {"input_sha256", sha256_file(input)},
                               {"delta", delta}},
                       {fs::path{output}}, out_);
        return kOk;
    }

    int cmd_plot(const std::string& kind, const ModelFlags& flags, const std::string& input,
                 const std::string& output, std::size_t trajectory, double delta, std::int64_t max_letter) {
        Chart chart;
        json cfg{{"kind", kind}};
        if (kind == "pmf") {
            const ModelSpec model = flags.resolve();
            if (max_letter == 0) {
                max_letter = model.is_uniform() ? model.k() : 10;
            }
            chart = pmf_chart(model, max_letter);
            cfg["model"] = model_json(model);
            cfg["max_letter"] = max_letter;
        } else {
            if (input.empty()) {
                throw std::invalid_argument(fmt::format("plot --kind {} needs --input", kind));
            }
            auto in = open_input(input);
            cfg["input"] = fs::path{input}.filename().string();
            cfg["input_sha256"] = sha256_file(input);
            if (kind == "trajectory" || kind == "normalized") {
                const ModelSpec model = flags.resolve();
                const TrajectoryEnsemble ens = ensemble_from_paths(read_paths_csv(in), model);
                chart = kind == "trajectory" ? trajectory_chart(ens, trajectory)
                                             : normalized_path_chart(ens, trajectory);
                cfg["model"] = model_json(model);
                cfg["trajectory"] = trajectory;
            } else {
                const EndpointTable table = read_endpoints_csv(in);
                const Histogram h = build_histogram(table.z, delta);
                chart = kind == "histogram" ? histogram_chart(h) : cumulative_chart(h);
                cfg["delta"] = delta;
            }
        }
        write_text_file(output, render_chart_svg(chart));
        out_ << "wrote: " << output << "\n";
        write_manifest(args_, cfg, {fs::path{output}}, out_);
        return kOk;
    }

    int cmd_render(const Word& word, const RenderOptions& options, const std::string& output) {
        const std::string svg = render_svg(word, options);
        const auto p = perimeter_decomposed(word);
        if (output.empty()) {
            out_ << svg;
            return kOk;
        }
        write_text_file(output, svg);
        out_ << fmt::format("word {}: Q = {}, R = {}, P = {}\n", word.str(), p.gap_sum, p.vertical, p.total);
        out_ << "wrote: " << output << "\n";
        write_manifest(args_, {{"word", word.str()}, {"cell_size", options.cell_size}}, {fs::path{output}}, out_);
        return kOk;
    }

    const std::vector<std::string>& args_;
    std::ostream& out_;
    std::ostream& err_;
    const Hooks& hooks_;
    unsigned threads_ = 0;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks) {
    return Runner{args, out, err, hooks}.run();
}

}  // namespace wpl::cli
