#include "wpl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "wpl/moment_formulas.hpp"
#include "wpl/parallel.hpp"
#include "wpl/polyomino.hpp"

namespace wpl {

bool IdentityResult::passed() const {
    return std::all_of(instances.begin(), instances.end(), [](const InstanceRecord& r) { return r.passed; });
}

double IdentityResult::max_deviation() const {
    double d = 0.0;
    for (const auto& r : instances) {
        d = std::max(d, r.deviation);
    }
    return d;
}

const InstanceRecord* IdentityResult::first_failure() const {
    for (const auto& r : instances) {
        if (!r.passed) {
            return &r;
        }
    }
    return nullptr;
}

bool VerifyReport::passed() const {
    return std::all_of(identities.begin(), identities.end(), [](const IdentityResult& r) { return r.passed(); });
}

const IdentityResult* VerifyReport::find(const std::string& name) const {
    for (const auto& r : identities) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

namespace {

// Identity names, in report order.
constexpr const char* kClosedUniform = "cross_moment.closed_vs_oracle.uniform";
constexpr const char* kClosedGeometric = "cross_moment.closed_vs_oracle.geometric";
constexpr const char* kReversibility = "cross_moment.reversibility";
constexpr const char* kCentering = "cross_moment.centering";
constexpr const char* kIndependence = "cross_moment.independence";
constexpr const char* kVStar = "moments.vstar";
constexpr const char* kMean = "moments.mean";
constexpr const char* kVariance = "moments.variance";
constexpr const char* kMu3 = "moments.mu3_star";
constexpr const char* kPerimeter = "polyomino.perimeter";

using Findings = std::map<std::string, std::vector<InstanceRecord>>;

class ModelChecker {
  public:
    ModelChecker(const ModelSpec& model, const VerifyOptions& options)
        : model_(model), options_(options), oracle_(oracle_source(model)) {}

    Findings run() {
        check_closed_forms();
        check_reversibility();
        if (model_.is_uniform()) {
            check_centering();
        }
        check_independence();
        check_vstar();
        check_mean();
        check_variance();
        check_mu3();
        return std::move(findings_);
    }

  private:
    // Exact comparison for uniform, relative tolerance for geometric.
    void compare(const char* identity, const std::string& label, const ExactScalar& expected,
                 const ExactScalar& actual) {
        InstanceRecord rec;
        rec.label = label;
        rec.value = to_string(expected);
        const ExactScalar diff = abs(ExactScalar{expected - actual});
        if (model_.is_uniform()) {
            rec.deviation = to_double(diff);
            rec.passed = diff == 0;
        } else {
            const double scale = std::max(1.0, std::abs(to_double(expected)));
            rec.deviation = to_double(diff) / scale;
            rec.passed = rec.deviation <= options_.geometric_tolerance;
        }
        if (!rec.passed) {
            rec.detail = fmt::format("expected {} ({}), got {} ({})", to_string(expected), to_decimal(expected),
                                     to_string(actual), to_decimal(actual));
        }
        findings_[identity].push_back(std::move(rec));
    }

    template <typename Fn>
    void guarded(const char* identity, const std::string& label, Fn&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            InstanceRecord rec;
            rec.label = label;
            rec.passed = false;
            rec.deviation = INFINITY;
            rec.detail = e.what();
            findings_[identity].push_back(std::move(rec));
        }
    }

    std::string tag() const { return model_.describe(); }

    void check_closed_forms() {
        const char* identity = model_.is_uniform() ? kClosedUniform : kClosedGeometric;
        for (const auto& idx : tabulated_indices()) {
            const auto label = tag() + " " + idx.label(false);
            guarded(identity, label, [&] { compare(identity, label, options_.closed_form(model_, idx, false), oracle_(idx, false)); });
        }
        if (model_.is_uniform()) {
            for (const auto& idx : tabulated_centered_indices()) {
                const auto label = tag() + " " + idx.label(true);
                guarded(identity, label, [&] { compare(identity, label, options_.closed_form(model_, idx, true), oracle_(idx, true)); });
            }
        }
    }

    void check_reversibility() {
        const auto label = tag() + " T_{0,1,2} = T_{0,2,1}";
        guarded(kReversibility, label, [&] {
            InstanceRecord rec;
            rec.label = label;
            rec.value = to_string(oracle_(MultiIndex{0, 1, 2, 0}, false));
            rec.passed = reversibility_check(model_);
            rec.deviation = to_double(abs(ExactScalar{oracle_(MultiIndex{0, 1, 2, 0}, false) -
                                                      oracle_(MultiIndex{0, 2, 1, 0}, false)}));
            findings_[kReversibility].push_back(std::move(rec));
        });
    }

    void check_centering() {
        const ExactScalar m = oracle_(MultiIndex{0, 1, 0, 0}, false);
        const ExactScalar m2 = m * m;
        guarded(kCentering, tag() + " Tbar_{0,2}", [&] {
            compare(kCentering, tag() + " Tbar_{0,2} = T_{0,2} - M^2", oracle_(MultiIndex{0, 2, 0, 0}, true),
                    ExactScalar{oracle_(MultiIndex{0, 2, 0, 0}, false) - m2});
        });
        guarded(kCentering, tag() + " Tbar_{0,1,1}", [&] {
            compare(kCentering, tag() + " Tbar_{0,1,1} = T_{0,1,1} - M^2", oracle_(MultiIndex{0, 1, 1, 0}, true),
                    ExactScalar{oracle_(MultiIndex{0, 1, 1, 0}, false) - m2});
        });
    }

    void check_independence() {
        const auto label = tag() + " E(y_1 y_3) = M^2";
        guarded(kIndependence, label, [&] {
            const ExactScalar m = oracle_(MultiIndex{0, 1, 0, 0}, false);
            compare(kIndependence, label, ExactScalar{m * m}, separated_gap_product_oracle(model_).value);
        });
    }

    void check_vstar() {
        guarded(kVStar, tag() + " V*", [&] {
            const ExactScalar closed = vstar_closed(model_);
            compare(kVStar, tag() + " V* closed vs (T_{0,2}-M^2)+2(T_{0,1,1}-M^2)", closed, vstar_assembled(oracle_));
            if (model_.is_uniform()) {
                compare(kVStar, tag() + " V* closed vs Tbar_{0,2}+2Tbar_{0,1,1}", closed,
                        ExactScalar{oracle_(MultiIndex{0, 2, 0, 0}, true) + 2 * oracle_(MultiIndex{0, 1, 1, 0}, true)});
            }
        });
    }

    void check_mean() {
        for (std::int64_t n = 2; n <= options_.n_max; ++n) {
            const auto label = fmt::format("{} n={}", tag(), n);
            guarded(kMean, label, [&] {
                compare(kMean, label, mean_perimeter(model_, n), mean_perimeter_assembled(oracle_, n));
                compare(kMean, label + " M_P - M_R = 2n", ExactScalar{mean_perimeter(model_, n) - mean_vertical(model_, n)},
                        ExactScalar{2 * n});
            });
        }
    }

    void check_variance() {
        for (std::int64_t n = 4; n <= options_.n_max; ++n) {
            const auto label = fmt::format("{} n={}", tag(), n);
            guarded(kVariance, label,
                    [&] { compare(kVariance, label, variance_perimeter(model_, n), variance_assembled(oracle_, n)); });
        }
    }

    void check_mu3() {
        guarded(kMu3, tag() + " mu3*", [&] {
            const ExactScalar closed = mu3_star(model_);
            compare(kMu3, tag() + " mu3* closed vs uncentered combination", closed, mu3_star_combination(oracle_));
            if (model_.is_uniform()) {
                compare(kMu3, tag() + " mu3* closed vs centered combination", closed, mu3_star_centered(oracle_));
            }
        });
    }

    ModelSpec model_;
    const VerifyOptions& options_;
    CrossMomentSource oracle_;
    Findings findings_;
};

}  // namespace

IdentityResult check_perimeter_identity(const std::vector<std::pair<std::int64_t, std::int64_t>>& cases) {
    IdentityResult result{kPerimeter, {}};
    for (const auto& [k, n] : cases) {
        std::int64_t words = 0;
        std::int64_t mismatches = 0;
        std::string first_bad;
        std::vector<std::int64_t> letters(static_cast<std::size_t>(n), 1);
        while (true) {
            const Word w{letters};
            const auto decomposed = perimeter_decomposed(w).total;
            const auto counted = perimeter_geometric_oracle(w);
            ++words;
            if (decomposed != counted) {
                if (mismatches++ == 0) {
                    first_bad = fmt::format("word {}: decomposition {} vs edge count {}", w.str(), decomposed, counted);
                }
            }
            // odometer over [1,k]^n
            std::size_t pos = 0;
            while (pos < letters.size() && letters[pos] == k) {
                letters[pos++] = 1;
            }
            if (pos == letters.size()) {
                break;
            }
            ++letters[pos];
        }
        InstanceRecord rec;
        rec.label = fmt::format("all {} words with k={}, n={}", words, k, n);
        rec.value = std::to_string(words);
        rec.deviation = static_cast<double>(mismatches);
        rec.passed = mismatches == 0;
        rec.detail = first_bad;
        result.instances.push_back(std::move(rec));
    }
    return result;
}

VerifyReport run_verification(const VerifyOptions& options) {
    if (options.k_max < 1) {
        throw std::invalid_argument("k-max must be at least 1");
    }
    if (options.n_max < 4) {
        throw std::invalid_argument("n-max must be at least 4");
    }
    std::vector<ModelSpec> models;
    for (std::int64_t k = 1; k <= options.k_max; ++k) {
        models.push_back(ModelSpec::uniform(k));
    }
    for (const auto& p : options.p_list) {
        models.push_back(ModelSpec::geometric(p));
    }

    // heaviest models first so the contiguous split stays balanced
    std::vector<Findings> per_model(models.size());
    std::vector<std::size_t> order(models.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    const unsigned threads = resolve_threads(options.threads);
    parallel_for(models.size(), std::min<unsigned>(threads, static_cast<unsigned>(models.size())),
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t i = begin; i < end; ++i) {
                         per_model[order[i]] = ModelChecker{models[order[i]], options}.run();
                     }
                 });

    VerifyReport report;
    for (const char* name : {kClosedUniform, kClosedGeometric, kReversibility, kCentering, kIndependence, kVStar,
                             kMean, kVariance, kMu3}) {
        IdentityResult identity{name, {}};
        for (auto& findings : per_model) {
            if (auto it = findings.find(name); it != findings.end()) {
                for (auto& rec : it->second) {
                    identity.instances.push_back(std::move(rec));
                }
            }
        }
        if (!identity.instances.empty()) {
            report.identities.push_back(std::move(identity));
        }
    }
    if (options.include_perimeter) {
        report.identities.push_back(check_perimeter_identity({{2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {2, 7}, {2, 8},
                                                              {3, 2}, {3, 3}, {3, 4}, {3, 5}, {3, 6},
                                                              {4, 2}, {4, 3}, {4, 4}, {4, 5}}));
    }
    return report;
}

void print_report(std::ostream& out, const VerifyReport& report, bool verbose) {
    for (const auto& id : report.identities) {
        out << fmt::format("{:<4}  {:<40} instances={:<5} max_deviation={:.3g}\n", id.passed() ? "PASS" : "FAIL",
                           id.name, id.instances.size(), id.max_deviation());
        if (verbose) {
            for (const auto& rec : id.instances) {
                out << fmt::format("      {} {}  value={}  deviation={:.3g}{}\n", rec.passed ? "ok  " : "FAIL",
                                   rec.label, rec.value, rec.deviation, rec.detail.empty() ? "" : "  " + rec.detail);
            }
        } else if (const auto* bad = id.first_failure()) {
            out << fmt::format("      first failure: {}: {}\n", bad->label, bad->detail);
        }
    }
    const auto failed = std::count_if(report.identities.begin(), report.identities.end(),
                                      [](const IdentityResult& r) { return !r.passed(); });
    if (failed == 0) {
        out << fmt::format("verify: all {} identities passed\n", report.identities.size());
    } else {
        out << fmt::format("verify: {} of {} identities FAILED\n", failed, report.identities.size());
    }
}

}  // namespace wpl
