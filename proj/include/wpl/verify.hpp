#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "wpl/cross_moments.hpp"
#include "wpl/distributions.hpp"
#include "wpl/exact.hpp"

namespace wpl {

/// Cross-checks every closed form against its brute-force counterpart over a
/// sweep of models and word lengths.

struct InstanceRecord {
    std::string label;
    /// Exact value of the checked quantity (closed-form side).
    std::string value;
    /// |a - b| for exact identities, |a - b| / max(1, |b|) for truncated ones.
    double deviation = 0.0;
    bool passed = true;
    std::string detail;
};

struct IdentityResult {
    std::string name;
    std::vector<InstanceRecord> instances;

    bool passed() const;
    double max_deviation() const;
    const InstanceRecord* first_failure() const;
};

struct VerifyReport {
    std::vector<IdentityResult> identities;

    bool passed() const;
    const IdentityResult* find(const std::string& name) const;
};

using ClosedFormProvider = std::function<ExactScalar(const ModelSpec&, const MultiIndex&, bool centered)>;

struct VerifyOptions {
    std::int64_t k_max = 12;
    std::vector<ExactScalar> p_list = {ExactScalar{1, 10}, ExactScalar{1, 4}, ExactScalar{1, 2}, ExactScalar{3, 4},
                                       ExactScalar{9, 10}};
    std::int64_t n_max = 40;
    /// Relative tolerance for truncated geometric series.
    double geometric_tolerance = 1e-10;
    bool include_perimeter = true;
    unsigned threads = 0;
    /// Closed forms under test; tests substitute a corrupted table here.
    ClosedFormProvider closed_form = [](const ModelSpec& m, const MultiIndex& i, bool c) {
        return cross_moment_closed(m, i, c);
    };
};

VerifyReport run_verification(const VerifyOptions& options);

/// One line per identity: status, name, instance count, max deviation; the
/// first failing instance under each failed identity. `verbose` lists every
/// instance.
void print_report(std::ostream& out, const VerifyReport& report, bool verbose = false);

/// Exhaustive perimeter check over all k^n words for the given (k, n) pairs.
IdentityResult check_perimeter_identity(const std::vector<std::pair<std::int64_t, std::int64_t>>& cases);

}  // namespace wpl
