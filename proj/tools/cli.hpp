#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wpl/verify.hpp"

namespace wpl::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct Hooks {
    /// Replaces the closed forms checked by `verify`.
    ClosedFormProvider closed_form;
};

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

}  // namespace wpl::cli
