#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lambda_lab/modpoly.hpp"

namespace lambda_lab::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailure = 1,
    kUsageError = 2,
    kEnvironmentError = 3,
};

struct CheckEntry {
    std::string name;
    bool passed = false;
    std::string observed;
    std::string expected;
};

struct RunReport {
    std::string command;
    unsigned p = 0;
    std::vector<CheckEntry> checks;
    std::vector<std::pair<std::string, std::string>> details;
    double seconds = 0.0;

    bool passed() const;
    /// "key: value" lines; failed checks list both observed and expected values.
    std::string to_text(bool include_timing = true) const;
};

/// Where F_p comes from: an on-disk cache directory (optional) and solver options.
struct ModpolySource {
    std::optional<std::filesystem::path> cache_dir;
    ModpolyOptions options;
};

/// Loads F_p from the cache when present, otherwise computes and stores it.
BivarIntPoly obtain_modpoly(unsigned p, const ModpolySource &source);

/// Runs every check of the `verify` command; never throws for failed checks.
RunReport verify_report(unsigned p, const ModpolySource &source);

/// Entry point shared by the executable and the tests.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace lambda_lab::cli
