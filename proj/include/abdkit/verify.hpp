#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "abdkit/synthetic.hpp"

namespace abdkit {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // one or more lines, no trailing newline
    double seconds = 0.0;
};

struct VerifyOptions {
    std::filesystem::path fixtures;   // directory holding the counterexample fixtures
    std::optional<std::size_t> trials;  // overrides every randomized suite's trial count
    std::uint64_t seed = kDefaultSeed;
    unsigned jobs = 1;
};

/// Directory of the fixtures shipped with the source tree.
std::filesystem::path default_fixture_dir();

// Individual checks. Each catches its own exceptions and reports them as a failure.
CheckResult check_branching_counterexample(const VerifyOptions& opts);
CheckResult check_abd_counterexamples(const VerifyOptions& opts);
CheckResult check_convex_polygons(const VerifyOptions& opts, std::size_t polygons = 50, std::size_t angles = 25);
CheckResult check_merge_tree_oracle(const VerifyOptions& opts, std::size_t trials = 200);
CheckResult check_distance_oracle(const VerifyOptions& opts, std::size_t trials = 100);
CheckResult check_semi_metric(const VerifyOptions& opts, std::size_t trials = 200);
CheckResult check_clustering(const VerifyOptions& opts);
CheckResult check_frame_stability(const VerifyOptions& opts, std::size_t pairs = 10);
CheckResult check_tolerance_mode(const VerifyOptions& opts, std::size_t trials = 100);
CheckResult check_engine_agreement(const VerifyOptions& opts, std::size_t trials = 60);
CheckResult check_tree_properties(const VerifyOptions& opts, std::size_t trials = 200);
CheckResult check_abd_properties(const VerifyOptions& opts, std::size_t trials = 20);

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool ok() const;
    std::string text() const;
};

/// Runs every check above. `progress` (if set) is called after each one.
VerifyReport run_verify(const VerifyOptions& opts, const std::function<void(const CheckResult&)>& progress = {});

}  // namespace abdkit
