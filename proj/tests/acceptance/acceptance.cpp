// One PASS/FAIL line per acceptance criterion, with runtime against its budget.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "abdkit/verify.hpp"

using namespace abdkit;

namespace {

struct Criterion {
    int number;
    std::string title;
    double budget_seconds;
    std::function<CheckResult()> run;
};

}  // namespace

int main(int argc, char** argv) {
    VerifyOptions opts;
    if (argc > 1) opts.fixtures = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "branching distance violates the triangle inequality (5 > 3 + 1)", 1.0, [&] { return check_branching_counterexample(opts); }},
        {2, "ABD counterexamples (6.5 > 2.5 + 3; zero distance, non-isomorphic)", 1.0, [&] { return check_abd_counterexamples(opts); }},
        {3, "convex polygons: trivial trees and zero ABD", 30.0, [&] { return check_convex_polygons(opts, 50, 25); }},
        {4, "sweep merge tree equals definition oracle on 200 graphs", 60.0, [&] { return check_merge_tree_oracle(opts, 200); }},
        {5, "exact distance equals brute force on 100 tree pairs", 300.0, [&] { return check_distance_oracle(opts, 100); }},
        {6, "symmetry, self-distance and positiveness on 200 pairs", 600.0, [&] { return check_semi_metric(opts, 200); }},
        {7, "single-linkage purity >= 0.9 on 3 synthetic classes", 600.0, [&] { return check_clustering(opts); }},
        {8, "ABD at 20 vs 100 frames within 15% for >= 8 of 10 pairs", 600.0, [&] { return check_frame_stability(opts, 10); }},
        {9, "tolerance mode within 1e-6 of exact on the oracle pairs", 300.0, [&] { return check_tolerance_mode(opts, 100); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto r = c.run();
        const bool in_time = r.seconds < c.budget_seconds;
        const bool ok = r.passed && in_time;
        if (!ok) ++failed;
        std::printf("[%s] criterion %d: %s (%.3f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", c.number, c.title.c_str(), r.seconds,
                    c.budget_seconds);
        std::size_t start = 0;
        while (start <= r.detail.size() && !r.detail.empty()) {
            const auto end = r.detail.find('\n', start);
            std::printf("        %s\n", r.detail.substr(start, end - start).c_str());
            if (end == std::string::npos) break;
            start = end + 1;
        }
        if (!in_time) std::printf("        over the runtime budget\n");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
