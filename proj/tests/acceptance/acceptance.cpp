// Acceptance gate: runs every registered check once and prints one line per
// criterion.  Exit status is 0 only if all of them pass within budget.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "permon/verify.hpp"

int main(int argc, char** argv) {
    permon::verify::Options opts;
    std::string only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--seed" && i + 1 < argc) {
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (a == "--only" && i + 1 < argc) {
            only = argv[++i];
        } else {
            std::fprintf(stderr, "usage: acceptance [--seed N] [--only NAME]\n");
            return 2;
        }
    }

    const auto results = permon::verify::run("all", only, opts);
    if (results.empty()) {
        std::fprintf(stderr, "no check named '%s'\n", only.c_str());
        return 2;
    }
    int failed = 0;
    int index = 0;
    for (const auto& r : results) {
        ++index;
        failed += !r.passed;
        std::printf("[%s] %2d %-30s measured=%-12.4g tol=%-10.4g %6.2fs/%gs  %s\n", r.passed ? "PASS" : "FAIL", index,
                    r.name.c_str(), r.measured, r.tolerance, r.seconds, r.budget_seconds, r.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", int(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
