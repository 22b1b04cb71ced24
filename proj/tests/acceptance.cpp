// Runs the nine reproduction scenarios against their time budgets and prints
// one line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>

#include "qca/suite.hpp"

int main() {
    using clock = std::chrono::steady_clock;
    // seconds allowed per criterion, in scenario order
    constexpr double budget[] = {1, 1, 30, 120, 10, 60, 10, 60, 10};

    const qca::Fixtures fx = qca::Fixtures::builtin();
    const qca::SuiteOptions opt;
    int failed = 0;
    const std::size_t count = qca::suite_scenarios().size();
    for (std::size_t i = 1; i <= count; ++i) {
        const auto start = clock::now();
        const qca::SuiteRow row = qca::run_scenario(i, fx, opt);
        const double secs = std::chrono::duration<double>(clock::now() - start).count();
        const bool in_time = secs <= budget[i - 1];
        const bool ok = row.status == "PASS" && in_time;
        if (!ok) ++failed;
        std::printf("[%s] criterion %zu %s (%.3fs of %.0fs)%s: %s\n", ok ? "PASS" : "FAIL", i, row.name.c_str(), secs,
                    budget[i - 1], in_time ? "" : " OVER BUDGET", row.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", count - failed, count);
    return failed == 0 ? 0 : 1;
}
