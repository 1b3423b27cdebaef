// Acceptance suite: one binary, one criterion per invocation (or "all").
// Prints a single PASS/FAIL line per criterion; exit status reflects the
// blocking criteria that were run.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "latgauss/experiments.hpp"

using namespace latgauss;
using namespace latgauss::suites;

namespace {

constexpr uint64_t kSeed = 20260809;

int detect_threads() {
    if (const char* env = std::getenv("LATGAUSS_THREADS")) return std::max(1, std::atoi(env));
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

CriterionResult run_criterion(int idx, int threads) {
    switch (idx) {
        case 1: return c1_cvp_equivalence(kSeed, threads, 200, {2, 3, 4, 5, 6, 7, 8});
        case 2: return c2_combiner_identity(kSeed, 100000);
        case 3: return c3_pipeline_count(kSeed, threads, 50, {1, 2, 3});
        case 4: return c4_identity_suite(kSeed, 1000);
        case 5: return c5_holder_ladder(kSeed, 1000, 500);
        case 6: return c6_clustering(kSeed, 10000);
        case 7: return c7_klein_audit(kSeed, 100000);
        case 8: return c8_tail_bounds(kSeed, 100, 2000);
        case 9: return c9_shift_count(kSeed, 50);
        case 10: return c10_bench(kSeed, threads, {4, 5, 6, 7, 8, 9, 10});
        default: throw error("criterion index out of range");
    }
}

}  // namespace

int main(int argc, char** argv) {
    int threads = detect_threads();
    bool verbose = false;
    std::vector<int> todo;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "all") == 0) {
            for (int c = 1; c <= 10; ++c) todo.push_back(c);
        } else if (std::strcmp(argv[i], "-v") == 0) {
            verbose = true;
        } else {
            todo.push_back(std::atoi(argv[i]));
        }
    }
    if (todo.empty())
        for (int c = 1; c <= 10; ++c) todo.push_back(c);

    bool all_ok = true;
    for (int idx : todo) {
        CriterionResult res = run_criterion(idx, threads);
        std::cout << "criterion " << idx << " (" << res.name << "): "
                  << (res.pass ? "PASS" : "FAIL") << (res.blocking ? "" : " [non-blocking]")
                  << " -- " << res.summary << "\n";
        if (verbose || !res.pass)
            for (auto& r : res.records) std::cout << "    " << r.line() << "\n";
        if (res.blocking && !res.pass) all_ok = false;
    }
    return all_ok ? 0 : 1;
}
