#ifndef LATGAUSS_EXPERIMENTS_HPP
#define LATGAUSS_EXPERIMENTS_HPP

#include <map>
#include <string>

#include "latgauss/cvp.hpp"
#include "latgauss/instances.hpp"
#include "latgauss/stats.hpp"

namespace latgauss {

struct ExperimentSpec {
    std::string kind;  // sample-audit | combiner-audit | identity-suite |
                       // cvp-equivalence | ladder-suite | census | bench
    std::vector<int> dims;
    int trials = 1;
    uint64_t seed = 1;
    std::map<std::string, double> params;
    int threads = 1;
    bool strict = false;

    void validate() const;
};

struct ReportRecord {
    std::string experiment;
    uint64_t instance_hash = 0;
    std::string metric;
    double value = 0;
    double tolerance = 0;
    bool pass = true;

    std::string line() const;  // fixed field order
};

namespace suites {

struct CriterionResult {
    std::string name;
    bool pass = false;
    bool blocking = true;
    std::vector<ReportRecord> records;
    std::string summary;
};

CriterionResult c1_cvp_equivalence(uint64_t seed, int threads, int trials_per_dim = 200,
                                   std::vector<int> dims = {2, 3, 4, 5, 6, 7, 8});
CriterionResult c2_combiner_identity(uint64_t seed, uint64_t pairs_target = 100000);
CriterionResult c3_pipeline_count(uint64_t seed, int threads, int runs = 50,
                                  std::vector<int> ells = {1, 2, 3});
CriterionResult c4_identity_suite(uint64_t seed, int instances = 1000);
CriterionResult c5_holder_ladder(uint64_t seed, int holder_instances = 1000,
                                 int ladder_instances = 500);
CriterionResult c6_clustering(uint64_t seed, uint64_t pairs_target = 10000);
CriterionResult c7_klein_audit(uint64_t seed, uint64_t draws = 100000);
CriterionResult c8_tail_bounds(uint64_t seed, int instances = 100, uint64_t draws = 2000);
CriterionResult c9_shift_count(uint64_t seed, int instances = 50);
CriterionResult c10_bench(uint64_t seed, int threads, std::vector<int> dims = {4, 5, 6, 7, 8, 9, 10});

}  // namespace suites

std::vector<ReportRecord> run_experiment(const ExperimentSpec& spec);

}  // namespace latgauss

#endif
