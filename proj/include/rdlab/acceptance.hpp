#pragma once

#include "rdlab/config.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace rdlab::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

const std::vector<int>& all_ids();

/// Runs one verification criterion against the given base configuration.
/// Tolerances are pinned in code; the base config supplies model/grid/solver
/// defaults only.
CriterionResult run_criterion(int id, const Config& base);

/// Runs the listed criteria, printing one PASS/FAIL line each; returns the
/// number of failures.
int run(const std::vector<int>& ids, const Config& base, std::FILE* out);

} // namespace rdlab::acceptance
