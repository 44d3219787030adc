#pragma once

// Check orchestration: every verification the library exposes, keyed by a
// stable check id, with the default tolerances pinned here.

#include <cstdint>
#include <string>
#include <vector>

#include "ebq/face_checks.hpp"

namespace ebq {

struct RunConfig {
    int N = 2;
    double q_re = 0.45;
    double q_im = 0.0;
    double r = 4.3;
    double c = 1.2;   // vertex checks force level 1 internally
    uint64_t seed = 7;
    int samples = 5;
    int max_terms = 4096;

    AlgebraParams params() const { return AlgebraParams(N, cd(q_re, q_im), cd(r), cd(c)); }
    TruncationPolicy policy() const { return TruncationPolicy(1e-16, max_terms, 0.95); }
};

// suite names: special, modes, exchange, face, dybe, repLR, vertex, all
std::vector<std::string> suite_names();
bool is_suite(const std::string& name);
std::vector<CheckReport> run_suite(const std::string& name, const RunConfig& config);
std::vector<std::string> all_check_ids();

}  // namespace ebq
