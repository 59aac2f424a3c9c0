#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cotsum {

enum class VerifyLevel { fast, full };

struct VerifyResult {
    std::string name;
    bool passed = false;
    std::string detail; // worst case observed, or the failure description
};

// Re-derives the library's cross-evaluator identities and invariants at
// runtime. fast keeps every check to a couple of seconds; full widens the
// sweeps to the sizes the identities are specified at.
std::vector<VerifyResult> run_verify(VerifyLevel level, uint64_t seed = 1);

} // namespace cotsum
