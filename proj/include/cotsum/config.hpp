#pragma once

#include <cstdint>

#include "cotsum/cotangent.hpp"
#include "cotsum/estermann.hpp"

namespace cotsum {

inline constexpr const char* kVersion = "1.0.0";

enum class OutputFormat { csv, json };

// Global knobs shared by every command; defaults are echoed into output
// metadata so runs stay reproducible from the files alone.
struct RunConfig {
    Precision precision = Precision::dbl;
    int64_t sieve_cap = kDefaultSieveCap;
    int threads = 1;
    uint64_t seed = 1;
    OutputFormat format = OutputFormat::csv;
};

} // namespace cotsum
