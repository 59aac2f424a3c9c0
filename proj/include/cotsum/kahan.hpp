#pragma once

#include <cmath>

namespace cotsum {

// Neumaier's variant of compensated summation. Unlike plain Kahan it also
// tracks the error when a term is larger than the running sum, which happens
// routinely in cotangent sweeps (terms near m*a = +-1 mod q reach ~q/pi).
template <typename T = double>
struct Kahan {
    T sum = 0;
    T comp = 0;

    void add(T x) {
        const T t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    T value() const { return sum + comp; }
};

} // namespace cotsum
