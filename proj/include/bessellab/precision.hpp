#ifndef BESSELLAB_PRECISION_HPP
#define BESSELLAB_PRECISION_HPP

#include <cmath>
#include "bessellab/exceptions.hpp"

namespace bessellab {

// Requested accuracy for a numerical evaluation.  target_digits is the number
// of decimal digits the caller wants certified; guard_digits is extra working
// headroom absorbed internally and never reported.
struct Precision {
    long target_digits = 30;
    long guard_digits = 10;

    Precision() = default;
    explicit Precision(long target, long guard = 10)
        : target_digits(target), guard_digits(guard) {
        if (target_digits < 1 || guard_digits < 1)
            throw DomainError("Precision: target_digits and guard_digits must be >= 1");
    }

    // Working mantissa size in bits covering target+guard decimal digits.
    long bits() const {
        return static_cast<long>(
            std::ceil(static_cast<double>(target_digits + guard_digits) * 3.3219280948873623) + 4);
    }

    Precision with_extra_digits(long d) const {
        return Precision(target_digits + d, guard_digits);
    }
};

} // namespace bessellab

#endif
