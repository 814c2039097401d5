#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stlx {

/// Base class for all stlx exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed time interval in seconds. Used both for temporal-operator
/// windows [t1,t2] and for integral-predicate bounds [a,b]; the former
/// require lo >= 0 and hi >= lo, the latter only hi > lo (lo may be
/// negative to reach into the past).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }

    bool operator==(const Interval& o) const noexcept {
        return lo == o.lo && hi == o.hi;
    }
};

/// True if `seconds` is an integer multiple of `delta_t` up to a relative
/// tolerance of 1e-9.
inline bool divides_evenly(double seconds, double delta_t) {
    if (!(delta_t > 0.0)) return false;
    const double q = seconds / delta_t;
    const double r = std::round(q);
    return std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q));
}

/// Convert seconds to a step count. The caller must have checked
/// divisibility (validate does); throws otherwise.
inline std::int64_t steps_of(double seconds, double delta_t) {
    if (!divides_evenly(seconds, delta_t)) {
        throw Error("time bound " + std::to_string(seconds) +
                    " is not a multiple of delta_t = " + std::to_string(delta_t));
    }
    return static_cast<std::int64_t>(std::llround(seconds / delta_t));
}

}  // namespace stlx
