#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace mitl {

// Exact nonnegative rational time values.  Region membership and
// fractional-part comparisons must be decidable, so no floating point.
using TimePoint = boost::rational<long long>;

inline TimePoint tp(long long num, long long den = 1) { return TimePoint(num, den); }

inline long long tp_floor(const TimePoint& t) {
    // values are nonnegative throughout
    return t.numerator() / t.denominator();
}

inline bool tp_is_integer(const TimePoint& t) { return t.denominator() == 1; }

inline TimePoint tp_frac(const TimePoint& t) { return t - TimePoint(tp_floor(t)); }

inline std::string tp_text(const TimePoint& t) {
    if (t.denominator() == 1) return std::to_string(t.numerator());
    return std::to_string(t.numerator()) + "/" + std::to_string(t.denominator());
}

}  // namespace mitl
