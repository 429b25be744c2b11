#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "darboux/errors.hpp"

namespace darboux {

// Distance to the next representable double above |x|, floored at the
// smallest denormal so slack never degenerates to zero.
inline double ulp_above(double x)
{
    const double a = std::fabs(x);
    const double next = std::nextafter(a, std::numeric_limits<double>::infinity());
    return std::max(next - a, std::numeric_limits<double>::denorm_min());
}

// All computed brackets are widened outward by this many ulps per
// accumulated term to absorb double-rounding without directed rounding.
inline constexpr double slack_ulps = 4.0;

inline double term_slack(double magnitude) { return slack_ulps * ulp_above(magnitude); }

// Left-to-right sum that books 4 ulps of outward slack per term, scaled by
// the larger of the term and the running total (covers the multiply that
// produced the term as well as the add).
struct SlackSum {
    double sum = 0.0;
    double slack = 0.0;

    void add(double term)
    {
        sum += term;
        slack += term_slack(std::max(std::fabs(sum), std::fabs(term)));
    }
};

struct ClosedInterval {
    double a = 0.0;
    double b = 0.0;

    ClosedInterval() = default;
    ClosedInterval(double lo, double hi) : a(lo), b(hi)
    {
        if (!(a <= b))
            throw ArgumentError("ClosedInterval: endpoints out of order");
    }

    double length() const { return b - a; }
    double midpoint() const { return a + 0.5 * (b - a); }
    bool degenerate() const { return a == b; }

    bool contains(double x, double tol = 0.0) const { return x >= a - tol && x <= b + tol; }
    bool contains(const ClosedInterval& j, double tol = 0.0) const
    {
        return j.a >= a - tol && j.b <= b + tol;
    }

    // Absolute tolerance used when subset/membership checks must absorb the
    // floating-point noise of upstream arithmetic (e.g. images of breakpoints).
    double snap_tol() const { return 1e-9 * (1.0 + std::max(std::fabs(a), std::fabs(b))); }

    double clamp(double x) const { return std::min(b, std::max(a, x)); }
};

inline bool operator==(const ClosedInterval& x, const ClosedInterval& y)
{
    return x.a == y.a && x.b == y.b;
}

// Interval traversed from start to end; start > end is allowed and flips the
// sign of any integral taken over it.
struct OrientedInterval {
    double start = 0.0;
    double end = 0.0;

    int sign() const { return start <= end ? +1 : -1; }
    bool degenerate() const { return start == end; }
    ClosedInterval carrier() const
    {
        return ClosedInterval(std::min(start, end), std::max(start, end));
    }
};

} // namespace darboux
