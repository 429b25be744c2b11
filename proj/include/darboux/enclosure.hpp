#pragma once

#include <algorithm>
#include <cmath>

#include "darboux/errors.hpp"
#include "darboux/interval.hpp"

namespace darboux {

// Whether a computed bracket is backed by sound range queries throughout
// (certified) or by finite sampling somewhere along the way (heuristic).
enum class Rigor { certified, heuristic };

inline Rigor combine(Rigor x, Rigor y)
{
    return (x == Rigor::heuristic || y == Rigor::heuristic) ? Rigor::heuristic
                                                            : Rigor::certified;
}

// Two-sided bracket [lo, hi].  Used both for function ranges over an
// interval and for integral values; for certified runs the exact quantity is
// guaranteed to lie inside.
struct Enclosure {
    double lo = 0.0;
    double hi = 0.0;

    Enclosure() = default;
    explicit Enclosure(double v) : lo(v), hi(v) {}
    Enclosure(double l, double h) : lo(l), hi(h)
    {
        if (!(lo <= hi))
            throw ArgumentError("Enclosure: lo > hi");
    }

    double width() const { return hi - lo; }
    double midpoint() const { return lo + 0.5 * (hi - lo); }
    double radius() const { return 0.5 * (hi - lo); }
    double magnitude() const { return std::max(std::fabs(lo), std::fabs(hi)); }

    bool contains(double v) const { return lo <= v && v <= hi; }
    bool sign_definite() const { return lo > 0.0 || hi < 0.0; }

    Enclosure widened(double ulps = slack_ulps) const
    {
        const double s = ulps * ulp_above(magnitude());
        return Enclosure(lo - s, hi + s);
    }
    Enclosure padded(double s) const { return Enclosure(lo - s, hi + s); }
};

// Nonnegative up to the noise the outward widening itself introduces.  Sign
// decisions at an exact zero (a density like 2x with inf 0) would otherwise
// flip on an ulp; the error admitted here is below the slack budget.
inline bool effectively_nonnegative(const Enclosure& e)
{
    return e.lo >= -1e-12 * (1.0 + e.magnitude());
}

inline bool overlap(const Enclosure& x, const Enclosure& y)
{
    return x.lo <= y.hi && y.lo <= x.hi;
}

inline Enclosure hull(const Enclosure& x, const Enclosure& y)
{
    return Enclosure(std::min(x.lo, y.lo), std::max(x.hi, y.hi));
}

inline Enclosure intersect(const Enclosure& x, const Enclosure& y)
{
    // Sound inputs always overlap; degrade to the hull if rounding ever
    // produces a gap instead of manufacturing an empty bracket.
    if (!overlap(x, y))
        return hull(x, y);
    return Enclosure(std::max(x.lo, y.lo), std::min(x.hi, y.hi));
}

inline Enclosure operator+(const Enclosure& x, const Enclosure& y)
{
    return Enclosure(x.lo + y.lo, x.hi + y.hi).widened();
}

inline Enclosure operator-(const Enclosure& x, const Enclosure& y)
{
    return Enclosure(x.lo - y.hi, x.hi - y.lo).widened();
}

inline Enclosure operator-(const Enclosure& x) { return Enclosure(-x.hi, -x.lo); }

// Product hull over all endpoint pairs.
inline Enclosure operator*(const Enclosure& x, const Enclosure& y)
{
    const double p1 = x.lo * y.lo;
    const double p2 = x.lo * y.hi;
    const double p3 = x.hi * y.lo;
    const double p4 = x.hi * y.hi;
    return Enclosure(std::min(std::min(p1, p2), std::min(p3, p4)),
                     std::max(std::max(p1, p2), std::max(p3, p4)))
        .widened();
}

inline Enclosure scale(const Enclosure& x, double c)
{
    return (c >= 0.0 ? Enclosure(c * x.lo, c * x.hi) : Enclosure(c * x.hi, c * x.lo))
        .widened();
}

} // namespace darboux
