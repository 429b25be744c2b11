#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "darboux/errors.hpp"
#include "darboux/interval.hpp"

namespace darboux {

// Strictly increasing breakpoints x_0 < ... < x_n spanning a base interval.
// Breakpoints closer than 1e-12 * |base| are merged at construction, since
// images of nearby points under a computed map routinely collide.  A
// degenerate base [c, c] is represented by the single breakpoint {c} and has
// no cells.
class Partition {
public:
    Partition() : base_(0.0, 0.0), xs_{0.0} {}

    static Partition uniform(const ClosedInterval& base, std::size_t n)
    {
        if (n == 0)
            throw ArgumentError("uniform_partition: need at least one cell");
        if (base.degenerate())
            return Partition(base, {base.a});
        std::vector<double> xs(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n);
            xs[i] = base.a + t * (base.b - base.a);
        }
        xs.front() = base.a;
        xs.back() = base.b;
        return Partition(base, std::move(xs));
    }

    static Partition from_breakpoints(const ClosedInterval& base, std::vector<double> pts)
    {
        pts.push_back(base.a);
        pts.push_back(base.b);
        std::sort(pts.begin(), pts.end());
        const double tol = merge_tol(base);
        std::vector<double> xs;
        xs.reserve(pts.size());
        for (double x : pts) {
            if (x < base.a - base.snap_tol() || x > base.b + base.snap_tol())
                throw DomainError("Partition: breakpoint outside base interval");
            x = base.clamp(x);
            if (xs.empty() || x - xs.back() > tol)
                xs.push_back(x);
        }
        // Keep the exact endpoints even when a merge swallowed one.
        xs.front() = base.a;
        if (base.degenerate())
            xs.resize(1);
        else
            xs.back() = base.b;
        return Partition(base, std::move(xs));
    }

    const ClosedInterval& base() const { return base_; }
    std::span<const double> breakpoints() const { return xs_; }
    std::size_t cell_count() const { return xs_.size() - 1; }

    ClosedInterval cell(std::size_t k) const { return ClosedInterval(xs_[k], xs_[k + 1]); }

    std::vector<ClosedInterval> cells() const
    {
        std::vector<ClosedInterval> out;
        out.reserve(cell_count());
        for (std::size_t k = 0; k < cell_count(); ++k)
            out.push_back(cell(k));
        return out;
    }

    double mesh() const
    {
        double m = 0.0;
        for (std::size_t k = 0; k + 1 < xs_.size(); ++k)
            m = std::max(m, xs_[k + 1] - xs_[k]);
        return m;
    }

    // True if every breakpoint of this partition appears in `finer`.
    bool refined_by(const Partition& finer) const
    {
        const double tol = merge_tol(base_);
        std::size_t j = 0;
        for (double x : xs_) {
            while (j < finer.xs_.size() && finer.xs_[j] < x - tol)
                ++j;
            if (j == finer.xs_.size() || std::fabs(finer.xs_[j] - x) > tol)
                return false;
        }
        return true;
    }

private:
    Partition(const ClosedInterval& base, std::vector<double> xs)
        : base_(base), xs_(std::move(xs))
    {
    }

    static double merge_tol(const ClosedInterval& base) { return 1e-12 * base.length(); }

    ClosedInterval base_;
    std::vector<double> xs_;
};

inline Partition uniform_partition(const ClosedInterval& base, std::size_t n)
{
    return Partition::uniform(base, n);
}

inline Partition refine(const Partition& p, std::span<const double> points)
{
    const ClosedInterval base = p.base();
    for (double x : points) {
        if (!base.contains(x, base.snap_tol()))
            throw DomainError("refine: point outside base interval");
    }
    std::vector<double> xs(p.breakpoints().begin(), p.breakpoints().end());
    xs.insert(xs.end(), points.begin(), points.end());
    return Partition::from_breakpoints(base, std::move(xs));
}

inline Partition refine(const Partition& p, std::initializer_list<double> points)
{
    return refine(p, std::span<const double>(points.begin(), points.size()));
}

inline Partition common_refinement(const Partition& p, const Partition& q)
{
    if (!(p.base() == q.base()))
        throw BaseMismatch("common_refinement: base intervals differ");
    std::vector<double> xs(p.breakpoints().begin(), p.breakpoints().end());
    xs.insert(xs.end(), q.breakpoints().begin(), q.breakpoints().end());
    return Partition::from_breakpoints(p.base(), std::move(xs));
}

} // namespace darboux
