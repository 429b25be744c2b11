#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "darboux/enclosure.hpp"
#include "darboux/errors.hpp"
#include "darboux/function.hpp"
#include "darboux/interval.hpp"
#include "darboux/partition.hpp"

namespace darboux {

// Continuous integrator Phi used as the weight of Riemann-Stieltjes sums and
// as the substitution map.  Point values are known only as certified
// brackets; evaluate() returns the bracket midpoint.  Increments Phi(v)-Phi(u)
// get their own, usually much tighter, brackets: for an integrator carrying a
// density phi the increment is an integral of phi over [u, v] and is bounded
// through phi's range oracle, so its width shrinks with the cell and sums
// against Phi stay convergent.
class Integrator {
public:
    Integrator() = default;

    double operator()(double x) const { return enclosure(x).midpoint(); }

    Enclosure enclosure(double x) const
    {
        const auto& im = impl();
        if (!im.domain.contains(x, im.domain.snap_tol()))
            throw DomainError("Integrator: point outside domain of " + im.name);
        x = im.domain.clamp(x);
        switch (im.kind) {
        case Kind::identity:
            return Enclosure(x);
        case Kind::exact_map:
            return Enclosure(im.map(x)).widened();
        case Kind::antiderivative:
            return Enclosure(im.anchor + (im.map(x) - im.map_at_a)).widened();
        case Kind::table:
            return table_enclosure(im, x);
        }
        throw ArgumentError("Integrator: bad kind");
    }

    // Bracket of Phi(v) - Phi(u) for u <= v.
    Enclosure increment(double u, double v) const
    {
        const auto& im = impl();
        if (!(u <= v))
            throw ArgumentError("Integrator::increment: endpoints out of order");
        Enclosure d(0.0);
        switch (im.kind) {
        case Kind::identity:
            d = Enclosure(v - u).widened();
            break;
        case Kind::exact_map:
            d = Enclosure(im.map(v) - im.map(u)).widened();
            break;
        case Kind::antiderivative:
            d = Enclosure(im.map(v) - im.map(u)).widened();
            break;
        case Kind::table: {
            const Enclosure eu = enclosure(u);
            const Enclosure ev = enclosure(v);
            d = Enclosure(ev.lo - eu.hi, ev.hi - eu.lo).widened();
            break;
        }
        }
        if (im.density) {
            // Increment is the integral of the density over [u, v].
            const Enclosure r = im.density->range(ClosedInterval(u, v));
            d = intersect(d, scale(r, v - u));
        }
        if (im.nondecreasing)
            d = Enclosure(std::max(0.0, d.lo), std::max(0.0, d.hi));
        return d;
    }

    // Bracket of the range {Phi(x) : x in J}.  For a sign-changing density
    // the endpoint brackets alone say little about interior excursions, so
    // the query walks subdivision pieces: on each piece Phi stays inside the
    // endpoint hull plus the one-sided integral bound of the density there.
    // Pieces scale with the queried fraction of the domain, which keeps
    // per-cell queries at a single piece.
    Enclosure range_over(const ClosedInterval& j) const
    {
        const auto& im = impl();
        if (im.nondecreasing)
            return Enclosure(enclosure(j.a).lo, enclosure(j.b).hi);
        if (!im.density)
            throw ArgumentError("Integrator: range query needs monotonicity or a density");
        const double frac = im.domain.degenerate() ? 0.0 : j.length() / im.domain.length();
        const std::size_t pieces =
            1 + std::min<std::size_t>(127, static_cast<std::size_t>(128.0 * frac));
        Enclosure total(enclosure(j.a).lo, enclosure(j.a).hi);
        double left = j.a;
        Enclosure eleft = enclosure(left);
        for (std::size_t i = 0; i < pieces; ++i) {
            const double t = static_cast<double>(i + 1) / static_cast<double>(pieces);
            const double right = (i + 1 == pieces) ? j.b : j.a + t * j.length();
            if (!(right > left))
                continue;
            const Enclosure eright = enclosure(right);
            const Enclosure r = im.density->range(ClosedInterval(left, right));
            const double w = right - left;
            // Phi(x) = Phi(left) + int_[left,x] phi, and from the right
            // symmetrically; each anchors the excursion one-sidedly.
            const Enclosure from_l(eleft.lo + std::min(0.0, r.lo * w),
                                   eleft.hi + std::max(0.0, r.hi * w));
            const Enclosure from_r(eright.lo - std::max(0.0, r.hi * w),
                                   eright.hi - std::min(0.0, r.lo * w));
            total = hull(total, intersect(from_l, from_r));
            left = right;
            eleft = eright;
        }
        return total.widened();
    }

    const ClosedInterval& domain() const { return impl().domain; }
    const std::optional<RealFunction>& density() const { return impl().density; }
    double anchor() const { return impl().anchor; }
    bool exact_points() const { return impl().kind != Kind::table; }
    bool certified() const { return impl().certified; }
    bool nondecreasing() const { return impl().nondecreasing; }
    const std::string& name() const { return impl().name; }
    bool valid() const { return impl_ != nullptr; }

    static Integrator identity(const ClosedInterval& domain)
    {
        auto im = std::make_shared<Impl>();
        im->name = "x";
        im->kind = Kind::identity;
        im->domain = domain;
        im->anchor = domain.a;
        im->nondecreasing = true;
        im->certified = true;
        return Integrator(std::move(im));
    }

    // Closed-form nondecreasing map evaluated exactly at points (x^2 on
    // [0, inf), x^3 + x, ...).  Monotonicity is declared by the caller and
    // cross-checked wherever induced partitions are built.
    static Integrator from_map(std::string name, std::function<double(double)> map,
                               const ClosedInterval& domain)
    {
        auto im = std::make_shared<Impl>();
        im->name = std::move(name);
        im->kind = Kind::exact_map;
        im->domain = domain;
        im->map = std::move(map);
        im->anchor = im->map(domain.a);
        im->nondecreasing = true;
        im->certified = true;
        return Integrator(std::move(im));
    }

    // Indefinite integral of a density with a closed-form integral oracle:
    // Phi(x) = anchor + int_[a,x] phi, evaluated through the oracle.
    static Integrator from_closed_form_density(const RealFunction& phi, double a, double anchor)
    {
        const ClosedInterval dom(a, phi.domain().b);
        if (!phi.domain().contains(dom, phi.domain().snap_tol()))
            throw DomainError("Integrator: start point outside density domain");
        if (!phi.closed_form_integral())
            throw ArgumentError("Integrator: density has no closed-form integral");
        auto F = *phi.closed_form_integral();
        auto im = std::make_shared<Impl>();
        im->name = "int(" + phi.name() + ")";
        im->kind = Kind::antiderivative;
        im->domain = dom;
        im->map = [F, a](double x) { return F(ClosedInterval(a, std::max(a, x))); };
        im->map_at_a = 0.0;
        im->anchor = anchor;
        im->density = phi;
        im->nondecreasing = effectively_nonnegative(phi.range(dom));
        im->certified = phi.oracle_kind() != OracleKind::sampled;
        return Integrator(std::move(im));
    }

    // Table of certified brackets at grid points, interpolated between grid
    // points with the density's declared bound as a Lipschitz constant.
    // The table is built once (see build_indefinite_integral) and immutable.
    static Integrator from_table(std::string name, const RealFunction& phi, double anchor,
                                 std::vector<double> grid, std::vector<Enclosure> values,
                                 bool certified)
    {
        if (grid.size() != values.size() || grid.size() < 2)
            throw ArgumentError("Integrator::from_table: bad table");
        auto im = std::make_shared<Impl>();
        im->name = std::move(name);
        im->kind = Kind::table;
        im->domain = ClosedInterval(grid.front(), grid.back());
        im->anchor = anchor;
        im->density = phi;
        im->grid = std::move(grid);
        im->values = std::move(values);
        im->nondecreasing = effectively_nonnegative(phi.range(im->domain));
        im->certified = certified && phi.oracle_kind() != OracleKind::sampled;
        return Integrator(std::move(im));
    }

private:
    enum class Kind { identity, exact_map, antiderivative, table };

    struct Impl {
        std::string name;
        Kind kind = Kind::identity;
        ClosedInterval domain;
        std::function<double(double)> map; // exact_map: Phi; antiderivative: int_[a,x] phi
        double map_at_a = 0.0;
        double anchor = 0.0;
        std::optional<RealFunction> density;
        std::vector<double> grid;
        std::vector<Enclosure> values;
        bool nondecreasing = false;
        bool certified = false;
    };

    static Enclosure table_enclosure(const Impl& im, double x)
    {
        const auto it = std::upper_bound(im.grid.begin(), im.grid.end(), x);
        const std::size_t hi_idx =
            std::min(im.grid.size() - 1,
                     static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - im.grid.begin())));
        const std::size_t lo_idx = hi_idx - 1;
        const double dl = x - im.grid[lo_idx];
        const double dr = im.grid[hi_idx] - x;
        const double m = im.density->bound();
        // Widen from the nearest grid point by the Lipschitz bound M_phi * d.
        Enclosure e = dl <= dr ? im.values[lo_idx].padded(m * dl) : im.values[hi_idx].padded(m * dr);
        if (im.nondecreasing)
            e = intersect(e, Enclosure(im.values[lo_idx].lo, im.values[hi_idx].hi));
        return e.widened();
    }

    explicit Integrator(std::shared_ptr<const Impl> im) : impl_(std::move(im)) {}

    const Impl& impl() const
    {
        if (!impl_)
            throw ArgumentError("Integrator: empty handle");
        return *impl_;
    }

    std::shared_ptr<const Impl> impl_;
};

// f after Phi.  Exact when f is exact and Phi is nondecreasing with exact
// point values; a sound outer oracle when everything is certified; sampled
// otherwise.
inline RealFunction compose_with(const RealFunction& f, const Integrator& phi)
{
    const Enclosure image = phi.range_over(phi.domain());
    const ClosedInterval fd = f.domain();
    if (!fd.contains(ClosedInterval(image.lo, image.hi), fd.snap_tol()))
        throw DomainError("compose_with: range of integrator leaves function domain");

    OracleKind kind = OracleKind::outer;
    if (f.oracle_kind() == OracleKind::sampled || !phi.certified())
        kind = OracleKind::sampled;
    else if (f.oracle_kind() == OracleKind::exact && phi.exact_points() && phi.nondecreasing())
        kind = OracleKind::exact;

    return RealFunction::from_range_fn(
        f.name() + "(" + phi.name() + ")", [f, phi](double x) { return f(phi(x)); },
        phi.domain(),
        [f, phi](const ClosedInterval& j) {
            const Enclosure r = phi.range_over(j);
            const ClosedInterval fd = f.domain();
            return f.range(ClosedInterval(fd.clamp(r.lo), fd.clamp(r.hi)));
        },
        kind, f.bound());
}

// Image partition {Phi(x_k)} of Phi over P's base, with collapsed duplicates;
// cells on which Phi is constant disappear.
inline Partition induced_partition(const Partition& p, const Integrator& phi)
{
    const auto xs = p.breakpoints();
    std::vector<Enclosure> es;
    es.reserve(xs.size());
    for (double x : xs)
        es.push_back(phi.enclosure(x));

    std::vector<double> ys(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k)
        ys[k] = es[k].midpoint();
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (es[k + 1].hi < es[k].lo) // a certain decrease, not rounding noise
            throw MonotonicityError("induced_partition: integrator decreases on base");
        if (ys[k + 1] < ys[k])
            ys[k + 1] = ys[k];
    }
    if (ys.empty())
        throw ArgumentError("induced_partition: empty partition");
    const ClosedInterval image(ys.front(), ys.back());
    return Partition::from_breakpoints(image, std::move(ys));
}

} // namespace darboux
