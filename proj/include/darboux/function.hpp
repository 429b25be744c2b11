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
#include "darboux/interval.hpp"

namespace darboux {

// How a function's range oracle answers queries.
//
//   exact   - range(J) is [inf_J, sup_J] up to outward ulp widening
//   outer   - range(J) is a sound superset of [inf_J, sup_J] (interval
//             products, compositions through bracketed maps)
//   sampled - range(J) is the hull of finitely many samples; sound only
//             heuristically, and everything derived from it is flagged so
enum class OracleKind { exact, outer, sampled };

inline Rigor rigor_of(OracleKind k)
{
    return k == OracleKind::sampled ? Rigor::heuristic : Rigor::certified;
}

inline OracleKind weaker(OracleKind x, OracleKind y)
{
    if (x == OracleKind::sampled || y == OracleKind::sampled)
        return OracleKind::sampled;
    if (x == OracleKind::outer || y == OracleKind::outer)
        return OracleKind::outer;
    return OracleKind::exact;
}

// A range enclosure is just a bracket; the alias keeps call sites honest
// about which role a bracket plays.
using RangeEnclosure = Enclosure;

// Bounded real function on a closed interval: pointwise evaluation, a
// declared bound M with |f| <= M on the domain, a per-interval range oracle,
// and optionally a closed-form integral used as a test oracle.
//
// Handles are immutable values; evaluation and range queries are pure and
// safe to call concurrently.
class RealFunction {
public:
    using Eval = std::function<double(double)>;
    using RangeFn = std::function<Enclosure(const ClosedInterval&)>;
    using IntegralFn = std::function<double(const ClosedInterval&)>;

    RealFunction() = default;

    double operator()(double x) const
    {
        const auto& im = impl();
        if (!im.domain.contains(x, im.domain.snap_tol()))
            throw DomainError("evaluate: point outside domain of " + im.name);
        return im.eval(im.domain.clamp(x));
    }

    Enclosure range(const ClosedInterval& j) const
    {
        const auto& im = impl();
        if (!im.domain.contains(j, im.domain.snap_tol()))
            throw DomainError("range: interval outside domain of " + im.name);
        return im.range_fn(ClosedInterval(im.domain.clamp(j.a), im.domain.clamp(j.b)));
    }

    const ClosedInterval& domain() const { return impl().domain; }
    double bound() const { return impl().bound; }
    OracleKind oracle_kind() const { return impl().kind; }
    const std::optional<IntegralFn>& closed_form_integral() const { return impl().integral; }
    const std::string& name() const { return impl().name; }

    bool valid() const { return impl_ != nullptr; }
    bool same_as(const RealFunction& other) const { return impl_ == other.impl_; }

    static RealFunction from_range_fn(std::string name, Eval eval, ClosedInterval domain,
                                      RangeFn range_fn, OracleKind kind, double bound,
                                      std::optional<IntegralFn> integral = {})
    {
        if (!(bound >= 0.0))
            throw ArgumentError("RealFunction: declared bound must be nonnegative");
        auto im = std::make_shared<Impl>();
        im->name = std::move(name);
        im->eval = std::move(eval);
        im->domain = domain;
        im->range_fn = std::move(range_fn);
        im->kind = kind;
        im->bound = bound;
        im->integral = std::move(integral);
        RealFunction f;
        f.impl_ = std::move(im);
        return f;
    }

    // Exact oracle for a continuous function that is monotone between
    // consecutive entries of `critical_points` (interior extrema and kinks).
    // sup/inf over J are then attained at J's endpoints or at critical
    // points inside J; the result is widened outward to stay sound when a
    // critical point is representable only to an ulp.
    static RealFunction piecewise_monotone(std::string name, Eval eval, ClosedInterval domain,
                                           std::vector<double> critical_points,
                                           std::optional<IntegralFn> integral = {},
                                           std::optional<double> declared_bound = {})
    {
        std::sort(critical_points.begin(), critical_points.end());
        auto ev = eval; // copy for the closure
        RangeFn rf = [ev, critical_points](const ClosedInterval& j) {
            double lo = ev(j.a);
            double hi = lo;
            const auto consider = [&](double x) {
                const double v = ev(x);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            };
            consider(j.b);
            const double tol = slack_ulps * ulp_above(std::max(std::fabs(j.a), std::fabs(j.b)));
            for (double c : critical_points) {
                if (c >= j.a - tol && c <= j.b + tol)
                    consider(std::min(j.b, std::max(j.a, c)));
            }
            return Enclosure(lo, hi).widened();
        };
        const double bound =
            declared_bound ? *declared_bound : rf(domain).widened().magnitude();
        return from_range_fn(std::move(name), std::move(eval), domain, std::move(rf),
                             OracleKind::exact, bound, std::move(integral));
    }

    // Heuristic oracle: hull of `n_samples` evaluations on an inclusive
    // uniform grid over the queried interval.
    static RealFunction sampled(std::string name, Eval eval, ClosedInterval domain, double bound,
                                int n_samples = 64, std::optional<IntegralFn> integral = {})
    {
        if (n_samples < 2)
            throw ArgumentError("RealFunction::sampled: need at least 2 samples");
        auto ev = eval;
        RangeFn rf = [ev, n_samples](const ClosedInterval& j) {
            double lo = ev(j.a);
            double hi = lo;
            for (int i = 1; i < n_samples; ++i) {
                const double t = static_cast<double>(i) / (n_samples - 1);
                const double v = ev(j.a + t * (j.b - j.a));
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            return Enclosure(lo, hi);
        };
        return from_range_fn(std::move(name), std::move(eval), domain, std::move(rf),
                             OracleKind::sampled, bound, std::move(integral));
    }

private:
    struct Impl {
        std::string name;
        Eval eval;
        ClosedInterval domain;
        RangeFn range_fn;
        OracleKind kind = OracleKind::sampled;
        double bound = 0.0;
        std::optional<IntegralFn> integral;
    };

    const Impl& impl() const
    {
        if (!impl_)
            throw ArgumentError("RealFunction: empty handle");
        return *impl_;
    }

    std::shared_ptr<const Impl> impl_;
};

inline Enclosure eval_range(const RealFunction& f, const ClosedInterval& j)
{
    return f.range(j);
}

inline double oscillation(const RealFunction& f, const ClosedInterval& j)
{
    return f.range(j).width();
}

inline RealFunction negate(const RealFunction& f)
{
    auto integral = f.closed_form_integral();
    std::optional<RealFunction::IntegralFn> neg_integral;
    if (integral)
        neg_integral = [g = *integral](const ClosedInterval& j) { return -g(j); };
    return RealFunction::from_range_fn(
        "-(" + f.name() + ")", [f](double x) { return -f(x); }, f.domain(),
        [f](const ClosedInterval& j) { return -f.range(j); }, f.oracle_kind(), f.bound(),
        std::move(neg_integral));
}

// Pointwise product with a hull-of-products range oracle.  Sound whenever
// both factors are sound, but never tight, hence `outer` at best.
inline RealFunction product(const RealFunction& f, const RealFunction& g)
{
    const ClosedInterval df = f.domain();
    const ClosedInterval dg = g.domain();
    const double lo = std::max(df.a, dg.a);
    const double hi = std::min(df.b, dg.b);
    if (!(lo <= hi))
        throw DomainError("product: domains do not overlap");
    const OracleKind kind = weaker(OracleKind::outer, weaker(f.oracle_kind(), g.oracle_kind()));
    return RealFunction::from_range_fn(
        "(" + f.name() + ")*(" + g.name() + ")",
        [f, g](double x) { return f(x) * g(x); }, ClosedInterval(lo, hi),
        [f, g](const ClosedInterval& j) { return f.range(j) * g.range(j); }, kind,
        f.bound() * g.bound());
}

// y -> f(-y) on the mirrored domain.
inline RealFunction reflect(const RealFunction& f)
{
    const ClosedInterval dom(-f.domain().b, -f.domain().a);
    auto integral = f.closed_form_integral();
    std::optional<RealFunction::IntegralFn> refl_integral;
    if (integral)
        refl_integral = [g = *integral](const ClosedInterval& j) {
            return g(ClosedInterval(-j.b, -j.a));
        };
    return RealFunction::from_range_fn(
        "(" + f.name() + ")(-y)", [f](double x) { return f(-x); }, dom,
        [f](const ClosedInterval& j) { return f.range(ClosedInterval(-j.b, -j.a)); },
        f.oracle_kind(), f.bound(), std::move(refl_integral));
}

inline bool nonnegative_on(const RealFunction& f, const ClosedInterval& j)
{
    return f.range(j).lo >= 0.0;
}

inline bool strictly_positive_on(const RealFunction& f, const ClosedInterval& j)
{
    return f.range(j).lo > 0.0;
}

} // namespace darboux
