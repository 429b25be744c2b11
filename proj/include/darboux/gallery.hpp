#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "darboux/errors.hpp"
#include "darboux/function.hpp"
#include "darboux/interval.hpp"

namespace darboux {

namespace detail_poly {

// Coefficients highest degree first: {c_n, ..., c_0}.
using Coeffs = std::vector<double>;

inline double eval(const Coeffs& c, double x)
{
    double v = 0.0;
    for (double ck : c)
        v = v * x + ck;
    return v;
}

inline Coeffs derivative(const Coeffs& c)
{
    if (c.size() <= 1)
        return {};
    Coeffs d(c.size() - 1);
    const auto n = c.size() - 1;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        d[i] = c[i] * static_cast<double>(n - i);
    return d;
}

inline Coeffs antiderivative(const Coeffs& c)
{
    Coeffs f(c.size() + 1, 0.0);
    const auto n = c.size();
    for (std::size_t i = 0; i < n; ++i)
        f[i] = c[i] / static_cast<double>(n - i);
    return f;
}

inline Coeffs stripped(Coeffs c)
{
    std::size_t lead = 0;
    while (lead + 1 < c.size() && c[lead] == 0.0)
        ++lead;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lead));
    return c;
}

inline double bisect_root(const Coeffs& p, double u, double v)
{
    double fu = eval(p, u);
    for (int it = 0; it < 200; ++it) {
        const double m = u + 0.5 * (v - u);
        if (!(m > u) || !(m < v))
            break;
        const double fm = eval(p, m);
        if (fm == 0.0)
            return m;
        if ((fu < 0.0) == (fm < 0.0)) {
            u = m;
            fu = fm;
        } else {
            v = m;
        }
    }
    return u + 0.5 * (v - u);
}

// Ascending sign-change roots of p on [a, b], found by recursing on the
// derivative to obtain monotone pieces first.  Roots of even multiplicity
// carry no sign change and are irrelevant for range bounding.
inline std::vector<double> roots_on(const Coeffs& poly, const ClosedInterval& j)
{
    const Coeffs p = stripped(poly);
    std::vector<double> out;
    if (p.size() <= 1)
        return out;
    if (p.size() == 2) {
        const double r = -p[1] / p[0];
        if (j.contains(r))
            out.push_back(r);
        return out;
    }
    std::vector<double> knots = roots_on(derivative(p), j);
    knots.insert(knots.begin(), j.a);
    knots.push_back(j.b);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double u = knots[i];
        const double v = knots[i + 1];
        if (!(u < v))
            continue;
        const double fu = eval(p, u);
        const double fv = eval(p, v);
        if (fu == 0.0)
            out.push_back(u);
        else if ((fu < 0.0) != (fv <= 0.0) && fv != 0.0)
            out.push_back(bisect_root(p, u, v));
    }
    const double fb = eval(p, j.b);
    if (fb == 0.0)
        out.push_back(j.b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail_poly

namespace detail_thomae {

// sup over J of the Thomae function capped at denominator qmax: the largest
// 1/q over reduced fractions p/q in J.  Finite search, smallest q first.
// Membership is inflated by a hair so representation noise never drops a
// boundary fraction; the oracle stays sound.
inline double capped_sup(const ClosedInterval& j, long qmax)
{
    for (long q = 1; q <= qmax; ++q) {
        const double tiny = 1e-9;
        const auto p_lo = static_cast<long>(std::ceil(j.a * static_cast<double>(q) - tiny));
        const auto p_hi = static_cast<long>(std::floor(j.b * static_cast<double>(q) + tiny));
        for (long p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(std::labs(p), q) == 1)
                return 1.0 / static_cast<double>(q);
        }
    }
    return 0.0;
}

// Pointwise value at a double: every double is dyadic, so only reduced
// denominators 2^k can occur.  Non-dyadic rationals are not representable;
// the range oracle above is the authority for suprema over intervals.
inline double eval(double x, long qmax)
{
    if (x == std::floor(x))
        return 1.0; // integers are p/1
    int e = 0;
    const double m = std::frexp(std::fabs(x), &e);
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    int k = 53 - e;
    while (mant % 2 == 0 && k > 0) {
        mant /= 2;
        --k;
    }
    if (k <= 0 || k >= 63)
        return 0.0;
    const std::int64_t den = std::int64_t{1} << k;
    return den <= qmax ? 1.0 / static_cast<double>(den) : 0.0;
}

} // namespace detail_thomae

namespace detail_hash {

inline std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace detail_hash

struct GalleryEntry {
    std::string id;
    std::vector<double> params;
    RealFunction function;
    std::string notes;
};

// ---------------------------------------------------------------------------
// Constructors for the individual families.

inline RealFunction make_polynomial(const std::vector<double>& coeffs_high_first,
                                    const ClosedInterval& domain, std::string name = {})
{
    if (coeffs_high_first.empty())
        throw ArgumentError("polynomial: need at least one coefficient");
    const auto c = detail_poly::stripped(coeffs_high_first);
    if (name.empty()) {
        std::ostringstream os;
        os << "poly:";
        for (std::size_t i = 0; i < coeffs_high_first.size(); ++i)
            os << (i ? "," : "") << coeffs_high_first[i];
        name = os.str();
    }
    const auto anti = detail_poly::antiderivative(c);
    RealFunction::IntegralFn integral = [anti](const ClosedInterval& j) {
        return detail_poly::eval(anti, j.b) - detail_poly::eval(anti, j.a);
    };
    return RealFunction::piecewise_monotone(
        std::move(name), [c](double x) { return detail_poly::eval(c, x); }, domain,
        detail_poly::roots_on(detail_poly::derivative(c), domain), std::move(integral));
}

inline RealFunction make_sin(const ClosedInterval& domain)
{
    constexpr double pi = std::numbers::pi;
    std::vector<double> crit;
    const double half = pi / 2.0;
    for (auto k = static_cast<long>(std::floor((domain.a - half) / pi));
         half + static_cast<double>(k) * pi <= domain.b + 1.0; ++k) {
        const double c = half + static_cast<double>(k) * pi;
        if (c >= domain.a && c <= domain.b)
            crit.push_back(c);
    }
    return RealFunction::piecewise_monotone(
        "sin", [](double x) { return std::sin(x); }, domain, std::move(crit),
        [](const ClosedInterval& j) { return std::cos(j.a) - std::cos(j.b); });
}

inline RealFunction make_cos(const ClosedInterval& domain)
{
    constexpr double pi = std::numbers::pi;
    std::vector<double> crit;
    for (auto k = static_cast<long>(std::floor(domain.a / pi));
         static_cast<double>(k) * pi <= domain.b + 1.0; ++k) {
        const double c = static_cast<double>(k) * pi;
        if (c >= domain.a && c <= domain.b)
            crit.push_back(c);
    }
    return RealFunction::piecewise_monotone(
        "cos", [](double x) { return std::cos(x); }, domain, std::move(crit),
        [](const ClosedInterval& j) { return std::sin(j.b) - std::sin(j.a); });
}

// 0 for x <= c, 1 for x > c.
inline RealFunction make_step(double c, const ClosedInterval& domain)
{
    auto eval = [c](double x) { return x > c ? 1.0 : 0.0; };
    RealFunction::RangeFn rf = [c](const ClosedInterval& j) {
        if (j.b <= c)
            return Enclosure(0.0);
        if (j.a > c)
            return Enclosure(1.0);
        return Enclosure(0.0, 1.0);
    };
    RealFunction::IntegralFn integral = [c](const ClosedInterval& j) {
        return std::max(0.0, j.b - c) - std::max(0.0, j.a - c);
    };
    std::ostringstream os;
    os << "step:" << c;
    return RealFunction::from_range_fn(os.str(), std::move(eval), domain, std::move(rf),
                                       OracleKind::exact, 1.0, std::move(integral));
}

inline RealFunction make_abs(double c, const ClosedInterval& domain)
{
    std::ostringstream os;
    os << "abs:" << c;
    return RealFunction::piecewise_monotone(
        os.str(), [c](double x) { return std::fabs(x - c); }, domain, {c},
        [c](const ClosedInterval& j) {
            const auto F = [c](double x) { return 0.5 * (x - c) * std::fabs(x - c); };
            return F(j.b) - F(j.a);
        });
}

// x^p with p > 0, on domains with a >= 0; increasing, so endpoint-exact.
inline RealFunction make_pow(double p, const ClosedInterval& domain)
{
    if (!(p > 0.0))
        throw ArgumentError("pow: exponent must be positive");
    if (domain.a < 0.0)
        throw DomainError("pow: domain must start at 0 or later");
    std::ostringstream os;
    os << "pow:" << p;
    return RealFunction::piecewise_monotone(
        os.str(), [p](double x) { return std::pow(x, p); }, domain, {},
        [p](const ClosedInterval& j) {
            return (std::pow(j.b, p + 1.0) - std::pow(j.a, p + 1.0)) / (p + 1.0);
        });
}

// Thomae's function with denominators capped at qmax, which keeps the sup
// over any interval within reach of a finite search while the discontinuity
// set stays dense in scale.  The integral is 0: the function is nonzero at
// finitely many points per unit interval.
inline RealFunction make_thomae(long qmax, const ClosedInterval& domain)
{
    if (qmax < 1)
        throw ArgumentError("thomae: denominator cap must be at least 1");
    std::ostringstream os;
    os << "thomae:" << qmax;
    auto eval = [qmax](double x) { return detail_thomae::eval(x, qmax); };
    RealFunction::RangeFn rf = [qmax, eval](const ClosedInterval& j) {
        if (j.degenerate()) {
            const double v = eval(j.a);
            return Enclosure(v, v);
        }
        return Enclosure(0.0, detail_thomae::capped_sup(j, qmax));
    };
    return RealFunction::from_range_fn(os.str(), std::move(eval), domain, std::move(rf),
                                       OracleKind::exact, 1.0,
                                       [](const ClosedInterval&) { return 0.0; });
}

// Dirichlet-style indicator: 1 on a dense set, 0 on a dense complement,
// realized as a parity hash of the argument's representation so sampling at
// any resolution sees oscillation 1.  Rationality itself is degenerate on
// doubles (every double is rational), so this stands in for the classic
// non-integrable indicator.  Deliberately a sampled oracle.
inline RealFunction make_dirichlet(const ClosedInterval& domain)
{
    return RealFunction::sampled(
        "dirichlet",
        [](double x) {
            return (detail_hash::splitmix64(std::bit_cast<std::uint64_t>(x)) & 1u) ? 1.0 : 0.0;
        },
        domain, 1.0);
}

// ---------------------------------------------------------------------------
// String-id grammar, the CLI's only function-input mechanism:
//   poly:<c_n>,...,<c_0>   polynomial, coefficients highest degree first
//   sin | cos
//   step:<c>               0 for x <= c, 1 for x > c
//   abs:<c>                |x - c|
//   pow:<p>                x^p, p > 0
//   thomae:<qmax>
//   dirichlet

inline GalleryEntry make_gallery_entry(const std::string& id, const ClosedInterval& domain)
{
    const auto colon = id.find(':');
    const std::string head = id.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::istringstream in(id.substr(colon + 1));
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                params.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ArgumentError("gallery: bad numeric parameter in '" + id + "'");
            }
        }
        if (params.empty())
            throw ArgumentError("gallery: missing parameters in '" + id + "'");
    }

    GalleryEntry entry;
    entry.id = id;
    entry.params = params;
    if (head == "poly" && !params.empty()) {
        entry.function = make_polynomial(params, domain, id);
        entry.notes = "polynomial, exact oracle via derivative root isolation";
    } else if (head == "sin" && params.empty()) {
        entry.function = make_sin(domain);
        entry.notes = "sine, exact oracle via extrema";
    } else if (head == "cos" && params.empty()) {
        entry.function = make_cos(domain);
        entry.notes = "cosine, exact oracle via extrema";
    } else if (head == "step" && params.size() == 1) {
        entry.function = make_step(params[0], domain);
        entry.notes = "unit step, exact piecewise-constant oracle";
    } else if (head == "abs" && params.size() == 1) {
        entry.function = make_abs(params[0], domain);
        entry.notes = "absolute deviation, exact oracle via the kink";
    } else if (head == "pow" && params.size() == 1) {
        entry.function = make_pow(params[0], domain);
        entry.notes = "power function, monotone hence endpoint-exact";
    } else if (head == "thomae" && params.size() == 1) {
        entry.function = make_thomae(static_cast<long>(params[0]), domain);
        entry.notes = "Thomae variant with capped denominators, exact finite-search oracle";
    } else if (head == "dirichlet" && params.empty()) {
        entry.function = make_dirichlet(domain);
        entry.notes = "dense indicator on a sampled oracle; certificates stay heuristic";
    } else {
        throw ArgumentError("gallery: unknown function id '" + id + "'");
    }
    return entry;
}

inline RealFunction make_gallery_function(const std::string& id, const ClosedInterval& domain)
{
    return make_gallery_entry(id, domain).function;
}

} // namespace darboux
