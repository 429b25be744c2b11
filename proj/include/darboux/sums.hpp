#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "darboux/enclosure.hpp"
#include "darboux/errors.hpp"
#include "darboux/function.hpp"
#include "darboux/integrator.hpp"
#include "darboux/interval.hpp"
#include "darboux/partition.hpp"

namespace darboux {

namespace detail {

// sup/inf of {t * d : d in D}.
inline double scaled_hi(double t, const Enclosure& d) { return t >= 0.0 ? t * d.hi : t * d.lo; }
inline double scaled_lo(double t, const Enclosure& d) { return t >= 0.0 ? t * d.lo : t * d.hi; }

// Certified per-cell bounds of int_cell f dPhi for nondecreasing Phi:
// the increment bracket is consumed adversarially so the upper term stays an
// upper bound even though Phi itself is only known inside a bracket.
struct CellTerms {
    double upper; // >= (sup_cell f) * dPhi
    double lower; // <= (inf_cell f) * dPhi
    double osc;   // >= osc(f, cell) * dPhi
};

inline CellTerms cell_terms(const RealFunction& f, const Integrator& phi,
                            const ClosedInterval& cell)
{
    const Enclosure r = f.range(cell);
    const Enclosure d = phi.increment(cell.a, cell.b);
    return CellTerms{scaled_hi(r.hi, d), scaled_lo(r.lo, d), (r.hi - r.lo) * d.hi};
}

} // namespace detail

// One pass over the cells of P producing all three sums together with the
// accumulated outward slack.  upper/lower are already widened outward.
struct SumsBreakdown {
    double upper = 0.0;
    double lower = 0.0;
    double osc_sum = 0.0;
    double slack = 0.0;
    Rigor rigor = Rigor::certified;
};

inline SumsBreakdown stieltjes_sums(const RealFunction& f, const Integrator& phi,
                                    const Partition& p)
{
    if (!phi.nondecreasing())
        throw MonotonicityError("stieltjes_sums: integrator must be nondecreasing");
    SlackSum up, low, osc;
    Rigor rigor = combine(rigor_of(f.oracle_kind()),
                          phi.certified() ? Rigor::certified : Rigor::heuristic);
    for (std::size_t k = 0; k < p.cell_count(); ++k) {
        const auto t = detail::cell_terms(f, phi, p.cell(k));
        up.add(t.upper);
        low.add(t.lower);
        osc.add(t.osc);
    }
    SumsBreakdown out;
    out.slack = up.slack + low.slack;
    out.upper = up.sum + up.slack;
    out.lower = low.sum - low.slack;
    out.osc_sum = osc.sum + osc.slack;
    out.rigor = rigor;
    return out;
}

inline double upper_sum(const RealFunction& f, const Integrator& phi, const Partition& p)
{
    return stieltjes_sums(f, phi, p).upper;
}

inline double lower_sum(const RealFunction& f, const Integrator& phi, const Partition& p)
{
    return stieltjes_sums(f, phi, p).lower;
}

inline double oscillation_sum(const RealFunction& f, const Integrator& phi, const Partition& p)
{
    return stieltjes_sums(f, phi, p).osc_sum;
}

struct DarbouxSums {
    double upper = 0.0;
    double lower = 0.0;
    std::size_t partition_size = 0;
};

inline DarbouxSums darboux_sums(const RealFunction& f, const Integrator& phi, const Partition& p)
{
    const auto s = stieltjes_sums(f, phi, p);
    return DarbouxSums{s.upper, s.lower, p.cell_count()};
}

// Plain Riemann sums (Phi = x).
inline double upper_sum(const RealFunction& f, const Partition& p)
{
    return upper_sum(f, Integrator::identity(p.base()), p);
}

inline double lower_sum(const RealFunction& f, const Partition& p)
{
    return lower_sum(f, Integrator::identity(p.base()), p);
}

} // namespace darboux
