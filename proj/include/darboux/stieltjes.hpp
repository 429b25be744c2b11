#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "darboux/certify.hpp"
#include "darboux/enclosure.hpp"
#include "darboux/errors.hpp"
#include "darboux/function.hpp"
#include "darboux/integrator.hpp"
#include "darboux/interval.hpp"
#include "darboux/partition.hpp"
#include "darboux/sums.hpp"

namespace darboux {

// Phi(x) = anchor + int_[a,x] phi, tabulated at grid breakpoints with
// certified per-cell integral enclosures; between grid points queries widen
// by the Lipschitz bound M_phi * distance.  The pointwise bracket width at
// the far end is at most `tol`.
inline Integrator build_indefinite_integral(const RealFunction& phi, double a, double anchor,
                                            std::size_t grid_cells = 1024, double tol = 1e-8,
                                            std::size_t budget = default_cell_budget)
{
    if (!(tol > 0.0))
        throw ArgumentError("build_indefinite_integral: tolerance must be positive");
    if (grid_cells < 1)
        throw ArgumentError("build_indefinite_integral: need at least one grid cell");
    const ClosedInterval dom(a, phi.domain().b);
    if (!phi.domain().contains(dom, phi.domain().snap_tol()))
        throw DomainError("build_indefinite_integral: start point outside density domain");

    const Partition grid = Partition::uniform(dom, dom.degenerate() ? 1 : grid_cells);
    const double cell_tol = tol / static_cast<double>(std::max<std::size_t>(1, grid.cell_count()));
    const std::size_t cell_budget =
        std::max<std::size_t>(4096, budget / std::max<std::size_t>(1, grid.cell_count()));

    std::vector<double> xs(grid.breakpoints().begin(), grid.breakpoints().end());
    std::vector<Enclosure> values;
    values.reserve(xs.size());
    values.emplace_back(anchor);
    bool certified = phi.oracle_kind() != OracleKind::sampled;
    for (std::size_t k = 0; k < grid.cell_count(); ++k) {
        const auto piece = integral_enclosure(phi, grid.cell(k), cell_tol, cell_budget);
        if (!piece.converged())
            throw WidthExceededError(
                "build_indefinite_integral: grid cell enclosure did not reach tolerance",
                piece.bracket.width());
        certified = certified && piece.rigor == Rigor::certified;
        values.push_back(values.back() + piece.bracket);
    }
    if (xs.size() == 1) { // degenerate domain
        xs.push_back(xs.front());
        values.push_back(values.front());
    }
    return Integrator::from_table("int(" + phi.name() + ")", phi, anchor, std::move(xs),
                                  std::move(values), certified);
}

// Indefinite integral of phi, routed through the closed-form integral oracle
// when the density carries one and through the grid builder otherwise.
inline Integrator indefinite_integral(const RealFunction& phi, double a, double anchor,
                                      double tol = 1e-8)
{
    if (phi.closed_form_integral())
        return Integrator::from_closed_form_density(phi, a, anchor);
    return build_indefinite_integral(phi, a, anchor, 1024, tol);
}

// ---------------------------------------------------------------------------
// Transfer identity: U(f, Q) = U(f(Phi), Phi, P) for the induced partition Q,
// and the same for lower sums.  Both sides are computed along their own
// paths (plain sums over the image partition vs composed sums over P) and
// the report carries the observed gaps.

struct TransferReport {
    double lhs_upper = 0.0;
    double lhs_lower = 0.0;
    double rhs_upper = 0.0;
    double rhs_lower = 0.0;
    double max_abs_gap = 0.0;
    Rigor rigor = Rigor::certified;
};

inline TransferReport transfer_check(const RealFunction& f, const Integrator& phi,
                                     const Partition& p)
{
    const Partition q = induced_partition(p, phi);
    const auto lhs = stieltjes_sums(f, Integrator::identity(q.base()), q);
    const auto rhs = stieltjes_sums(compose_with(f, phi), phi, p);
    TransferReport r;
    r.lhs_upper = lhs.upper;
    r.lhs_lower = lhs.lower;
    r.rhs_upper = rhs.upper;
    r.rhs_lower = rhs.lower;
    r.max_abs_gap = std::max(std::fabs(lhs.upper - rhs.upper), std::fabs(lhs.lower - rhs.lower));
    r.rigor = combine(lhs.rigor, rhs.rigor);
    return r;
}

// ---------------------------------------------------------------------------
// Reduction gap bound: for Phi an indefinite integral of phi >= 0,
//
//   U(g phi, P) - L(g phi, P)
//       <= 2 M_g * sum_k osc(phi, I_k) |I_k| + (U(g, Phi, P) - L(g, Phi, P))
//
// and the same with the two gaps switched.  Sample-point slack is dropped:
// the sums use oracle suprema directly, which strengthens both inequalities,
// leaving only rounding slack on the right-hand side.

struct ReduceReport {
    double stieltjes_gap = 0.0; // U(g, Phi, P) - L(g, Phi, P)
    double riemann_gap = 0.0;   // U(g phi, P) - L(g phi, P)
    double osc_term = 0.0;      // sum_k osc(phi, I_k) |I_k|
    double slack = 0.0;
    bool bound16_ok = false;
    Rigor rigor = Rigor::certified;
    std::string note;
};

inline ReduceReport reduce_check(const RealFunction& g, const RealFunction& phi,
                                 const Integrator& Phi, const Partition& p)
{
    if (!effectively_nonnegative(phi.range(p.base())))
        throw PositivityError("reduce_check: density must be nonnegative");
    if (!Phi.density() || !Phi.density()->same_as(phi))
        throw ArgumentError("reduce_check: integrator was not built from this density");

    const Integrator id = Integrator::identity(p.base());
    const auto st = stieltjes_sums(g, Phi, p);
    const auto ri = stieltjes_sums(product(g, phi), id, p);
    const auto ph = stieltjes_sums(phi, id, p);

    ReduceReport r;
    r.stieltjes_gap = st.upper - st.lower;
    r.riemann_gap = ri.upper - ri.lower;
    r.osc_term = ph.osc_sum;
    r.slack = st.slack + ri.slack + ph.slack;
    r.rigor = combine(combine(st.rigor, ri.rigor), ph.rigor);
    const double mg = g.bound();
    const double allowance =
        r.slack + 1e-12 * (1.0 + std::fabs(r.riemann_gap) + std::fabs(r.stieltjes_gap));
    const bool forward = r.riemann_gap <= 2.0 * mg * r.osc_term + r.stieltjes_gap + allowance;
    const bool converse = r.stieltjes_gap <= 2.0 * mg * r.osc_term + r.riemann_gap + allowance;
    r.bound16_ok = forward && converse;
    r.note = "oracle suprema in place of sample points; epsilon slack dropped";
    return r;
}

// Certified bracket of int_I g dPhi by adaptive refinement of the Stieltjes
// sums.
inline IntegralEnclosure stieltjes_enclosure(const RealFunction& g, const Integrator& phi,
                                             const ClosedInterval& interval, double tol,
                                             std::size_t budget = default_cell_budget,
                                             StageTrace* trace = nullptr)
{
    return integral_enclosure(g, phi, interval, tol, budget, trace);
}

} // namespace darboux
