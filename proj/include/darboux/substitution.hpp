#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "darboux/certify.hpp"
#include "darboux/enclosure.hpp"
#include "darboux/errors.hpp"
#include "darboux/function.hpp"
#include "darboux/gallery.hpp"
#include "darboux/integrator.hpp"
#include "darboux/interval.hpp"
#include "darboux/partition.hpp"
#include "darboux/stieltjes.hpp"
#include "darboux/sums.hpp"

namespace darboux {

// ---------------------------------------------------------------------------
// Oriented integrals.  The Riemann integral is oriented: traversing the
// interval backwards flips the sign, and a degenerate interval integrates
// to zero.

inline IntegralEnclosure oriented_integral(const RealFunction& f, const OrientedInterval& j,
                                           double tol, std::size_t budget = default_cell_budget,
                                           StageTrace* trace = nullptr)
{
    if (j.degenerate()) {
        IntegralEnclosure out;
        out.bracket = Enclosure(0.0).widened();
        out.status = EncloseStatus::converged;
        out.rigor = rigor_of(f.oracle_kind());
        if (trace)
            trace->push_back({0, out.bracket.lo, out.bracket.hi});
        return out;
    }
    const std::size_t trace_start = trace ? trace->size() : 0;
    IntegralEnclosure out = integral_enclosure(f, j.carrier(), tol, budget, trace);
    if (j.sign() < 0) {
        out.bracket = -out.bracket;
        if (trace) {
            for (std::size_t i = trace_start; i < trace->size(); ++i) {
                auto& s = (*trace)[i];
                const double lo = -s.hi;
                s.hi = -s.lo;
                s.lo = lo;
            }
        }
    }
    return out;
}

// Oriented integral between endpoints known only inside brackets: integrate
// between the midpoints, then pad by M_f times the endpoint radii, which
// bounds how far the integral can move when an endpoint moves.
inline IntegralEnclosure oriented_integral_between(const RealFunction& f, const Enclosure& pa,
                                                   const Enclosure& pb, double tol,
                                                   std::size_t budget = default_cell_budget,
                                                   StageTrace* trace = nullptr)
{
    const ClosedInterval fd = f.domain();
    const double u = fd.clamp(pa.midpoint());
    const double v = fd.clamp(pb.midpoint());
    const double pad = f.bound() * (pa.radius() + pb.radius());
    const std::size_t trace_start = trace ? trace->size() : 0;
    IntegralEnclosure out = oriented_integral(f, OrientedInterval{u, v}, tol, budget, trace);
    out.bracket = out.bracket.padded(pad);
    if (trace) {
        for (std::size_t i = trace_start; i < trace->size(); ++i) {
            (*trace)[i].lo -= pad;
            (*trace)[i].hi += pad;
        }
    }
    return out;
}

namespace detail {

// One range query, then the full driver only if the crude one-cell bound is
// not already inside tolerance.  The per-cell ledger integrals hit this fast
// path almost always.
inline Enclosure quick_oriented_between(const RealFunction& f, const Enclosure& pa,
                                        const Enclosure& pb, double tol, std::size_t budget)
{
    const ClosedInterval fd = f.domain();
    const double u = fd.clamp(pa.midpoint());
    const double v = fd.clamp(pb.midpoint());
    const double pad = f.bound() * (pa.radius() + pb.radius());
    if (u == v)
        return Enclosure(0.0).widened().padded(pad);
    const ClosedInterval carrier(std::min(u, v), std::max(u, v));
    const Enclosure crude = scale(f.range(carrier), carrier.length());
    if (crude.width() <= tol) {
        const Enclosure oriented = (v >= u) ? crude : -crude;
        return oriented.padded(pad);
    }
    return oriented_integral_between(f, pa, pb, tol, budget).bracket;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Cell model for the substitution integrand f(Phi) * phi.  On cells where
// phi is sign-definite the integral bracket couples the range of f(Phi) with
// the increment of Phi, whose bracket is an ulp wide for closed-form
// integrators; that keeps the per-cell width at osc(f(Phi)) * |dPhi| instead
// of the much larger hull-product width, and tight tolerances stay within
// cell budgets.  Oscillation terms (certificates, ledger rows) always use
// the plain-length hull-product bound, matching how the classification
// argument measures them.
inline CellModel substitution_cell_model(const RealFunction& f_comp, const RealFunction& phi,
                                         const Integrator& Phi)
{
    return [f_comp, phi, Phi](const ClosedInterval& cell) {
        const double w = cell.length();
        const Enclosure r = phi.range(cell);
        const Enclosure fr = f_comp.range(cell);
        CellBounds out;
        out.osc = (fr * r).width() * w;
        if (r.lo >= 0.0) {
            const Enclosure d = Phi.increment(cell.a, cell.b);
            out.lb = detail::scaled_lo(fr.lo, d);
            out.ub = detail::scaled_hi(fr.hi, d);
        } else if (r.hi <= 0.0) {
            const Enclosure d = Phi.increment(cell.a, cell.b);
            out.lb = detail::scaled_lo(fr.hi, d);
            out.ub = detail::scaled_hi(fr.lo, d);
        } else {
            const Enclosure e = fr * scale(r, w);
            out.lb = e.lo;
            out.ub = e.hi;
        }
        return out;
    };
}

// ---------------------------------------------------------------------------
// eta-partitions and the G/B/U classification.

// Partition with sum_k osc(phi, I_k) |I_k| <= eta^2 |I|, the seed of the
// classification argument.
inline Partition eta_partition(const RealFunction& phi, const ClosedInterval& interval,
                               double eta, std::size_t budget = default_cell_budget)
{
    if (!(eta > 0.0))
        throw ArgumentError("eta_partition: eta must be positive");
    const double eps = eta * eta * interval.length();
    if (interval.degenerate())
        return Partition::uniform(interval, 1);
    auto result = certify_integrable(phi, Integrator::identity(interval), interval, eps, budget);
    if (const auto* cert = std::get_if<IntegrabilityCertificate>(&result))
        return cert->partition;
    const auto& inc = std::get<Inconclusive>(result);
    throw BudgetExceededError("eta_partition: oscillation sum did not reach eta^2 |I|",
                              inc.best_osc_sum, inc.cells);
}

enum class CellClass : std::uint8_t { good, bounded, undulating };

// Per-cell classes over an eta-partition:
//   good       - phi strictly positive or strictly negative on the cell
//                (strict inequality on the range bracket; a zero at an
//                endpoint demotes the cell)
//   bounded    - not good and |phi| <= eta on the cell
//   undulating - the rest; phi changes sign there with osc(phi, cell) >= eta
struct ClassifiedPartition {
    Partition partition;
    double eta = 0.0;
    std::vector<CellClass> classes;
    std::vector<Enclosure> phi_ranges;
    Rigor rigor = Rigor::certified;

    std::size_t count(CellClass c) const
    {
        return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c));
    }
    double class_length(CellClass c) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < classes.size(); ++k)
            if (classes[k] == c)
                s += partition.cell(k).length();
        return s;
    }
    std::vector<std::size_t> indices(CellClass c) const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < classes.size(); ++k)
            if (classes[k] == c)
                out.push_back(k);
        return out;
    }
};

inline ClassifiedPartition classify(const Partition& p, const RealFunction& phi, double eta)
{
    ClassifiedPartition out;
    out.partition = p;
    out.eta = eta;
    out.rigor = rigor_of(phi.oracle_kind());
    out.classes.reserve(p.cell_count());
    out.phi_ranges.reserve(p.cell_count());
    for (std::size_t k = 0; k < p.cell_count(); ++k) {
        const Enclosure r = phi.range(p.cell(k));
        out.phi_ranges.push_back(r);
        CellClass c = CellClass::undulating;
        if (r.lo > 0.0 || r.hi < 0.0)
            c = CellClass::good;
        else if (r.magnitude() <= eta)
            c = CellClass::bounded;
        out.classes.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification partition P': every good cell refined until the oscillation
// sum of f(Phi) phi over its sub-partition is at most eta |I_k|; bounded and
// undulating cells kept whole.

struct VerificationPartition {
    Partition refined;                   // P', concatenation of the P^k
    std::vector<std::size_t> cell_begin; // refined cells [cell_begin[k], cell_begin[k+1])
};

inline VerificationPartition build_verification_partition(const RealFunction& f,
                                                          const RealFunction& phi,
                                                          const Integrator& Phi,
                                                          const ClassifiedPartition& c,
                                                          double eta,
                                                          std::size_t budget = default_cell_budget)
{
    const Partition& p = c.partition;
    const CellModel model = substitution_cell_model(compose_with(f, Phi), phi, Phi);
    const std::size_t n = p.cell_count();
    const std::size_t cell_budget = std::max<std::size_t>(4096, budget / std::max<std::size_t>(1, n));

    std::vector<double> breakpoints;
    for (std::size_t k = 0; k < n; ++k) {
        const ClosedInterval cell = p.cell(k);
        if (k > 0)
            breakpoints.push_back(cell.a);
        if (c.classes[k] != CellClass::good)
            continue;
        const double target = eta * cell.length();
        if (model(cell).osc <= target)
            continue; // already fine as a single cell
        RefineOptions opt;
        opt.objective = RefineObjective::osc;
        opt.target = target;
        opt.budget = cell_budget;
        opt.collect_breakpoints = true;
        auto outcome = adaptive_refine(model, cell, opt);
        if (!outcome.reached)
            throw BudgetExceededError("build_verification_partition: good cell " +
                                          std::to_string(k) + " did not certify",
                                      outcome.objective_value, outcome.cells);
        std::sort(outcome.breakpoints.begin(), outcome.breakpoints.end());
        breakpoints.insert(breakpoints.end(), outcome.breakpoints.begin(),
                           outcome.breakpoints.end());
    }

    VerificationPartition out;
    out.refined = Partition::from_breakpoints(p.base(), std::move(breakpoints));
    // Recover refined-cell offsets from the merged breakpoint list.
    out.cell_begin.assign(n + 1, 0);
    const auto xs = out.refined.breakpoints();
    std::size_t j = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double boundary = p.breakpoints()[k];
        while (j + 1 < xs.size() && xs[j + 1] <= boundary + 1e-12 * (1.0 + std::fabs(boundary)))
            ++j;
        out.cell_begin[k] = j;
    }
    out.cell_begin[n] = out.refined.cell_count();
    return out;
}

// ---------------------------------------------------------------------------
// Quantitative ledger: every inequality of the classification argument,
// evaluated from oracles and reported as (lhs, rhs, ok) rows.

struct LedgerRow {
    std::string eq;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool ok = false;
};

struct BoundLedger {
    double eta = 0.0;
    std::vector<LedgerRow> rows;
    bool all_ok = false;
    Rigor rigor = Rigor::certified;

    const LedgerRow* row(const std::string& eq) const
    {
        for (const auto& r : rows)
            if (r.eq == eq)
                return &r;
        return nullptr;
    }
};

inline BoundLedger verify_ledger(const RealFunction& f, const RealFunction& phi,
                                 const Integrator& Phi, const ClassifiedPartition& c,
                                 const VerificationPartition& vp,
                                 std::size_t budget = default_cell_budget)
{
    const Partition& p = c.partition;
    const std::size_t n = p.cell_count();
    const double mf = f.bound();
    const double mphi = phi.bound();
    const double eta = c.eta;
    const double total_len = p.base().length();
    const RealFunction f_comp = compose_with(f, Phi);

    const double len_g = c.class_length(CellClass::good);
    const double len_b = c.class_length(CellClass::bounded);

    // Row 18 over the classified partition.
    SlackSum eta_lhs;
    for (std::size_t k = 0; k < n; ++k)
        eta_lhs.add(c.phi_ranges[k].width() * p.cell(k).length());

    // Hull-product oscillation sums over P' and the per-class
    // |integral - upper sum| gaps.
    SlackSum osc_g, osc_b, osc_u, gap_g, gap_b, gap_u, chev;
    double enc_g = 0.0, enc_b = 0.0, enc_u = 0.0;
    double max21 = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const ClosedInterval cell = p.cell(k);
        const CellClass cls = c.classes[k];
        SlackSum osc_k, upper_k;
        for (std::size_t j = vp.cell_begin[k]; j < vp.cell_begin[k + 1]; ++j) {
            const ClosedInterval sub = vp.refined.cell(j);
            const Enclosure hr = f_comp.range(sub) * phi.range(sub);
            osc_k.add(hr.width() * sub.length());
            upper_k.add(hr.hi * sub.length());
        }
        const Enclosure ea = Phi.enclosure(cell.a);
        const Enclosure eb = Phi.enclosure(cell.b);
        const Enclosure d = Phi.increment(cell.a, cell.b);
        max21 = std::max(max21, d.magnitude() - mphi * cell.length());
        // Keeps the booked bracket radii well under the eta-scaled rows.
        const double gap_tol = 0.02 * eta * cell.length() + 1e-15 * (1.0 + mf);
        const Enclosure cell_int =
            detail::quick_oriented_between(f, ea, eb, gap_tol,
                                           std::max<std::size_t>(4096, budget / std::max<std::size_t>(1, n)));
        const double gap_term = std::fabs(cell_int.midpoint() - (upper_k.sum + upper_k.slack));
        switch (cls) {
        case CellClass::good:
            osc_g.add(osc_k.sum + osc_k.slack);
            gap_g.add(gap_term);
            enc_g += cell_int.radius();
            break;
        case CellClass::bounded:
            osc_b.add(osc_k.sum + osc_k.slack);
            gap_b.add(gap_term);
            enc_b += cell_int.radius();
            break;
        case CellClass::undulating:
            osc_u.add(osc_k.sum + osc_k.slack);
            gap_u.add(gap_term);
            enc_u += cell_int.radius();
            chev.add(cell.length());
            break;
        }
    }
    if (n == 0)
        max21 = 0.0;

    BoundLedger ledger;
    ledger.eta = eta;
    ledger.rigor = combine(rigor_of(phi.oracle_kind()),
                           combine(rigor_of(f.oracle_kind()),
                                   Phi.certified() ? Rigor::certified : Rigor::heuristic));
    const auto add_row = [&](const std::string& eq, double lhs, double rhs, double slack) {
        LedgerRow row{eq, lhs, rhs, slack, lhs <= rhs + slack};
        ledger.rows.push_back(std::move(row));
    };
    const double base_margin = 1e-12 * (1.0 + total_len * (1.0 + mf) * (1.0 + mphi));

    add_row("18", eta_lhs.sum, eta * eta * total_len, eta_lhs.slack + base_margin);
    add_row("19", osc_g.sum, eta * len_g, osc_g.slack + base_margin);
    add_row("20", gap_g.sum, eta * len_g, gap_g.slack + enc_g + base_margin);
    add_row("21", max21, 0.0, base_margin);
    add_row("26", osc_b.sum, 2.0 * mf * eta * len_b, osc_b.slack + base_margin);
    add_row("27", gap_b.sum, 3.0 * mf * eta * len_b, gap_b.slack + enc_b + base_margin);
    add_row("28", chev.sum, eta * total_len, chev.slack + base_margin);
    add_row("29", osc_u.sum, 2.0 * mf * mphi * eta * total_len, osc_u.slack + base_margin);
    add_row("30", gap_u.sum, 3.0 * mf * mphi * eta * total_len,
            gap_u.slack + enc_u + base_margin);
    add_row("31", osc_g.sum + osc_b.sum + osc_u.sum,
            (1.0 + 2.0 * mf + 2.0 * mf * mphi) * eta * total_len,
            osc_g.slack + osc_b.slack + osc_u.slack + base_margin);

    ledger.all_ok = std::all_of(ledger.rows.begin(), ledger.rows.end(),
                                [](const LedgerRow& r) { return r.ok; });
    return ledger;
}

// ---------------------------------------------------------------------------
// Top-level verdict: both sides of the substitution identity computed along
// independent paths.  The left side integrates f over the oriented interval
// [Phi(a), Phi(b)]; the right side encloses int_I f(Phi) phi directly.  The
// ledger mirrors the classification argument and is diagnostic evidence, not
// the computation path.

struct SubstitutionVerdict {
    Enclosure lhs;
    Enclosure rhs;
    bool overlap = false;
    double max_width = 0.0;
    BoundLedger ledger;
    Rigor rigor = Rigor::certified;
    bool width_ok = false;
    std::size_t lhs_cells = 0;
    std::size_t rhs_cells = 0;
};

// eta picked so (1 + 3 M_f + 3 M_f M_phi) eta |I| matches the tolerance,
// floored at 1e-2: below that floor the eta^2 |I| oscillation budget of the
// seed partition outgrows any realistic cell budget, and the ledger is
// diagnostic rather than load-bearing.
inline double default_eta(double tol, double mf, double mphi, double length)
{
    const double denom = (1.0 + 3.0 * mf + 3.0 * mf * mphi) * std::max(length, 1e-300);
    return std::max(tol / denom, 1e-2);
}

struct SubstitutionOptions {
    double tol = 1e-6;
    double eta = 0.0; // 0 = default_eta recipe
    std::size_t budget = default_cell_budget;
    bool with_ledger = true;
    StageTrace* lhs_trace = nullptr;
    StageTrace* rhs_trace = nullptr;
};

inline SubstitutionVerdict change_of_variable(const RealFunction& f, const RealFunction& phi,
                                              const ClosedInterval& interval, double anchor,
                                              const SubstitutionOptions& opt)
{
    if (!(opt.tol > 0.0))
        throw ArgumentError("change_of_variable: tolerance must be positive");
    const Integrator Phi = indefinite_integral(phi, interval.a, anchor,
                                               std::max(1e-10, opt.tol / 64.0));
    const Enclosure image = Phi.range_over(interval);
    if (!f.domain().contains(ClosedInterval(image.lo, image.hi), f.domain().snap_tol()))
        throw DomainError("change_of_variable: f is not defined on the range of Phi");

    SubstitutionVerdict v;
    const auto lhs = oriented_integral_between(f, Phi.enclosure(interval.a),
                                               Phi.enclosure(interval.b), opt.tol, opt.budget,
                                               opt.lhs_trace);
    const RealFunction f_comp = compose_with(f, Phi);
    RefineOptions ropt;
    ropt.objective = RefineObjective::gap;
    ropt.target = opt.tol;
    ropt.budget = opt.budget;
    ropt.trace = opt.rhs_trace;
    const auto rhs = adaptive_refine(substitution_cell_model(f_comp, phi, Phi), interval, ropt);

    v.lhs = lhs.bracket;
    v.rhs = rhs.bracket;
    v.overlap = overlap(v.lhs, v.rhs);
    v.max_width = std::max(v.lhs.width(), v.rhs.width());
    v.width_ok = lhs.converged() && rhs.reached && v.max_width <= opt.tol * 1.001 + 4e-15;
    v.lhs_cells = lhs.cells;
    v.rhs_cells = rhs.cells;
    v.rigor = combine(combine(lhs.rigor, rigor_of(f_comp.oracle_kind())),
                      rigor_of(phi.oracle_kind()));

    if (opt.with_ledger) {
        const double eta = opt.eta > 0.0
                               ? opt.eta
                               : default_eta(opt.tol, f.bound(), phi.bound(), interval.length());
        const auto seed = eta_partition(phi, interval, eta, opt.budget);
        const auto classes = classify(seed, phi, eta);
        const auto vp = build_verification_partition(f, phi, Phi, classes, eta, opt.budget);
        v.ledger = verify_ledger(f, phi, Phi, classes, vp, opt.budget);
        v.rigor = combine(v.rigor, v.ledger.rigor);
    }
    return v;
}

inline SubstitutionVerdict change_of_variable(const RealFunction& f, const RealFunction& phi,
                                              const ClosedInterval& interval, double anchor,
                                              double eta, double tol,
                                              std::size_t budget = default_cell_budget)
{
    SubstitutionOptions opt;
    opt.tol = tol;
    opt.eta = eta;
    opt.budget = budget;
    return change_of_variable(f, phi, interval, anchor, opt);
}

// ---------------------------------------------------------------------------
// Monotone Phi with a possibly unbounded derivative: matched Riemann sums at
// mean-value points.  In each cell the tag solves phi(xi) |I_k| = dPhi by
// bisection, making the left sum (of f(Phi) phi on I) and the right sum (of
// f on Phi(I)) agree term by term up to the root residual; both converge to
// the common integral as the mesh shrinks.

struct MonotoneRow {
    std::size_t cells = 0;
    double lhs_sum = 0.0;
    double rhs_sum = 0.0;
    double gap = 0.0;
    std::size_t fallback_cells = 0; // tags that fell back to the midpoint
};

struct MonotoneReport {
    std::vector<MonotoneRow> rows;
    double converged_gap = 0.0;
    bool heuristic_tags = false;
};

inline MonotoneReport monotone_unbounded_check(const RealFunction& f, const Integrator& Phi,
                                               const std::function<double(double)>& phi,
                                               const ClosedInterval& interval,
                                               std::span<const std::size_t> mesh_cells)
{
    MonotoneReport report;
    for (const std::size_t n : mesh_cells) {
        MonotoneRow row;
        row.cells = n;
        double lhs = 0.0;
        double rhs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t0 = static_cast<double>(k) / static_cast<double>(n);
            const double t1 = static_cast<double>(k + 1) / static_cast<double>(n);
            const double a = interval.a + t0 * interval.length();
            const double b = (k + 1 == n) ? interval.b : interval.a + t1 * interval.length();
            const double w = b - a;
            const double dphi = Phi(b) - Phi(a);
            // Solve phi(xi) * w = dphi on (a, b].
            double lo = a + 1e-15 * w;
            double hi = b;
            const auto g = [&](double xi) { return phi(xi) * w - dphi; };
            double xi = a + 0.5 * w;
            double glo = g(lo);
            double ghi = g(hi);
            if (glo == 0.0) {
                xi = lo;
            } else if (ghi == 0.0) {
                xi = hi;
            } else if ((glo < 0.0) == (ghi < 0.0)) {
                row.fallback_cells += 1; // root not bracketed
            } else {
                const double xtol = 1e-12 * w;
                while (hi - lo > xtol) {
                    const double mid = lo + 0.5 * (hi - lo);
                    if (!(mid > lo) || !(mid < hi))
                        break;
                    const double gm = g(mid);
                    if (gm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((gm < 0.0) == (glo < 0.0)) {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                xi = lo + 0.5 * (hi - lo);
            }
            const double fval = f(Phi(xi));
            lhs += fval * phi(xi) * w;
            rhs += fval * dphi;
        }
        row.lhs_sum = lhs;
        row.rhs_sum = rhs;
        row.gap = std::fabs(lhs - rhs);
        report.heuristic_tags = report.heuristic_tags || row.fallback_cells > 0;
        report.rows.push_back(row);
    }
    if (!report.rows.empty())
        report.converged_gap = report.rows.back().gap;
    return report;
}

} // namespace darboux
