#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "darboux/enclosure.hpp"
#include "darboux/errors.hpp"
#include "darboux/function.hpp"
#include "darboux/integrator.hpp"
#include "darboux/interval.hpp"
#include "darboux/partition.hpp"
#include "darboux/sums.hpp"

namespace darboux {

inline constexpr std::size_t default_cell_budget = std::size_t{1} << 20;

// Per-cell bracket of an integral contribution plus the oscillation-style
// term the certificates are measured in.
struct CellBounds {
    double lb = 0.0;  // <= int over the cell
    double ub = 0.0;  // >= int over the cell
    double osc = 0.0; // >= oscillation * weight over the cell
};

using CellModel = std::function<CellBounds(const ClosedInterval&)>;

// int_cell f dPhi bounded through f's range and Phi's increment bracket.
inline CellModel stieltjes_cell_model(const RealFunction& f, const Integrator& phi)
{
    if (!phi.nondecreasing())
        throw MonotonicityError("stieltjes_cell_model: integrator must be nondecreasing");
    return [f, phi](const ClosedInterval& cell) {
        const auto t = detail::cell_terms(f, phi, cell);
        return CellBounds{t.lower, t.upper, t.osc};
    };
}

inline Rigor model_rigor(const RealFunction& f, const Integrator& phi)
{
    return combine(rigor_of(f.oracle_kind()),
                   phi.certified() ? Rigor::certified : Rigor::heuristic);
}

struct StageSnapshot {
    std::size_t cells = 0;
    double lo = 0.0;
    double hi = 0.0;
};
using StageTrace = std::vector<StageSnapshot>;

enum class RefineObjective { gap, osc };

struct RefineOptions {
    RefineObjective objective = RefineObjective::gap;
    double target = 1e-6;
    std::size_t budget = default_cell_budget;
    bool collect_breakpoints = false;
    StageTrace* trace = nullptr;
};

struct RefineOutcome {
    Enclosure bracket;          // [sum lb - slack, sum ub + slack]
    double objective_value = 0; // measured objective including slack
    double osc_sum = 0.0;
    std::size_t cells = 0;
    bool reached = false;
    std::vector<double> breakpoints; // interior, unsorted unless collected in order
};

namespace detail {

struct CellRec {
    double a, b;
    double lb, ub, osc;
    double score;
};

inline double cell_score(const CellBounds& c, RefineObjective obj)
{
    const double s = obj == RefineObjective::gap ? c.ub - c.lb : c.osc;
    return std::max(0.0, s);
}

struct RefineTotals {
    SlackSum lo, hi, osc;

    void add(double lb, double ub, double osc_term)
    {
        lo.add(lb);
        hi.add(ub);
        osc.add(osc_term);
    }
    double objective(RefineObjective obj) const
    {
        if (obj == RefineObjective::gap)
            return (hi.sum + hi.slack) - (lo.sum - lo.slack);
        return osc.sum + osc.slack;
    }
    Enclosure bracket() const { return Enclosure(lo.sum - lo.slack, hi.sum + hi.slack); }
};

// Exact re-measure of the current cell set, cheapest in left-to-right order.
inline RefineTotals measure(std::vector<CellRec>& cells, RefineObjective)
{
    std::sort(cells.begin(), cells.end(),
              [](const CellRec& x, const CellRec& y) { return x.a < y.a; });
    RefineTotals t;
    for (const auto& c : cells)
        t.add(c.lb, c.ub, c.osc);
    return t;
}

} // namespace detail

// Two-phase refinement toward `target`.
//
// Phase A bisects the worst cell greedily (the quantity being driven down is
// a sum of per-cell contributions, so attacking the largest one first).  If
// the target is still out of reach at the phase-A cap, phase B re-splits
// every cell into equal parts sized by the square root of its contribution,
// which equidistributes contributions across the final partition; the
// re-split is streamed, so the peak memory stays at the phase-A cell count
// even when the final partition has millions of cells.
inline RefineOutcome adaptive_refine(const CellModel& model, const ClosedInterval& interval,
                                     const RefineOptions& opt)
{
    if (!(opt.target > 0.0))
        throw ArgumentError("adaptive_refine: target must be positive");
    if (opt.budget < 1)
        throw ArgumentError("adaptive_refine: budget must be at least one cell");

    RefineOutcome out;
    if (interval.degenerate()) {
        out.bracket = Enclosure(0.0).widened();
        out.objective_value = out.bracket.width();
        out.cells = 0;
        out.reached = out.objective_value <= opt.target;
        return out;
    }

    const auto eval = [&](double a, double b) {
        const CellBounds cb = model(ClosedInterval(a, b));
        return detail::CellRec{a, b, cb.lb, cb.ub, cb.osc, detail::cell_score(cb, opt.objective)};
    };
    const auto by_score = [](const detail::CellRec& x, const detail::CellRec& y) {
        return x.score < y.score;
    };

    std::vector<detail::CellRec> heap;
    std::vector<detail::CellRec> dead; // unsplittable at double resolution
    heap.push_back(eval(interval.a, interval.b));
    double estimate = heap.front().score;
    std::size_t cell_count = 1;
    std::size_t next_snapshot = 1;

    const std::size_t phase_a_cap =
        std::min(opt.budget, std::max<std::size_t>(1024, opt.budget / 64));

    const auto all_cells = [&]() {
        std::vector<detail::CellRec> cells = heap;
        cells.insert(cells.end(), dead.begin(), dead.end());
        return cells;
    };
    const auto snapshot = [&](const detail::RefineTotals& t) {
        if (opt.trace)
            opt.trace->push_back({cell_count, t.bracket().lo, t.bracket().hi});
    };
    const auto finish = [&](std::vector<detail::CellRec> cells) {
        auto totals = detail::measure(cells, opt.objective);
        out.bracket = totals.bracket();
        out.objective_value = totals.objective(opt.objective);
        out.osc_sum = totals.osc.sum + totals.osc.slack;
        out.cells = cell_count;
        out.reached = out.objective_value <= opt.target;
        if (opt.collect_breakpoints) {
            out.breakpoints.reserve(cells.size());
            for (std::size_t k = 0; k + 1 < cells.size(); ++k)
                out.breakpoints.push_back(cells[k].b);
        }
        snapshot(totals);
        return out;
    };

    // Phase A: greedy bisection.
    while (true) {
        if (estimate <= opt.target) {
            auto cells = all_cells();
            auto totals = detail::measure(cells, opt.objective);
            estimate = totals.objective(opt.objective);
            if (estimate <= opt.target)
                return finish(std::move(cells));
            std::make_heap(heap.begin(), heap.end(), by_score);
        }
        if (cell_count >= phase_a_cap || heap.empty())
            break;
        if (cell_count >= next_snapshot && opt.trace) {
            auto cells = all_cells();
            snapshot(detail::measure(cells, opt.objective));
            next_snapshot = cell_count * 2;
        }

        std::pop_heap(heap.begin(), heap.end(), by_score);
        detail::CellRec worst = heap.back();
        heap.pop_back();
        const double mid = worst.a + 0.5 * (worst.b - worst.a);
        if (!(mid > worst.a) || !(mid < worst.b)) {
            dead.push_back(worst);
            continue;
        }
        estimate -= worst.score;
        for (auto rec : {eval(worst.a, mid), eval(mid, worst.b)}) {
            estimate += rec.score;
            heap.push_back(rec);
            std::push_heap(heap.begin(), heap.end(), by_score);
        }
        ++cell_count;
    }

    // Phase B: equidistributing re-split, streamed.
    auto cells = all_cells();
    std::sort(cells.begin(), cells.end(),
              [](const detail::CellRec& x, const detail::CellRec& y) { return x.a < y.a; });
    {
        detail::RefineTotals totals;
        for (const auto& c : cells)
            totals.add(c.lb, c.ub, c.osc);
        snapshot(totals);
    }

    double weight_sum = 0.0;
    for (const auto& c : cells)
        weight_sum += std::sqrt(c.score);

    std::size_t plan = cells.size();
    if (weight_sum > 0.0) {
        const double ideal = weight_sum * weight_sum / (0.85 * opt.target);
        plan = ideal >= static_cast<double>(opt.budget)
                   ? opt.budget
                   : std::max(cells.size(), static_cast<std::size_t>(std::ceil(ideal)));
    }

    for (int attempt = 0; attempt < 3; ++attempt) {
        detail::RefineTotals totals;
        std::vector<double> bps;
        if (opt.collect_breakpoints)
            bps.reserve(plan);
        std::size_t produced = 0;
        for (const auto& c : cells) {
            std::size_t m = 1;
            if (weight_sum > 0.0 && c.score > 0.0) {
                const double share = std::sqrt(c.score) / weight_sum * static_cast<double>(plan);
                m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(share)));
            }
            const double w = (c.b - c.a) / static_cast<double>(m);
            if (!(w > 0.0))
                m = 1;
            double left = c.a;
            for (std::size_t i = 0; i < m; ++i) {
                const double right = (i + 1 == m) ? c.b : c.a + w * static_cast<double>(i + 1);
                if (!(right > left))
                    continue;
                const CellBounds cb = model(ClosedInterval(left, right));
                totals.add(cb.lb, cb.ub, cb.osc);
                ++produced;
                if (opt.collect_breakpoints && right < c.b)
                    bps.push_back(right);
                left = right;
            }
            if (opt.collect_breakpoints && c.b < interval.b)
                bps.push_back(c.b);
        }
        cell_count = produced;
        const double measured = totals.objective(opt.objective);
        const bool ok = measured <= opt.target;
        if (ok || produced >= opt.budget || attempt == 2) {
            out.bracket = totals.bracket();
            out.objective_value = measured;
            out.osc_sum = totals.osc.sum + totals.osc.slack;
            out.cells = produced;
            out.reached = ok;
            out.breakpoints = std::move(bps);
            snapshot(totals);
            return out;
        }
        // Grow the plan in proportion to the observed shortfall.
        const double grow = std::max(1.3, measured / opt.target * 1.15);
        const double next = static_cast<double>(plan) * grow;
        plan = next >= static_cast<double>(opt.budget) ? opt.budget
                                                       : static_cast<std::size_t>(next) + 1;
    }
    return out; // unreachable
}

// Streamed sums over a uniform n-cell partition; the workhorse of the
// convergence sweeps.
inline RefineOutcome uniform_refine(const CellModel& model, const ClosedInterval& interval,
                                    std::size_t n)
{
    if (n == 0)
        throw ArgumentError("uniform_refine: need at least one cell");
    detail::RefineTotals totals;
    double left = interval.a;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / static_cast<double>(n);
        const double right = (i + 1 == n) ? interval.b : interval.a + t * interval.length();
        if (right > left) {
            const CellBounds cb = model(ClosedInterval(left, right));
            totals.add(cb.lb, cb.ub, cb.osc);
        }
        left = right;
    }
    RefineOutcome out;
    out.bracket = totals.bracket();
    out.objective_value = totals.objective(RefineObjective::gap);
    out.osc_sum = totals.osc.sum + totals.osc.slack;
    out.cells = n;
    out.reached = true;
    return out;
}

// ---------------------------------------------------------------------------
// Integrability certificates and integral enclosures.

struct IntegrabilityCertificate {
    Partition partition;
    double osc_sum = 0.0;
    double epsilon = 0.0;
    Enclosure bracket; // [lower sum, upper sum] over the certifying partition
    Rigor rigor = Rigor::certified;
};

struct Inconclusive {
    double best_osc_sum = 0.0;
    std::size_t cells = 0;
    Enclosure bracket;
    Rigor rigor = Rigor::certified;
};

using CertifyResult = std::variant<IntegrabilityCertificate, Inconclusive>;

inline bool certified_ok(const CertifyResult& r)
{
    return std::holds_alternative<IntegrabilityCertificate>(r);
}

// Search for a partition with oscillation sum <= eps (the epsilon criterion
// of the integrability characterization).  Failure to find one within the
// budget is Inconclusive, never a claim of non-integrability.
inline CertifyResult certify_integrable(const RealFunction& f, const Integrator& phi,
                                        const ClosedInterval& interval, double eps,
                                        std::size_t budget = default_cell_budget)
{
    if (!(eps > 0.0))
        throw ArgumentError("certify_integrable: epsilon must be positive");
    RefineOptions opt;
    opt.objective = RefineObjective::osc;
    opt.target = eps;
    opt.budget = budget;
    opt.collect_breakpoints = true;
    auto outcome = adaptive_refine(stieltjes_cell_model(f, phi), interval, opt);
    const Rigor rigor = model_rigor(f, phi);
    if (!outcome.reached)
        return Inconclusive{outcome.objective_value, outcome.cells, outcome.bracket, rigor};
    return IntegrabilityCertificate{
        Partition::from_breakpoints(interval, std::move(outcome.breakpoints)),
        outcome.objective_value, eps, outcome.bracket, rigor};
}

enum class EncloseStatus { converged, width_exceeded };

struct IntegralEnclosure {
    Enclosure bracket;
    EncloseStatus status = EncloseStatus::converged;
    std::size_t cells = 0;
    double osc_sum = 0.0;
    Rigor rigor = Rigor::certified;

    bool converged() const { return status == EncloseStatus::converged; }
};

// Two-sided bracket of int_I f dPhi with hi - lo <= tol on success; budget
// exhaustion returns the best bracket found, flagged width_exceeded.
inline IntegralEnclosure integral_enclosure(const RealFunction& f, const Integrator& phi,
                                            const ClosedInterval& interval, double tol,
                                            std::size_t budget = default_cell_budget,
                                            StageTrace* trace = nullptr)
{
    if (!(tol > 0.0))
        throw ArgumentError("integral_enclosure: tolerance must be positive");
    RefineOptions opt;
    opt.objective = RefineObjective::gap;
    opt.target = tol;
    opt.budget = budget;
    opt.trace = trace;
    auto outcome = adaptive_refine(stieltjes_cell_model(f, phi), interval, opt);
    IntegralEnclosure out;
    out.bracket = outcome.bracket;
    out.status = outcome.reached ? EncloseStatus::converged : EncloseStatus::width_exceeded;
    out.cells = outcome.cells;
    out.osc_sum = outcome.osc_sum;
    out.rigor = model_rigor(f, phi);
    return out;
}

inline IntegralEnclosure integral_enclosure(const RealFunction& f, const ClosedInterval& interval,
                                            double tol, std::size_t budget = default_cell_budget,
                                            StageTrace* trace = nullptr)
{
    return integral_enclosure(f, Integrator::identity(interval), interval, tol, budget, trace);
}

// Darboux sums of f dPhi over a uniform n-cell partition, streamed.
inline IntegralEnclosure uniform_enclosure(const RealFunction& f, const Integrator& phi,
                                           const ClosedInterval& interval, std::size_t n)
{
    auto outcome = uniform_refine(stieltjes_cell_model(f, phi), interval, n);
    IntegralEnclosure out;
    out.bracket = outcome.bracket;
    out.status = EncloseStatus::converged;
    out.cells = n;
    out.osc_sum = outcome.osc_sum;
    out.rigor = model_rigor(f, phi);
    return out;
}

} // namespace darboux
