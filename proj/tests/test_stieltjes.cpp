#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "darboux/gallery.hpp"
#include "darboux/stieltjes.hpp"

using namespace darboux;

namespace {

const ClosedInterval unit(0.0, 1.0);

Partition random_partition(std::mt19937_64& rng, const ClosedInterval& base, int max_interior)
{
    std::uniform_int_distribution<int> count(0, max_interior);
    std::uniform_real_distribution<double> point(base.a, base.b);
    std::vector<double> pts;
    const int n = count(rng);
    for (int i = 0; i < n; ++i)
        pts.push_back(point(rng));
    return Partition::from_breakpoints(base, std::move(pts));
}

} // namespace

TEST_CASE("grid-built indefinite integrals bracket the antiderivative")
{
    const auto one = make_gallery_function("poly:1", unit);
    const auto Phi1 = build_indefinite_integral(one, 0.0, 0.0, 64, 1e-9);
    CHECK(Phi1.enclosure(0.7).contains(0.7));
    // Width reaches tol at grid breakpoints; between them the bracket grows
    // by the Lipschitz widening M_phi * distance.
    CHECK(Phi1.enclosure(0.5).width() <= 1e-9 + 1e-12);
    CHECK(Phi1.enclosure(0.7).width() <= 1.0 / 64.0);
    CHECK(Phi1.nondecreasing());
    CHECK(Phi1.certified());

    const auto lin = make_gallery_function("poly:2,0", unit);
    const auto Phi2 = build_indefinite_integral(lin, 0.0, 0.0, 1024, 1e-6);
    CHECK(Phi2.enclosure(0.5).contains(0.25));
    CHECK(Phi2.enclosure(0.5).width() <= 1e-6);
    CHECK(Phi2.enclosure(1.0).contains(1.0));
    REQUIRE(Phi2.density());
    CHECK(Phi2.density()->same_as(lin));

    const auto step = make_gallery_function("step:0.5", unit);
    const auto Phi3 = build_indefinite_integral(step, 0.0, 0.0, 128, 1e-9);
    CHECK(Phi3.enclosure(0.75).contains(0.25));
    CHECK(Phi3.enclosure(0.4).contains(0.0));

    // Point brackets agree with the closed-form antiderivative everywhere.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto F = *lin.closed_form_integral();
    for (int it = 0; it < 500; ++it) {
        const double x = u(rng);
        CHECK(Phi2.enclosure(x).contains(F(ClosedInterval(0.0, x))));
    }
    // evaluate returns the bracket midpoint and never decreases.
    double prev = Phi2(0.0);
    for (int i = 1; i <= 100; ++i) {
        const double x = i / 100.0;
        const double v = Phi2(x);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("closed-form densities give ulp-wide integrator points")
{
    const auto lin = make_gallery_function("poly:2,0", unit);
    const auto Phi = indefinite_integral(lin, 0.0, 0.0);
    CHECK(Phi.exact_points());
    CHECK(Phi.enclosure(0.5).contains(0.25));
    CHECK(Phi.enclosure(0.5).width() <= 1e-14);
    const auto d = Phi.increment(0.25, 0.75);
    CHECK(d.contains(0.5625 - 0.0625));
    CHECK(d.width() <= 1e-14);
}

TEST_CASE("indefinite integrals reach width tolerances or throw")
{
    const auto lin = make_gallery_function("poly:2,0", unit);
    CHECK_THROWS_AS(build_indefinite_integral(lin, 0.0, 0.0, 4, 1e-12, 64),
                    WidthExceededError);
    CHECK_THROWS_AS(build_indefinite_integral(lin, -1.0, 0.0), DomainError);
}

TEST_CASE("transfer identity on hand-checked data")
{
    const auto f = make_gallery_function("poly:1,0", unit);
    const auto sq = Integrator::from_map("x^2", [](double x) { return x * x; }, unit);
    const auto p = Partition::uniform(unit, 2);

    const auto r = transfer_check(f, sq, p);
    CHECK(r.lhs_upper == Catch::Approx(0.8125).margin(1e-13));
    CHECK(r.rhs_upper == Catch::Approx(0.8125).margin(1e-13));
    CHECK(r.max_abs_gap <= 1e-13);
    CHECK(r.rigor == Rigor::certified);

    const auto c = make_gallery_function("poly:-2", ClosedInterval(0, 1));
    const auto rc = transfer_check(c, sq, Partition::uniform(unit, 5));
    CHECK(rc.lhs_upper == Catch::Approx(-2.0).margin(1e-12));
    CHECK(rc.max_abs_gap <= 1e-12);

    const auto id = Integrator::identity(unit);
    const auto ri = transfer_check(f, id, Partition::uniform(unit, 7));
    CHECK(ri.max_abs_gap <= 1e-13);
}

TEST_CASE("transfer identity over a small gallery product")
{
    std::mt19937_64 rng(2025);
    const auto sq = Integrator::from_map("x^2", [](double x) { return x * x; }, unit);
    const auto cube =
        Integrator::from_map("x^3+x", [](double x) { return x * x * x + x; }, unit);
    const ClosedInterval image(0.0, 2.0);
    for (const char* id : {"poly:1,-0.5", "cos", "step:0.5", "abs:0.25"}) {
        const auto f = make_gallery_function(id, image);
        for (const auto* phi : {&sq, &cube}) {
            for (int it = 0; it < 25; ++it) {
                const auto p = random_partition(rng, unit, 30);
                const auto r = transfer_check(f, *phi, p);
                INFO(id);
                CHECK(r.max_abs_gap <=
                      1e-12 * (1.0 + std::fabs(r.lhs_upper) + std::fabs(r.lhs_lower)));
            }
        }
    }
}

TEST_CASE("reduction gap bound on hand-checked data")
{
    // g = x, phi = 1: both gaps are exactly 1/4 on the uniform 4-cell
    // partition and the oscillation term vanishes.
    const auto g = make_gallery_function("poly:1,0", unit);
    const auto one = make_gallery_function("poly:1", unit);
    const auto Phi1 = indefinite_integral(one, 0.0, 0.0);
    const auto r1 = reduce_check(g, one, Phi1, Partition::uniform(unit, 4));
    CHECK(r1.stieltjes_gap == Catch::Approx(0.25).margin(1e-12));
    CHECK(r1.riemann_gap == Catch::Approx(0.25).margin(1e-12));
    CHECK(r1.osc_term <= 1e-12);
    CHECK(r1.bound16_ok);

    // g = 1: the stieltjes gap vanishes and the riemann gap equals the
    // oscillation term.
    const auto lin = make_gallery_function("poly:2,0", unit);
    const auto Phi2 = indefinite_integral(lin, 0.0, 0.0);
    const auto r2 = reduce_check(one, lin, Phi2, Partition::uniform(unit, 8));
    CHECK(r2.stieltjes_gap <= 1e-12);
    CHECK(r2.riemann_gap == Catch::Approx(r2.osc_term).margin(1e-12));
    CHECK(r2.bound16_ok);

    const auto r3 = reduce_check(g, lin, Phi2, Partition::uniform(unit, 10));
    CHECK(r3.bound16_ok);
    CHECK(r3.note.find("oracle suprema") != std::string::npos);
}

TEST_CASE("reduction preconditions")
{
    const auto g = make_gallery_function("poly:1,0", unit);
    const auto shifted = make_gallery_function("poly:1,-0.5", unit);
    const auto PhiBad = Integrator::from_closed_form_density(shifted, 0.0, 0.0);
    CHECK_THROWS_AS(reduce_check(g, shifted, PhiBad, Partition::uniform(unit, 4)),
                    PositivityError);

    const auto one = make_gallery_function("poly:1", unit);
    const auto lin = make_gallery_function("poly:2,0", unit);
    const auto PhiOne = indefinite_integral(one, 0.0, 0.0);
    CHECK_THROWS_AS(reduce_check(g, lin, PhiOne, Partition::uniform(unit, 4)), ArgumentError);
}

TEST_CASE("reduction bound holds on random partitions both ways")
{
    std::mt19937_64 rng(2026);
    const std::vector<const char*> gs = {"poly:1,-0.5", "cos", "poly:1,0,0", "abs:0.3"};
    const std::vector<const char*> phis = {"poly:2,0", "pow:0.5", "abs:0.25", "step:0.5"};
    for (const char* gid : gs) {
        const auto g = make_gallery_function(gid, unit);
        for (const char* pid : phis) {
            const auto phi = make_gallery_function(pid, unit);
            const auto Phi = indefinite_integral(phi, 0.0, 0.0);
            for (int it = 0; it < 8; ++it) {
                const auto p = random_partition(rng, unit, 50);
                const auto r = reduce_check(g, phi, Phi, p);
                INFO(gid << " with " << pid);
                CHECK(r.bound16_ok);
            }
        }
    }
}

TEST_CASE("stieltjes enclosures against closed forms")
{
    const auto one = make_gallery_function("poly:1", unit);
    const auto lin = make_gallery_function("poly:2,0", unit);
    const auto Phi = indefinite_integral(lin, 0.0, 0.0);

    const auto e1 = stieltjes_enclosure(one, Phi, unit, 1e-9);
    CHECK(e1.converged());
    CHECK(e1.bracket.contains(1.0)); // Phi(1) - Phi(0)

    const auto g = make_gallery_function("poly:1,0", unit);
    const auto e2 = stieltjes_enclosure(g, Phi, unit, 1e-5);
    CHECK(e2.converged());
    CHECK(e2.bracket.contains(2.0 / 3.0));

    const auto step = make_gallery_function("step:0.5", unit);
    const auto PhiStep = indefinite_integral(step, 0.0, 0.0);
    const auto e3 = stieltjes_enclosure(g, PhiStep, unit, 1e-6);
    CHECK(e3.converged());
    CHECK(e3.bracket.contains(0.375));
}

TEST_CASE("grid-built integrators feed the adaptive driver through table increments")
{
    const auto step = make_gallery_function("step:0.5", unit);
    const auto PhiGrid = build_indefinite_integral(step, 0.0, 0.0, 256, 1e-7);
    CHECK_FALSE(PhiGrid.exact_points());
    const auto g = make_gallery_function("poly:1,0", unit);
    const auto e = stieltjes_enclosure(g, PhiGrid, unit, 1e-4);
    CHECK(e.converged());
    CHECK(e.bracket.contains(0.375));
    CHECK(e.rigor == Rigor::certified);
}

TEST_CASE("transfer through a flat integrator degenerates to zero")
{
    const auto flat = Integrator::from_map("c", [](double) { return 0.25; }, unit);
    const auto f = make_gallery_function("poly:1,0", ClosedInterval(0.0, 0.5));
    const auto r = transfer_check(f, flat, Partition::uniform(unit, 6));
    CHECK(std::fabs(r.lhs_upper) <= 1e-12);
    CHECK(std::fabs(r.rhs_upper) <= 1e-12);
    CHECK(r.max_abs_gap <= 1e-12);
}

TEST_CASE("stieltjes and riemann routes overlap at every stage and converge together")
{
    struct Pair {
        const char* g;
        const char* phi;
        double exact;
    };
    const std::vector<Pair> pairs = {
        {"poly:1,0", "poly:2,0", 2.0 / 3.0},
        {"poly:1,0,0", "poly:1", 1.0 / 3.0},
        {"abs:0.5", "poly:2,0", 0.25},
    };
    for (const auto& c : pairs) {
        const auto g = make_gallery_function(c.g, unit);
        const auto phi = make_gallery_function(c.phi, unit);
        const auto Phi = indefinite_integral(phi, 0.0, 0.0);
        StageTrace st_trace, ri_trace;
        const auto st = stieltjes_enclosure(g, Phi, unit, 1e-5, default_cell_budget, &st_trace);
        const auto ri = integral_enclosure(product(g, phi), unit, 1e-5, default_cell_budget,
                                           &ri_trace);
        INFO(c.g << " d" << c.phi);
        CHECK(st.converged());
        CHECK(ri.converged());
        CHECK(st.bracket.contains(c.exact));
        CHECK(ri.bracket.contains(c.exact));
        st_trace.push_back({st.cells, st.bracket.lo, st.bracket.hi});
        ri_trace.push_back({ri.cells, ri.bracket.lo, ri.bracket.hi});
        for (const auto& a : st_trace) {
            CHECK(Enclosure(a.lo, a.hi).contains(c.exact));
            for (const auto& b : ri_trace)
                CHECK(overlap(Enclosure(a.lo, a.hi), Enclosure(b.lo, b.hi)));
        }
    }
}
