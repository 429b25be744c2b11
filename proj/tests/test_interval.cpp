#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "darboux/enclosure.hpp"
#include "darboux/interval.hpp"

using namespace darboux;

TEST_CASE("closed interval basics")
{
    ClosedInterval j(0.25, 1.5);
    CHECK(j.length() == 1.25);
    CHECK(j.midpoint() == Catch::Approx(0.875));
    CHECK(j.contains(0.25));
    CHECK(j.contains(1.5));
    CHECK_FALSE(j.contains(1.5000001));
    CHECK(j.contains(ClosedInterval(0.3, 0.4)));
    CHECK_FALSE(j.degenerate());
    CHECK(ClosedInterval(2.0, 2.0).degenerate());
    CHECK_THROWS_AS(ClosedInterval(1.0, 0.0), ArgumentError);
}

TEST_CASE("oriented interval sign and carrier")
{
    OrientedInterval fwd{0.0, 1.0};
    OrientedInterval rev{1.0, 0.0};
    OrientedInterval deg{0.5, 0.5};
    CHECK(fwd.sign() == 1);
    CHECK(rev.sign() == -1);
    CHECK(rev.carrier() == ClosedInterval(0.0, 1.0));
    CHECK(deg.degenerate());
}

TEST_CASE("enclosure construction and widening")
{
    CHECK_THROWS_AS(Enclosure(1.0, 0.0), ArgumentError);
    Enclosure e(1.0, 2.0);
    CHECK(e.width() == 1.0);
    CHECK(e.contains(1.5));
    const Enclosure w = e.widened();
    CHECK(w.lo < e.lo);
    CHECK(w.hi > e.hi);
    CHECK(w.width() < e.width() + 1e-14);
}

TEST_CASE("enclosure arithmetic is sound on random members")
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::uniform_real_distribution<double> rad(0.0, 3.0);
    for (int it = 0; it < 2000; ++it) {
        const double xc = val(rng), yc = val(rng);
        const Enclosure x(xc - rad(rng), xc + rad(rng));
        const Enclosure y(yc - rad(rng), yc + rad(rng));
        std::uniform_real_distribution<double> tx(x.lo, x.hi);
        std::uniform_real_distribution<double> ty(y.lo, y.hi);
        const double px = tx(rng), py = ty(rng);
        CHECK((x + y).contains(px + py));
        CHECK((x - y).contains(px - py));
        CHECK((x * y).contains(px * py));
        CHECK((-x).contains(-px));
        CHECK(scale(x, yc).contains(yc * px));
        CHECK(hull(x, y).contains(px));
        CHECK(intersect(x, hull(x, y)).contains(px));
    }
}

TEST_CASE("slack sum books outward slack per term")
{
    SlackSum s;
    for (int i = 0; i < 1000; ++i)
        s.add(0.001);
    CHECK(s.sum == Catch::Approx(1.0));
    CHECK(s.slack > 0.0);
    CHECK(s.slack < 1e-10);
}

TEST_CASE("sign tolerance accepts ulp-level noise only")
{
    CHECK(effectively_nonnegative(Enclosure(0.0, 2.0)));
    CHECK(effectively_nonnegative(Enclosure(-1e-15, 2.0)));
    CHECK_FALSE(effectively_nonnegative(Enclosure(-1e-6, 2.0)));
}
