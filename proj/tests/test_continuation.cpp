#include <doctest.h>

#include "cyperiods/continuation.hpp"
#include "cyperiods/error.hpp"
#include "test_util.hpp"

using namespace cyp;

namespace {

ContinuationConfig small_config()
{
    ContinuationConfig c;
    c.digits = 30;
    c.guard = 20;
    return c;
}

Real dist_id(const CMatrix& m) { return norm_inf(m - CMatrix::identity(4)); }

}  // namespace

TEST_CASE("transfer matrices")
{
    Continuation c(bundled_operator("8.67"), small_config());
    PrecisionScope scope(c.working_digits());
    auto a = c.basis_at(Complex(Real("-0.5"), Real("0.2")));
    auto b = c.basis_at(Complex(Real("-0.45"), Real("0.25")));
    auto d = c.basis_at(Complex(Real("-0.4"), Real("0.22")));
    CHECK(dist_id(c.transfer(a, a).matrix) < Real("1e-40"));
    auto ab = c.transfer(a, b);
    auto ba = c.transfer(b, a);
    CHECK(dist_id(ab.matrix * ba.matrix) < Real("1e-35"));
    CHECK(ab.error_estimate < Real("1e-35"));
    auto bd = c.transfer(b, d);
    auto ad = c.transfer(a, d);
    CHECK(norm_inf(bd.matrix * ab.matrix - ad.matrix) < Real("1e-35"));
    // far outside the disk
    auto far = c.basis_at(Complex(Real("0.6"), Real("0.2")));
    CHECK_THROWS_AS(c.transfer(a, far), OutsideDisk);
}

TEST_CASE("continuation along paths")
{
    Continuation c(bundled_operator("8.67"), small_config());
    PrecisionScope scope(c.working_digits());
    Complex z(Real("-0.5"), Real("0.2"));
    CVector v{Complex(1), Complex(Real(2), Real(-1)), Complex(Real("0.5")), Complex(-3)};
    CHECK(norm_inf(c.continue_vector(Path{{z}, "point"}, v) - v) == 0);

    Path there{{z, Complex(Real("-0.2"), Real("0.1")), Complex(Real("-0.6"), Real("-0.3"))}, "there"};
    Path back{{there.waypoints[2], there.waypoints[1], z}, "back"};
    CVector w = c.continue_vector(back, c.continue_vector(there, v));
    CHECK(norm_inf(w - v) < Real("1e-30"));

    // a loop around no singular point
    Path loop{{z, Complex(Real("-0.3"), Real("0.3")), Complex(Real("-0.6"), Real("0.4")), z}, "loop"};
    CHECK(dist_id(c.path_matrix(loop).matrix) < Real("1e-30"));

    Path through{{Complex(Real("-1.2"), Real(0)), Complex(Real("-0.8"), Real(0))}, "through -1"};
    CHECK_THROWS_AS(c.path_matrix(through), PathTooClose);
}

TEST_CASE("local monodromies of 8.67")
{
    Continuation c(bundled_operator("8.67"), small_config());
    PrecisionScope scope(c.working_digits());
    Complex b = c.default_basepoint(Point::rational(-1), Point::rational(0));
    CHECK(b.im > 0);

    auto m = c.local_monodromy(b, Point::rational(-1));
    CMatrix n = m.matrix - CMatrix::identity(4);
    CHECK(rank(n, Real("1e-20")) == 1);
    CHECK(norm_inf(n * n) < Real("1e-40"));

    // formal monodromy and a numerical circle agree
    auto mc = c.local_monodromy(b, Point::rational(-1), true);
    CHECK(norm_inf(m.matrix - mc.matrix) < Real("1e-30"));

    // an ordinary point has trivial monodromy
    CHECK(dist_id(c.local_monodromy(b, Point::rational(Rational(1, 3))).matrix) == 0);

    // product of all local monodromies, infinity last
    auto all = c.monodromies(b);
    CMatrix prod = CMatrix::identity(4);
    for (const auto& [p, pm] : all) prod = pm.matrix * prod;
    CHECK(all.back().first.infinite);
    CHECK(dist_id(prod) < Real("1e-30"));
}

TEST_CASE("MUM monodromy of 8.62")
{
    Continuation c(bundled_operator("8.62"), small_config());
    PrecisionScope scope(c.working_digits());
    Complex b = c.default_basepoint(Point::rational(Rational(-1, 81)), Point::rational(0));
    auto m = c.local_monodromy(b, Point::rational(0));
    CMatrix n = m.matrix - CMatrix::identity(4);
    CMatrix n3 = n * n * n;
    CHECK(norm_inf(n3) > Real(1));
    CHECK(norm_inf(n3 * n) < Real("1e-25") * norm_inf(n3));
}

TEST_CASE("conifold period")
{
    Continuation c(bundled_operator("8.67"), small_config());
    PrecisionScope scope(c.working_digits());
    Complex b = c.default_basepoint(Point::rational(-1), Point::rational(0));
    auto cp = c.conifold_period(Point::rational(-1), b);
    CHECK(cp.at_t0[1] == Complex(1));
    CMatrix n = cp.monodromy.matrix - CMatrix::identity(4);
    // f_c spans the image of M - I and is killed by it
    CHECK(norm_inf(n * cp.at_basepoint) < Real("1e-30"));
    CHECK(abs(c.eval_at_t0(Point::rational(-1), b, cp.at_basepoint)) < Real("1e-30"));
    CHECK_THROWS_AS(c.conifold_period(Point::rational(0), b), NotConifold);

    // continuing f_c around a null-homotopic loop at the basepoint returns it
    Path loop{{b, b + Complex(Real("0.05"), Real(0)), b + Complex(Real("0.05"), Real("0.05")), b}, "square"};
    CHECK(norm_inf(c.continue_vector(loop, cp.at_basepoint) - cp.at_basepoint) < Real("1e-30"));
}

TEST_CASE("period group L0 of 8.67")
{
    ContinuationConfig cfg;
    cfg.digits = 40;
    Continuation c(bundled_operator("8.67"), cfg);
    PrecisionScope scope(c.working_digits());
    auto g = c.period_group_L0(Point::rational(-1), Point::rational(0), std::nullopt, -2, 2);
    REQUIRE(g.values.size() == 5);
    CHECK(abs(g.values[2]) < Real("1e-40"));
    CHECK(abs(g.values[1].re - Real("42.906578481269266425208768540874910763200659")) < Real("1e-38"));
    CHECK(abs(g.values[1].im + Real("10.196661075170437602752538923890424049717592")) < Real("1e-38"));
    CHECK(abs(g.values[0].im - Real("15.929100879959719028595857308255012478345243")) < Real("1e-38"));
    CHECK(g.confident_digits >= 30);

    // a homotopic path gives the same values
    Path p = c.default_path(Point::rational(-1), Point::rational(0));
    p.waypoints[1] += Complex(Real("0.01"), Real("0.01"));
    auto h = c.period_group_L0(Point::rational(-1), Point::rational(0), p, -2, 2);
    for (std::size_t k = 0; k < 5; ++k) CHECK(abs(h.values[k] - g.values[k]) < Real("1e-35"));
}

TEST_CASE("full period group contains L0")
{
    Continuation c(bundled_operator("8.67"), small_config());
    PrecisionScope scope(c.working_digits());
    auto l0 = c.period_group_L0(Point::rational(-1), Point::rational(0), std::nullopt, -1, 1);
    auto zero = c.period_group_full(Point::rational(-1), std::nullopt, 0);
    REQUIRE(zero.values.size() == 1);
    CHECK(abs(zero.values[0]) < Real("1e-30"));
    auto full = c.period_group_full(Point::rational(-1), std::nullopt, 1);
    for (const auto& v : l0.values) {
        bool found = false;
        for (const auto& w : full.values)
            if (abs(v - w) < Real("1e-25")) found = true;
        CHECK(found);
    }
}
