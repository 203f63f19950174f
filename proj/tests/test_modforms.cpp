#include <doctest.h>

#include "cyperiods/error.hpp"
#include "cyperiods/modforms.hpp"
#include "test_util.hpp"

using namespace cyp;
using boost::multiprecision::abs;

namespace {

Real diff(const Real& x, const char* expected) { return abs(x - parse_real(expected)); }

}  // namespace

TEST_CASE("incomplete gamma")
{
    PrecisionScope scope(40);
    CHECK(abs(incomplete_gamma_int(1, Real(3)) - boost::multiprecision::exp(Real(-3))) < Real("1e-38"));
    CHECK(abs(incomplete_gamma_int(3, Real(2)) - 10 * boost::multiprecision::exp(Real(-2))) < Real("1e-38"));
    CHECK(incomplete_gamma_int(4, Real(0)) == 6);
    CHECK_THROWS_AS(incomplete_gamma_int(0, Real(1)), std::invalid_argument);
}

TEST_CASE("q-expansion evaluation")
{
    PrecisionScope scope(40);
    ModularForm f = test_form("17/1", 40);
    Complex z(Real("0.1"), Real("0.3"));
    Complex a = eval_form(f, z, 30);
    Complex b = eval_form(f, z + Complex(1), 30);
    CHECK(abs(a - b) < Real("1e-30"));
    // f(iy) ~ exp(-2 pi y)
    Real y = 5;
    Complex v = eval_form(f, Complex(Real(0), y), 30);
    CHECK(abs(v.re / boost::multiprecision::exp(-two_pi() * y) - 1) < Real("1e-10"));
    // the Fricke fixed point is a zero when eps = -1
    Complex fixed(Real(0), 1 / boost::multiprecision::sqrt(Real(17)));
    CHECK(abs(eval_form(f, fixed, 30)) < Real("1e-28"));

    ModularForm tiny = f;
    tiny.coefficients.resize(20);
    CHECK_THROWS_AS(eval_form(tiny, Complex(Real(0), Real("0.01")), 30), InsufficientCoefficients);
}

TEST_CASE("coefficient sanity checks")
{
    ModularForm f = test_form("6/1", 30);
    CHECK_NOTHROW(f.validate());
    ModularForm g = f;
    g.coefficients[0] = 2;
    CHECK_THROWS_AS(g.validate(), SanityCheckFailed);
    g = f;
    g.coefficients[5] += 1;  // a_6 != a_2 a_3
    CHECK_THROWS_AS(g.validate(), SanityCheckFailed);
    g = f;
    g.coefficients[10] = 1000;  // a_11 beyond 2 * 11^1.5
    CHECK_THROWS_AS(g.validate(), SanityCheckFailed);
}

TEST_CASE("Fricke signs")
{
    for (const char* l : {"17/1", "21/1", "64/1", "192/2", "192/7"}) {
        INFO(l);
        CHECK(fricke_sign(test_form(l), 60) == -1);
    }
    for (const char* l : {"6/1", "8/1", "12/1", "32/1", "32/2", "272/4", "336/7"}) {
        INFO(l);
        CHECK(fricke_sign(test_form(l), 60) == 1);
    }
    ModularForm f = test_form("6/1");
    f.fricke_sign = -1;
    CHECK_THROWS_AS(resolve_fricke_sign(f, 60), SanityCheckFailed);
    // a non-eigenform of W_N
    ModularForm g = test_form("6/1");
    g.level = 12;
    g.fricke_sign.reset();
    CHECK_THROWS_AS(fricke_sign(g, 60), AmbiguousSign);
    CHECK_THROWS_AS(l_value(g, 1, 60), UnknownSign);
}

TEST_CASE("partial Mellin values")
{
    PrecisionScope scope(60);
    ModularForm f6 = test_form("6/1");
    CHECK(diff(mellin(f6, 1, 60), "0.0705795645108305473225513900913349620339") < Real("1e-38"));
    CHECK(diff(mellin(test_form("32/2"), 3, 60), "0.9969238636883323441309149178659389533592") < Real("1e-38"));
    CHECK(diff(mellin(test_form("8/1"), 1, 60), "0.1067464416589652341658482119578535772357") < Real("1e-38"));
    Real t = Real(3) / 2;
    CHECK(diff(mellin_partial(f6, 1, t, 60), "0.00588018380632647168784781079042205384110122041895") < Real("1e-48"));
    CHECK(diff(mellin_partial(f6, 3, t, 60), "0.11354370318430276251965275943335072038142945788569") < Real("1e-48"));

    auto d = mellin_partial_detail(f6, 1, Real(6), 60);
    CHECK(d.tail_bound < Real("1e-60"));
    ModularForm short_f = f6;
    short_f.coefficients.resize(30);
    CHECK_THROWS_AS(mellin(short_f, 1, 60), InsufficientCoefficients);
}

TEST_CASE("L-values and the split functional equation")
{
    PrecisionScope scope(60);
    ModularForm f17 = test_form("17/1");
    CHECK(diff(l_value(f17, 1, 60), "-0.39728313408582654097415526426736028") < Real("1e-34"));
    CHECK(abs(l_value(f17, 2, 60)) < Real("1e-55"));
    ModularForm f21 = test_form("21/1");
    CHECK(diff(abs(l_value(f21, 1, 60)), "0.53353283462889250989436715978273") < Real("1e-31"));

    // M(f,2) = L(f,2)/2 for eps = +1
    ModularForm f6 = test_form("6/1");
    CHECK(abs(mellin(f6, 2, 60) - l_value(f6, 2, 60) / 2) < Real("1e-55"));
    // L(32/2, 1) = M(f,1) + N/(2 pi^2) M(f,3)
    ModularForm f32 = test_form("32/2");
    Real l1 = l_value(f32, 1, 60);
    CHECK(abs(l1 - Real("2.0341")) < Real("1e-4"));

    // the split point does not matter
    for (const char* l : {"6/1", "17/1", "336/7"}) {
        ModularForm f = test_form(l);
        for (int s = 1; s <= 3; ++s) {
            Real ref = l_value(f, s, 60);
            for (Real t : {Real(f.level) / 2, Real(f.level) * 3 / 2, Real(f.level) * 2}) {
                INFO(l << " s=" << s << " t=" << t);
                CHECK(abs(l_value_split(f, s, t, 60) - ref) < Real("1e-55"));
            }
        }
    }
}

TEST_CASE("quadratic characters and Gauss sums")
{
    PrecisionScope scope(40);
    auto c43 = DirichletCharacter::from_label("4.3");
    Complex g = gauss_sum(c43);
    CHECK(abs(g - Complex(Real(0), Real(2))) < Real("1e-35"));
    CHECK(c43.parity() == -1);

    auto c85 = DirichletCharacter::from_label("chi_{8,5}");
    auto c83 = DirichletCharacter::from_label("8.3");
    auto k8 = DirichletCharacter::kronecker(8);
    auto km8 = DirichletCharacter::kronecker(-8);
    for (long n = -20; n <= 40; ++n) {
        CHECK(c85(n) == k8(n));
        CHECK(c83(n) == km8(n));
    }
    CHECK(abs(gauss_sum(DirichletCharacter::trivial()) - Complex(1)) < Real("1e-35"));
    CHECK_THROWS_AS(DirichletCharacter::from_label("5.2"), std::invalid_argument);

    // g(chi_D)^2 = chi_D(-1) |D| for primitive quadratic characters
    for (long d : {-4L, 5L, -7L, 8L, -8L, 12L, -15L, 13L}) {
        auto chi = DirichletCharacter::kronecker(d);
        Complex g2 = gauss_sum(chi) * gauss_sum(chi);
        INFO(d);
        CHECK(abs(g2 - Complex(Real(chi.parity() * std::labs(d)))) < Real("1e-30"));
        // complete multiplicativity and period
        for (long a = 1; a < 30; ++a)
            for (long b = 1; b < 30; ++b) CHECK(chi(a * b) == chi(a) * chi(b));
        CHECK(chi(7 + chi.modulus()) == chi(7));
    }
}

TEST_CASE("twists")
{
    ModularForm f6 = test_form("6/1");
    auto t = twist(f6, DirichletCharacter::from_label("8.5"), 192);
    ModularForm f192 = test_form("192/2");
    std::size_t n = std::min(t.count(), f192.count());
    bool same = true;
    for (std::size_t k = 1; k <= n; ++k) same = same && t.a(k) == f192.a(k);
    CHECK(same);
    CHECK(t.a(2) == 0);
    CHECK_FALSE(t.fricke_sign.has_value());
    CHECK_THROWS_AS(twist(f6, DirichletCharacter::from_label("8.5"), 100), LevelInvalid);

    auto id = twist(f6, DirichletCharacter::trivial(), 6);
    CHECK(id.coefficients == f6.coefficients);

    auto t7 = twist(f6, DirichletCharacter::from_label("8.3"), 192);
    ModularForm f1927 = test_form("192/7");
    same = true;
    for (std::size_t k = 1; k <= std::min(t7.count(), f1927.count()); ++k) same = same && t7.a(k) == f1927.a(k);
    CHECK(same);
}

TEST_CASE("Shimura-type ratios")
{
    // sized for the level of the twist
    ModularForm f6 = load_form("6/1", 40, test_ingest_config(), 192);
    auto r = shimura_check(f6, 2, 40);
    CHECK(r.twisted_level == 192);
    CHECK(r.twisted_sign == -1);
    REQUIRE(r.ratios[0].ratio);
    CHECK(*r.ratios[0].ratio == Rational(-30));
    CHECK(r.ratios[0].confidence_digits >= 25);

    auto m = shimura_check(f6, -2, 40);
    REQUIRE(m.ratios[0].ratio);
    // L(f_-2, 1) = -36 sqrt2 L(f,2)/pi = -72 * sqrt2 L(f,2)/(2 pi)
    CHECK(*m.ratios[0].ratio == Rational(-72));

    auto one = shimura_check(f6, 1, 30);
    CHECK(*one.ratios[0].ratio == 1);
    CHECK(*one.ratios[1].ratio == 1);
}

TEST_CASE("special value lattices")
{
    PrecisionScope scope(50);
    ModularForm f8 = test_form("8/1", 40);
    auto lf = lattice_f(f8, 40);
    auto lc = lattice_f_c(f8, 40);
    REQUIRE(lf.generators.size() == 2);
    REQUIRE(lc.generators.size() == 3);
    // (2 pi i)^-2 Lambda_f = <L(f,1), L(f,2)/(2 pi i)> sits inside Lambda_f^c
    Complex tpi(Real(0), two_pi());
    Complex g1 = lf.generators[0].value / (tpi * tpi);
    Complex g2 = lf.generators[1].value / (tpi * tpi);
    auto e1 = express(g1, lc.generators, 1000, 40);
    CHECK(e1.coefficients[0] == 1);
    CHECK(e1.coefficients[2] == 8);  // eps N with eps = +1
    auto e2 = express(g2, lc.generators, 1000, 40);
    CHECK(e2.coefficients[1] == 1);

    auto l17 = lattice_f(test_form("17/1", 40), 40);
    CHECK(abs(l17.generators[1].value) < Real("1e-35"));
}
