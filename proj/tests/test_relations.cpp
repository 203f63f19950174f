#include <doctest.h>

#include "cyperiods/error.hpp"
#include "cyperiods/relations.hpp"

#include <random>

using namespace cyp;

TEST_CASE("integer relations")
{
    PrecisionScope scope(60);
    Real p = pi();
    Real s2 = boost::multiprecision::sqrt(Real(2));
    auto rel = integer_relation({3 * p - 7 * s2, p, s2}, 50);
    REQUIRE(rel);
    CHECK(rel->coefficients == std::vector<Integer>{1, -3, 7});
    CHECK(rel->residual < Real("1e-45"));

    // pi and e are independent at this size
    CHECK_FALSE(integer_relation({p, boost::multiprecision::exp(Real(1)), Real(1)}, 50));
    CHECK_THROWS_AS(integer_relation({p, s2}, 12, RelationOptions{Integer(1) << 20, 10}), PrecisionTooLow);

    // fixture-precision input: only 12 digits, coefficient bound 256
    RelationOptions low{256, 2};
    auto r12 = integer_relation({parse_real("13.1822754418"), parse_real("0.16691883908"), Real(1)}, 11, low);
    CHECK_FALSE(r12);

    auto cert = RelationCertificate::parse(rel->serialize());
    CHECK(cert.coefficients == rel->coefficients);
    CHECK(cert.tags == rel->tags);
    CHECK(cert.digits_used == 50);
    CHECK_THROWS_AS(RelationCertificate::parse("relation\nbogus\t1\n"), std::invalid_argument);

    {
        PrecisionScope high(120);
        Real p2 = pi();
        Real r2 = boost::multiprecision::sqrt(Real(2));
        CHECK(reverify(*rel, {3 * p2 - 7 * r2, p2, r2}, 100));
        CHECK_FALSE(reverify(*rel, {3 * p2 - 7 * r2 + Real("1e-70"), p2, r2}, 100));
    }
}

TEST_CASE("random reals have no small relations")
{
    PrecisionScope scope(70);
    std::mt19937_64 rng(12345);
    int found = 0;
    for (int k = 0; k < 20; ++k) {
        std::vector<Real> v;
        for (int i = 0; i < 3; ++i) {
            std::string s = "0.";
            for (int d = 0; d < 60; ++d) s += static_cast<char>('0' + rng() % 10);
            v.push_back(parse_real(s));
        }
        if (integer_relation(v, 60)) ++found;
    }
    CHECK(found == 0);
}

TEST_CASE("Hermite normal form")
{
    auto h = hermite_normal_form({{Integer(4), Integer(6)}, {Integer(2), Integer(4)}, {Integer(0), Integer(0)}});
    REQUIRE(h.size() == 2);
    CHECK(h[0] == std::vector<Integer>{2, 0});
    CHECK(h[1] == std::vector<Integer>{0, 2});
}

TEST_CASE("Z-module bases")
{
    PrecisionScope scope(60);
    Real a = pi();
    auto m = zmodule_basis({a, 2 * a, 3 * a}, 50);
    REQUIRE(m.rank == 1);
    CHECK(boost::multiprecision::abs(m.generators[0] - a) < Real("1e-45"));

    auto m2 = zmodule_basis({Real(-6) * a, Real(4) * a, Real(0)}, 50);
    REQUIRE(m2.rank == 1);
    CHECK(boost::multiprecision::abs(m2.generators[0] - 2 * a) < Real("1e-45"));
    CHECK(m2.certificates[0].coefficients == std::vector<Integer>{-3, -1});

    Real s2 = boost::multiprecision::sqrt(Real(2));
    std::vector<Real> in{a + s2, a - s2, 2 * a, Real(3) * s2};
    auto m3 = zmodule_basis(in, 50);
    CHECK(m3.rank == 2);
    // idempotent
    auto again = zmodule_basis(m3.generators, 50);
    REQUIRE(again.rank == m3.rank);
    for (std::size_t i = 0; i < again.generators.size(); ++i)
        CHECK(boost::multiprecision::abs(again.generators[i] - m3.generators[i]) < Real("1e-45"));
}

TEST_CASE("express and commensurable")
{
    PrecisionScope scope(60);
    Real p = pi();
    auto e = express(Complex(Real(4) * p / 27), {{"pi", Complex(p)}}, 1000, 50);
    CHECK(e.coefficients[0] == Rational(4, 27));
    CHECK_THROWS_AS(express(Complex(boost::multiprecision::sqrt(Real(2))), {{"pi", Complex(p)}}, 1000, 50),
                    RecognitionFailed);

    auto v = commensurable({Complex(1), i_unit()}, {Complex(2), Complex(Real(0), Real(3))}, 50);
    CHECK(v.verdict == Verdict::commensurable);
    CHECK(v.a_in_b[0][0] == Rational(1, 2));
    CHECK(v.a_in_b[1][1] == Rational(1, 3));
    auto w = commensurable({Complex(1)}, {Complex(boost::multiprecision::sqrt(Real(2)))}, 50);
    CHECK(w.verdict == Verdict::not_found);
    auto x = commensurable({Complex(1)}, {Complex(p)}, 8);
    CHECK(x.verdict == Verdict::indeterminate);
}
