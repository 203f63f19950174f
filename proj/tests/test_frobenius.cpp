#include <doctest.h>

#include "cyperiods/error.hpp"
#include "cyperiods/frobenius.hpp"
#include "test_util.hpp"

using namespace cyp;

TEST_CASE("ordinary basis has identity jets and zero residual")
{
    PrecisionScope scope(50);
    OperatorData data(bundled_operator("8.62"), 40);
    FrobeniusOptions opt;
    opt.order = 60;
    opt.exact = true;
    auto b = ordinary_basis(data, Point::rational(Rational(1, 100)), opt);
    REQUIRE(b.members.size() == 4);
    for (int j = 0; j < 4; ++j) {
        const auto& m = b.members[static_cast<std::size_t>(j)];
        for (int n = 0; n < 4; ++n) CHECK(m.coeffs[static_cast<std::size_t>(n)][0] == Complex(n == j ? 1 : 0));
        auto lo = local_operator(data.op, Point::rational(Rational(1, 100)), 50);
        CHECK(exact_series_residual_zero(lo, m));
    }
    // Wronskian at the center is the identity
    auto c = ordinary_basis(data, Complex(Real("0.01"), Real("0.002")));
    CMatrix J = c.jet_matrix(Complex(Real("0.01"), Real("0.002")) + Complex(Real("1e-40"), Real(0)));
    CHECK(norm_inf(J - CMatrix::identity(4)) < Real("1e-30"));
    CHECK_THROWS_AS(ordinary_basis(data, Point::rational(Rational(-1, 81))), CenterSingular);
}

TEST_CASE("pointwise residual of a numerical basis")
{
    PrecisionScope scope(60);
    OperatorData data(bundled_operator("8.67"), 50);
    auto b = ordinary_basis(data, Complex(Real("-0.5"), Real("0.2")));
    Complex x = Complex(Real("-0.5"), Real("0.2")) + Complex(Real("0.05"), Real("0.03"));
    for (const auto& m : b.members) CHECK(pointwise_residual(data, m, x) < Real("1e-40"));
}

TEST_CASE("conifold basis shapes and exactness")
{
    PrecisionScope scope(60);
    OperatorData data(bundled_operator("8.67"), 40);
    FrobeniusOptions opt;
    opt.order = 40;
    opt.exact = true;
    auto b = conifold_basis(data, Point::rational(-1), opt);
    const auto& f1 = b.members[0];
    const auto& f2 = b.members[1];
    const auto& f3 = b.members[2];
    const auto& f4 = b.members[3];
    REQUIRE(f1.exact);
    REQUIRE(f2.exact);
    REQUIRE(f4.exact);
    CHECK((*f1.exact)[0][0] == 1);
    CHECK((*f2.exact)[0][0] == 0);
    CHECK((*f2.exact)[1][0] == 1);
    CHECK((*f4.exact)[1][0] == 0);
    CHECK((*f4.exact)[2][0] == 1);
    CHECK(f1.log_degree() == 0);
    CHECK(f2.log_degree() == 0);
    CHECK(f3.log_degree() == 1);
    CHECK(f4.log_degree() == 0);
    // the log part of f3 is f2
    for (int n = 0; n < 40; ++n) CHECK((*f3.exact)[static_cast<std::size_t>(n)][1] == (*f2.exact)[static_cast<std::size_t>(n)][0]);
    auto lo = local_operator(data.op, Point::rational(-1), 60);
    for (const auto& m : b.members) CHECK(exact_series_residual_zero(lo, m));
    // limits at t0
    CHECK(evaluate(f1, Complex(-1), 30) == Complex(1));
    CHECK(evaluate(f2, Complex(-1), 30) == Complex(0));
    CHECK(evaluate(f3, Complex(-1), 30) == Complex(0));
    // rational series: conjugate point gives conjugate value
    Complex x(Real("-0.98"), Real("0.01"));
    Complex v = evaluate(f1, x, 20);
    Complex w = evaluate(f1, conj(x), 20);
    CHECK(abs(v - conj(w)) < Real("1e-40"));
    CHECK_THROWS_AS(conifold_basis(data, Point::rational(0)), NotConifold);
}

TEST_CASE("conifold basis of 8.62 is rational")
{
    PrecisionScope scope(50);
    OperatorData data(bundled_operator("8.62"), 40);
    FrobeniusOptions opt;
    opt.order = 25;
    opt.exact = true;
    auto b = conifold_basis(data, Point::rational(Rational(-1, 81)), opt);
    for (std::size_t j : {0u, 1u, 3u}) CHECK(b.members[j].exact.has_value());
    auto lo = local_operator(data.op, Point::rational(Rational(-1, 81)), 50);
    for (const auto& m : b.members) CHECK(exact_series_residual_zero(lo, m));
}

TEST_CASE("MUM basis and formal monodromy")
{
    PrecisionScope scope(50);
    OperatorData data(bundled_operator("8.62"), 40);
    FrobeniusOptions opt;
    opt.order = 30;
    opt.exact = true;
    auto b = mum_basis(data, opt);
    CHECK((*b.members[0].exact)[0][0] == 1);
    for (int l = 0; l < 4; ++l) CHECK(b.members[static_cast<std::size_t>(l)].log_degree() == l);
    CMatrix N = b.formal_monodromy() - CMatrix::identity(4);
    CMatrix N3 = N * N * N;
    CHECK(norm_inf(N3) > Real(1));
    CHECK(norm_inf(N3 * N) < Real("1e-40"));

    auto c = conifold_basis(data, Point::rational(Rational(-1, 81)), opt);
    CMatrix M = c.formal_monodromy() - CMatrix::identity(4);
    CHECK(rank(M, Real("1e-30")) == 1);
    CHECK(norm_inf(M * M) < Real("1e-40"));
    // Im(M - I) is spanned by f2
    CHECK(abs(M(1, 2) - Complex(Real(0), two_pi())) < Real("1e-40"));
}

TEST_CASE("evaluation disk and order doubling")
{
    PrecisionScope scope(60);
    OperatorData data(bundled_operator("8.67"), 50);
    auto b = conifold_basis(data, Point::rational(-1));
    Complex far(Real("-0.5"), Real(0));
    CHECK_THROWS_AS(evaluate(b.members[0], far, 30), OutsideDisk);
    Complex x(Real("-0.97"), Real("0.02"));
    FrobeniusOptions big;
    big.order = 2 * default_order(60, 0.5);
    auto b2 = conifold_basis(data, Point::rational(-1), big);
    for (std::size_t j = 0; j < 4; ++j) {
        Real err;
        Complex v1 = evaluate(b.members[j], x, 40, &err);
        Complex v2 = evaluate(b2.members[j], x, 40);
        CHECK(abs(v1 - v2) <= err + Real("1e-55"));
    }
}
