#include <doctest.h>

#include "cyperiods/error.hpp"
#include "cyperiods/opcore.hpp"

#include <fstream>
#include <sstream>

using namespace cyp;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FuchsianOperator bundled(const std::string& id)
{
    return parse_operator(slurp(std::string(CYPERIODS_DATA_DIR) + "/operators/" + id + ".op"));
}

bool has_point(const std::vector<SingularPoint>& pts, const Rational& q, PointKind kind)
{
    for (const auto& p : pts)
        if (p.location.exact && *p.location.exact == q && p.kind == kind) return true;
    return false;
}

}  // namespace

TEST_CASE("parse bundled operators")
{
    auto op = bundled("8.62");
    CHECK(op.name == "8.62");
    QPoly b1 = op.block(1);
    REQUIRE(b1.size() == 5);
    CHECK(b1 == QPoly{-6, -73, -359, -572, 578});
    // x^8 block is -2^12 3^24 5^2 (theta+1)^4
    Rational c = Rational(-1) * Rational(Integer(4096)) * Rational(Integer("282429536481")) * 25;
    QPoly expect{c, 4 * c, 6 * c, 4 * c, c};
    CHECK(op.block(8) == expect);

    auto op67 = bundled("8.67");
    CHECK(op67.block(0) == QPoly{0, 0, 0, 0, 25});
}

TEST_CASE("expression syntax")
{
    auto op = parse_operator("θ^4");
    REQUIRE(op.coeffs.size() == 1);
    CHECK(op.coeffs.at(0) == ThetaBlock{0, 0, 0, 0, 1});

    // theta x = x (theta + 1)
    auto w = parse_operator("theta^4 + theta*x");
    CHECK(w.block(1) == QPoly{1, 1});

    // the printed form of 8.67 agrees with the block file
    auto printed = parse_operator(
        "5^{2} θ^4+5 x(477θ^4+978θ^3+769θ^2+280θ+40)"
        "-2^{2}x^{2}(46θ^4-2582θ^3-5689θ^2-4120θ-1040)+2^{2} x^{3}(772θ^4-4872θ^3-11765θ^2-7335θ-1480)"
        "+2^{4} 3 x^{4}(140θ^4+500θ^3-672θ^2-1313θ-512)-2^{6} x^{5}(31θ^4+154θ^3-596θ^2-729θ-227)"
        "+2^{7} x^{6}(32θ^4-264θ^3-500θ^2-303θ-58)+2^{8} x^{7}(12θ^4+72θ^3+121θ^2+85θ+22)-2^{12} x^{8}((θ+1)^4)");
    CHECK(printed == bundled("8.67"));
}

TEST_CASE("syntax errors carry positions")
{
    try {
        parse_operator("name: bad\n0: [0, 0, 0, 0, 1]\n1: [1, 2, x, 4, 5]\n");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 11);
    }
    CHECK_THROWS_AS(parse_operator("0: [0, 0, 0, 1.5, 1]"), SyntaxError);
    CHECK_THROWS_AS(parse_operator("θ^4 + (x"), SyntaxError);
    CHECK_THROWS_AS(parse_operator("0: [0, 0, 0, 1]"), OrderError);
    CHECK_THROWS_AS(parse_operator("θ^5"), OrderError);
    CHECK_THROWS_AS(parse_operator("θ^3 + x θ^2"), OrderError);
}

TEST_CASE("render round trip")
{
    for (const char* id : {"8.62", "8.67"}) {
        auto op = bundled(id);
        CHECK(parse_operator(render(op)) == op);
    }
    auto small = parse_operator("1/2 θ^4 - x(θ+1/3)^2 θ^2");
    CHECK(parse_operator(render(small)) == small);
}

TEST_CASE("derivative form")
{
    auto d = to_derivative_form(parse_operator("θ^4"));
    CHECK(d[4] == QPoly{0, 0, 0, 0, 1});
    CHECK(d[3] == QPoly{0, 0, 0, 6});
    CHECK(d[2] == QPoly{0, 0, 7});
    CHECK(d[1] == QPoly{0, 1});
    CHECK(d[0].empty());
    for (const char* id : {"8.62", "8.67"}) {
        auto op = bundled(id);
        CHECK(to_theta_form(to_derivative_form(op)) == op);
    }
}

TEST_CASE("singular points and exponents of 8.67")
{
    auto op = bundled("8.67");
    auto pts = singular_points(op, 40);
    CHECK(has_point(pts, Rational(-1), PointKind::conifold));
    CHECK(has_point(pts, Rational(0), PointKind::MUM));
    auto e = local_exponents(op, Point::rational(-1), 40);
    REQUIRE(e.size() == 4);
    CHECK(e[0] == Complex(0));
    CHECK(e[1] == Complex(1));
    CHECK(e[2] == Complex(1));
    CHECK(e[3] == Complex(2));
    // conjugation closure
    for (const auto& p : pts) {
        if (p.location.infinite || p.location.value.im == 0) continue;
        bool found = false;
        for (const auto& q : pts)
            if (!q.location.infinite && abs(q.location.value - conj(p.location.value)) == 0) found = true;
        CHECK(found);
    }
    Complex f = fuchs_sum(pts);
    CHECK(abs(f - Complex(-12)) < Real("1e-20"));
    auto ord = local_exponents(op, Point::rational(Rational(1, 100)), 30);
    CHECK(ord[3] == Complex(3));
}

TEST_CASE("singular points and exponents of 8.62")
{
    auto op = bundled("8.62");
    auto pts = singular_points(op, 40);
    CHECK(has_point(pts, Rational(-1, 81), PointKind::conifold));
    CHECK(has_point(pts, Rational(0), PointKind::MUM));
    Complex f = fuchs_sum(pts);
    CHECK(abs(f - Complex(-12)) < Real("1e-20"));
}

TEST_CASE("infinity chart")
{
    auto op = bundled("8.62");
    auto w = at_infinity(at_infinity(op));
    w.variable = op.variable;
    CHECK(w == op);
    auto e = local_exponents(op, Point::infinity(), 30);
    for (const auto& z : e) CHECK(z == Complex(1));
}

TEST_CASE("point parsing")
{
    CHECK(parse_point("-1/81").exact == Rational(-1, 81));
    CHECK(parse_point("0.25").exact == Rational(1, 4));
    CHECK(parse_point("inf").infinite);
    auto z = parse_point("0.25+0.75i");
    CHECK(!z.exact);
    CHECK(z.value.im == Real("0.75"));
}
