// Order-4 Fuchsian operators in theta-form: parsing, conversion and local analysis.
#pragma once

#include "cyperiods/numeric.hpp"
#include "cyperiods/polynomial.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cyp {

using ThetaBlock = std::array<Rational, 5>;

/// P = sum_k x^k (c_{k,0} + c_{k,1} theta + ... + c_{k,4} theta^4), theta = x d/dx.
struct FuchsianOperator {
    std::map<int, ThetaBlock> coeffs;  // zero blocks are never stored
    std::string name;
    std::string variable = "x";

    /// Drops zero blocks and throws OrderError unless some c_{k,4} is nonzero.
    void normalize();
    int max_power() const;
    int min_power() const;
    QPoly block(int k) const;              // theta-polynomial of x^k
    QPoly theta_coefficient(int j) const;  // sum_k c_{k,j} x^k

    bool operator==(const FuchsianOperator& o) const { return coeffs == o.coeffs; }
};

/// Accepts the block file format (`name:`, `var:`, `k: [c0, c1, c2, c3, c4]`, `#` comments)
/// or a single expression in x and theta such as "θ^4 + x*(578θ^4 - 6)".
FuchsianOperator parse_operator(std::string_view text);
std::string render(const FuchsianOperator& op);

/// P_0..P_4 with P = sum_i P_i(x) (d/dx)^i.
using DerivativeForm = std::array<QPoly, 5>;
DerivativeForm to_derivative_form(const FuchsianOperator& op);
/// Inverse conversion; throws OrderError when P_i is not divisible by x^i or the order is not 4.
FuchsianOperator to_theta_form(const DerivativeForm& d);

/// The operator in w = 1/x, multiplied by w^K so all powers are non-negative.
FuchsianOperator at_infinity(const FuchsianOperator& op);

/// A point of the projective line: finite (exact or approximate) or infinity.
struct Point {
    bool infinite = false;
    Complex value;
    std::optional<Rational> exact;

    static Point rational(const Rational& q);
    static Point complex(const Complex& z);
    static Point infinity();
    bool is_real() const;
    std::string str(int digits = 20) const;
};

/// "inf", "∞", "-1/81", "0.25+0.75i", ...
Point parse_point(std::string_view text);

enum class PointKind { ordinary, MUM, conifold, half_conifold, quarter_conifold, other };
std::string to_string(PointKind k);

/// The operator around a center c written as T^m * sum_k T^k R_k(theta_T), T = x - c.
struct LocalOperator {
    Point center;
    int shift = 0;                                   // m = 4 - ord_c(P_4)
    std::vector<CPoly> blocks;                       // R_k, theta-coefficients ascending
    std::optional<std::vector<QPoly>> exact_blocks;  // when the center is rational (or infinity)
    const CPoly& indicial() const { return blocks.front(); }
};

/// Local operator at a finite point; at infinity the w = 1/x chart is used.
/// `p4_order` overrides the numerical vanishing-order detection at non-rational centers.
LocalOperator local_operator(const FuchsianOperator& op, const Point& c, int digits, int p4_order = -1);

struct SingularPoint {
    Point location;
    std::vector<Complex> exponents;                  // sorted by real part
    std::vector<std::optional<Rational>> exact_exponents;
    PointKind kind = PointKind::other;
    int p4_order = 0;                                // multiplicity as a root of the leading coefficient
};

/// Roots of the indicial polynomial with multiplicity (sorted); (0,1,2,3) at ordinary points.
std::vector<Complex> local_exponents(const FuchsianOperator& op, const Point& p, int digits);
PointKind classify(const std::vector<std::optional<Rational>>& exponents);

/// All singular points (finite roots of the reduced leading coefficient, then infinity if singular).
/// Closed under conjugation. Throws RootIsolationFailure.
std::vector<SingularPoint> singular_points(const FuchsianOperator& op, int digits);

/// Full local data at an arbitrary point (ordinary points get kind=ordinary).
SingularPoint analyze_point(const FuchsianOperator& op, const Point& p, int digits);

/// Sum over singular points (infinity included) of (sum of exponents - 6); -12 for Fuchsian operators.
Complex fuchs_sum(const std::vector<SingularPoint>& points);

/// theta-polynomial of falling factorial theta (theta-1) ... (theta-i+1).
QPoly falling_factorial(int i);

}  // namespace cyp
