// Frobenius-method local solutions at ordinary, MUM, conifold and general regular singular points.
#pragma once

#include "cyperiods/linalg.hpp"
#include "cyperiods/opcore.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cyp {

/// Operator plus its singular points, computed once and shared by every local basis.
struct OperatorData {
    FuchsianOperator op;
    DerivativeForm dform;
    std::vector<SingularPoint> singular;  // infinity (if singular) is last
    int digits = 60;

    OperatorData(FuchsianOperator op_in, int digits_in);
    /// Distance from z to the nearest finite singular point other than z itself.
    Real radius(const Complex& z) const;
    /// Distance from z to the nearest finite singular point (0 if z is one).
    Real distance_to_singular(const Complex& z) const;
    /// The singular point at p (exact comparison for rational points, tolerance otherwise), or null.
    const SingularPoint* find(const Point& p) const;
};

/// y = T^rho0 * sum_n T^n sum_j c[n][j] log(T)^j / j!,  T = x - center (T = 1/x at infinity).
struct LocalSolution {
    Point center;
    Rational exponent;  // rho0
    std::vector<std::array<Complex, 4>> coeffs;
    std::optional<std::vector<std::array<Rational, 4>>> exact;
    Real tail_estimate;  // heuristic truncation error on the evaluation disk
    Real disk_radius;    // rho * distance to the nearest other singularity

    int truncation_order() const { return static_cast<int>(coeffs.size()); }
    int log_degree() const;
    /// Coefficient series of log(T)^j (the 1/j! is folded in).
    CPoly log_series(int j) const;
    /// y, y', y''/2!, ... in the local variable T.
    std::vector<Complex> local_jets(const Complex& T, int count = 4) const;
    /// The solution with log(T) replaced by log(T) + 2 pi i (one counter-clockwise turn).
    LocalSolution continued_around() const;
    /// The log-shift: sum_j y_{j+1} log^j/j!, again a solution.
    LocalSolution log_part() const;
};

/// Where a free Frobenius datum sits: exponent group rho0, offset n0, log index l.
struct FreePosition {
    Rational rho0;
    int n0 = 0;
    int l = 0;
};

struct LocalBasis {
    Point center;
    PointKind kind = PointKind::other;
    std::vector<Rational> exponents;
    std::vector<LocalSolution> members;
    std::vector<FreePosition> positions;
    CMatrix free_values;  // free data of the members (columns) at `positions` (rows)
    Real radius;          // distance to the nearest other singularity
    Real rho;
    std::string id;

    /// Coordinates of y in this basis (via its free data).
    CVector coordinates(const LocalSolution& y) const;
    /// Formal local monodromy (one counter-clockwise turn) in this basis.
    CMatrix formal_monodromy() const;
    /// Columns are the jets (y, y', y''/2, y'''/6) in x of each member at the point x.
    CMatrix jet_matrix(const Complex& x) const;
    /// Largest tail estimate among the members, scaled to the point x.
    Real tail_at(const Complex& x) const;
};

struct FrobeniusOptions {
    int order = 0;        // 0 selects the order from digits and rho
    double rho = 0.5;     // disk usage ratio
    bool exact = false;   // compute rational coefficients (rational centers only)
};

/// Series order needed for `digits` at disk ratio rho.
int default_order(int digits, double rho);

/// General Frobenius basis at any point (members ordered by exponent, log index).
LocalBasis frobenius_basis(const OperatorData& data, const Point& p, const FrobeniusOptions& opt = {});
/// Identity initial conditions: member j is T^j + O(T^4). Throws CenterSingular.
LocalBasis ordinary_basis(const OperatorData& data, const Complex& center, const FrobeniusOptions& opt = {});
LocalBasis ordinary_basis(const OperatorData& data, const Point& center, const FrobeniusOptions& opt = {});
/// f1 = 1 + O(T), f2 = T + O(T^2), f3 = T*series + f2 log T, f4 = T^2 + O(T^3). Throws NotConifold.
LocalBasis conifold_basis(const OperatorData& data, const Point& t0, const FrobeniusOptions& opt = {});
/// y0 = 1 + O(x), y_l = y0 log^l/l! + ... at x = 0. Throws NotMUM.
LocalBasis mum_basis(const OperatorData& data, const FrobeniusOptions& opt = {});

/// Value at x. At the center the limit is used (0 for members vanishing there).
/// Throws OutsideDisk, or PrecisionLoss when the tail exceeds 10^-digits relative.
Complex evaluate(const LocalSolution& sol, const Complex& x, int digits, Real* error = nullptr);

/// max_n |sum_k R_k(nu - k + S) c_{n-k}| over the truncation range (0 for exact data satisfying it).
Real series_residual(const LocalOperator& lo, const LocalSolution& sol);
bool exact_series_residual_zero(const LocalOperator& lo, const LocalSolution& sol);
/// |sum_i P_i(x) y^(i)(x)| relative to the sum of the term magnitudes.
Real pointwise_residual(const OperatorData& data, const LocalSolution& sol, const Complex& x);

}  // namespace cyp
