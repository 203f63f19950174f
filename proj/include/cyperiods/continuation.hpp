// Analytic continuation along polylines, local monodromies and period groups.
#pragma once

#include "cyperiods/frobenius.hpp"
#include "cyperiods/linalg.hpp"
#include "cyperiods/opcore.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cyp {

struct ContinuationConfig {
    int digits = 40;         // target digits of the results
    int guard = 30;          // extra working digits
    double rho = 0.5;        // step size relative to the distance to the nearest singularity
    double margin = 1e-12;   // paths closer than this to a singular point are rejected
    int max_steps = 20000;   // per path
    int order = 0;           // series order; 0 picks it from digits and rho
};

struct Path {
    std::vector<Complex> waypoints;
    std::string description;
};

struct PathMatrix {
    CMatrix matrix;
    std::string from_basis;
    std::string to_basis;
    Real error_estimate;
    Real condition;
};

/// second after first.
PathMatrix compose(const PathMatrix& second, const PathMatrix& first);

struct ConifoldPeriod {
    CVector at_basepoint;  // coordinates in the ordinary basis at the basepoint
    CVector at_t0;         // coordinates in the conifold Frobenius basis (f1, f2, f3, f4)
    PathMatrix monodromy;  // local monodromy at t0 in the basepoint basis
};

struct PeriodGroupRaw {
    std::vector<Complex> values;
    std::vector<std::string> provenance;  // word producing each value
    Point t0;
    Real error_estimate;
    int confident_digits = 0;
};

/// Computation context: operator, singular points and precision settings.
/// Every method runs at digits + guard working digits.
class Continuation {
public:
    explicit Continuation(FuchsianOperator op, ContinuationConfig cfg = {});

    const OperatorData& data() const { return data_; }
    const ContinuationConfig& config() const { return cfg_; }
    int working_digits() const { return cfg_.digits + cfg_.guard; }

    LocalBasis basis_at(const Complex& z) const;
    /// Conifold, MUM or general Frobenius basis at a singular point.
    LocalBasis special_basis(const Point& s) const;

    /// Expresses the solutions of A in the coordinates of B by matching jets at an ordinary center.
    PathMatrix transfer(const LocalBasis& a, const LocalBasis& b) const;
    /// Ordinary basis at the first waypoint to ordinary basis at the last.
    PathMatrix path_matrix(const Path& path) const;
    CVector continue_vector(const Path& path, const CVector& v) const;

    /// Segment from a to b deformed through one waypoint displaced into the upper half-plane.
    Path default_path(const Point& from, const Point& to) const;
    /// The displaced waypoint of default_path(t0, mum).
    Complex default_basepoint(const Point& t0, const Point& mum) const;

    /// Counter-clockwise loop around s along the straight leg from the basepoint.
    /// Finite s: formal monodromy of the local Frobenius basis, or a numerical circle if numeric=true
    /// (also the fallback when the local basis cannot be built). Infinity: inverse of a big circle.
    PathMatrix local_monodromy(const Complex& basepoint, const Point& s, bool numeric = false) const;
    /// Finite singular points in counter-clockwise spider order around the basepoint, then infinity.
    std::vector<std::pair<Point, PathMatrix>> monodromies(const Complex& basepoint) const;

    ConifoldPeriod conifold_period(const Point& t0, const Complex& basepoint) const;
    /// f1-coordinate at t0 of a solution given in the basepoint basis.
    Complex eval_at_t0(const Point& t0, const Complex& basepoint, const CVector& v) const;

    PeriodGroupRaw period_group_L0(const Point& t0, const Point& mum, const std::optional<Path>& path = std::nullopt,
                                   int n_lo = -8, int n_hi = 8) const;
    PeriodGroupRaw period_group_full(const Point& t0, const std::optional<Complex>& basepoint = std::nullopt,
                                     int word_length = 3) const;

private:
    struct Leg {
        PathMatrix to_near;  // basepoint basis to ordinary basis at `near`
        Complex near;
    };
    Leg leg(const Complex& basepoint, const Point& s) const;
    Complex near_point(const Point& s, const Complex& toward) const;
    void check_segment(const Complex& a, const Complex& b) const;
    FrobeniusOptions options() const;

    ContinuationConfig cfg_;
    OperatorData data_;
};

}  // namespace cyp
