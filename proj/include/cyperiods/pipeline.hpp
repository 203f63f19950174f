// Conifold period pipeline: L0 orbit, Z-module generators and a sublattice of orbit values.
#pragma once

#include "cyperiods/continuation.hpp"
#include "cyperiods/relations.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cyp {

struct PeriodOptions {
    int digits = 60;
    Point t0;
    Point mum = Point::rational(0);
    std::optional<Path> path;  // t0 -> ... -> mum, default_path otherwise
    int window = 3;            // orbit exponents -window..window
    int order = 0;
    RelationOptions relations;
};

struct OrbitValue {
    int n = 0;  // power of the MUM monodromy
    Real value;
};

/// Generators of one real direction (Re or Im parts of the orbit).
struct DirectionReport {
    ZModule basis;                      // Z-basis of every orbit value in the window
    std::vector<OrbitValue> leading;    // first Q-independent values in the order n = -1, -2, .., 1, 2, ..
    std::optional<Integer> index;       // index of <leading> in the Z-basis span
    std::string problem;                // why the basis is empty, if it is
};

struct PeriodReport {
    std::string operator_name;
    Point t0;
    Point mum;
    Complex basepoint;
    PeriodGroupRaw raw;  // values[k] belongs to n = k - window
    DirectionReport real;
    DirectionReport imag;
    int confident_digits = 0;
    double seconds = 0;
};

/// Throws whatever continuation raises. When the relation search lacks precision the basis is
/// left empty with rank 0 and `problem` says why.
PeriodReport compute_periods(const FuchsianOperator& op, const PeriodOptions& opt);

}  // namespace cyp
