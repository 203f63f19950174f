// Integer relations, Z-module bases and commensurability of finitely generated subgroups of C.
#pragma once

#include "cyperiods/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cyp {

struct RelationCertificate {
    std::vector<std::string> tags;
    std::vector<Integer> coefficients;
    Real residual;
    int digits_used = 0;
    Integer max_coeff_bound;

    /// key<TAB>value lines: tags, coefficients, residual, digits, max_coeff.
    std::string serialize() const;
    static RelationCertificate parse(const std::string& text);
};

struct RelationOptions {
    Integer max_coeff = 65536;
    int guard = 10;  // digits held back from the residual test
};

/// PSLQ search for c != 0 with |c_i| <= max_coeff and |sum c_i x_i| small relative to |c| max|x|.
/// Values are treated as accurate to `digits`. Throws PrecisionTooLow when
/// digits < n log10(max_coeff) + guard.
std::optional<RelationCertificate> integer_relation(const std::vector<Real>& values, int digits,
                                                    const RelationOptions& opt = {},
                                                    const std::vector<std::string>& tags = {});

/// Recomputes the residual of a certificate on (more precise) values; true when it stays below
/// the acceptance threshold at `digits`.
bool reverify(const RelationCertificate& cert, const std::vector<Real>& values, int digits, int guard = 10);

struct ZModule {
    int rank = 0;
    std::vector<Real> generators;
    /// certificates[i]: values[i] = sum_j coefficients[j] generators[j] (last entry is -1 times the value)
    std::vector<RelationCertificate> certificates;
};

/// Minimal Z-basis of the subgroup of R generated by `values`, in Hermite normal form with
/// positive pivots over the first Q-independent inputs (each taken positive).
ZModule zmodule_basis(const std::vector<Real>& values, int digits, const RelationOptions& opt = {});

struct TaggedValue {
    std::string tag;
    Complex value;
};

struct Expression {
    std::vector<Rational> coefficients;
    Real residual;
};

/// x as a Q-combination of the basis with denominators <= max_den. Throws RecognitionFailed.
Expression express(const Complex& x, const std::vector<TaggedValue>& basis, const Integer& max_den, int digits,
                   const RelationOptions& opt = {});

enum class Verdict { commensurable, not_found, indeterminate };
std::string to_string(Verdict v);

struct CommensurabilityVerdict {
    Verdict verdict = Verdict::not_found;
    std::vector<std::vector<Rational>> a_in_b;  // row i: generator i of A over B
    std::vector<std::vector<Rational>> b_in_a;
    int precision_used = 0;
};

/// Each generator of either side as a Q-combination of the other side, with real and imaginary
/// parts treated as separate problems.
CommensurabilityVerdict commensurable(const std::vector<Complex>& a, const std::vector<Complex>& b, int digits,
                                      const RelationOptions& opt = {});

/// Hermite normal form of an integer row matrix (rows spanning a lattice), zero rows dropped.
std::vector<std::vector<Integer>> hermite_normal_form(std::vector<std::vector<Integer>> rows);

}  // namespace cyp
