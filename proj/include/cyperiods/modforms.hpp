// Weight-k newforms on Gamma0(N): q-expansions, Fricke signs, partial Mellin transforms,
// L-values, quadratic characters and twists.
#pragma once

#include "cyperiods/numeric.hpp"
#include "cyperiods/relations.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cyp {

struct ModularForm {
    long level = 1;
    int weight = 4;
    std::vector<long> coefficients;  // coefficients[n-1] = a_n
    std::optional<int> fricke_sign;
    std::string label;

    long a(std::size_t n) const { return coefficients.at(n - 1); }
    std::size_t count() const { return coefficients.size(); }
    /// a_1 = 1, multiplicativity on coprime pairs, Deligne bound at primes. Throws SanityCheckFailed.
    void validate() const;
};

/// Sum a_n q^n, q = exp(2 pi i z), to a tail below 10^-digits |q|. Throws InsufficientCoefficients.
Complex eval_form(const ModularForm& f, const Complex& z, int digits);

/// W_N f / f at z = 2i/sqrt(N), rounded to +-1. Throws AmbiguousSign.
int fricke_sign(const ModularForm& f, int digits);

/// Metadata sign checked against detection; a disagreement throws SanityCheckFailed.
/// Throws UnknownSign when neither is available.
int resolve_fricke_sign(const ModularForm& f, int digits);

/// Gamma(s, x) for integer s >= 1.
Real incomplete_gamma_int(int s, const Real& x);

/// Terms needed for `digits` at split parameter t.
std::size_t mellin_terms_needed(const Real& t, int digits);

struct MellinValue {
    Real value;
    Real tail_bound;
    std::size_t terms = 0;
};

/// M(f,s;t) = Gamma(s)^-1 sum a_n n^-s Gamma(s, 2 pi n / sqrt t).
MellinValue mellin_partial_detail(const ModularForm& f, int s, const Real& t, int digits);
Real mellin_partial(const ModularForm& f, int s, const Real& t, int digits);
Real mellin(const ModularForm& f, int s, int digits);  // t = N

/// L(f,s) = M(f,s) + eps (2pi/sqrt N)^(2s-k) Gamma(k-s)/Gamma(s) M(f,k-s). Throws UnknownSign.
Real l_value(const ModularForm& f, int s, int digits);
/// Same value from the integral split at 1/sqrt(t) instead of 1/sqrt(N).
Real l_value_split(const ModularForm& f, int s, const Real& t, int digits);

/// Quadratic (Kronecker-symbol) Dirichlet character.
class DirichletCharacter {
public:
    static DirichletCharacter trivial();
    /// n -> (D/n) with modulus |D| for D = 0,1 mod 4, else 4|D|.
    static DirichletCharacter kronecker(long d);
    /// Conrey label "m.c" (or chi_{m,c}); only quadratic characters (c^2 = 1 mod m) are accepted.
    static DirichletCharacter from_label(const std::string& label);

    long modulus() const { return modulus_; }
    const std::string& label() const { return label_; }
    int operator()(long n) const;
    int parity() const { return (*this)(modulus_ - 1); }

private:
    enum class Kind { kronecker, conrey };
    DirichletCharacter(Kind kind, long modulus, long param, std::string label)
        : kind_(kind), modulus_(modulus), param_(param), label_(std::move(label))
    {
    }
    Kind kind_;
    long modulus_;
    long param_;  // D for kronecker, c for conrey
    std::string label_;
};

Complex gauss_sum(const DirichletCharacter& chi);

/// Coefficients a_n chi(n) at the caller's level; Fricke sign unset. Throws LevelInvalid unless
/// new_level divides N m^2.
ModularForm twist(const ModularForm& f, const DirichletCharacter& chi, long new_level);

struct ShimuraRatio {
    int s = 1;
    std::string basis;  // what the twisted value is compared with
    Real twisted_value;
    Real basis_value;
    std::optional<Rational> ratio;  // none when both sides vanish
    int confidence_digits = 0;
};

struct ShimuraReport {
    long d = 1;
    std::string character;
    long twisted_level = 1;
    int twisted_sign = 1;
    std::vector<ShimuraRatio> ratios;
};

/// Twists f by the character of Q(sqrt d) and recognizes L(f_d, s) against
/// d > 0: sqrt(d) L(f,s);  d < 0: sqrt|d| L(f,2)/(2 pi) for s = 1 and 2 pi sqrt|d| L(f,1) for s = 2.
/// new_level defaults to lcm(N, m^2). Throws RecognitionFailed.
ShimuraReport shimura_check(const ModularForm& f, long d, int digits, std::optional<long> new_level = std::nullopt,
                            const Integer& max_den = 10000);

struct SpecialValueLattice {
    std::string form_label;
    std::vector<TaggedValue> generators;
};

/// (2 pi i)^2 L(f,1), (2 pi i) L(f,2).
SpecialValueLattice lattice_f(const ModularForm& f, int digits);
/// M(f,1), L(f,2)/(2 pi i), M(f,3)/(2 pi^2).
SpecialValueLattice lattice_f_c(const ModularForm& f, int digits);

}  // namespace cyp
