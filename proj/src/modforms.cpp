#include "cyperiods/modforms.hpp"

#include "cyperiods/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>

namespace cyp {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::exp;
using boost::multiprecision::sqrt;

Real pow10(double e) { return boost::multiprecision::pow(Real(10), Real(e)); }

Real factorial(int n)
{
    Real r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

bool is_prime(long n)
{
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// |a_n| <= d(n) n^((k-1)/2) <= 2 n^(k/2)
Real coefficient_bound(std::size_t n, int weight) { return 2 * boost::multiprecision::pow(Real(n), Real(weight) / 2); }

// bound on sum_{n > m} 2 n^(k/2) r^n
Real q_tail(std::size_t m, const Real& r, int weight)
{
    Real ratio = r * boost::multiprecision::pow(Real(m + 2) / Real(m + 1), Real(weight) / 2);
    if (ratio >= 1) return Real(std::numeric_limits<double>::infinity());
    return coefficient_bound(m + 1, weight) * boost::multiprecision::pow(r, Real(m + 1)) / (1 - ratio);
}

// bound on sum_{n > m} 2 n^(k/2-s) (1+cn)^(s-1) e^(-cn), using Gamma(s,x)/Gamma(s) <= (1+x)^(s-1) e^-x
Real mellin_tail(std::size_t m, const Real& c, int s, int weight)
{
    Real n = m + 1;
    Real first = coefficient_bound(m + 1, weight) * boost::multiprecision::pow(n, Real(-s)) *
                 boost::multiprecision::pow(1 + c * n, Real(s - 1)) * exp(-c * n);
    Real ratio = exp(-c) * boost::multiprecision::pow(1 + 1 / n, Real(weight) / 2 + std::abs(s - 1));
    if (ratio >= 1) return Real(std::numeric_limits<double>::infinity());
    return first / (1 - ratio);
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

}  // namespace

void ModularForm::validate() const
{
    if (level < 1) throw SanityCheckFailed(label + ": level must be positive");
    if (weight < 1) throw SanityCheckFailed(label + ": weight must be positive");
    if (coefficients.empty() || coefficients[0] != 1) throw SanityCheckFailed(label + ": a_1 must be 1");
    const std::size_t n = coefficients.size();
    for (std::size_t p = 2; p <= n; ++p) {
        if (!is_prime(static_cast<long>(p))) continue;
        // a_p^2 <= 4 p^(k-1)
        Integer ap = coefficients[p - 1];
        Integer lim = 4;
        for (int i = 0; i < weight - 1; ++i) lim *= static_cast<long>(p);
        if (ap * ap > lim)
            throw SanityCheckFailed(label + ": a_" + std::to_string(p) + " = " + std::to_string(coefficients[p - 1]) +
                                    " violates the Deligne bound");
    }
    for (std::size_t m = 2; m * m <= n; ++m)
        for (std::size_t k = m + 1; m * k <= n; ++k) {
            if (std::gcd(m, k) != 1) continue;
            Integer lhs = coefficients[m * k - 1];
            Integer rhs = Integer(coefficients[m - 1]) * coefficients[k - 1];
            if (lhs != rhs)
                throw SanityCheckFailed(label + ": a_" + std::to_string(m * k) + " != a_" + std::to_string(m) +
                                        " a_" + std::to_string(k));
        }
}

Complex eval_form(const ModularForm& f, const Complex& z, int digits)
{
    if (z.im <= 0) throw std::invalid_argument("eval_form: Im z must be positive");
    PrecisionScope scope(digits + 10);
    Complex q = exp(Complex(Real(0), two_pi()) * z);
    Real r = abs(q);
    Real tol = pow10(-digits) * r;
    std::size_t m = 1;
    // the tail bound decreases eventually; search by doubling then bisection
    auto ok = [&](std::size_t k) { return q_tail(k, r, f.weight) < tol; };
    while (!ok(m)) {
        m *= 2;
        if (m > (std::size_t(1) << 40))
            throw InsufficientCoefficients("eval_form: no truncation reaches 10^-" + std::to_string(digits));
    }
    std::size_t lo = m / 2;
    while (lo + 1 < m) {
        std::size_t mid = (lo + m) / 2;
        if (ok(mid))
            m = mid;
        else
            lo = mid;
    }
    if (m > f.count())
        throw InsufficientCoefficients(f.label + ": eval_form needs " + std::to_string(m) + " coefficients, have " +
                                       std::to_string(f.count()));
    // Horner in q
    Complex acc;
    for (std::size_t n = m; n >= 1; --n) {
        acc = (acc + Complex(Real(f.a(n)))) * q;
    }
    return acc;
}

int fricke_sign(const ModularForm& f, int digits)
{
    int d = std::max(digits / 2 + 10, 20);
    PrecisionScope scope(d + 10);
    Real sn = sqrt(Real(f.level));
    Complex z(Real(0), 2 / sn);
    Complex w = Complex(-1) / (Complex(Real(f.level)) * z);
    Complex fz = eval_form(f, z, d);
    Complex fw = eval_form(f, w, d);
    Complex ratio = fw / (pow(z, f.weight) * fz);
    ratio /= boost::multiprecision::pow(Real(f.level), Real(f.weight) / 2);
    Real tol = pow10(-digits / 2.0);
    if (abs(ratio - Complex(1)) < tol) return 1;
    if (abs(ratio + Complex(1)) < tol) return -1;
    throw AmbiguousSign(f.label + ": W_N f / f = " + to_string(ratio, 12) + " is not +-1");
}

int resolve_fricke_sign(const ModularForm& f, int digits)
{
    std::optional<int> detected;
    try {
        detected = fricke_sign(f, std::min(digits, 40));
    } catch (const AmbiguousSign&) {
    } catch (const InsufficientCoefficients&) {
    }
    if (f.fricke_sign && detected && *f.fricke_sign != *detected)
        throw SanityCheckFailed(f.label + ": metadata Fricke sign " + std::to_string(*f.fricke_sign) +
                                " disagrees with detected " + std::to_string(*detected));
    if (detected) return *detected;
    if (f.fricke_sign) return *f.fricke_sign;
    throw UnknownSign(f.label + ": Fricke sign neither given nor detectable");
}

Real incomplete_gamma_int(int s, const Real& x)
{
    if (s < 1) throw std::invalid_argument("incomplete_gamma_int: s must be >= 1");
    Real term = 1;
    Real sum = 1;
    for (int j = 1; j < s; ++j) {
        term *= x / j;
        sum += term;
    }
    return factorial(s - 1) * exp(-x) * sum;
}

std::size_t mellin_terms_needed(const Real& t, int digits)
{
    double st = std::sqrt(static_cast<double>(t));
    return static_cast<std::size_t>(std::ceil(st * (digits * std::log(10.0) + 10) / (2 * M_PI))) + 50;
}

MellinValue mellin_partial_detail(const ModularForm& f, int s, const Real& t, int digits)
{
    if (t <= 0) throw std::invalid_argument("mellin_partial: t must be positive");
    if (s < 1) throw std::invalid_argument("mellin_partial: s must be a positive integer");
    PrecisionScope scope(digits + 15);
    std::size_t need = mellin_terms_needed(t, digits);
    if (need > f.count())
        throw InsufficientCoefficients(f.label + ": M(f," + std::to_string(s) + ";t) at " + std::to_string(digits) +
                                       " digits needs " + std::to_string(need) + " coefficients, have " +
                                       std::to_string(f.count()));
    Real c = two_pi() / sqrt(t);
    Real tol = pow10(-digits - 2);
    std::size_t m = need;
    while (mellin_tail(m, c, s, f.weight) > tol) {
        if (m >= f.count())
            throw InsufficientCoefficients(f.label + ": Mellin tail bound not met with " + std::to_string(f.count()) +
                                           " coefficients");
        m = std::min(f.count(), m + m / 2 + 1);
    }
    Real g = factorial(s - 1);
    Real sum = 0;
    for (std::size_t n = 1; n <= m; ++n) {
        long an = f.a(n);
        if (an == 0) continue;
        Real nn(n);
        sum += Real(an) * boost::multiprecision::pow(nn, Real(-s)) * incomplete_gamma_int(s, c * nn);
    }
    return {sum / g, mellin_tail(m, c, s, f.weight), m};
}

Real mellin_partial(const ModularForm& f, int s, const Real& t, int digits)
{
    return mellin_partial_detail(f, s, t, digits).value;
}

Real mellin(const ModularForm& f, int s, int digits) { return mellin_partial(f, s, Real(f.level), digits); }

Real l_value_split(const ModularForm& f, int s, const Real& t, int digits)
{
    const int k = f.weight;
    if (s < 1 || s > k - 1) throw std::invalid_argument("l_value: need 1 <= s <= k-1");
    int eps = resolve_fricke_sign(f, digits);
    PrecisionScope scope(digits + 15);
    Real n = Real(f.level);
    // L(s) = M(s;t) + eps N^(k/2-s) (2pi)^(2s-k) Gamma(k-s)/Gamma(s) M(k-s; N^2/t)
    Real coeff = boost::multiprecision::pow(n, Real(k) / 2 - s) * boost::multiprecision::pow(two_pi(), Real(2 * s - k)) *
                 factorial(k - s - 1) / factorial(s - 1);
    return mellin_partial(f, s, t, digits) + eps * coeff * mellin_partial(f, k - s, n * n / t, digits);
}

Real l_value(const ModularForm& f, int s, int digits) { return l_value_split(f, s, Real(f.level), digits); }

// characters

DirichletCharacter DirichletCharacter::trivial() { return {Kind::kronecker, 1, 1, "chi_{1,1}"}; }

DirichletCharacter DirichletCharacter::kronecker(long d)
{
    if (d == 0) throw std::invalid_argument("kronecker character of 0");
    long r = ((d % 4) + 4) % 4;
    long m = (r == 0 || r == 1) ? std::labs(d) : 4 * std::labs(d);
    return {Kind::kronecker, m, d, "(" + std::to_string(d) + "/.)"};
}

DirichletCharacter DirichletCharacter::from_label(const std::string& label)
{
    static const std::regex plain(R"(^\s*(\d+)\.(\d+)\s*$)");
    static const std::regex chi(R"(^\s*(?:chi|χ|\\chi)_\{?(\d+)\s*,\s*(\d+)\}?\s*$)");
    std::smatch mt;
    if (!std::regex_match(label, mt, plain) && !std::regex_match(label, mt, chi))
        throw std::invalid_argument("unrecognised character label '" + label + "'");
    long m = std::stol(mt[1]);
    long c = std::stol(mt[2]);
    if (m < 1 || c < 1 || c > m || std::gcd(m, c) != 1)
        throw std::invalid_argument("invalid Conrey label '" + label + "'");
    if ((static_cast<long long>(c) * c) % m != 1 % m)
        throw std::invalid_argument("character " + label + " is not quadratic");
    return {Kind::conrey, m, c, "chi_{" + std::to_string(m) + "," + std::to_string(c) + "}"};
}

int DirichletCharacter::operator()(long n) const
{
    long nr = ((n % modulus_) + modulus_) % modulus_;
    if (std::gcd(nr, modulus_) != 1) return 0;
    if (kind_ == Kind::kronecker) {
        if (modulus_ == 1) return 1;
        return mpz_kronecker(Integer(param_).get_mpz_t(), Integer(nr).get_mpz_t());
    }
    // Conrey: product over prime powers of the modulus
    int value = 1;
    long rest = modulus_;
    for (long p = 2; rest > 1; ++p) {
        if (rest % p != 0) continue;
        long q = 1;
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            q *= p;
            ++e;
        }
        long c = param_ % q;
        long x = nr % q;
        if (p != 2) {
            // quadratic: c = +-1 mod q, the nontrivial one is the Legendre symbol mod p
            if (c == q - 1) value *= mpz_legendre(Integer(x).get_mpz_t(), Integer(p).get_mpz_t());
            continue;
        }
        if (e == 1) continue;
        if (e == 2) {
            if (c == 3 && x % 4 == 3) value = -value;
            continue;
        }
        // 2^e, e >= 3: u = eps 5^a; only the parity of a matters for quadratic c
        auto sign = [](long u) { return u % 4 == 1 ? 1 : -1; };
        auto odd_exponent = [q, &sign](long u) {
            long v = sign(u) == 1 ? u : q - u;
            return v % 8 == 5;
        };
        int ec = sign(c);
        int ex = sign(x);
        if (ec == -1 && ex == -1) value = -value;
        if (odd_exponent(c) && odd_exponent(x)) value = -value;
    }
    return value;
}

Complex gauss_sum(const DirichletCharacter& chi)
{
    const long m = chi.modulus();
    Complex g;
    for (long a = 1; a <= m; ++a) {
        int v = chi(a);
        if (v == 0) continue;
        Real th = two_pi() * a / m;
        g += Complex(boost::multiprecision::cos(th), boost::multiprecision::sin(th)) * Real(v);
    }
    return g;
}

ModularForm twist(const ModularForm& f, const DirichletCharacter& chi, long new_level)
{
    long m = chi.modulus();
    Integer top = Integer(f.level) * m * m;
    if (new_level < 1 || top % new_level != 0)
        throw LevelInvalid("level " + std::to_string(new_level) + " does not divide N m^2 = " + top.get_str());
    ModularForm g;
    g.level = new_level;
    g.weight = f.weight;
    g.label = f.label + " x " + chi.label();
    g.coefficients.resize(f.count());
    for (std::size_t n = 1; n <= f.count(); ++n) g.coefficients[n - 1] = f.a(n) * chi(static_cast<long>(n));
    return g;
}

ShimuraReport shimura_check(const ModularForm& f, long d, int digits, std::optional<long> new_level,
                            const Integer& max_den)
{
    if (d == 0) throw std::invalid_argument("shimura_check: d must be nonzero");
    ShimuraReport rep;
    rep.d = d;
    DirichletCharacter chi = d == 1 ? DirichletCharacter::trivial() : DirichletCharacter::kronecker((d % 4 + 4) % 4 == 1 ? d : 4 * d);
    rep.character = chi.label();
    long lvl = new_level.value_or(lcm_long(f.level, chi.modulus() * chi.modulus()));
    if (d == 1) lvl = new_level.value_or(f.level);
    ModularForm g = twist(f, chi, lvl);
    if (d == 1) g.fricke_sign = f.fricke_sign;
    rep.twisted_level = lvl;
    rep.twisted_sign = resolve_fricke_sign(g, digits);

    PrecisionScope scope(digits + 15);
    Real sd = sqrt(Real(std::labs(d)));
    Real l1 = l_value(f, 1, digits);
    Real l2 = l_value(f, 2, digits);
    for (int s : {1, 2}) {
        ShimuraRatio r;
        r.s = s;
        r.twisted_value = l_value(g, s, digits);
        if (d > 0) {
            r.basis = "sqrt(" + std::to_string(d) + ") L(f," + std::to_string(s) + ")";
            r.basis_value = sd * (s == 1 ? l1 : l2);
        } else if (s == 1) {
            r.basis = "sqrt(" + std::to_string(-d) + ") L(f,2)/(2 pi)";
            r.basis_value = sd * l2 / two_pi();
        } else {
            r.basis = "2 pi sqrt(" + std::to_string(-d) + ") L(f,1)";
            r.basis_value = two_pi() * sd * l1;
        }
        Real tiny = pow10(-(digits - 10));
        bool tz = abs(r.twisted_value) < tiny;
        bool bz = abs(r.basis_value) < tiny;
        if (tz && bz) {
            rep.ratios.push_back(r);
            continue;
        }
        if (bz) throw RecognitionFailed("L(f_d," + std::to_string(s) + ") is nonzero but " + r.basis + " vanishes");
        if (tz) {
            r.ratio = Rational(0);
            r.confidence_digits = static_cast<int>(decimal_digits_of_agreement(r.twisted_value, r.basis_value));
            rep.ratios.push_back(r);
            continue;
        }
        auto e = express(Complex(r.twisted_value), {{r.basis, Complex(r.basis_value)}}, max_den, digits,
                         RelationOptions{max_den, 10});
        r.ratio = e.coefficients[0];
        r.confidence_digits = static_cast<int>(decimal_digits_of_agreement(e.residual, r.twisted_value));
        rep.ratios.push_back(r);
    }
    return rep;
}

SpecialValueLattice lattice_f(const ModularForm& f, int digits)
{
    PrecisionScope scope(digits + 15);
    SpecialValueLattice lat;
    lat.form_label = f.label;
    Complex tpi(Real(0), two_pi());
    lat.generators.push_back({"(2 pi i)^2 L(f,1)", tpi * tpi * Complex(l_value(f, 1, digits))});
    lat.generators.push_back({"(2 pi i) L(f,2)", tpi * Complex(l_value(f, 2, digits))});
    return lat;
}

SpecialValueLattice lattice_f_c(const ModularForm& f, int digits)
{
    PrecisionScope scope(digits + 15);
    SpecialValueLattice lat;
    lat.form_label = f.label;
    Complex tpi(Real(0), two_pi());
    lat.generators.push_back({"M(f,1)", Complex(mellin(f, 1, digits))});
    lat.generators.push_back({"L(f,2)/(2 pi i)", Complex(l_value(f, 2, digits)) / tpi});
    lat.generators.push_back({"M(f,3)/(2 pi^2)", Complex(mellin(f, 3, digits) / (2 * pi() * pi()))});
    return lat;
}

}  // namespace cyp
