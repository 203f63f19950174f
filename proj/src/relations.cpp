#include "cyperiods/relations.hpp"

#include "cyperiods/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cyp {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::sqrt;

Integer to_integer(const Real& x)
{
    Integer z;
    mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDN);
    return z;
}

Real from_integer(const Integer& z)
{
    Real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real round_real(const Real& x) { return boost::multiprecision::round(x); }

Real pow10(double e)
{
    return boost::multiprecision::pow(Real(10), Real(e));
}

double log10_of(const Integer& z)
{
    if (z <= 1) return 0;
    long e = 0;
    double d = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log10(d) + static_cast<double>(e) * std::log10(2.0);
}

// Threshold for |sum c_i x_i| given ||c||_1 and max |x_i|.
Real tolerance(const Real& scale, int digits, int guard) { return scale * pow10(-(digits - guard)); }

Real residual_of(const std::vector<Integer>& c, const std::vector<Real>& x, Real& scale)
{
    Real s = 0;
    Real cn = 0;
    Real xm = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += from_integer(c[i]) * x[i];
        cn += abs(from_integer(c[i]));
        xm = std::max(xm, Real(abs(x[i])));
    }
    scale = cn * xm;
    return abs(s);
}

void normalize(std::vector<Integer>& c)
{
    Integer g = 0;
    for (const auto& v : c) g = gcd(g, v);
    if (g > 1)
        for (auto& v : c) v /= g;
    for (const auto& v : c) {
        if (v == 0) continue;
        if (v < 0)
            for (auto& w : c) w = -w;
        break;
    }
}

// Ferguson-Bailey PSLQ. Returns a candidate relation (unverified) or nothing.
std::optional<std::vector<Integer>> pslq(const std::vector<Real>& input, int digits, const Integer& max_coeff)
{
    const std::size_t n = input.size();
    const Real gamma = sqrt(Real(4) / 3);
    const Real eps = pow10(-(digits - 3));

    Real norm = 0;
    for (const auto& v : input) norm += v * v;
    norm = sqrt(norm);
    std::vector<Real> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = input[i] / norm;

    // trivial case: a zero entry
    for (std::size_t i = 0; i < n; ++i)
        if (abs(x[i]) < eps) {
            std::vector<Integer> c(n, 0);
            c[i] = 1;
            return c;
        }

    std::vector<Real> s(n);
    for (std::size_t k = n; k-- > 0;) s[k] = x[k] * x[k] + (k + 1 < n ? s[k + 1] * s[k + 1] : Real(0)), s[k] = sqrt(s[k]);

    std::vector<std::vector<Real>> H(n, std::vector<Real>(n - 1, Real(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j + 1 < n && j <= i; ++j) {
            if (i == j)
                H[i][j] = s[j + 1] / s[j];
            else
                H[i][j] = -x[i] * x[j] / (s[j] * s[j + 1]);
        }
    std::vector<std::vector<Real>> A(n, std::vector<Real>(n, Real(0))), B = A;
    for (std::size_t i = 0; i < n; ++i) A[i][i] = B[i][i] = 1;
    std::vector<Real> y = x;

    auto reduce_row = [&](std::size_t i, std::size_t jmax) {
        for (std::size_t jj = jmax + 1; jj-- > 0;) {
            if (H[jj][jj] == 0) continue;
            Real t = round_real(H[i][jj] / H[jj][jj]);
            if (t == 0) continue;
            y[jj] += t * y[i];
            for (std::size_t k = 0; k <= jj; ++k) H[i][k] -= t * H[jj][k];
            for (std::size_t k = 0; k < n; ++k) {
                A[i][k] -= t * A[jj][k];
                B[k][jj] += t * B[k][i];
            }
        }
    };
    for (std::size_t i = 1; i < n; ++i) reduce_row(i, i - 1);

    // a tiny y_j marks column j of B as a relation
    auto found = [&]() -> std::optional<std::vector<Integer>> {
        std::size_t jbest = n;
        Real ybest = 0;
        for (std::size_t j = 0; j < n; ++j) {
            Real cn = 0;
            for (std::size_t k = 0; k < n; ++k) cn = std::max(cn, Real(abs(B[k][j])));
            if (abs(y[j]) < eps * std::max(Real(1), cn) && (jbest == n || abs(y[j]) < ybest)) {
                jbest = j;
                ybest = abs(y[j]);
            }
        }
        if (jbest == n) return std::nullopt;
        std::vector<Integer> c(n);
        for (std::size_t k = 0; k < n; ++k) c[k] = to_integer(B[k][jbest]);
        return c;
    };
    if (auto c = found()) return c;

    const Real bound = from_integer(max_coeff) * sqrt(Real(n));
    const Real big = pow10(digits - 2);
    for (int iter = 0; iter < 100000; ++iter) {
        std::size_t m = 0;
        Real best = -1;
        Real g = 1;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            g *= gamma;
            Real v = g * abs(H[i][i]);
            if (v > best) {
                best = v;
                m = i;
            }
        }
        std::swap(y[m], y[m + 1]);
        std::swap(A[m], A[m + 1]);
        std::swap(H[m], H[m + 1]);
        for (std::size_t k = 0; k < n; ++k) std::swap(B[k][m], B[k][m + 1]);
        if (m + 2 < n) {
            Real t0 = sqrt(H[m][m] * H[m][m] + H[m][m + 1] * H[m][m + 1]);
            Real t1 = H[m][m] / t0;
            Real t2 = H[m][m + 1] / t0;
            for (std::size_t i = m; i < n; ++i) {
                Real t3 = H[i][m];
                Real t4 = H[i][m + 1];
                H[i][m] = t1 * t3 + t2 * t4;
                H[i][m + 1] = -t2 * t3 + t1 * t4;
            }
        }
        for (std::size_t i = m + 1; i < n; ++i) reduce_row(i, std::min(i - 1, m + 1));

        if (auto c = found()) return c;

        Real hmax = 0;
        Real amax = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) hmax = std::max(hmax, Real(abs(H[i][i])));
        for (const auto& row : A)
            for (const auto& v : row) amax = std::max(amax, Real(abs(v)));
        // every relation has norm >= 1/max|H_jj|
        if (hmax == 0 || 1 / hmax > bound) return std::nullopt;
        if (amax > big) return std::nullopt;
    }
    return std::nullopt;
}

std::string join_integers(const std::vector<Integer>& c)
{
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "\t" : "") + c[i].get_str(10);
    return out;
}

// real and imaginary parts folded into one real problem with an irrational weight
std::vector<Real> fold(const std::vector<Complex>& z, bool& any_im, bool& any_re, int digits)
{
    Real tiny = pow10(-(digits - 2));
    Real scale = 0;
    for (const auto& v : z) scale = std::max(scale, abs(v));
    any_im = any_re = false;
    for (const auto& v : z) {
        if (abs(v.im) > tiny * scale) any_im = true;
        if (abs(v.re) > tiny * scale) any_re = true;
    }
    std::vector<Real> out;
    Real w = sqrt(Real(2)) + pi() / 7;
    for (const auto& v : z) {
        if (any_re && any_im)
            out.push_back(v.re + w * v.im);
        else if (any_im)
            out.push_back(v.im);
        else
            out.push_back(v.re);
    }
    return out;
}

}  // namespace

std::string RelationCertificate::serialize() const
{
    std::ostringstream out;
    out << "relation\n";
    out << "tags";
    for (const auto& t : tags) out << '\t' << t;
    out << "\ncoefficients\t" << join_integers(coefficients) << '\n';
    out << "residual\t" << to_string(residual, 6) << '\n';
    out << "digits\t" << digits_used << '\n';
    out << "max_coeff\t" << max_coeff_bound.get_str(10) << '\n';
    return out.str();
}

RelationCertificate RelationCertificate::parse(const std::string& text)
{
    RelationCertificate c;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        std::getline(ls, key, '\t');
        std::vector<std::string> fields;
        std::string f;
        while (std::getline(ls, f, '\t')) fields.push_back(f);
        if (key == "relation") {
            header = true;
        } else if (key == "tags") {
            c.tags = fields;
        } else if (key == "coefficients") {
            for (const auto& v : fields) c.coefficients.emplace_back(v, 10);
        } else if (key == "residual") {
            if (fields.size() != 1) throw std::invalid_argument("certificate: bad residual line");
            c.residual = parse_real(fields[0]);
        } else if (key == "digits") {
            if (fields.size() != 1) throw std::invalid_argument("certificate: bad digits line");
            c.digits_used = std::stoi(fields[0]);
        } else if (key == "max_coeff") {
            if (fields.size() != 1) throw std::invalid_argument("certificate: bad max_coeff line");
            c.max_coeff_bound = Integer(fields[0], 10);
        } else {
            throw std::invalid_argument("certificate: unknown key '" + key + "'");
        }
    }
    if (!header) throw std::invalid_argument("certificate: missing header");
    if (!c.tags.empty() && c.tags.size() != c.coefficients.size())
        throw std::invalid_argument("certificate: tags and coefficients differ in length");
    return c;
}

std::optional<RelationCertificate> integer_relation(const std::vector<Real>& values, int digits,
                                                    const RelationOptions& opt, const std::vector<std::string>& tags)
{
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("integer_relation needs at least two values");
    if (!tags.empty() && tags.size() != n) throw std::invalid_argument("integer_relation: tag count mismatch");
    if (opt.max_coeff < 1) throw std::invalid_argument("integer_relation: max_coeff must be positive");
    double need = static_cast<double>(n) * log10_of(opt.max_coeff) + opt.guard;
    if (digits < need)
        throw PrecisionTooLow("need at least " + std::to_string(static_cast<int>(std::ceil(need))) + " digits for " +
                              std::to_string(n) + " values with coefficients up to " + opt.max_coeff.get_str(10) +
                              ", have " + std::to_string(digits));

    // PSLQ runs at the precision the inputs are good to, so rounding noise looks like noise
    PrecisionScope scope(digits + 5);
    std::vector<Real> x(values.begin(), values.end());
    auto cand = pslq(x, digits - opt.guard / 2, opt.max_coeff);
    if (!cand) return std::nullopt;
    normalize(*cand);
    for (const auto& v : *cand)
        if (abs(v) > opt.max_coeff) return std::nullopt;
    bool nonzero = std::any_of(cand->begin(), cand->end(), [](const Integer& v) { return v != 0; });
    if (!nonzero) return std::nullopt;

    Real scale;
    Real res = residual_of(*cand, x, scale);
    if (res > tolerance(scale, digits, opt.guard)) return std::nullopt;

    RelationCertificate cert;
    cert.tags = tags;
    if (cert.tags.empty())
        for (std::size_t i = 0; i < n; ++i) cert.tags.push_back("x" + std::to_string(i + 1));
    cert.coefficients = *cand;
    cert.residual = res;
    cert.digits_used = digits;
    cert.max_coeff_bound = opt.max_coeff;
    return cert;
}

bool reverify(const RelationCertificate& cert, const std::vector<Real>& values, int digits, int guard)
{
    if (values.size() != cert.coefficients.size()) throw std::invalid_argument("reverify: size mismatch");
    PrecisionScope scope(digits + 5);
    Real scale;
    Real res = residual_of(cert.coefficients, values, scale);
    return res <= tolerance(scale, digits, guard);
}

std::vector<std::vector<Integer>> hermite_normal_form(std::vector<std::vector<Integer>> rows)
{
    if (rows.empty()) return rows;
    const std::size_t cols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        // gcd-reduce column c among rows r..end
        while (true) {
            std::size_t piv = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (piv == rows.size() || abs(rows[i][c]) < abs(rows[piv][c]))) piv = i;
            if (piv == rows.size()) break;
            std::swap(rows[r], rows[piv]);
            bool done = true;
            for (std::size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
                for (std::size_t k = c; k < cols; ++k) rows[i][k] -= q * rows[r][k];
                if (rows[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[r][c] == 0) continue;
        if (rows[r][c] < 0)
            for (auto& v : rows[r]) v = -v;
        // entries above the pivot reduced into [0, pivot)
        for (std::size_t i = 0; i < r; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
            for (std::size_t k = c; k < cols; ++k) rows[i][k] -= q * rows[r][k];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

ZModule zmodule_basis(const std::vector<Real>& values, int digits, const RelationOptions& opt)
{
    PrecisionScope scope(digits + 5);
    Real scale = 0;
    for (const auto& v : values) scale = std::max(scale, Real(abs(v)));
    const Real zero_tol = scale * pow10(-(digits - opt.guard));

    // Q-basis: first independent inputs, made positive. coords[i] = rational coordinates of values[i].
    std::vector<Real> qbasis;
    std::vector<std::vector<Rational>> coords;
    for (const auto& v : values) {
        std::vector<Rational> c(qbasis.size(), Rational(0));
        if (abs(v) <= zero_tol || scale == 0) {
            coords.push_back(c);
            continue;
        }
        std::optional<RelationCertificate> rel;
        if (!qbasis.empty()) {
            std::vector<Real> xs = qbasis;
            xs.push_back(v);
            rel = integer_relation(xs, digits, opt);
        }
        if (rel && rel->coefficients.back() != 0) {
            const Integer& cv = rel->coefficients.back();
            for (std::size_t j = 0; j < qbasis.size(); ++j) {
                c[j] = Rational(-rel->coefficients[j], cv);
                c[j].canonicalize();
            }
            coords.push_back(c);
        } else {
            bool neg = v < 0;
            qbasis.push_back(neg ? Real(-v) : v);
            c.push_back(neg ? Rational(-1) : Rational(1));
            coords.push_back(c);
        }
    }
    const std::size_t r = qbasis.size();
    ZModule out;
    out.rank = static_cast<int>(r);
    if (r == 0) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            RelationCertificate cert;
            cert.tags = {"v" + std::to_string(i + 1)};
            cert.coefficients = {Integer(1)};
            cert.residual = abs(values[i]);
            cert.digits_used = digits;
            cert.max_coeff_bound = opt.max_coeff;
            out.certificates.push_back(cert);
        }
        return out;
    }

    Integer den = 1;
    for (auto& c : coords) {
        c.resize(r, Rational(0));
        for (const auto& q : c) den = lcm(den, Integer(q.get_den()));
    }
    std::vector<std::vector<Integer>> rows;
    for (const auto& c : coords) {
        std::vector<Integer> row;
        for (const auto& q : c) row.push_back(Integer(q * den));
        rows.push_back(row);
    }
    auto hnf = hermite_normal_form(rows);
    if (hnf.size() != r) throw RankError("Z-module basis: Hermite form lost rank");

    // generators g_k = sum_j (hnf[k][j]/den) b_j
    std::vector<std::vector<Rational>> gmat;
    for (const auto& row : hnf) {
        std::vector<Rational> g;
        Real val = 0;
        for (std::size_t j = 0; j < r; ++j) {
            Rational q(row[j], den);
            q.canonicalize();
            g.push_back(q);
            val += to_real(q) * qbasis[j];
        }
        gmat.push_back(g);
        out.generators.push_back(val);
    }

    // integer coordinates of every input over the generators (triangular solve)
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<Rational> rem = coords[i];
        std::vector<Integer> k(r, 0);
        std::size_t col = 0;
        for (std::size_t g = 0; g < r; ++g) {
            while (col < r && gmat[g][col] == 0) ++col;
            Rational q = rem[col] / gmat[g][col];
            if (q.get_den() != 1) throw RankError("Z-module basis: input not in the integral span");
            k[g] = q.get_num();
            for (std::size_t j = 0; j < r; ++j) rem[j] -= q * gmat[g][j];
        }
        RelationCertificate cert;
        for (std::size_t g = 0; g < r; ++g) cert.tags.push_back("g" + std::to_string(g + 1));
        cert.tags.push_back("v" + std::to_string(i + 1));
        cert.coefficients = k;
        cert.coefficients.push_back(-1);
        std::vector<Real> xs = out.generators;
        xs.push_back(values[i]);
        Real s;
        cert.residual = residual_of(cert.coefficients, xs, s);
        cert.digits_used = digits;
        cert.max_coeff_bound = opt.max_coeff;
        out.certificates.push_back(cert);
    }
    return out;
}

Expression express(const Complex& x, const std::vector<TaggedValue>& basis, const Integer& max_den, int digits,
                   const RelationOptions& opt)
{
    if (basis.empty()) throw std::invalid_argument("express: empty basis");
    PrecisionScope scope(digits + 5);
    std::vector<Complex> all{x};
    std::vector<std::string> tags{"x"};
    for (const auto& b : basis) {
        all.push_back(b.value);
        tags.push_back(b.tag);
    }
    bool any_im = false;
    bool any_re = false;
    auto folded = fold(all, any_im, any_re, digits);
    RelationOptions o = opt;
    o.max_coeff = std::max(opt.max_coeff, max_den);
    auto rel = integer_relation(folded, digits, o, tags);
    if (!rel || rel->coefficients[0] == 0)
        throw RecognitionFailed("no expression over the basis with coefficients up to " + o.max_coeff.get_str(10));
    Expression e;
    const Integer c0 = rel->coefficients[0];
    Complex check = x;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        Rational q(-rel->coefficients[j + 1], c0);
        q.canonicalize();
        if (abs(Integer(q.get_den())) > max_den)
            throw RecognitionFailed("coefficient " + to_string(q) + " exceeds the denominator bound");
        e.coefficients.push_back(q);
        check -= basis[j].value * to_real(q);
    }
    // both parts must vanish, not just the folded combination
    Real scale = abs(x);
    for (const auto& b : basis) scale = std::max(scale, abs(b.value));
    e.residual = abs(check);
    if (e.residual > tolerance(scale * from_integer(o.max_coeff), digits, opt.guard))
        throw RecognitionFailed("folded relation does not hold for both real and imaginary parts");
    return e;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::commensurable: return "commensurable";
    case Verdict::not_found: return "not_found";
    case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

// returns false when some generator has no expression; throws PrecisionTooLow through
bool express_all(const std::vector<Complex>& from, const std::vector<Complex>& over, int digits,
                 const RelationOptions& opt, std::vector<std::vector<Rational>>& out)
{
    Real tiny = pow10(-(digits - 2));
    auto part = [](const Complex& z, bool im) { return im ? z.im : z.re; };
    out.assign(from.size(), std::vector<Rational>(over.size(), Rational(0)));
    for (std::size_t i = 0; i < from.size(); ++i) {
        for (bool im : {false, true}) {
            Real x = part(from[i], im);
            Real sc = abs(from[i]);
            if (abs(x) <= tiny * std::max(Real(1), sc)) continue;
            std::vector<TaggedValue> basis;
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < over.size(); ++j) {
                Real b = part(over[j], im);
                if (abs(b) > tiny * std::max(Real(1), abs(over[j]))) {
                    basis.push_back({"b" + std::to_string(j + 1), Complex(b)});
                    idx.push_back(j);
                }
            }
            if (basis.empty()) return false;
            try {
                auto e = express(Complex(x), basis, opt.max_coeff, digits, opt);
                for (std::size_t k = 0; k < idx.size(); ++k) {
                    Rational& slot = out[i][idx[k]];
                    if (slot != 0 && e.coefficients[k] != 0 && slot != e.coefficients[k]) return false;
                    if (e.coefficients[k] != 0) slot = e.coefficients[k];
                }
            } catch (const RecognitionFailed&) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

CommensurabilityVerdict commensurable(const std::vector<Complex>& a, const std::vector<Complex>& b, int digits,
                                      const RelationOptions& opt)
{
    CommensurabilityVerdict v;
    v.precision_used = digits;
    if (a.empty() || b.empty()) {
        v.verdict = (a.empty() && b.empty()) ? Verdict::commensurable : Verdict::not_found;
        return v;
    }
    try {
        bool ab = express_all(a, b, digits, opt, v.a_in_b);
        bool ba = express_all(b, a, digits, opt, v.b_in_a);
        v.verdict = (ab && ba) ? Verdict::commensurable : Verdict::not_found;
    } catch (const PrecisionTooLow&) {
        v.verdict = Verdict::indeterminate;
    }
    return v;
}

}  // namespace cyp
