#include "cyperiods/polynomial.hpp"

#include "cyperiods/error.hpp"

#include <algorithm>

namespace cyp {

void trim(QPoly& p)
{
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const QPoly& p)
{
    for (std::size_t k = p.size(); k-- > 0;)
        if (p[k] != 0) return static_cast<int>(k);
    return -1;
}

QPoly add(const QPoly& a, const QPoly& b)
{
    QPoly c(std::max(a.size(), b.size()));
    for (std::size_t k = 0; k < a.size(); ++k) c[k] += a[k];
    for (std::size_t k = 0; k < b.size(); ++k) c[k] += b[k];
    trim(c);
    return c;
}

QPoly sub(const QPoly& a, const QPoly& b)
{
    QPoly c(std::max(a.size(), b.size()));
    for (std::size_t k = 0; k < a.size(); ++k) c[k] += a[k];
    for (std::size_t k = 0; k < b.size(); ++k) c[k] -= b[k];
    trim(c);
    return c;
}

QPoly mul(const QPoly& a, const QPoly& b)
{
    if (a.empty() || b.empty()) return {};
    QPoly c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    trim(c);
    return c;
}

QPoly scale(const QPoly& a, const Rational& s)
{
    QPoly c = a;
    for (auto& v : c) v *= s;
    trim(c);
    return c;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b)
{
    const int db = degree(b);
    if (db < 0) throw std::domain_error("polynomial division by zero");
    QPoly r = a;
    trim(r);
    QPoly q;
    if (degree(r) >= db) q.assign(static_cast<std::size_t>(degree(r) - db + 1), Rational(0));
    while (degree(r) >= db) {
        const int dr = degree(r);
        Rational f = r[static_cast<std::size_t>(dr)] / b[static_cast<std::size_t>(db)];
        q[static_cast<std::size_t>(dr - db)] = f;
        for (int k = 0; k <= db; ++k) r[static_cast<std::size_t>(dr - db + k)] -= f * b[static_cast<std::size_t>(k)];
        trim(r);
    }
    trim(q);
    return {q, r};
}

QPoly gcd(QPoly a, QPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) a = scale(a, Rational(1) / a.back());
    return a;
}

QPoly derivative(const QPoly& p)
{
    QPoly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
    trim(d);
    return d;
}

Rational evaluate(const QPoly& p, const Rational& x)
{
    Rational s = 0;
    for (std::size_t k = p.size(); k-- > 0;) s = s * x + p[k];
    return s;
}

Complex evaluate(const QPoly& p, const Complex& x)
{
    Complex s;
    for (std::size_t k = p.size(); k-- > 0;) s = s * x + to_complex(p[k]);
    return s;
}

Complex evaluate(const CPoly& p, const Complex& x)
{
    Complex s;
    for (std::size_t k = p.size(); k-- > 0;) s = s * x + p[k];
    return s;
}

QPoly taylor_shift(const QPoly& p, const Rational& c)
{
    // Horner in the ring Q[T]: p(c+T)
    QPoly out;
    QPoly lin{c, Rational(1)};
    for (std::size_t k = p.size(); k-- > 0;) {
        out = mul(out, lin);
        if (out.empty()) out.push_back(0);
        out[0] += p[k];
        trim(out);
    }
    return out;
}

CPoly taylor_shift(const QPoly& p, const Complex& c)
{
    CPoly out;
    for (std::size_t k = p.size(); k-- > 0;) {
        CPoly next(out.size() + 1);
        for (std::size_t j = 0; j < out.size(); ++j) {
            next[j] += out[j] * c;
            next[j + 1] += out[j];
        }
        if (next.empty()) next.emplace_back();
        next[0] += to_complex(p[k]);
        out = std::move(next);
    }
    return out;
}

int order_at(const QPoly& p, const Rational& c)
{
    QPoly s = taylor_shift(p, c);
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s[k] != 0) return static_cast<int>(k);
    return -1;
}

std::vector<std::pair<QPoly, int>> squarefree_factorization(const QPoly& p)
{
    std::vector<std::pair<QPoly, int>> out;
    if (degree(p) <= 0) return out;
    QPoly monic = scale(p, Rational(1) / p[static_cast<std::size_t>(degree(p))]);
    QPoly d = derivative(monic);
    QPoly a = gcd(monic, d);
    QPoly b = divmod(monic, a).first;
    QPoly c = divmod(d, a).first;
    QPoly e = sub(c, derivative(b));
    int i = 1;
    while (degree(b) > 0) {
        QPoly f = gcd(b, e);
        if (degree(f) > 0) out.emplace_back(f, i);
        b = divmod(b, f).first;
        c = divmod(e, f).first;
        e = sub(c, derivative(b));
        ++i;
    }
    return out;
}

std::vector<Complex> aberth_roots(const CPoly& p_in, int digits)
{
    CPoly p = p_in;
    while (!p.empty() && p.back().re == 0 && p.back().im == 0) p.pop_back();
    const int n = static_cast<int>(p.size()) - 1;
    if (n <= 0) return {};
    CPoly dp;
    for (int k = 1; k <= n; ++k) dp.push_back(p[static_cast<std::size_t>(k)] * Real(k));
    // Cauchy bound for the initial circle
    Real bound = 0;
    for (int k = 0; k < n; ++k) {
        Real v = abs(p[static_cast<std::size_t>(k)] / p[static_cast<std::size_t>(n)]);
        if (v > bound) bound = v;
    }
    bound += 1;
    Real radius = bound / 2;
    std::vector<Complex> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Real angle = two_pi() * Real(k) / n + Real(0.4);
        z[static_cast<std::size_t>(k)] = Complex(radius * boost::multiprecision::cos(angle), radius * boost::multiprecision::sin(angle));
    }
    const Real tol = boost::multiprecision::pow(Real(10), -digits);
    for (int iter = 0; iter < 2000; ++iter) {
        Real worst = 0;
        for (int k = 0; k < n; ++k) {
            auto& zk = z[static_cast<std::size_t>(k)];
            Complex pv = evaluate(p, zk);
            Complex dv = evaluate(dp, zk);
            if (pv.re == 0 && pv.im == 0) continue;
            Complex w = pv / dv;
            Complex s;
            for (int j = 0; j < n; ++j)
                if (j != k) s += Complex(1) / (zk - z[static_cast<std::size_t>(j)]);
            Complex corr = w / (Complex(1) - w * s);
            zk -= corr;
            Real scale = abs(zk);
            if (scale < 1) scale = 1;
            Real rel = abs(corr) / scale;
            if (rel > worst) worst = rel;
        }
        if (worst < tol) break;
    }
    return z;
}

namespace {

Real inclusion_radius(const CPoly& p, const Complex& z)
{
    CPoly dp;
    for (std::size_t k = 1; k < p.size(); ++k) dp.push_back(p[k] * Real(static_cast<long>(k)));
    Complex pv = evaluate(p, z);
    Complex dv = evaluate(dp, z);
    Real n = static_cast<long>(p.size() - 1);
    if (dv.re == 0 && dv.im == 0) return Real(1);
    return n * abs(pv) / abs(dv);
}

}  // namespace

std::vector<IsolatedRoot> isolate_roots(const QPoly& p, int digits)
{
    auto factors = squarefree_factorization(p);
    for (int attempt = 0; attempt < 4; ++attempt) {
        const int work = (digits + 20) << attempt;
        PrecisionScope scope(work);
        std::vector<IsolatedRoot> roots;
        for (const auto& [factor, mult] : factors) {
            CPoly cp;
            for (const auto& c : factor) cp.push_back(to_complex(c));
            // integer content of the factor bounds rational-root denominators
            Integer lcm_den = 1;
            for (const auto& c : factor) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den().get_mpz_t());
            Integer lead = abs(Rational(factor.back() * lcm_den).get_num());
            for (const auto& z : aberth_roots(cp, work - 5)) {
                IsolatedRoot r;
                r.value = z;
                r.radius = inclusion_radius(cp, z);
                r.multiplicity = mult;
                roots.push_back(std::move(r));
            }
            // exact rational recognition for roots near the real axis
            for (auto& r : roots) {
                if (r.multiplicity != mult || r.exact) continue;
                if (boost::multiprecision::abs(r.value.im) > r.radius + boost::multiprecision::pow(Real(10), -(work / 2))) continue;
                Rational q;
                Real tol = r.radius * 4 + boost::multiprecision::pow(Real(10), -(work / 2));
                if (recognize_rational(r.value.re, lead, tol, q) && evaluate(factor, q) == 0) {
                    r.exact = q;
                    r.value = to_complex(q);
                    r.radius = 0;
                }
            }
        }
        // symmetrize with respect to complex conjugation
        std::vector<bool> done(roots.size(), false);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (done[i] || roots[i].exact) continue;
            if (boost::multiprecision::abs(roots[i].value.im) <= roots[i].radius) {
                roots[i].value.im = 0;
                done[i] = true;
                continue;
            }
            std::size_t best = i;
            Real dist = -1;
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (j == i || done[j] || roots[j].multiplicity != roots[i].multiplicity) continue;
                Real d = abs(roots[j].value - conj(roots[i].value));
                if (dist < 0 || d < dist) {
                    dist = d;
                    best = j;
                }
            }
            if (best == i) continue;
            Complex avg((roots[i].value.re + roots[best].value.re) / 2,
                        (boost::multiprecision::abs(roots[i].value.im) + boost::multiprecision::abs(roots[best].value.im)) / 2);
            Real rad = (roots[i].radius > roots[best].radius ? roots[i].radius : roots[best].radius) + dist;
            bool upper_i = roots[i].value.im > 0;
            roots[i].value = upper_i ? avg : conj(avg);
            roots[best].value = upper_i ? conj(avg) : avg;
            roots[i].radius = roots[best].radius = rad;
            done[i] = done[best] = true;
        }
        bool separated = true;
        for (std::size_t i = 0; i < roots.size() && separated; ++i)
            for (std::size_t j = i + 1; j < roots.size(); ++j)
                if (abs(roots[i].value - roots[j].value) <= 2 * (roots[i].radius + roots[j].radius)) {
                    separated = false;
                    break;
                }
        if (separated) {
            std::sort(roots.begin(), roots.end(), [](const IsolatedRoot& a, const IsolatedRoot& b) {
                if (a.value.re != b.value.re) return a.value.re < b.value.re;
                return a.value.im < b.value.im;
            });
            return roots;
        }
    }
    throw RootIsolationFailure("could not separate the roots; raise the working precision");
}

}  // namespace cyp
