#include "cyperiods/frobenius.hpp"

#include "cyperiods/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cyp {

namespace {

Real tiny(int digits) { return boost::multiprecision::pow(Real(10), -digits); }

template <class S>
S from_rational(const Rational& q);
template <>
Rational from_rational<Rational>(const Rational& q)
{
    return q;
}
template <>
Complex from_rational<Complex>(const Rational& q)
{
    return to_complex(q);
}

bool is_zero(const Rational& q) { return q == 0; }
bool is_zero(const Complex& z) { return z.re == 0 && z.im == 0; }

// a_i = R^(i)(nu)/i! for i < count, by repeated synthetic division.
template <class S>
void taylor_coeffs(const std::vector<S>& r, const S& nu, int count, std::array<S, 5>& a)
{
    std::array<S, 5> b;
    const int d = static_cast<int>(r.size()) - 1;
    for (int k = 0; k <= d; ++k) b[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k)];
    for (int i = 0; i < count; ++i) {
        if (i > d) {
            a[static_cast<std::size_t>(i)] = S(0);
            continue;
        }
        for (int k = d - 1; k >= i; --k) b[static_cast<std::size_t>(k)] += nu * b[static_cast<std::size_t>(k + 1)];
        a[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
    }
}

using Coeffs = std::vector<std::array<Complex, 4>>;

// Frobenius recurrence for one exponent group rho0 with roots (offset -> multiplicity):
//   R_0(nu + S) c_n = - sum_{k>=1} R_k(nu - k + S) c_{n-k},  nu = rho0 + n,
// S the shift on the divided-power log index. Each seed (n0, l) yields one solution with
// free datum c_{n0,l} = 1 and all other free data 0.
template <class S>
std::vector<std::vector<std::array<S, 4>>> run_group(const std::vector<std::vector<S>>& R, const Rational& rho0,
                                                     const std::map<int, int>& roots, int cap, int N,
                                                     const std::vector<std::pair<int, int>>& seeds)
{
    const std::size_t ns = seeds.size();
    std::vector<std::vector<std::array<S, 4>>> c(ns, std::vector<std::array<S, 4>>(static_cast<std::size_t>(N)));
    std::vector<std::vector<char>> nonzero(ns, std::vector<char>(static_cast<std::size_t>(N), 0));
    for (auto& sol : c)
        for (auto& v : sol) v.fill(S(0));
    const int K = static_cast<int>(R.size()) - 1;
    std::vector<char> block_nonzero(R.size(), 0);
    for (std::size_t k = 0; k < R.size(); ++k)
        block_nonzero[k] = std::any_of(R[k].begin(), R[k].end(), [](const S& v) { return !is_zero(v); });

    std::array<S, 5> a;
    std::vector<std::array<S, 4>> rhs(ns);
    for (int n = 0; n < N; ++n) {
        const Rational nu = rho0 + n;
        for (auto& r : rhs) r.fill(S(0));
        for (int k = 1; k <= std::min(K, n); ++k) {
            if (!block_nonzero[static_cast<std::size_t>(k)]) continue;
            bool any = false;
            for (std::size_t s = 0; s < ns; ++s) any = any || nonzero[s][static_cast<std::size_t>(n - k)];
            if (!any) continue;
            taylor_coeffs(R[static_cast<std::size_t>(k)], from_rational<S>(nu - k), cap, a);
            for (std::size_t s = 0; s < ns; ++s) {
                if (!nonzero[s][static_cast<std::size_t>(n - k)]) continue;
                const auto& prev = c[s][static_cast<std::size_t>(n - k)];
                for (int j = 0; j < cap; ++j)
                    for (int i = 0; i + j < cap; ++i) {
                        if (is_zero(a[static_cast<std::size_t>(i)])) continue;
                        rhs[s][static_cast<std::size_t>(j)] -= a[static_cast<std::size_t>(i)] * prev[static_cast<std::size_t>(j + i)];
                    }
            }
        }
        taylor_coeffs(R[0], from_rational<S>(nu), cap, a);
        auto root = roots.find(n);
        const int m = root == roots.end() ? 0 : root->second;
        for (std::size_t s = 0; s < ns; ++s) {
            auto& cur = c[s][static_cast<std::size_t>(n)];
            for (int l = 0; l < m && l < cap; ++l)
                if (seeds[s] == std::make_pair(n, l)) cur[static_cast<std::size_t>(l)] = S(1);
            for (int j = cap - 1 - m; j >= 0; --j) {
                S v = rhs[s][static_cast<std::size_t>(j)];
                for (int i = m + 1; j + i < cap; ++i) v -= a[static_cast<std::size_t>(i)] * cur[static_cast<std::size_t>(j + i)];
                cur[static_cast<std::size_t>(j + m)] = v / a[static_cast<std::size_t>(m)];
            }
            if constexpr (std::is_same_v<S, Rational>) {
                for (int j = std::max(0, cap - m); j < cap; ++j)
                    if (rhs[s][static_cast<std::size_t>(j)] != 0)
                        throw ResonanceFailure("logarithmic degree exceeds the local capacity at offset " + std::to_string(n));
            }
            nonzero[s][static_cast<std::size_t>(n)] =
                std::any_of(cur.begin(), cur.end(), [](const S& v) { return !is_zero(v); });
        }
    }
    return c;
}

struct Group {
    Rational rho0;
    std::map<int, int> roots;  // offset -> multiplicity
    int total = 0;
};

std::vector<Group> group_exponents(const std::vector<Rational>& exps)
{
    std::vector<Rational> sorted = exps;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Group> groups;
    for (const auto& e : sorted) {
        Group* g = nullptr;
        for (auto& cand : groups) {
            Rational d = e - cand.rho0;
            if (d.get_den() == 1) g = &cand;
        }
        if (!g) {
            groups.push_back(Group{e, {}, 0});
            g = &groups.back();
        }
        Rational d = e - g->rho0;
        g->roots[static_cast<int>(d.get_num().get_si())] += 1;
        g->total += 1;
    }
    return groups;
}

Real term_size(const std::array<Complex, 4>& v)
{
    Real m = 0;
    for (const auto& z : v) {
        Real a = abs(z);
        if (a > m) m = a;
    }
    return m;
}

// Heuristic tail bound at radius r from the geometric decay of the last 10 terms.
Real tail_from_coeffs(const Coeffs& c, const Real& r, int logdeg)
{
    const int N = static_cast<int>(c.size());
    if (N < 12) return Real(1);
    Real last = 0, first = 0;
    for (int n = N - 5; n < N; ++n) {
        Real t = term_size(c[static_cast<std::size_t>(n)]) * boost::multiprecision::pow(r, n);
        if (t > last) last = t;
    }
    for (int n = N - 15; n < N - 10; ++n) {
        Real t = term_size(c[static_cast<std::size_t>(n)]) * boost::multiprecision::pow(r, n);
        if (t > first) first = t;
    }
    if (last == 0) return Real(0);
    Real logf = 1;
    if (r > 0) logf = boost::multiprecision::pow(1 + boost::multiprecision::abs(boost::multiprecision::log(r)), logdeg);
    if (first == 0) return last * logf;
    Real q = boost::multiprecision::pow(last / first, Real(1) / 10);
    if (q >= Real("0.98")) return last * 1000 * logf;  // not converging
    return last * q / (1 - q) * logf * 5;
}

}  // namespace

// ---------------------------------------------------------------------------

OperatorData::OperatorData(FuchsianOperator op_in, int digits_in)
    : op(std::move(op_in)), dform(to_derivative_form(op)), singular(singular_points(op, digits_in)), digits(digits_in)
{
}

Real OperatorData::distance_to_singular(const Complex& z) const
{
    Real best = -1;
    for (const auto& s : singular) {
        if (s.location.infinite) continue;
        Real d = abs(s.location.value - z);
        if (best < 0 || d < best) best = d;
    }
    return best < 0 ? Real(1e30) : best;
}

Real OperatorData::radius(const Complex& z) const
{
    const Real eps = tiny(digits / 2);
    Real best = -1;
    for (const auto& s : singular) {
        if (s.location.infinite) continue;
        Real d = abs(s.location.value - z);
        if (d <= eps) continue;
        if (best < 0 || d < best) best = d;
    }
    return best < 0 ? Real(1e30) : best;
}

const SingularPoint* OperatorData::find(const Point& p) const
{
    const Real eps = tiny(digits / 2);
    for (const auto& s : singular) {
        if (p.infinite || s.location.infinite) {
            if (p.infinite && s.location.infinite) return &s;
            continue;
        }
        if (p.exact && s.location.exact) {
            if (*p.exact == *s.location.exact) return &s;
            continue;
        }
        if (abs(p.value - s.location.value) <= eps) return &s;
    }
    return nullptr;
}

int LocalSolution::log_degree() const
{
    int deg = 0;
    for (const auto& v : coeffs)
        for (int j = 3; j > deg; --j)
            if (!is_zero(v[static_cast<std::size_t>(j)])) deg = j;
    return deg;
}

CPoly LocalSolution::log_series(int j) const
{
    Real f = 1;
    for (int k = 2; k <= j; ++k) f *= k;
    CPoly s;
    for (const auto& v : coeffs) s.push_back(v[static_cast<std::size_t>(j)] / f);
    return s;
}

std::vector<Complex> LocalSolution::local_jets(const Complex& T, int count) const
{
    const int deg = log_degree();
    if (is_zero(T)) {
        // holomorphic solutions have Taylor coefficients as jets at the center
        if (deg > 0 || exponent < 0 || exponent.get_den() != 1)
            throw OutsideDisk("jets requested at the center of a singular local solution");
        const long e = exponent.get_num().get_si();
        std::vector<Complex> out(static_cast<std::size_t>(count));
        for (long k = e; k < count; ++k)
            if (static_cast<std::size_t>(k - e) < coeffs.size()) out[static_cast<std::size_t>(k)] = coeffs[static_cast<std::size_t>(k - e)][0];
        return out;
    }
    std::array<Complex, 4> L;
    Complex lg = log(T);
    L[0] = Complex(1);
    for (int j = 1; j <= deg; ++j) L[static_cast<std::size_t>(j)] = L[static_cast<std::size_t>(j - 1)] * lg / Real(j);
    std::vector<Complex> out(static_cast<std::size_t>(count));
    Complex Tn(1);
    std::array<Complex, 4> d;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        const auto& cn = coeffs[n];
        if (!is_zero(cn[0]) || !is_zero(cn[1]) || !is_zero(cn[2]) || !is_zero(cn[3])) {
            d = cn;
            Rational nu = exponent + static_cast<long>(n);
            for (int k = 0; k < count; ++k) {
                Complex s;
                for (int j = 0; j <= deg; ++j) s += d[static_cast<std::size_t>(j)] * L[static_cast<std::size_t>(j)];
                out[static_cast<std::size_t>(k)] += Tn * s;
                // d <- (nu - k + S) d
                Complex f = to_complex(nu - k);
                for (int j = 0; j < 4; ++j) {
                    d[static_cast<std::size_t>(j)] *= f;
                    if (j + 1 < 4) d[static_cast<std::size_t>(j)] += d[static_cast<std::size_t>(j + 1)];
                }
            }
        }
        Tn *= T;
    }
    Real fact = 1;
    for (int k = 0; k < count; ++k) {
        if (k > 0) fact *= k;
        out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k)] * pow(T, exponent - k) / fact;
    }
    return out;
}

LocalSolution LocalSolution::continued_around() const
{
    // log T -> log T + 2 pi i, T^rho0 -> e^{2 pi i rho0} T^rho0
    LocalSolution out = *this;
    out.exact.reset();
    Complex tpi(Real(0), two_pi());
    std::array<Complex, 4> w;
    w[0] = Complex(1);
    for (int i = 1; i < 4; ++i) w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i - 1)] * tpi / Real(i);
    Complex phase = exp(tpi * to_real(exponent));
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        for (int j = 0; j < 4; ++j) {
            Complex s;
            for (int i = 0; i + j < 4; ++i) s += w[static_cast<std::size_t>(i)] * coeffs[n][static_cast<std::size_t>(j + i)];
            out.coeffs[n][static_cast<std::size_t>(j)] = phase * s;
        }
    return out;
}

LocalSolution LocalSolution::log_part() const
{
    LocalSolution out = *this;
    for (auto& v : out.coeffs) {
        for (int j = 0; j < 3; ++j) v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j + 1)];
        v[3] = Complex();
    }
    if (out.exact)
        for (auto& v : *out.exact) {
            for (int j = 0; j < 3; ++j) v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j + 1)];
            v[3] = 0;
        }
    return out;
}

CVector LocalBasis::coordinates(const LocalSolution& y) const
{
    CVector f(positions.size());
    for (std::size_t r = 0; r < positions.size(); ++r) {
        const auto& p = positions[r];
        if (p.rho0 != y.exponent || p.n0 >= y.truncation_order()) continue;
        f[r] = y.coeffs[static_cast<std::size_t>(p.n0)][static_cast<std::size_t>(p.l)];
    }
    return solve(free_values, f);
}

CMatrix LocalBasis::formal_monodromy() const
{
    CMatrix m(members.size(), members.size());
    for (std::size_t j = 0; j < members.size(); ++j) m.set_column(j, coordinates(members[j].continued_around()));
    return m;
}

CMatrix LocalBasis::jet_matrix(const Complex& x) const
{
    if (center.infinite) throw std::logic_error("x-jets of a basis at infinity are not supported");
    Complex T = x - center.value;
    CMatrix m(4, members.size());
    for (std::size_t j = 0; j < members.size(); ++j) m.set_column(j, members[j].local_jets(T, 4));
    return m;
}

Real LocalBasis::tail_at(const Complex& x) const
{
    Real T = center.infinite ? Real(1) / abs(x) : abs(x - center.value);
    Real worst = 0;
    for (const auto& m : members) {
        Real r = m.disk_radius;
        Real t = m.tail_estimate;
        if (r > 0 && T < r) t *= boost::multiprecision::pow(T / r, m.truncation_order() - 10);
        if (t > worst) worst = t;
    }
    return worst;
}

int default_order(int digits, double rho)
{
    return static_cast<int>(std::ceil((digits + 10) * std::log(10.0) / std::log(1.0 / rho))) + 12;
}

namespace {

// Resonant steps of the numerical recurrence leave rounding noise in log series that vanish exactly.
void drop_log_noise(Coeffs& c, const Real& r, int digits)
{
    std::array<Real, 4> w{};
    Real rn = 1;
    for (const auto& v : c) {
        for (std::size_t j = 0; j < 4; ++j) {
            Real t = abs(v[j]) * rn;
            if (t > w[j]) w[j] = t;
        }
        rn *= r;
    }
    Real total = w[0] + w[1] + w[2] + w[3];
    Real cut = total * tiny(digits * 3 / 4);
    for (std::size_t j = 1; j < 4; ++j)
        if (w[j] < cut)
            for (auto& v : c) v[j] = Complex(0);
}

LocalBasis build_basis(const OperatorData& data, const Point& p, PointKind kind, const std::vector<Rational>& exps,
                       const std::vector<FreePosition>& seeds, const FrobeniusOptions& opt)
{
    LocalBasis b;
    b.center = p;
    b.kind = kind;
    b.exponents = exps;
    b.rho = Real(opt.rho);
    if (p.infinite) {
        Real far = 0;
        for (const auto& s : data.singular)
            if (!s.location.infinite) {
                Real a = abs(s.location.value);
                if (a > far) far = a;
            }
        b.radius = far > 0 ? Real(1) / far : Real(1e30);
    } else {
        b.radius = data.radius(p.value);
    }
    const int N = opt.order > 0 ? opt.order : default_order(working_digits(), opt.rho);
    int p4 = -1;
    if (const SingularPoint* sp = data.find(p)) p4 = sp->p4_order;
    else if (!p.infinite) p4 = 0;
    LocalOperator lo = local_operator(data.op, p, working_digits(), p.exact || p.infinite ? -1 : p4);

    auto groups = group_exponents(exps);
    for (const auto& g : groups)
        for (const auto& [n0, m] : g.roots)
            for (int l = 0; l < m; ++l) b.positions.push_back({g.rho0, n0, l});
    std::sort(b.positions.begin(), b.positions.end(), [](const FreePosition& x, const FreePosition& y) {
        Rational ex = x.rho0 + x.n0, ey = y.rho0 + y.n0;
        if (ex != ey) return ex < ey;
        return x.l < y.l;
    });

    const bool use_exact = opt.exact && lo.exact_blocks.has_value();
    b.members.resize(seeds.size());
    for (const auto& g : groups) {
        const int cap = kind == PointKind::ordinary ? 1 : std::min(4, g.total);
        std::vector<std::pair<int, int>> gs;
        std::vector<std::size_t> which;
        for (std::size_t s = 0; s < seeds.size(); ++s)
            if (seeds[s].rho0 == g.rho0) {
                gs.emplace_back(seeds[s].n0, seeds[s].l);
                which.push_back(s);
            }
        if (gs.empty()) continue;
        if (use_exact) {
            std::vector<std::vector<Rational>> R;
            for (const auto& blk : *lo.exact_blocks) {
                std::vector<Rational> r(blk.begin(), blk.end());
                r.resize(5, Rational(0));
                R.push_back(std::move(r));
            }
            auto sols = run_group<Rational>(R, g.rho0, g.roots, cap, N, gs);
            for (std::size_t t = 0; t < which.size(); ++t) {
                LocalSolution& ls = b.members[which[t]];
                ls.exact = sols[t];
                for (const auto& v : sols[t]) {
                    std::array<Complex, 4> cv;
                    for (int j = 0; j < 4; ++j) cv[static_cast<std::size_t>(j)] = to_complex(v[static_cast<std::size_t>(j)]);
                    ls.coeffs.push_back(cv);
                }
            }
        } else {
            std::vector<std::vector<Complex>> R;
            for (const auto& blk : lo.blocks) {
                std::vector<Complex> r(blk.begin(), blk.end());
                r.resize(5);
                R.push_back(std::move(r));
            }
            auto sols = run_group<Complex>(R, g.rho0, g.roots, cap, N, gs);
            for (std::size_t t = 0; t < which.size(); ++t) {
                drop_log_noise(sols[t], b.radius * b.rho, working_digits());
                b.members[which[t]].coeffs = std::move(sols[t]);
            }
        }
    }
    for (auto& m : b.members) {
        m.center = p;
        m.disk_radius = b.rho * b.radius;
    }
    for (std::size_t s = 0; s < seeds.size(); ++s) b.members[s].exponent = seeds[s].rho0;
    for (auto& m : b.members) m.tail_estimate = tail_from_coeffs(m.coeffs, m.disk_radius, m.log_degree());

    b.free_values = CMatrix(b.positions.size(), b.members.size());
    for (std::size_t r = 0; r < b.positions.size(); ++r)
        for (std::size_t j = 0; j < b.members.size(); ++j) {
            const auto& pos = b.positions[r];
            const auto& m = b.members[j];
            if (m.exponent == pos.rho0) b.free_values(r, j) = m.coeffs[static_cast<std::size_t>(pos.n0)][static_cast<std::size_t>(pos.l)];
        }
    b.id = std::string(p.infinite ? "inf" : p.str(12)) + "/" + to_string(kind);
    return b;
}

std::vector<Rational> exact_exponents_or_throw(const SingularPoint& sp)
{
    std::vector<Rational> out;
    for (const auto& e : sp.exact_exponents) {
        if (!e) throw ResonanceFailure("non-rational local exponent at " + sp.location.str());
        out.push_back(*e);
    }
    return out;
}

}  // namespace

LocalBasis frobenius_basis(const OperatorData& data, const Point& p, const FrobeniusOptions& opt)
{
    const SingularPoint* sp = data.find(p);
    if (!sp) {
        if (p.infinite) {
            std::vector<FreePosition> seeds;
            for (int n = 0; n < 4; ++n) seeds.push_back({Rational(0), n, 0});
            return build_basis(data, p, PointKind::ordinary, {0, 1, 2, 3}, seeds, opt);
        }
        return ordinary_basis(data, p, opt);
    }
    auto exps = exact_exponents_or_throw(*sp);
    auto groups = group_exponents(exps);
    std::vector<FreePosition> seeds;
    for (const auto& g : groups)
        for (const auto& [n0, m] : g.roots)
            for (int l = 0; l < m; ++l) seeds.push_back({g.rho0, n0, l});
    std::sort(seeds.begin(), seeds.end(), [](const FreePosition& x, const FreePosition& y) {
        Rational ex = x.rho0 + x.n0, ey = y.rho0 + y.n0;
        if (ex != ey) return ex < ey;
        return x.l < y.l;
    });
    // use the located point itself so exactness is preserved
    return build_basis(data, sp->location, sp->kind, exps, seeds, opt);
}

LocalBasis ordinary_basis(const OperatorData& data, const Point& center, const FrobeniusOptions& opt)
{
    if (center.infinite) return frobenius_basis(data, center, opt);
    if (data.find(center) || data.distance_to_singular(center.value) <= tiny(data.digits / 2))
        throw CenterSingular("center " + center.str() + " is a singular point");
    std::vector<FreePosition> seeds;
    for (int n = 0; n < 4; ++n) seeds.push_back({Rational(0), n, 0});
    return build_basis(data, center, PointKind::ordinary, {0, 1, 2, 3}, seeds, opt);
}

LocalBasis ordinary_basis(const OperatorData& data, const Complex& center, const FrobeniusOptions& opt)
{
    return ordinary_basis(data, Point::complex(center), opt);
}

LocalBasis conifold_basis(const OperatorData& data, const Point& t0, const FrobeniusOptions& opt)
{
    const SingularPoint* sp = data.find(t0);
    if (!sp || sp->kind != PointKind::conifold) throw NotConifold(t0.str() + " is not a conifold point");
    std::vector<FreePosition> seeds{{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {0, 2, 0}};
    LocalBasis b = build_basis(data, sp->location, PointKind::conifold, {0, 1, 1, 2}, seeds, opt);
    // f2 is the logarithmic coefficient of f3, so that f3 = T*series + f2 log T exactly
    b.members[1] = b.members[2].log_part();
    for (std::size_t r = 0; r < b.positions.size(); ++r) {
        const auto& pos = b.positions[r];
        b.free_values(r, 1) = b.members[1].coeffs[static_cast<std::size_t>(pos.n0)][static_cast<std::size_t>(pos.l)];
    }
    if (b.members[2].log_degree() != 1)
        throw RankError("conifold basis at " + t0.str() + " has no logarithmic solution");
    return b;
}

LocalBasis mum_basis(const OperatorData& data, const FrobeniusOptions& opt)
{
    const SingularPoint* sp = data.find(Point::rational(0));
    if (!sp || sp->kind != PointKind::MUM) throw NotMUM("x = 0 is not a point of maximally unipotent monodromy");
    std::vector<FreePosition> seeds{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 0, 3}};
    return build_basis(data, sp->location, PointKind::MUM, {0, 0, 0, 0}, seeds, opt);
}

Complex evaluate(const LocalSolution& sol, const Complex& x, int digits, Real* error)
{
    Complex T = sol.center.infinite ? Complex(1) / x : x - sol.center.value;
    Real r = abs(T);
    if (r > sol.disk_radius * Real("1.000001"))
        throw OutsideDisk("point at distance " + to_string(r, 8) + " outside the disk of radius " +
                          to_string(sol.disk_radius, 8));
    if (is_zero(T)) {
        // limit at the center: only T^0 terms without logarithms survive
        Complex v;
        for (std::size_t n = 0; n < sol.coeffs.size(); ++n) {
            Rational e = sol.exponent + static_cast<long>(n);
            const auto& c = sol.coeffs[n];
            bool nz = !is_zero(c[0]) || !is_zero(c[1]) || !is_zero(c[2]) || !is_zero(c[3]);
            if (!nz || e > 0) continue;
            if (e < 0 || !is_zero(c[1]) || !is_zero(c[2]) || !is_zero(c[3]))
                throw OutsideDisk("solution is unbounded at its center");
            v = c[0];
        }
        if (error) *error = 0;
        return v;
    }
    Complex v = sol.local_jets(T, 1)[0];
    Real tail = sol.tail_estimate;
    if (sol.disk_radius > 0 && r < sol.disk_radius)
        tail *= boost::multiprecision::pow(r / sol.disk_radius, sol.truncation_order() - 10);
    if (error) *error = tail;
    Real scale = abs(v);
    if (scale == 0) scale = 1;
    if (tail > scale * tiny(digits))
        throw PrecisionLoss("truncation tail " + to_string(tail, 5) + " exceeds the requested tolerance; raise the order");
    return v;
}

Real series_residual(const LocalOperator& lo, const LocalSolution& sol)
{
    const int N = sol.truncation_order();
    const int K = static_cast<int>(lo.blocks.size()) - 1;
    Real worst = 0;
    std::array<Complex, 5> a;
    for (int n = 0; n < N; ++n) {
        std::array<Complex, 4> acc;
        for (int k = 0; k <= std::min(K, n); ++k) {
            std::vector<Complex> r(lo.blocks[static_cast<std::size_t>(k)].begin(), lo.blocks[static_cast<std::size_t>(k)].end());
            r.resize(5);
            taylor_coeffs(r, to_complex(sol.exponent + n - k), 4, a);
            const auto& c = sol.coeffs[static_cast<std::size_t>(n - k)];
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i + j < 4; ++i) acc[static_cast<std::size_t>(j)] += a[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j + i)];
        }
        Real t = term_size(acc) / (1 + term_size(sol.coeffs[static_cast<std::size_t>(n)]));
        if (t > worst) worst = t;
    }
    return worst;
}

bool exact_series_residual_zero(const LocalOperator& lo, const LocalSolution& sol)
{
    if (!lo.exact_blocks || !sol.exact) return false;
    const auto& C = *sol.exact;
    const int N = static_cast<int>(C.size());
    const int K = static_cast<int>(lo.exact_blocks->size()) - 1;
    std::array<Rational, 5> a;
    for (int n = 0; n < N; ++n) {
        std::array<Rational, 4> acc;
        acc.fill(Rational(0));
        for (int k = 0; k <= std::min(K, n); ++k) {
            std::vector<Rational> r((*lo.exact_blocks)[static_cast<std::size_t>(k)].begin(),
                                    (*lo.exact_blocks)[static_cast<std::size_t>(k)].end());
            r.resize(5, Rational(0));
            taylor_coeffs(r, Rational(sol.exponent + n - k), 4, a);
            const auto& c = C[static_cast<std::size_t>(n - k)];
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i + j < 4; ++i) acc[static_cast<std::size_t>(j)] += a[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j + i)];
        }
        for (const auto& v : acc)
            if (v != 0) return false;
    }
    return true;
}

Real pointwise_residual(const OperatorData& data, const LocalSolution& sol, const Complex& x)
{
    if (sol.center.infinite) throw std::logic_error("pointwise residual needs a finite center");
    auto jets = sol.local_jets(x - sol.center.value, 5);
    Complex total;
    Real mag = 0;
    Real fact = 1;
    for (int i = 0; i <= 4; ++i) {
        if (i > 0) fact *= i;
        Complex term = evaluate(data.dform[static_cast<std::size_t>(i)], x) * jets[static_cast<std::size_t>(i)] * fact;
        total += term;
        mag += abs(term);
    }
    return mag == 0 ? Real(0) : abs(total) / mag;
}

}  // namespace cyp
