#include "cyperiods/continuation.hpp"

#include "cyperiods/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace cyp {

namespace {

Real tiny(int digits) { return boost::multiprecision::pow(Real(10), -digits); }

Real dist_to_segment(const Complex& z, const Complex& a, const Complex& b)
{
    Complex d = b - a;
    Real len2 = norm2(d);
    if (len2 == 0) return abs(z - a);
    Complex w = z - a;
    Real t = (w.re * d.re + w.im * d.im) / len2;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    return abs(z - (a + d * t));
}

Complex unit(const Complex& z) { return z / abs(z); }

Complex polar(const Real& r, const Real& phi) { return Complex(r * boost::multiprecision::cos(phi), r * boost::multiprecision::sin(phi)); }

// angle of z measured counter-clockwise from phi0, in [0, 2 pi)
Real angle_from(const Complex& z, const Real& phi0)
{
    Real a = arg(z) - phi0;
    const Real tp = two_pi();
    while (a < 0) a += tp;
    while (a >= tp) a -= tp;
    return a;
}

OperatorData make_data(FuchsianOperator op, int digits)
{
    PrecisionScope scope(digits);
    return OperatorData(std::move(op), digits);
}

// e_j^T A
CVector row(const CMatrix& a, std::size_t j)
{
    CVector r(a.cols());
    for (std::size_t k = 0; k < a.cols(); ++k) r[k] = a(j, k);
    return r;
}

Complex dot(const CVector& r, const CVector& v)
{
    Complex s;
    for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * v[k];
    return s;
}

std::string vector_key(const CVector& v, int digits)
{
    std::string k;
    for (const auto& z : v) {
        // negative zero and rounding noise collapse onto the same key
        Real scale = tiny(digits);
        Real re = boost::multiprecision::round(z.re / scale);
        Real im = boost::multiprecision::round(z.im / scale);
        k += re.str(0, std::ios_base::fixed) + "," + im.str(0, std::ios_base::fixed) + ";";
    }
    return k;
}

// the rank-1 image generator of N, normalized so that coordinate `pivot` of `in_frame` equals 1
void image_generator(const CMatrix& n, const Real& tol, const std::string& where, CVector& gen)
{
    if (rank(n, tol) != 1)
        throw RankError("local monodromy at " + where + " does not have rank(M - I) = 1 (rank " +
                        std::to_string(rank(n, tol)) + ")");
    std::size_t best = 0;
    Real bn = -1;
    for (std::size_t j = 0; j < n.cols(); ++j) {
        Real c = norm_inf(n.column(j));
        if (c > bn) {
            bn = c;
            best = j;
        }
    }
    gen = n.column(best);
}

// first-order error of ti * x * t when t carries et and x carries ex
Real sandwich_error(const CMatrix& ti, const CMatrix& x, const CMatrix& t, const Real& et, const Real& ex)
{
    CMatrix tix = ti * x;
    return norm_inf(ti) * et * norm_inf(tix * t) + norm_inf(tix) * et + norm_inf(ti) * ex * norm_inf(t);
}

}  // namespace

PathMatrix compose(const PathMatrix& second, const PathMatrix& first)
{
    PathMatrix out;
    out.matrix = second.matrix * first.matrix;
    out.from_basis = first.from_basis;
    out.to_basis = second.to_basis;
    out.error_estimate = second.error_estimate * norm_inf(first.matrix) + norm_inf(second.matrix) * first.error_estimate;
    out.condition = condition_number(out.matrix);
    return out;
}

Continuation::Continuation(FuchsianOperator op, ContinuationConfig cfg)
    : cfg_(cfg), data_(make_data(std::move(op), cfg.digits + cfg.guard))
{
    if (cfg_.rho <= 0 || cfg_.rho >= 1) throw std::invalid_argument("rho must lie in (0, 1)");
}

FrobeniusOptions Continuation::options() const
{
    FrobeniusOptions o;
    o.rho = cfg_.rho;
    o.order = cfg_.order;
    return o;
}

LocalBasis Continuation::basis_at(const Complex& z) const
{
    PrecisionScope scope(working_digits());
    return ordinary_basis(data_, z, options());
}

LocalBasis Continuation::special_basis(const Point& s) const
{
    PrecisionScope scope(working_digits());
    const SingularPoint* sp = data_.find(s);
    if (!sp) throw CenterSingular(s.str() + " is not a singular point");
    FrobeniusOptions o = options();
    o.exact = sp->location.exact.has_value();
    switch (sp->kind) {
    case PointKind::conifold: return conifold_basis(data_, sp->location, o);
    case PointKind::MUM:
        if (sp->location.exact && *sp->location.exact == 0) return mum_basis(data_, o);
        return frobenius_basis(data_, sp->location, o);
    default: return frobenius_basis(data_, sp->location, o);
    }
}

PathMatrix Continuation::transfer(const LocalBasis& a, const LocalBasis& b) const
{
    PrecisionScope scope(working_digits());
    if (a.center.infinite || b.center.infinite) throw OutsideDisk("transfer to or from infinity is not supported");
    Complex x;
    if (b.kind == PointKind::ordinary) x = b.center.value;
    else if (a.kind == PointKind::ordinary) x = a.center.value;
    else throw OutsideDisk("transfer between two singular bases needs an intermediate ordinary point");
    for (const LocalBasis* s : {&a, &b}) {
        Real d = abs(x - s->center.value);
        if (d > s->rho * s->radius * Real("1.000001"))
            throw OutsideDisk("matching point " + to_string(x, 10) + " outside the disk of " + s->id);
    }
    CMatrix ja = a.jet_matrix(x);
    CMatrix jb = b.jet_matrix(x);
    Real cond = condition_number(jb);
    if (cond > boost::multiprecision::pow(Real(10), working_digits() / 2))
        throw IllConditioned("jet matrix of " + b.id + " is ill-conditioned");
    PathMatrix out;
    CMatrix jbi = inverse(jb);
    out.matrix = jbi * ja;
    out.from_basis = a.id;
    out.to_basis = b.id;
    out.error_estimate = 4 * norm_inf(jbi) * (a.tail_at(x) + b.tail_at(x) * norm_inf(out.matrix));
    out.condition = condition_number(out.matrix);
    return out;
}

void Continuation::check_segment(const Complex& a, const Complex& b) const
{
    for (const auto& s : data_.singular) {
        if (s.location.infinite) continue;
        Real d = dist_to_segment(s.location.value, a, b);
        if (d < Real(cfg_.margin))
            throw PathTooClose("segment " + to_string(a, 10) + " -> " + to_string(b, 10) + " passes within " +
                               to_string(d, 4) + " of the singular point " + s.location.str(10));
    }
}

PathMatrix Continuation::path_matrix(const Path& path) const
{
    PrecisionScope scope(working_digits());
    if (path.waypoints.empty()) throw std::invalid_argument("empty path");
    Complex cur = path.waypoints.front();
    if (data_.distance_to_singular(cur) < Real(cfg_.margin))
        throw PathTooClose("waypoint " + to_string(cur, 10) + " is too close to a singular point");
    LocalBasis basis = basis_at(cur);
    PathMatrix out;
    out.matrix = CMatrix::identity(4);
    out.from_basis = basis.id;
    out.error_estimate = 0;
    int steps = 0;
    const Real rho(cfg_.rho);
    // first order: dM = sum_k (J_n..J_{k+1}) E_k M_{k-1}, and J_n..J_{k+1} = M M_k^{-1}
    Real acc = 0;
    for (std::size_t k = 1; k < path.waypoints.size(); ++k) {
        const Complex& w = path.waypoints[k];
        check_segment(cur, w);
        while (!(abs(w - cur) == 0)) {
            Real step = rho * data_.distance_to_singular(cur);
            Real left = abs(w - cur);
            Complex next = left <= step * Real("1.000001") ? w : cur + unit(w - cur) * step;
            CMatrix j = basis.jet_matrix(next);
            Real e = 4 * basis.tail_at(next);
            Real before = norm_inf(out.matrix);
            out.matrix = j * out.matrix;
            acc += norm_inf(inverse(out.matrix)) * e * before;
            basis = basis_at(next);
            cur = next;
            if (++steps > cfg_.max_steps) throw PrecisionLoss("path needs more than max_steps continuation steps");
        }
    }
    // rounding at working precision
    acc += Real(steps + 1) * 16 * tiny(working_digits());
    out.error_estimate = norm_inf(out.matrix) * acc;
    out.to_basis = basis.id;
    out.condition = condition_number(out.matrix);
    return out;
}

CVector Continuation::continue_vector(const Path& path, const CVector& v) const
{
    PrecisionScope scope(working_digits());
    if (v.size() != 4) throw std::invalid_argument("solution vectors have 4 coordinates");
    PathMatrix m = path_matrix(path);
    Real tol = norm_inf(v) * tiny(cfg_.digits);
    if (m.error_estimate * norm_inf(v) > tol * boost::multiprecision::pow(Real(10), cfg_.guard))
        throw PrecisionLoss("continuation error " + to_string(m.error_estimate, 4) + " exceeds the working tolerance");
    return m.matrix * v;
}

Path Continuation::default_path(const Point& from, const Point& to) const
{
    PrecisionScope scope(working_digits());
    if (from.infinite || to.infinite) throw std::invalid_argument("default paths join finite points");
    const Complex a = from.value, b = to.value;
    if (abs(b - a) == 0) return Path{{a}, "single point"};
    Complex u = unit(b - a);
    Complex n = i_unit() * u;
    if (n.im < 0 || (n.im == 0 && n.re < 0)) n = -n;
    const Real eps = tiny(working_digits() / 2);
    Real h = abs(b - a);
    for (const auto& s : data_.singular) {
        if (s.location.infinite) continue;
        Complex z = s.location.value;
        if (abs(z - a) <= eps || abs(z - b) <= eps) continue;
        Complex rel = (z - a) * conj(u);
        if (boost::multiprecision::abs(rel.im) <= eps) continue;  // on the line: passed on the upper side
        Real d = dist_to_segment(z, a, b);
        if (d < h) h = d;
    }
    Complex w = (a + b) / Real(2) + n * (h / 4);
    return Path{{a, w, b}, from.str(10) + " -> " + to.str(10) + " above the segment"};
}

Complex Continuation::default_basepoint(const Point& t0, const Point& mum) const
{
    Path p = default_path(t0, mum);
    if (p.waypoints.size() < 3) throw std::invalid_argument("t0 and the MUM point coincide");
    return p.waypoints[1];
}

Complex Continuation::near_point(const Point& s, const Complex& toward) const
{
    Real r = data_.radius(s.value);
    Real d = Real(cfg_.rho) * r / 2;
    Real dist = abs(toward - s.value);
    if (dist <= d) return toward;
    return s.value + unit(toward - s.value) * d;
}

Continuation::Leg Continuation::leg(const Complex& basepoint, const Point& s) const
{
    Leg l;
    l.near = near_point(s, basepoint);
    l.to_near = path_matrix(Path{{basepoint, l.near}, "leg"});
    return l;
}

PathMatrix Continuation::local_monodromy(const Complex& basepoint, const Point& s, bool numeric) const
{
    PrecisionScope scope(working_digits());
    if (data_.distance_to_singular(basepoint) < Real(cfg_.margin))
        throw CenterSingular("basepoint is a singular point");
    if (s.infinite) {
        // big counter-clockwise circle through the largest angular gap; M_inf is its inverse
        std::vector<Real> angles;
        Real far = abs(basepoint);
        for (const auto& sp : data_.singular) {
            if (sp.location.infinite) continue;
            angles.push_back(arg(sp.location.value - basepoint));
            Real m = abs(sp.location.value);
            if (m > far) far = m;
        }
        std::sort(angles.begin(), angles.end());
        Real theta = 0;
        if (!angles.empty()) {
            Real best = -1;
            for (std::size_t k = 0; k < angles.size(); ++k) {
                Real lo = angles[k];
                Real hi = k + 1 < angles.size() ? angles[k + 1] : angles[0] + two_pi();
                if (hi - lo > best) {
                    best = hi - lo;
                    theta = (lo + hi) / 2;
                }
            }
        }
        Real R = 2 * far;
        Complex u = polar(Real(1), theta);
        Real bu = basepoint.re * u.re + basepoint.im * u.im;
        Real t = -bu + boost::multiprecision::sqrt(bu * bu - norm2(basepoint) + R * R);
        Complex p = basepoint + u * t;
        Path loop;
        loop.description = "big circle";
        loop.waypoints.push_back(basepoint);
        loop.waypoints.push_back(p);
        const int nv = 32;
        Real phi0 = arg(p);
        for (int k = 1; k < nv; ++k) loop.waypoints.push_back(polar(R, phi0 + two_pi() * k / nv));
        loop.waypoints.push_back(p);
        loop.waypoints.push_back(basepoint);
        PathMatrix g = path_matrix(loop);
        PathMatrix out;
        out.matrix = inverse(g.matrix);
        out.from_basis = out.to_basis = g.from_basis;
        Real ni = norm_inf(out.matrix);
        out.error_estimate = g.error_estimate * ni * ni;
        out.condition = condition_number(out.matrix);
        return out;
    }
    const SingularPoint* sp = data_.find(s);
    if (!sp) {
        PathMatrix id;
        id.matrix = CMatrix::identity(4);
        id.error_estimate = 0;
        id.condition = 1;
        return id;
    }
    Leg l = leg(basepoint, sp->location);
    CMatrix tinv = inverse(l.to_near.matrix);
    PathMatrix around;
    bool done = false;
    if (!numeric) {
        try {
            LocalBasis b = special_basis(sp->location);
            CMatrix f = b.jet_matrix(l.near);
            CMatrix fi = inverse(f);
            CMatrix mf = b.formal_monodromy();
            around.matrix = f * mf * fi;
            Real ef = 4 * b.tail_at(l.near);
            around.error_estimate = ef * (norm_inf(mf * fi) + norm_inf(around.matrix) * norm_inf(fi));
            done = true;
        } catch (const ResonanceFailure&) {
        } catch (const RootIsolationFailure&) {
        }
    }
    if (!done) {
        Path circle;
        circle.description = "circle";
        Complex c = sp->location.value;
        Complex v = l.near - c;
        const int nv = 16;
        circle.waypoints.push_back(l.near);
        for (int k = 1; k < nv; ++k) circle.waypoints.push_back(c + v * exp(Complex(Real(0), two_pi() * k / nv)));
        circle.waypoints.push_back(l.near);
        around = path_matrix(circle);
    }
    PathMatrix out;
    out.matrix = tinv * around.matrix * l.to_near.matrix;
    out.from_basis = out.to_basis = l.to_near.from_basis;
    out.error_estimate =
        sandwich_error(tinv, around.matrix, l.to_near.matrix, l.to_near.error_estimate, around.error_estimate);
    out.condition = condition_number(out.matrix);
    return out;
}

std::vector<std::pair<Point, PathMatrix>> Continuation::monodromies(const Complex& basepoint) const
{
    PrecisionScope scope(working_digits());
    // the ray used by the big circle fixes where the counter-clockwise order starts
    std::vector<Real> angles;
    std::vector<const SingularPoint*> finite;
    for (const auto& sp : data_.singular)
        if (!sp.location.infinite) {
            finite.push_back(&sp);
            angles.push_back(arg(sp.location.value - basepoint));
        }
    std::vector<Real> sorted = angles;
    std::sort(sorted.begin(), sorted.end());
    Real theta = 0, best = -1;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        Real lo = sorted[k];
        Real hi = k + 1 < sorted.size() ? sorted[k + 1] : sorted[0] + two_pi();
        if (hi - lo > best) {
            best = hi - lo;
            theta = (lo + hi) / 2;
        }
    }
    std::vector<std::size_t> order(finite.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::vector<Real> rel(finite.size());
    for (std::size_t k = 0; k < finite.size(); ++k) rel[k] = angle_from(finite[k]->location.value - basepoint, theta);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rel[x] < rel[y]; });
    for (std::size_t k = 0; k + 1 < order.size(); ++k)
        if (rel[order[k + 1]] - rel[order[k]] < tiny(working_digits() / 2))
            throw PathTooClose("two singular points are aligned with the basepoint; move the basepoint");

    std::vector<std::pair<Point, PathMatrix>> out;
    for (std::size_t k : order) out.emplace_back(finite[k]->location, local_monodromy(basepoint, finite[k]->location));
    bool inf_singular = false;
    for (const auto& sp : data_.singular)
        if (sp.location.infinite) inf_singular = true;
    if (inf_singular) out.emplace_back(Point::infinity(), local_monodromy(basepoint, Point::infinity()));
    return out;
}

ConifoldPeriod Continuation::conifold_period(const Point& t0, const Complex& basepoint) const
{
    PrecisionScope scope(working_digits());
    const SingularPoint* sp = data_.find(t0);
    if (!sp || sp->kind != PointKind::conifold) throw NotConifold(t0.str() + " is not a conifold point");
    LocalBasis cb = special_basis(sp->location);
    Leg l = leg(basepoint, sp->location);
    CMatrix f = cb.jet_matrix(l.near);
    CMatrix to_conifold = inverse(f) * l.to_near.matrix;  // basepoint coords -> conifold coords
    CMatrix from_conifold = inverse(l.to_near.matrix) * f;
    ConifoldPeriod out;
    out.monodromy.matrix = inverse(l.to_near.matrix) * f * cb.formal_monodromy() * inverse(f) * l.to_near.matrix;
    out.monodromy.from_basis = out.monodromy.to_basis = l.to_near.from_basis;
    {
        CMatrix fi = inverse(f);
        CMatrix mf = cb.formal_monodromy();
        CMatrix x = f * mf * fi;
        Real ef = 4 * cb.tail_at(l.near);
        Real ex = ef * (norm_inf(mf * fi) + norm_inf(x) * norm_inf(fi));
        out.monodromy.error_estimate =
            sandwich_error(inverse(l.to_near.matrix), x, l.to_near.matrix, l.to_near.error_estimate, ex);
    }
    out.monodromy.condition = condition_number(out.monodromy.matrix);

    CMatrix n = out.monodromy.matrix - CMatrix::identity(4);
    CVector g;
    image_generator(n, tiny(cfg_.digits / 2), t0.str(), g);
    CVector c = to_conifold * g;
    if (abs(c[1]) == 0) throw RankError("monodromy image at " + t0.str() + " is not spanned by the T-solution");
    Complex s = c[1];
    for (auto& z : c) z /= s;
    // the image must be f2 itself: f_c = T + O(T^2) with no f1, f3, f4 component
    Real off = abs(c[0]) + abs(c[2]) + abs(c[3]);
    if (off > tiny(cfg_.digits / 2)) throw RankError("monodromy image at " + t0.str() + " is not the conifold period");
    c = {Complex(0), Complex(1), Complex(0), Complex(0)};
    out.at_t0 = c;
    out.at_basepoint = from_conifold * c;
    return out;
}

Complex Continuation::eval_at_t0(const Point& t0, const Complex& basepoint, const CVector& v) const
{
    PrecisionScope scope(working_digits());
    const SingularPoint* sp = data_.find(t0);
    if (!sp || sp->kind != PointKind::conifold) throw NotConifold(t0.str() + " is not a conifold point");
    LocalBasis cb = special_basis(sp->location);
    Leg l = leg(basepoint, sp->location);
    CMatrix to_conifold = inverse(cb.jet_matrix(l.near)) * l.to_near.matrix;
    return (to_conifold * v)[0];
}

PeriodGroupRaw Continuation::period_group_L0(const Point& t0, const Point& mum, const std::optional<Path>& path,
                                             int n_lo, int n_hi) const
{
    PrecisionScope scope(working_digits());
    if (n_lo > n_hi) throw std::invalid_argument("empty n range");
    const SingularPoint* sc = data_.find(t0);
    if (!sc || sc->kind != PointKind::conifold) throw NotConifold(t0.str() + " is not a conifold point");
    const SingularPoint* sm = data_.find(mum);
    if (!sm || sm->kind != PointKind::MUM) throw NotMUM(mum.str() + " is not a MUM point");
    Path p = path ? *path : default_path(sc->location, sm->location);
    if (p.waypoints.size() < 2 || abs(p.waypoints.front() - sc->location.value) > tiny(cfg_.digits) ||
        abs(p.waypoints.back() - sm->location.value) > tiny(cfg_.digits))
        throw std::invalid_argument("path must run from t0 to the MUM point");

    LocalBasis cb = special_basis(sc->location);
    LocalBasis mb = special_basis(sm->location);
    const auto& wp = p.waypoints;
    Complex pn = near_point(sc->location, wp[1]);
    Complex qn = near_point(sm->location, wp[wp.size() - 2]);
    Path inner;
    inner.waypoints.push_back(pn);
    for (std::size_t k = 1; k + 1 < wp.size(); ++k) inner.waypoints.push_back(wp[k]);
    inner.waypoints.push_back(qn);
    PathMatrix t = path_matrix(inner);

    CMatrix fc = cb.jet_matrix(pn);
    CMatrix f0 = mb.jet_matrix(qn);
    CMatrix ti = inverse(t.matrix);
    CMatrix f0i = inverse(f0);
    CMatrix mf0 = mb.formal_monodromy();
    CMatrix x = f0 * mf0 * f0i;
    Real ex = 4 * mb.tail_at(qn) * (norm_inf(mf0 * f0i) + norm_inf(x) * norm_inf(f0i));
    CMatrix m0 = ti * x * t.matrix;  // at pn
    Real em0 = sandwich_error(ti, x, t.matrix, t.error_estimate, ex);
    CMatrix fci = inverse(fc);
    CMatrix mc = fci * m0 * fc;
    Real emc = sandwich_error(fci, m0, fc, 4 * cb.tail_at(pn), em0);
    CMatrix mci = inverse(mc);
    Real emci = norm_inf(mci) * emc * norm_inf(mci);

    // conifold period in the Frobenius basis at t0
    CMatrix n = cb.formal_monodromy() - CMatrix::identity(4);
    CVector g;
    image_generator(n, tiny(cfg_.digits / 2), t0.str(), g);
    Complex s = g[1];
    for (auto& z : g) z /= s;

    PeriodGroupRaw out;
    out.t0 = sc->location;
    Real worst = 0, scale = 0;
    for (int k = n_lo; k <= n_hi; ++k) {
        const CMatrix& step = k >= 0 ? mc : mci;
        const Real& es = k >= 0 ? emc : emci;
        // d(A^k g) = sum_j A^j dA A^(k-1-j) g
        std::vector<CVector> vs{g};
        std::vector<CMatrix> ps{CMatrix::identity(4)};
        for (int j = 0; j < std::abs(k); ++j) {
            vs.push_back(step * vs.back());
            ps.push_back(step * ps.back());
        }
        Real e = 0;
        for (int j = 0; j < std::abs(k); ++j)
            e += norm_inf(ps[static_cast<std::size_t>(j)]) * es * norm_inf(vs[static_cast<std::size_t>(std::abs(k) - 1 - j)]);
        const Complex& val = vs.back()[0];
        out.values.push_back(val);
        out.provenance.push_back("M0^" + std::to_string(k));
        if (e > worst) worst = e;
        if (abs(val) > scale) scale = abs(val);
    }
    out.error_estimate = worst;
    out.confident_digits = static_cast<int>(std::floor(decimal_digits_of_agreement(worst, scale == 0 ? Real(1) : scale)));
    return out;
}

PeriodGroupRaw Continuation::period_group_full(const Point& t0, const std::optional<Complex>& basepoint,
                                               int word_length) const
{
    PrecisionScope scope(working_digits());
    if (word_length < 0) throw std::invalid_argument("negative word length");
    const SingularPoint* sc = data_.find(t0);
    if (!sc || sc->kind != PointKind::conifold) throw NotConifold(t0.str() + " is not a conifold point");
    Complex b;
    if (basepoint) {
        b = *basepoint;
    } else {
        const SingularPoint* sm = data_.find(Point::rational(0));
        if (sm && sm->kind == PointKind::MUM) b = default_basepoint(sc->location, sm->location);
        else b = sc->location.value + Complex(Real(0), data_.radius(sc->location.value) / 4);
    }
    ConifoldPeriod cp = conifold_period(sc->location, b);
    LocalBasis cb = special_basis(sc->location);
    Leg l = leg(b, sc->location);
    CVector functional = row(inverse(cb.jet_matrix(l.near)) * l.to_near.matrix, 0);

    struct Gen {
        std::string name;
        CMatrix m;
        int inverse_of;
    };
    std::vector<Gen> gens;
    std::vector<Real> gen_err;
    for (const auto& [pt, pm] : monodromies(b)) {
        if (pt.infinite) continue;  // generated by the finite ones
        std::string nm = "M[" + pt.str(8) + "]";
        int k = static_cast<int>(gens.size());
        gens.push_back({nm, pm.matrix, k + 1});
        gens.push_back({nm + "^-1", inverse(pm.matrix), k});
        Real ni = norm_inf(gens.back().m);
        gen_err.push_back(pm.error_estimate);
        gen_err.push_back(pm.error_estimate * ni * ni);
    }

    PeriodGroupRaw out;
    out.t0 = sc->location;
    struct Node {
        CVector v;
        std::string word;
        int last;
        Real err;
    };
    std::vector<Node> frontier{{cp.at_basepoint, "1", -1, cp.monodromy.error_estimate * norm_inf(cp.at_basepoint)}};
    std::set<std::string> seen{vector_key(cp.at_basepoint, cfg_.digits / 2)};
    std::set<std::string> seen_values;
    const Real nf = norm_inf(functional);
    Real worst = 0;
    auto record = [&](const Node& nd) {
        Complex val = dot(functional, nd.v);
        worst = std::max(worst, nd.err * nf);
        std::string key = vector_key({val}, cfg_.digits / 2);
        if (seen_values.insert(key).second) {
            out.values.push_back(val);
            out.provenance.push_back(nd.word);
        }
    };
    record(frontier.front());
    for (int len = 1; len <= word_length; ++len) {
        std::vector<Node> next;
        for (const auto& nd : frontier)
            for (std::size_t g = 0; g < gens.size(); ++g) {
                if (nd.last >= 0 && gens[g].inverse_of == nd.last) continue;
                Node m{gens[g].m * nd.v, gens[g].name + (nd.word == "1" ? "" : "*" + nd.word), static_cast<int>(g),
                       norm_inf(gens[g].m) * nd.err + gen_err[g] * norm_inf(nd.v)};
                if (!seen.insert(vector_key(m.v, cfg_.digits / 2)).second) continue;
                record(m);
                next.push_back(std::move(m));
            }
        frontier = std::move(next);
    }
    Real scale = 0;
    for (const auto& v : out.values)
        if (abs(v) > scale) scale = abs(v);
    out.error_estimate = worst;
    out.confident_digits = static_cast<int>(
        std::floor(decimal_digits_of_agreement(out.error_estimate, scale == 0 ? Real(1) : scale)));
    return out;
}

}  // namespace cyp
