#include "cyperiods/pipeline.hpp"

#include "cyperiods/error.hpp"

#include <chrono>

namespace cyp {

namespace {

Real pow10(int e) { return boost::multiprecision::pow(Real(10), e); }

// |det| of a small integer matrix by rational elimination
Integer abs_det(std::vector<std::vector<Rational>> m)
{
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) std::swap(m[p], m[c]);
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    Integer out = det.get_num();
    return out < 0 ? Integer(-out) : out;
}

DirectionReport analyze_direction(const std::vector<Real>& values, const std::vector<int>& ns, int digits,
                                  const RelationOptions& opt)
{
    DirectionReport d;
    const Real zero_tol = pow10(-digits) * 1000;
    Real scale = 0;
    for (const auto& v : values) scale = std::max(scale, boost::multiprecision::abs(v));
    if (scale == 0) return d;

    // drop numerical zeros: they carry no lattice information and would confuse PSLQ
    std::vector<Real> kept;
    std::vector<int> kept_n;
    for (std::size_t k = 0; k < values.size(); ++k)
        if (boost::multiprecision::abs(values[k]) > zero_tol * scale) {
            kept.push_back(values[k]);
            kept_n.push_back(ns[k]);
        }
    if (kept.empty()) return d;
    try {
        d.basis = zmodule_basis(kept, digits, opt);
    } catch (const PrecisionTooLow& e) {
        d.problem = e.what();
        return d;
    }

    // greedy Q-independent subset in the order -1, -2, ..., 1, 2, ...
    std::vector<std::size_t> order;
    for (int sign : {-1, 1})
        for (int a = 1; a <= 1000; ++a)
            for (std::size_t k = 0; k < kept.size(); ++k)
                if (kept_n[k] == sign * a) order.push_back(k);
    std::vector<std::size_t> chosen;
    std::vector<Real> span;
    for (std::size_t k : order) {
        if (static_cast<int>(chosen.size()) == d.basis.rank) break;
        std::vector<Real> trial = span;
        trial.push_back(kept[k]);
        bool dependent = false;
        if (!span.empty()) {
            try {
                dependent = integer_relation(trial, digits, opt).has_value();
            } catch (const PrecisionTooLow&) {
                dependent = true;
            }
        }
        if (dependent) continue;
        span.push_back(kept[k]);
        chosen.push_back(k);
        d.leading.push_back({kept_n[k], boost::multiprecision::abs(kept[k])});
    }

    if (static_cast<int>(chosen.size()) == d.basis.rank && d.basis.rank > 0 &&
        d.basis.certificates.size() == kept.size()) {
        std::vector<std::vector<Rational>> m;
        for (std::size_t k : chosen) {
            const auto& c = d.basis.certificates[k].coefficients;
            std::vector<Rational> row;
            for (int j = 0; j < d.basis.rank; ++j) row.emplace_back(c[j]);
            m.push_back(row);
        }
        d.index = abs_det(m);
    }
    return d;
}

}  // namespace

PeriodReport compute_periods(const FuchsianOperator& op, const PeriodOptions& opt)
{
    auto start = std::chrono::steady_clock::now();
    ContinuationConfig cc;
    cc.digits = opt.digits + 10;  // so the reported digits survive the error estimate
    cc.order = opt.order;
    Continuation c(op, cc);
    PrecisionScope scope(c.working_digits());

    PeriodReport r;
    r.operator_name = op.name;
    r.t0 = opt.t0;
    r.mum = opt.mum;
    r.raw = c.period_group_L0(opt.t0, opt.mum, opt.path, -opt.window, opt.window);
    r.basepoint = opt.path ? opt.path->waypoints.at(1) : c.default_basepoint(opt.t0, opt.mum);
    r.confident_digits = std::min(r.raw.confident_digits, opt.digits);

    std::vector<Real> re, im;
    std::vector<int> ns;
    for (std::size_t k = 0; k < r.raw.values.size(); ++k) {
        re.push_back(r.raw.values[k].re);
        im.push_back(r.raw.values[k].im);
        ns.push_back(static_cast<int>(k) - opt.window);
    }
    int digits = std::max(15, std::min(r.raw.confident_digits, opt.digits + 10) - 5);
    r.real = analyze_direction(re, ns, digits, opt.relations);
    r.imag = analyze_direction(im, ns, digits, opt.relations);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace cyp
