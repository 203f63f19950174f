// cyperiods: command-line front end for the period, modular form and relation computations.
#include "cyperiods/continuation.hpp"
#include "cyperiods/error.hpp"
#include "cyperiods/ingest.hpp"
#include "cyperiods/modforms.hpp"
#include "cyperiods/pipeline.hpp"
#include "cyperiods/relations.hpp"
#include "cyperiods/verify.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <numeric>
#include <regex>
#include <sstream>

using namespace cyp;

namespace {

struct RunConfig {
    int digits = 60;
    int order = 0;
    std::string path;
    std::string t;
    std::string t0;
    long max_coeff = 65536;
    bool offline = false;
    std::string cache_dir;
    bool machine = false;

    IngestConfig ingest() const
    {
        IngestConfig c = IngestConfig::defaults();
        if (offline) c.offline = true;
        if (!cache_dir.empty()) c.cache_dir = cache_dir;
        return c;
    }
    RelationOptions relations() const
    {
        RelationOptions o;
        o.max_coeff = max_coeff;
        return o;
    }
};

// text: aligned "key  value"; machine: key<TAB>value
class Out {
public:
    explicit Out(bool machine) : machine_(machine) {}
    void kv(const std::string& key, const std::string& value) const
    {
        if (machine_)
            std::cout << key << '\t' << value << '\n';
        else
            std::cout << std::left << std::setw(28) << key << ' ' << value << '\n';
    }

private:
    bool machine_;
};

std::vector<std::string> split_commas(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        auto b = cur.find_first_not_of(' ');
        auto e = cur.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

std::vector<Complex> parse_waypoints(const std::string& s)
{
    std::vector<Complex> out;
    for (const auto& tok : split_commas(s)) out.push_back(parse_complex(tok));
    return out;
}

// "p/q" or a decimal
Real parse_t(const std::string& s)
{
    try {
        return to_real(parse_rational(s));
    } catch (const std::invalid_argument&) {
        return parse_real(s);
    }
}

DirichletCharacter parse_character(const std::string& s)
{
    static const std::regex integer_re(R"(^-?\d+$)");
    if (std::regex_match(s, integer_re)) return DirichletCharacter::kronecker(std::stol(s));
    if (s == "1" || s == "trivial") return DirichletCharacter::trivial();
    return DirichletCharacter::from_label(s);
}

std::string matrix_rows(const CMatrix& m, int digits)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << (i ? " ; " : "");
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << to_string(m(i, j), digits);
    }
    return out.str();
}

std::string join_ints(const std::vector<Integer>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i].get_str();
    return s;
}

// --- commands --------------------------------------------------------------------------------

int cmd_lvalue(const RunConfig& rc, const std::string& label, int s)
{
    Out out(rc.machine);
    PrecisionScope scope(rc.digits + 10);
    ModularForm f = load_form(label, rc.digits, rc.ingest());
    int eps = resolve_fricke_sign(f, rc.digits);
    Real v = rc.t.empty() ? l_value(f, s, rc.digits) : l_value_split(f, s, parse_t(rc.t), rc.digits);
    // the split point is arbitrary; a second one measures the achieved accuracy
    Real w = l_value_split(f, s, Real(f.level) * 3 / 2, rc.digits);
    int conf = static_cast<int>(decimal_digits_of_agreement(boost::multiprecision::abs(v - w), Real(1)));
    out.kv("form", label);
    out.kv("level", std::to_string(f.level));
    out.kv("fricke_sign", std::to_string(eps));
    out.kv("s", std::to_string(s));
    out.kv("L", to_string(v, std::min(rc.digits, std::max(conf, 5))));
    out.kv("confidence_digits", std::to_string(std::min(conf, rc.digits)));
    return 0;
}

int cmd_mellin(const RunConfig& rc, const std::string& label, int s)
{
    Out out(rc.machine);
    PrecisionScope scope(rc.digits + 10);
    ModularForm f = load_form(label, rc.digits, rc.ingest());
    Real t = rc.t.empty() ? Real(f.level) : parse_t(rc.t);
    if (t > 2 * f.level) f = fetch_coefficients(label, mellin_terms_needed(t, rc.digits), rc.ingest()).form;
    auto m = mellin_partial_detail(f, s, t, rc.digits);
    int conf = static_cast<int>(decimal_digits_of_agreement(m.tail_bound, boost::multiprecision::abs(m.value)));
    out.kv("form", label);
    out.kv("s", std::to_string(s));
    out.kv("t", rc.t.empty() ? std::to_string(f.level) : rc.t);
    out.kv("M", to_string(m.value, rc.digits));
    out.kv("terms", std::to_string(m.terms));
    out.kv("tail_bound", to_string(m.tail_bound, 3));
    out.kv("confidence_digits", std::to_string(std::min(conf, rc.digits)));
    return 0;
}

int cmd_twist(const RunConfig& rc, const std::string& label, const std::string& chi_text, long level, int count)
{
    Out out(rc.machine);
    PrecisionScope scope(rc.digits + 10);
    auto chi = parse_character(chi_text);
    long m = chi.modulus();
    ModularForm probe = load_form(label, 20, rc.ingest());
    long target = level > 0 ? level : std::lcm(probe.level, m * m);
    ModularForm f = load_form(label, rc.digits, rc.ingest(), target);
    ModularForm g = twist(f, chi, target);
    out.kv("form", g.label);
    out.kv("level", std::to_string(g.level));
    out.kv("character", chi.label());
    try {
        out.kv("fricke_sign", std::to_string(fricke_sign(g, rc.digits)));
    } catch (const Error& e) {
        out.kv("fricke_sign", e.kind());
    }
    std::string an;
    for (int n = 1; n <= count && n <= static_cast<int>(g.count()); ++n) an += (n > 1 ? " " : "") + std::to_string(g.a(n));
    out.kv("an", an);
    for (const auto& e : label_table()) {
        if (e.level != g.level) continue;
        bool same = true;
        for (std::size_t n = 1; n <= e.fingerprint.size(); ++n) same = same && g.a(n) == e.fingerprint[n - 1];
        if (same) out.kv("matches", e.label + " (" + e.remote_label + ")");
    }
    return 0;
}

int cmd_gauss(const RunConfig& rc, const std::string& chi_text)
{
    Out out(rc.machine);
    PrecisionScope scope(rc.digits + 10);
    auto chi = parse_character(chi_text);
    out.kv("character", chi.label());
    out.kv("modulus", std::to_string(chi.modulus()));
    out.kv("parity", std::to_string(chi.parity()));
    Complex g = gauss_sum(chi);
    Real eps = boost::multiprecision::pow(Real(10), -(rc.digits + 5));
    if (boost::multiprecision::abs(g.re) < eps) g.re = 0;
    if (boost::multiprecision::abs(g.im) < eps) g.im = 0;
    out.kv("gauss_sum", to_string(g, rc.digits));
    return 0;
}

int cmd_exponents(const RunConfig& rc, const std::string& id)
{
    Out out(rc.machine);
    PrecisionScope scope(rc.digits + 10);
    FuchsianOperator op = load_operator(id);
    auto show = [&](const SingularPoint& sp) {
        std::string ex;
        for (std::size_t k = 0; k < sp.exponents.size(); ++k)
            ex += (k ? " " : "") + (sp.exact_exponents[k] ? sp.exact_exponents[k]->get_str() : to_string(sp.exponents[k], 12));
        out.kv(sp.location.str(20), to_string(sp.kind) + "\t" + ex);
    };
    if (!rc.t0.empty()) {
        show(analyze_point(op, parse_point(rc.t0), rc.digits));
        return 0;
    }
    auto pts = singular_points(op, rc.digits);
    for (const auto& sp : pts) show(sp);
    out.kv("fuchs_sum", to_string(fuchs_sum(pts), 10));
    return 0;
}

int cmd_frobenius(const RunConfig& rc, const std::string& id, int terms)
{
    Out out(rc.machine);
    OperatorData data(load_operator(id), rc.digits + 30);
    PrecisionScope scope(rc.digits + 30);
    Point p = rc.t0.empty() ? Point::rational(0) : parse_point(rc.t0);
    FrobeniusOptions fo;
    fo.order = rc.order;
    LocalBasis b = frobenius_basis(data, p, fo);
    out.kv("center", p.str());
    out.kv("kind", to_string(b.kind));
    out.kv("radius", to_string(b.radius, 12));
    for (std::size_t k = 0; k < b.members.size(); ++k) {
        const auto& m = b.members[k];
        std::string key = "f" + std::to_string(k + 1);
        out.kv(key + ".exponent", m.exponent.get_str());
        out.kv(key + ".log_degree", std::to_string(m.log_degree()));
        out.kv(key + ".order", std::to_string(m.truncation_order()));
        for (int j = 0; j <= m.log_degree(); ++j) {
            std::string s;
            for (int n = 0; n < terms && n < m.truncation_order(); ++n) {
                if (m.exact)
                    s += (n ? " " : "") + (*m.exact)[n][j].get_str();
                else
                    s += (n ? " " : "") + to_string(m.coeffs[n][j], 12);
            }
            out.kv(key + ".log" + std::to_string(j), s);
        }
    }
    return 0;
}

int cmd_monodromy(const RunConfig& rc, const std::string& id)
{
    Out out(rc.machine);
    ContinuationConfig cc;
    cc.digits = rc.digits;
    cc.order = rc.order;
    Continuation c(load_operator(id), cc);
    PrecisionScope scope(c.working_digits());
    Complex b;
    if (!rc.path.empty()) {
        b = parse_waypoints(rc.path).at(0);
    } else {
        Point t0 = Point::rational(0);
        const SingularPoint* first = nullptr;
        for (const auto& sp : c.data().singular)
            if (sp.kind == PointKind::conifold && !first) first = &sp;
        if (!rc.t0.empty()) t0 = parse_point(rc.t0);
        else if (first) t0 = first->location;
        b = c.default_basepoint(t0, Point::rational(0));
    }
    out.kv("basepoint", to_string(b, 20));
    auto all = c.monodromies(b);
    CMatrix prod = CMatrix::identity(4);
    int shown = std::min(rc.digits, 12);
    for (const auto& [p, pm] : all) {
        prod = pm.matrix * prod;
        CMatrix n = pm.matrix - CMatrix::identity(4);
        int rk = rank(n, boost::multiprecision::pow(Real(10), -(rc.digits / 2)));
        std::string key = "M[" + p.str(15) + "]";
        out.kv(key + ".rank(M-I)", std::to_string(rk));
        out.kv(key + ".error", to_string(pm.error_estimate, 3));
        out.kv(key, matrix_rows(pm.matrix, shown));
    }
    out.kv("product_minus_identity", to_string(norm_inf(prod - CMatrix::identity(4)), 3));
    return 0;
}

int cmd_periods(const RunConfig& rc, const std::string& id, const std::string& mum, int window)
{
    Out out(rc.machine);
    if (rc.t0.empty()) throw std::invalid_argument("periods needs --t0");
    PeriodOptions o;
    o.digits = rc.digits;
    o.order = rc.order;
    o.t0 = parse_point(rc.t0);
    o.mum = parse_point(mum);
    o.window = window;
    o.relations = rc.relations();
    if (!rc.path.empty()) {
        Path p;
        p.waypoints.push_back(o.t0.value);
        for (const auto& z : parse_waypoints(rc.path)) p.waypoints.push_back(z);
        p.waypoints.push_back(o.mum.value);
        p.description = "user";
        o.path = p;
    }
    PeriodReport r = compute_periods(load_operator(id), o);
    PrecisionScope scope(rc.digits + 30);
    int shown = std::max(10, r.confident_digits);
    out.kv("operator", r.operator_name);
    out.kv("t0", r.t0.str());
    out.kv("mum", r.mum.str());
    out.kv("basepoint", to_string(r.basepoint, 20));
    out.kv("confidence_digits", std::to_string(r.confident_digits));
    for (std::size_t k = 0; k < r.raw.values.size(); ++k)
        out.kv("L0[" + std::to_string(static_cast<int>(k) - window) + "]", to_string(r.raw.values[k], shown));
    for (const auto* dir : {&r.real, &r.imag}) {
        std::string pre = dir == &r.real ? "re" : "im";
        std::string unit = dir == &r.real ? "" : "i";
        out.kv(pre + ".rank", std::to_string(dir->basis.rank));
        if (!dir->problem.empty()) out.kv(pre + ".problem", dir->problem);
        for (std::size_t k = 0; k < dir->leading.size(); ++k)
            out.kv(pre + ".generator" + std::to_string(k + 1),
                   to_string(dir->leading[k].value, shown) + unit + "  (n=" + std::to_string(dir->leading[k].n) + ")");
        for (std::size_t k = 0; k < dir->basis.generators.size(); ++k)
            out.kv(pre + ".zbasis" + std::to_string(k + 1), to_string(dir->basis.generators[k], shown) + unit);
        if (dir->index) out.kv(pre + ".index", dir->index->get_str());
        for (std::size_t k = 0; k < dir->basis.certificates.size(); ++k)
            out.kv(pre + ".certificate" + std::to_string(k + 1), join_ints(dir->basis.certificates[k].coefficients));
    }
    out.kv("seconds", std::to_string(r.seconds));
    return 0;
}

int cmd_relate(const RunConfig& rc, const std::vector<std::string>& values)
{
    Out out(rc.machine);
    // inputs are decimal literals; their shortest one bounds the usable precision
    int digits = rc.digits;
    PrecisionScope scope(std::max(digits, 30) + 20);
    std::vector<Real> xs;
    int min_sig = 100000;
    for (const auto& v : values) {
        xs.push_back(parse_real(v));
        min_sig = std::min(min_sig, significant_digits(v));
    }
    digits = std::min(digits, min_sig);
    auto cert = integer_relation(xs, digits, rc.relations(), values);
    out.kv("digits", std::to_string(digits));
    if (!cert) {
        out.kv("relation", "none");
        return 1;
    }
    out.kv("relation", join_ints(cert->coefficients));
    out.kv("residual", to_string(cert->residual, 3));
    out.kv("max_coeff", rc.relations().max_coeff.get_str());
    return 0;
}

int cmd_commensurable(const RunConfig& rc, const std::string& a, const std::string& b)
{
    Out out(rc.machine);
    PrecisionScope scope(rc.digits + 20);
    std::vector<Complex> ga, gb;
    int min_sig = 100000;
    for (const auto& tok : split_commas(a)) {
        ga.push_back(parse_complex(tok));
        min_sig = std::min(min_sig, significant_digits(tok));
    }
    for (const auto& tok : split_commas(b)) {
        gb.push_back(parse_complex(tok));
        min_sig = std::min(min_sig, significant_digits(tok));
    }
    int digits = std::min(rc.digits, min_sig);
    auto v = commensurable(ga, gb, digits, rc.relations());
    out.kv("verdict", to_string(v.verdict));
    out.kv("digits", std::to_string(v.precision_used));
    auto rows = [&](const std::string& key, const std::vector<std::vector<Rational>>& m) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::string s;
            for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? " " : "") + m[i][j].get_str();
            out.kv(key + std::to_string(i + 1), s);
        }
    };
    rows("a_in_b.", v.a_in_b);
    rows("b_in_a.", v.b_in_a);
    return v.verdict == Verdict::commensurable ? 0 : 1;
}

int cmd_verify(const RunConfig& rc, const std::string& suite)
{
    VerifyConfig vc;
    vc.digits = rc.digits;
    vc.ingest = rc.ingest();
    auto results = run_suite(suite, vc);
    int failed = 0, passed = 0, skipped = 0;
    for (const auto& r : results) {
        if (r.status == CheckStatus::fail) ++failed;
        if (r.status == CheckStatus::pass) ++passed;
        if (r.status == CheckStatus::skipped) ++skipped;
        if (rc.machine) {
            std::cout << to_string(r.status) << '\t' << r.suite << '\t' << r.name << '\t' << r.expected << '\t'
                      << r.computed << '\t' << r.residual << '\t' << r.agreeing_digits << '\t' << r.detail << '\n';
        } else {
            std::cout << '[' << to_string(r.status) << "] " << r.suite << ": " << r.name;
            if (!r.expected.empty()) std::cout << "\n        expected " << r.expected;
            if (!r.computed.empty()) std::cout << "\n        computed " << r.computed;
            if (!r.residual.empty()) std::cout << "\n        residual " << r.residual;
            if (!r.detail.empty()) std::cout << "\n        " << r.detail;
            std::cout << '\n';
        }
    }
    if (rc.machine)
        std::cout << "summary\t" << passed << '\t' << failed << '\t' << skipped << '\n';
    else
        std::cout << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Conifold periods of Calabi-Yau operators and special values of modular forms"};
    app.require_subcommand(1);
    RunConfig rc;
    app.add_option("--digits", rc.digits, "decimal digits of the results")->check(CLI::Range(15, 2000));
    app.add_option("--order", rc.order, "series order (0 = automatic, else at least 4*digits)");
    app.add_option("--path", rc.path, "comma-separated waypoints a+bi");
    app.add_option("--t", rc.t, "split point of the Mellin integral");
    app.add_option("--t0", rc.t0, "conifold or evaluation point");
    app.add_option("--max-coeff", rc.max_coeff, "bound on relation coefficients")->check(CLI::PositiveNumber);
    app.add_flag("--offline", rc.offline, "never contact the remote database");
    app.add_option("--cache-dir", rc.cache_dir, "coefficient cache directory");
    app.add_flag("--machine", rc.machine, "key<TAB>value output");
    app.fallthrough();

    std::string label, id, chi, suite = "all", mum = "0", a_group, b_group;
    int s = 1, count = 20, terms = 8, window = 3;
    long level = 0;
    std::vector<std::string> values;

    auto* lv = app.add_subcommand("lvalue", "L(f,s) by the functional equation");
    lv->add_option("form", label, "label such as 17/1 or 17.4.a.a")->required();
    lv->add_option("s", s)->required()->check(CLI::Range(1, 3));

    auto* me = app.add_subcommand("mellin", "partial Mellin transform M(f,s;t), t = N by default");
    me->add_option("form", label)->required();
    me->add_option("s", s)->required()->check(CLI::Range(1, 3));

    auto* tw = app.add_subcommand("twist", "twist a form by a quadratic character");
    tw->add_option("form", label)->required();
    tw->add_option("character", chi, "Conrey label m.c, chi_{m,c}, or a discriminant D")->required();
    tw->add_option("--level", level, "level of the twist (default lcm(N, m^2))");
    tw->add_option("--count", count, "coefficients to print");

    auto* ga = app.add_subcommand("gauss", "Gauss sum of a quadratic character");
    ga->add_option("character", chi)->required();

    auto* ex = app.add_subcommand("exponents", "singular points, local exponents and kinds");
    ex->add_option("operator", id, "bundled id, file in $CYPERIODS_OPERATOR_DIR, or a path")->required();

    auto* fr = app.add_subcommand("frobenius", "Frobenius basis at --t0 (default 0)");
    fr->add_option("operator", id)->required();
    fr->add_option("--terms", terms, "series coefficients to print");

    auto* mo = app.add_subcommand("monodromy", "local monodromies around every singular point");
    mo->add_option("operator", id)->required();

    auto* pe = app.add_subcommand("periods", "conifold period lattice L0 at --t0");
    pe->add_option("operator", id)->required();
    pe->add_option("--mum", mum, "MUM point");
    pe->add_option("--window", window, "powers of the MUM monodromy used")->check(CLI::Range(1, 20));

    auto* re = app.add_subcommand("relate", "integer relation among decimal values");
    re->add_option("values", values)->required()->expected(2, 50);

    auto* co = app.add_subcommand("commensurable", "compare two subgroups of C");
    co->add_option("a", a_group, "generators a+bi,...")->required();
    co->add_option("b", b_group)->required();

    auto* ve = app.add_subcommand("verify", "reproduction suites");
    ve->add_option("suite", suite, "all T3 P61 FE OP862 OP867 S63 SHIMURA MONO T2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (rc.order != 0 && rc.order < 4 * rc.digits)
            throw std::invalid_argument("--order must be 0 or at least 4*digits (" + std::to_string(4 * rc.digits) + ")");
        if (*lv) return cmd_lvalue(rc, label, s);
        if (*me) return cmd_mellin(rc, label, s);
        if (*tw) return cmd_twist(rc, label, chi, level, count);
        if (*ga) return cmd_gauss(rc, chi);
        if (*ex) return cmd_exponents(rc, id);
        if (*fr) return cmd_frobenius(rc, id, terms);
        if (*mo) return cmd_monodromy(rc, id);
        if (*pe) return cmd_periods(rc, id, mum, window);
        if (*re) return cmd_relate(rc, values);
        if (*co) return cmd_commensurable(rc, a_group, b_group);
        if (*ve) return cmd_verify(rc, suite);
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
