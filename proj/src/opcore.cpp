#include "cyperiods/opcore.hpp"

#include "cyperiods/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cyp {

namespace {

// Stirling numbers of the second kind S(j, i) for j <= 4: theta^j = sum_i S(j,i) x^i D^i.
constexpr int kStirling[5][5] = {
    {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 1, 3, 1, 0}, {0, 1, 7, 6, 1},
};

bool block_is_zero(const ThetaBlock& b)
{
    return std::all_of(b.begin(), b.end(), [](const Rational& c) { return c == 0; });
}

}  // namespace

QPoly falling_factorial(int i)
{
    QPoly p{Rational(1)};
    for (int r = 0; r < i; ++r) p = mul(p, QPoly{Rational(-r), Rational(1)});
    return p;
}

void FuchsianOperator::normalize()
{
    for (auto it = coeffs.begin(); it != coeffs.end();) {
        if (it->first < 0) throw OrderError("negative power of " + variable + " in operator");
        it = block_is_zero(it->second) ? coeffs.erase(it) : std::next(it);
    }
    bool order4 = std::any_of(coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.second[4] != 0; });
    if (!order4) throw OrderError("operator has no theta^4 term (order must be exactly 4)");
}

int FuchsianOperator::max_power() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }
int FuchsianOperator::min_power() const { return coeffs.empty() ? -1 : coeffs.begin()->first; }

QPoly FuchsianOperator::block(int k) const
{
    auto it = coeffs.find(k);
    if (it == coeffs.end()) return {};
    QPoly p(it->second.begin(), it->second.end());
    trim(p);
    return p;
}

QPoly FuchsianOperator::theta_coefficient(int j) const
{
    QPoly p(static_cast<std::size_t>(std::max(0, max_power() + 1)));
    for (const auto& [k, b] : coeffs) p[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(j)];
    trim(p);
    return p;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

// Elements of the Weyl algebra kept in the normal form sum_k x^k A_k(theta).
using Weyl = std::map<int, QPoly>;

void weyl_trim(Weyl& w)
{
    for (auto it = w.begin(); it != w.end();) {
        trim(it->second);
        it = it->second.empty() ? w.erase(it) : std::next(it);
    }
}

Weyl weyl_add(Weyl a, const Weyl& b, const Rational& sign)
{
    for (const auto& [k, p] : b) a[k] = add(a[k], scale(p, sign));
    weyl_trim(a);
    return a;
}

Weyl weyl_mul(const Weyl& a, const Weyl& b)
{
    // (x^p A(theta)) (x^q B(theta)) = x^{p+q} A(theta + q) B(theta)
    Weyl c;
    for (const auto& [p, A] : a)
        for (const auto& [q, B] : b) c[p + q] = add(c[p + q], mul(taylor_shift(A, Rational(q)), B));
    weyl_trim(c);
    return c;
}

Weyl weyl_const(const Rational& r)
{
    Weyl w;
    if (r != 0) w[0] = QPoly{r};
    return w;
}

bool weyl_is_const(const Weyl& w, Rational& out)
{
    if (w.empty()) {
        out = 0;
        return true;
    }
    if (w.size() != 1 || w.begin()->first != 0 || w.begin()->second.size() != 1) return false;
    out = w.begin()->second[0];
    return true;
}

class ExprParser {
public:
    ExprParser(std::string_view text, int line, int col0, std::string& variable, bool variable_fixed)
        : s_(text), line_(line), col0_(col0), var_(variable), var_fixed_(variable_fixed)
    {
    }

    Weyl parse()
    {
        Weyl w = expr();
        skip_ws();
        if (pos_ < s_.size()) fail("unexpected '" + peek_symbol() + "'");
        return w;
    }

private:
    enum class Sym { end, number, theta, var, lparen, rparen, plus, minus, times, divide, caret, other };

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
    int col0_;
    std::string& var_;
    bool var_fixed_;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw SyntaxError(line_, col0_ + static_cast<int>(pos_) + 1, what);
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool starts(std::string_view lit) const { return s_.substr(pos_, lit.size()) == lit; }

    std::string peek_symbol() const
    {
        std::size_t n = 1;
        while (pos_ + n < s_.size() && (static_cast<unsigned char>(s_[pos_ + n]) & 0xC0) == 0x80) ++n;
        return std::string(s_.substr(pos_, n));
    }

    // Classifies the next symbol without consuming it; `len` receives its byte length.
    Sym peek(std::size_t& len)
    {
        skip_ws();
        len = 1;
        if (pos_ >= s_.size()) return Sym::end;
        unsigned char c = static_cast<unsigned char>(s_[pos_]);
        if (starts("θ") || starts("Θ")) {
            len = 2;
            return Sym::theta;
        }
        if (starts("−")) {
            len = 3;
            return Sym::minus;
        }
        if (starts("·") || starts("⋅")) {
            len = starts("·") ? 2 : 3;
            return Sym::times;
        }
        if (std::isdigit(c)) return Sym::number;
        if (std::isalpha(c)) {
            std::size_t e = pos_;
            while (e < s_.size() && std::isalpha(static_cast<unsigned char>(s_[e]))) ++e;
            std::string id(s_.substr(pos_, e - pos_));
            len = e - pos_;
            if (id == "theta") return Sym::theta;
            if (!var_fixed_ && id != "i" && id.size() == 1) {
                var_ = id;
                var_fixed_ = true;
            }
            if (id == var_) return Sym::var;
            return Sym::other;
        }
        switch (c) {
        case '(':
        case '{':
        case '[': return Sym::lparen;
        case ')':
        case '}':
        case ']': return Sym::rparen;
        case '+': return Sym::plus;
        case '-': return Sym::minus;
        case '*': return Sym::times;
        case '/': return Sym::divide;
        case '^': return Sym::caret;
        default: return Sym::other;
        }
    }

    Integer number()
    {
        skip_ws();
        std::size_t e = pos_;
        while (e < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e]))) ++e;
        if (e == pos_) fail("expected an integer");
        if (e < s_.size() && (s_[e] == '.' || s_[e] == 'e' || s_[e] == 'E'))
            fail("floating-point coefficients are not allowed; use p/q");
        Integer v(std::string(s_.substr(pos_, e - pos_)), 10);
        pos_ = e;
        return v;
    }

    long exponent()
    {
        std::size_t len = 0;
        Sym t = peek(len);
        bool braced = t == Sym::lparen;
        if (braced) pos_ += len;
        Integer e = number();
        if (braced) {
            if (peek(len) != Sym::rparen) fail("expected closing bracket in exponent");
            pos_ += len;
        }
        if (!e.fits_slong_p() || e > 64) fail("exponent too large");
        return e.get_si();
    }

    Weyl expr()
    {
        std::size_t len = 0;
        Rational sign = 1;
        Sym t = peek(len);
        if (t == Sym::plus || t == Sym::minus) {
            if (t == Sym::minus) sign = -1;
            pos_ += len;
        }
        Weyl acc = weyl_add(Weyl{}, term(), sign);
        for (;;) {
            t = peek(len);
            if (t != Sym::plus && t != Sym::minus) break;
            pos_ += len;
            acc = weyl_add(acc, term(), t == Sym::minus ? Rational(-1) : Rational(1));
        }
        return acc;
    }

    Weyl term()
    {
        Weyl acc = factor();
        for (;;) {
            std::size_t len = 0;
            Sym t = peek(len);
            if (t == Sym::times) {
                pos_ += len;
                acc = weyl_mul(acc, factor());
            } else if (t == Sym::divide) {
                pos_ += len;
                Rational d;
                std::size_t at = pos_;
                Weyl den = factor();
                if (!weyl_is_const(den, d)) {
                    pos_ = at;
                    fail("division by a non-constant");
                }
                if (d == 0) {
                    pos_ = at;
                    fail("division by zero");
                }
                acc = weyl_mul(acc, weyl_const(Rational(1) / d));
            } else if (t == Sym::number || t == Sym::theta || t == Sym::var || t == Sym::lparen) {
                acc = weyl_mul(acc, factor());  // implicit product
            } else {
                return acc;
            }
        }
    }

    Weyl factor()
    {
        Weyl base = primary();
        std::size_t len = 0;
        if (peek(len) == Sym::caret) {
            pos_ += len;
            long e = exponent();
            Weyl r = weyl_const(1);
            for (long k = 0; k < e; ++k) r = weyl_mul(r, base);
            return r;
        }
        return base;
    }

    Weyl primary()
    {
        std::size_t len = 0;
        Sym t = peek(len);
        switch (t) {
        case Sym::number: return weyl_const(Rational(number()));
        case Sym::theta: {
            pos_ += len;
            Weyl w;
            w[0] = QPoly{Rational(0), Rational(1)};
            return w;
        }
        case Sym::var: {
            pos_ += len;
            Weyl w;
            w[1] = QPoly{Rational(1)};
            return w;
        }
        case Sym::lparen: {
            pos_ += len;
            Weyl w = expr();
            if (peek(len) != Sym::rparen) fail("expected ')'");
            pos_ += len;
            return w;
        }
        case Sym::minus: {
            pos_ += len;
            return weyl_mul(weyl_const(-1), factor());
        }
        case Sym::end: fail("unexpected end of expression");
        default: fail("unexpected '" + peek_symbol() + "'");
        }
    }
};

std::string_view strip(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct Line {
    int number;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text)
{
    std::vector<Line> lines;
    int n = 1;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= text.size(); ++k) {
        if (k == text.size() || text[k] == '\n') {
            std::string_view l = text.substr(start, k - start);
            if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
            lines.push_back({n++, l});
            start = k + 1;
        }
    }
    return lines;
}

std::string_view drop_comment(std::string_view l)
{
    auto h = l.find('#');
    return h == std::string_view::npos ? l : l.substr(0, h);
}

bool is_block_line(std::string_view l)
{
    l = strip(l);
    std::size_t k = 0;
    while (k < l.size() && std::isdigit(static_cast<unsigned char>(l[k]))) ++k;
    if (k == 0) return false;
    while (k < l.size() && std::isspace(static_cast<unsigned char>(l[k]))) ++k;
    return k < l.size() && l[k] == ':';
}

bool is_header_line(std::string_view l, std::string_view key)
{
    l = strip(l);
    return l.substr(0, key.size()) == key && strip(l.substr(key.size())).substr(0, 1) == ":";
}

Rational parse_entry(std::string_view field, int line, int col)
{
    std::string_view f = strip(field);
    int lead = static_cast<int>(field.find_first_not_of(" \t"));
    if (f.empty()) throw SyntaxError(line, col + 1, "empty coefficient");
    if (f.find_first_of(".eE") != std::string_view::npos)
        throw SyntaxError(line, col + lead + 1, "floating-point coefficients are not allowed; use p/q");
    std::string clean;
    for (char c : f)
        if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
    try {
        return parse_rational(clean);
    } catch (const std::invalid_argument&) {
        throw SyntaxError(line, col + lead + 1, "malformed rational '" + std::string(f) + "'");
    }
}

}  // namespace

FuchsianOperator parse_operator(std::string_view text)
{
    FuchsianOperator op;
    bool var_fixed = false;
    auto lines = split_lines(text);
    bool structured = false;
    for (const auto& l : lines) {
        auto body = drop_comment(l.text);
        if (is_block_line(body) || is_header_line(body, "name") || is_header_line(body, "var")) structured = true;
    }
    if (!structured) {
        // a bare expression, possibly spread over several lines
        std::string joined;
        int first_line = 0;
        for (const auto& l : lines) {
            auto body = drop_comment(l.text);
            if (strip(body).empty()) continue;
            if (first_line == 0) first_line = l.number;
            if (!joined.empty()) joined.push_back(' ');
            joined += std::string(body);
        }
        if (joined.empty()) throw SyntaxError(1, 1, "empty operator text");
        ExprParser p(joined, first_line, 0, op.variable, var_fixed);
        Weyl w = p.parse();
        for (const auto& [k, poly] : w) {
            if (degree(poly) > 4) throw OrderError("theta-degree " + std::to_string(degree(poly)) + " exceeds 4");
            ThetaBlock b;
            for (std::size_t j = 0; j < poly.size(); ++j) b[j] = poly[j];
            op.coeffs[k] = b;
        }
        op.normalize();
        return op;
    }
    for (const auto& l : lines) {
        std::string_view body = drop_comment(l.text);
        if (strip(body).empty()) continue;
        auto colon = body.find(':');
        if (colon == std::string_view::npos)
            throw SyntaxError(l.number, 1, "expected 'name:', 'var:' or '<k>: [c0, c1, c2, c3, c4]'");
        std::string key(strip(body.substr(0, colon)));
        std::string_view rest = body.substr(colon + 1);
        int rest_col = static_cast<int>(colon) + 1;
        if (key == "name") {
            op.name = std::string(strip(rest));
            continue;
        }
        if (key == "var") {
            std::string v(strip(rest));
            if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); }))
                throw SyntaxError(l.number, rest_col + 1, "variable must be alphabetic");
            op.variable = v;
            var_fixed = true;
            continue;
        }
        if (!std::all_of(key.begin(), key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw SyntaxError(l.number, 1, "unknown key '" + key + "'");
        int k = std::stoi(key);
        if (op.coeffs.count(k)) throw SyntaxError(l.number, 1, "duplicate block for power " + key);
        auto lb = rest.find('[');
        auto rb = rest.rfind(']');
        if (lb == std::string_view::npos) throw SyntaxError(l.number, rest_col + 1, "expected '['");
        if (rb == std::string_view::npos || rb < lb)
            throw SyntaxError(l.number, rest_col + static_cast<int>(rest.size()) + 1, "expected ']'");
        if (!strip(rest.substr(rb + 1)).empty())
            throw SyntaxError(l.number, rest_col + static_cast<int>(rb) + 2, "trailing characters after ']'");
        std::vector<Rational> entries;
        std::size_t start = lb + 1;
        for (std::size_t p = lb + 1; p <= rb; ++p) {
            if (p == rb || rest[p] == ',') {
                entries.push_back(parse_entry(rest.substr(start, p - start), l.number, rest_col + static_cast<int>(start)));
                start = p + 1;
            }
        }
        if (entries.size() != 5)
            throw OrderError("line " + std::to_string(l.number) + ": block has " + std::to_string(entries.size()) +
                             " entries, expected 5 (theta-degree 4)");
        ThetaBlock b;
        std::copy(entries.begin(), entries.end(), b.begin());
        op.coeffs[k] = b;
    }
    op.normalize();
    return op;
}

std::string render(const FuchsianOperator& op)
{
    std::ostringstream os;
    if (!op.name.empty()) os << "name: " << op.name << "\n";
    os << "var: " << op.variable << "\n";
    for (const auto& [k, b] : op.coeffs) {
        os << k << ": [";
        for (std::size_t j = 0; j < 5; ++j) os << (j ? ", " : "") << b[j].get_str();
        os << "]\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// conversions

DerivativeForm to_derivative_form(const FuchsianOperator& op)
{
    DerivativeForm d;
    for (int i = 0; i <= 4; ++i) {
        QPoly acc;
        for (int j = i; j <= 4; ++j)
            if (kStirling[j][i] != 0) acc = add(acc, scale(op.theta_coefficient(j), Rational(kStirling[j][i])));
        if (!acc.empty()) acc.insert(acc.begin(), static_cast<std::size_t>(i), Rational(0));
        d[static_cast<std::size_t>(i)] = acc;
    }
    return d;
}

FuchsianOperator to_theta_form(const DerivativeForm& d)
{
    // P_i D^i = (P_i / x^i) ff_i(theta)
    FuchsianOperator op;
    for (int i = 0; i <= 4; ++i) {
        const QPoly& p = d[static_cast<std::size_t>(i)];
        for (int l = 0; l < std::min<int>(i, static_cast<int>(p.size())); ++l)
            if (p[static_cast<std::size_t>(l)] != 0)
                throw OrderError("coefficient of D^" + std::to_string(i) + " is not divisible by x^" + std::to_string(i));
        QPoly ff = falling_factorial(i);
        for (std::size_t l = static_cast<std::size_t>(i); l < p.size(); ++l) {
            if (p[l] == 0) continue;
            int k = static_cast<int>(l) - i;
            auto& b = op.coeffs[k];
            for (std::size_t j = 0; j < ff.size(); ++j) b[j] += p[l] * ff[j];
        }
    }
    op.normalize();
    return op;
}

FuchsianOperator at_infinity(const FuchsianOperator& op)
{
    // x = 1/w, theta_x = -theta_w:  w^K P = sum_k w^{K-k} Q_k(-theta)
    FuchsianOperator w;
    w.name = op.name.empty() ? "" : op.name + "@inf";
    w.variable = "w";
    const int K = op.max_power();
    for (const auto& [k, b] : op.coeffs) {
        ThetaBlock nb;
        for (std::size_t j = 0; j < 5; ++j) nb[j] = (j % 2 == 0) ? b[j] : Rational(-b[j]);
        w.coeffs[K - k] = nb;
    }
    w.normalize();
    return w;
}

// ---------------------------------------------------------------------------
// points

Point Point::rational(const Rational& q)
{
    Point p;
    p.exact = q;
    p.value = to_complex(q);
    return p;
}

Point Point::complex(const Complex& z)
{
    Point p;
    p.value = z;
    return p;
}

Point Point::infinity()
{
    Point p;
    p.infinite = true;
    return p;
}

bool Point::is_real() const { return !infinite && (exact || value.im == 0); }

std::string Point::str(int digits) const
{
    if (infinite) return "inf";
    if (exact) return exact->get_str();
    return to_string(value, digits);
}

Point parse_point(std::string_view text)
{
    std::string t(strip(text));
    if (t == "inf" || t == "infinity" || t == "∞" || t == "oo") return Point::infinity();
    try {
        return Point::rational(parse_rational(t));
    } catch (const std::invalid_argument&) {
    }
    Complex z = parse_complex(t);
    if (z.im == 0) {
        // decimal reals are kept exact: 0.25 -> 1/4
        std::string s = t;
        auto dot = s.find('.');
        if (dot != std::string::npos && s.find_first_of("eEi") == std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            Integer den = 1;
            for (std::size_t k = dot + 1; k < s.size(); ++k) den *= 10;
            Rational q(Integer(digits == "-" || digits.empty() ? "0" : digits, 10), den);
            q.canonicalize();
            return Point::rational(q);
        }
    }
    return Point::complex(z);
}

std::string to_string(PointKind k)
{
    switch (k) {
    case PointKind::ordinary: return "ordinary";
    case PointKind::MUM: return "MUM";
    case PointKind::conifold: return "conifold";
    case PointKind::half_conifold: return "half_conifold";
    case PointKind::quarter_conifold: return "quarter_conifold";
    case PointKind::other: return "other";
    }
    return "other";
}

// ---------------------------------------------------------------------------
// local operators

namespace {

Real tiny(int digits) { return boost::multiprecision::pow(Real(10), -digits); }

}  // namespace

LocalOperator local_operator(const FuchsianOperator& op, const Point& c, int digits, int p4_order)
{
    if (c.infinite) {
        LocalOperator lo = local_operator(at_infinity(op), Point::rational(0), digits);
        lo.center = c;
        return lo;
    }
    DerivativeForm d = to_derivative_form(op);
    LocalOperator lo;
    lo.center = c;
    std::vector<QPoly> qff;
    for (int i = 0; i <= 4; ++i) qff.push_back(falling_factorial(i));

    if (c.exact) {
        std::array<QPoly, 5> sh;
        for (int i = 0; i <= 4; ++i) sh[static_cast<std::size_t>(i)] = taylor_shift(d[static_cast<std::size_t>(i)], *c.exact);
        int ord = 0;
        while (sh[4][static_cast<std::size_t>(ord)] == 0) ++ord;
        const int m = 4 - ord;
        lo.shift = m;
        // Fuchs condition: ord P_i >= ord P_4 - (4 - i)
        int kmax = 0;
        for (int i = 0; i <= 4; ++i) {
            const auto& p = sh[static_cast<std::size_t>(i)];
            for (std::size_t l = 0; l < p.size(); ++l) {
                if (p[l] == 0) continue;
                int k = static_cast<int>(l) + m - i;
                if (k < 0) throw std::domain_error("irregular singular point at " + c.str());
                kmax = std::max(kmax, k);
            }
        }
        std::vector<QPoly> blocks(static_cast<std::size_t>(kmax + 1));
        for (int i = 0; i <= 4; ++i) {
            const auto& p = sh[static_cast<std::size_t>(i)];
            for (std::size_t l = 0; l < p.size(); ++l) {
                if (p[l] == 0) continue;
                auto k = static_cast<std::size_t>(static_cast<int>(l) + m - i);
                blocks[k] = add(blocks[k], scale(qff[static_cast<std::size_t>(i)], p[l]));
            }
        }
        for (const auto& b : blocks) {
            CPoly cb;
            for (const auto& v : b) cb.push_back(to_complex(v));
            lo.blocks.push_back(std::move(cb));
        }
        lo.exact_blocks = std::move(blocks);
        return lo;
    }

    std::array<CPoly, 5> sh;
    Real scale = 0;
    for (int i = 0; i <= 4; ++i) {
        sh[static_cast<std::size_t>(i)] = taylor_shift(d[static_cast<std::size_t>(i)], c.value);
        for (const auto& v : sh[static_cast<std::size_t>(i)]) {
            Real a = abs(v);
            if (a > scale) scale = a;
        }
    }
    int ord = p4_order;
    if (ord < 0) {
        ord = 0;
        const Real eps = scale * tiny(std::max(8, digits / 2));
        while (ord < static_cast<int>(sh[4].size()) && abs(sh[4][static_cast<std::size_t>(ord)]) <= eps) ++ord;
    }
    const int m = 4 - ord;
    lo.shift = m;
    int kmax = 0;
    for (int i = 0; i <= 4; ++i) kmax = std::max(kmax, static_cast<int>(sh[static_cast<std::size_t>(i)].size()) - 1 + m - i);
    lo.blocks.assign(static_cast<std::size_t>(kmax + 1), CPoly(5));
    for (int i = 0; i <= 4; ++i) {
        const auto& p = sh[static_cast<std::size_t>(i)];
        for (std::size_t l = 0; l < p.size(); ++l) {
            int k = static_cast<int>(l) + m - i;
            if (k < 0) continue;  // vanishes at the exact center
            const auto& ff = qff[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < ff.size(); ++j)
                lo.blocks[static_cast<std::size_t>(k)][j] += p[l] * to_real(ff[j]);
        }
    }
    return lo;
}

// ---------------------------------------------------------------------------
// exponents and classification

namespace {

struct ExponentData {
    std::vector<Complex> values;
    std::vector<std::optional<Rational>> exact;
};

ExponentData exponents_of(const LocalOperator& lo, int digits)
{
    ExponentData out;
    if (lo.exact_blocks) {
        const QPoly& ind = lo.exact_blocks->front();
        if (degree(ind) != 4) throw std::domain_error("indicial polynomial of degree < 4 at " + lo.center.str());
        for (const auto& r : isolate_roots(ind, digits))
            for (int k = 0; k < r.multiplicity; ++k) {
                out.values.push_back(r.value);
                out.exact.push_back(r.exact);
            }
    } else {
        CPoly ind = lo.indicial();
        while (!ind.empty() && abs(ind.back()) == 0) ind.pop_back();
        if (ind.size() != 5) throw std::domain_error("indicial polynomial of degree < 4 at " + lo.center.str());
        auto roots = aberth_roots(ind, digits);
        const Real tol = tiny(std::max(6, digits / 6));
        for (auto& z : roots) {
            std::optional<Rational> q;
            Rational cand;
            if (boost::multiprecision::abs(z.im) <= tol && recognize_rational(z.re, Integer(24), tol, cand)) {
                q = cand;
                z = to_complex(cand);
            }
            out.values.push_back(z);
            out.exact.push_back(q);
        }
    }
    // sort by real part, exact values first on ties
    std::vector<std::size_t> idx(out.values.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (out.exact[a] && out.exact[b]) return *out.exact[a] < *out.exact[b];
        if (out.values[a].re != out.values[b].re) return out.values[a].re < out.values[b].re;
        return out.values[a].im < out.values[b].im;
    });
    ExponentData sorted;
    for (auto k : idx) {
        sorted.values.push_back(out.values[k]);
        sorted.exact.push_back(out.exact[k]);
    }
    return sorted;
}

bool reduced_leading_vanishes(const FuchsianOperator& op, const Point& p, int digits, int& p4_order)
{
    DerivativeForm d = to_derivative_form(op);
    QPoly g;
    for (const auto& pi : d) g = gcd(g, pi);
    QPoly lead = divmod(d[4], g).first;
    if (p.exact) {
        p4_order = order_at(d[4], *p.exact);
        return evaluate(lead, *p.exact) == 0;
    }
    // relative test at the working precision
    Real s = 0;
    Complex acc;
    Complex pw(1);
    for (const auto& c : lead) {
        Complex term = to_complex(c) * pw;
        s += abs(term);
        acc += term;
        pw *= p.value;
    }
    p4_order = -1;
    return abs(acc) <= s * tiny(std::max(8, digits / 2));
}

}  // namespace

PointKind classify(const std::vector<std::optional<Rational>>& e)
{
    if (e.size() != 4 || !std::all_of(e.begin(), e.end(), [](const auto& v) { return v.has_value(); })) return PointKind::other;
    std::vector<Rational> v;
    for (const auto& x : e) v.push_back(*x);
    std::sort(v.begin(), v.end());
    auto is = [&](Rational a, Rational b, Rational c, Rational d) { return v == std::vector<Rational>{a, b, c, d}; };
    if (is(0, 0, 0, 0)) return PointKind::MUM;
    if (is(0, 1, 1, 2)) return PointKind::conifold;
    if (is(0, Rational(1, 2), Rational(1, 2), 1)) return PointKind::half_conifold;
    if (is(0, Rational(1, 4), Rational(1, 4), Rational(1, 2))) return PointKind::quarter_conifold;
    return PointKind::other;
}

SingularPoint analyze_point(const FuchsianOperator& op, const Point& p, int digits)
{
    PrecisionScope scope(digits + 20);
    SingularPoint sp;
    sp.location = p;
    int p4_order = -1;
    bool singular = false;
    if (p.infinite) {
        FuchsianOperator w = at_infinity(op);
        int o = 0;
        singular = reduced_leading_vanishes(w, Point::rational(0), digits, o);
        sp.p4_order = o;
    } else {
        singular = reduced_leading_vanishes(op, p, digits, p4_order);
        sp.p4_order = std::max(p4_order, 0);
    }
    if (!singular) {
        for (int k = 0; k < 4; ++k) {
            sp.exponents.emplace_back(k);
            sp.exact_exponents.emplace_back(Rational(k));
        }
        sp.kind = PointKind::ordinary;
        return sp;
    }
    LocalOperator lo = local_operator(op, p, digits + 20, p4_order);
    auto ex = exponents_of(lo, digits + 10);
    sp.exponents = ex.values;
    sp.exact_exponents = ex.exact;
    sp.kind = classify(ex.exact);
    return sp;
}

std::vector<Complex> local_exponents(const FuchsianOperator& op, const Point& p, int digits)
{
    return analyze_point(op, p, digits).exponents;
}

std::vector<SingularPoint> singular_points(const FuchsianOperator& op, int digits)
{
    PrecisionScope scope(digits + 20);
    DerivativeForm d = to_derivative_form(op);
    QPoly g;
    for (const auto& pi : d) g = gcd(g, pi);
    QPoly lead = divmod(d[4], g).first;
    auto roots = isolate_roots(lead, digits + 10);
    auto all = isolate_roots(d[4], digits + 10);
    std::vector<SingularPoint> out;
    for (const auto& r : roots) {
        Point p = r.exact ? Point::rational(*r.exact) : Point::complex(r.value);
        int ord = r.multiplicity;
        if (!r.exact) {
            // vanishing order of the unreduced leading coefficient
            Real best = -1;
            for (const auto& a : all) {
                Real dist = abs(a.value - r.value);
                if (best < 0 || dist < best) {
                    best = dist;
                    ord = a.multiplicity;
                }
            }
        }
        SingularPoint sp;
        sp.location = p;
        sp.p4_order = r.exact ? order_at(d[4], *r.exact) : ord;
        LocalOperator lo = local_operator(op, p, digits + 20, sp.p4_order);
        auto ex = exponents_of(lo, digits + 10);
        sp.exponents = ex.values;
        sp.exact_exponents = ex.exact;
        sp.kind = classify(ex.exact);
        out.push_back(std::move(sp));
    }
    SingularPoint inf = analyze_point(op, Point::infinity(), digits);
    if (inf.kind != PointKind::ordinary) out.push_back(std::move(inf));
    return out;
}

Complex fuchs_sum(const std::vector<SingularPoint>& points)
{
    Complex total;
    for (const auto& p : points) {
        Complex s;
        for (const auto& e : p.exponents) s += e;
        total += s - Complex(6);
    }
    return total;
}

}  // namespace cyp
