#include "bimod/numerics.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bimod {

// ---------------------------------------------------------------- Real

Real::Real(prec_t p) { mpfr_init2(v_, p); mpfr_set_zero(v_, 1); }
Real::Real(long v, prec_t p) { mpfr_init2(v_, p); mpfr_set_si(v_, v, MPFR_RNDN); }
Real::Real(double v, prec_t p) { mpfr_init2(v_, p); mpfr_set_d(v_, v, MPFR_RNDN); }
Real::Real(const mpz_class& v, prec_t p) { mpfr_init2(v_, p); mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN); }
Real::Real(const mpq_class& v, prec_t p) { mpfr_init2(v_, p); mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN); }
Real::Real(const std::string& decimal, prec_t p)
{
    mpfr_init2(v_, p);
    if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
        mpfr_clear(v_);
        throw std::invalid_argument("bad decimal: " + decimal);
    }
}
Real::Real(const Real& o) { mpfr_init2(v_, o.prec()); mpfr_set(v_, o.v_, MPFR_RNDN); }
Real::Real(Real&& o) noexcept
{
    // steal the limbs, leave o as a valid zero of minimal precision
    *v_ = *o.v_;
    mpfr_init2(o.v_, MPFR_PREC_MIN);
}
Real& Real::operator=(const Real& o)
{
    if (this != &o) {
        mpfr_set_prec(v_, o.prec());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}
Real& Real::operator=(Real&& o) noexcept
{
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
}
Real::~Real() { mpfr_clear(v_); }

Real Real::with_prec(prec_t p) const
{
    Real r(p);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

namespace {
void widen(Real& a, const Real& b)
{
    if (b.prec() > a.prec()) mpfr_prec_round(a.get(), b.prec(), MPFR_RNDN);
}
} // namespace

Real& Real::operator+=(const Real& o) { widen(*this, o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator-=(const Real& o) { widen(*this, o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator*=(const Real& o) { widen(*this, o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator/=(const Real& o) { widen(*this, o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
Real& Real::operator/=(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }
Real Real::operator-() const
{
    Real r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

double Real::log2abs() const
{
    if (is_zero()) return -INFINITY;
    long e;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log2(std::fabs(m)) + double(e);
}

std::string Real::str(int digits) const
{
    if (is_zero()) return "0";
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

#define BIMOD_BINOP(OP, FN)                                              \
    Real operator OP(const Real& a, const Real& b)                        \
    {                                                                     \
        Real r(std::max(a.prec(), b.prec()));                             \
        FN(r.get(), a.get(), b.get(), MPFR_RNDN);                         \
        return r;                                                         \
    }
BIMOD_BINOP(+, mpfr_add)
BIMOD_BINOP(-, mpfr_sub)
BIMOD_BINOP(*, mpfr_mul)
BIMOD_BINOP(/, mpfr_div)
#undef BIMOD_BINOP

Real operator*(const Real& a, long k) { Real r(a); r *= k; return r; }
Real operator/(const Real& a, long k) { Real r(a); r /= k; return r; }
bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()); }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()); }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()); }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()); }

#define BIMOD_UNARY(NAME, FN)                        \
    Real NAME(const Real& x)                         \
    {                                                \
        Real r(x.prec());                            \
        FN(r.get(), x.get(), MPFR_RNDN);             \
        return r;                                    \
    }
BIMOD_UNARY(abs, mpfr_abs)
BIMOD_UNARY(exp, mpfr_exp)
BIMOD_UNARY(log, mpfr_log)
BIMOD_UNARY(sin, mpfr_sin)
BIMOD_UNARY(cos, mpfr_cos)
#undef BIMOD_UNARY

Real sqrt(const Real& x)
{
    if (x.sign() < 0) throw std::domain_error("sqrt of negative real");
    Real r(x.prec());
    mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real atan2(const Real& y, const Real& x)
{
    Real r(std::max(x.prec(), y.prec()));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}

Real floor(const Real& x)
{
    Real r(x.prec());
    mpfr_floor(r.get(), x.get());
    return r;
}

Real pow(const Real& x, long n)
{
    Real r(x.prec());
    mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}

Real ldexp(const Real& x, long e)
{
    Real r(x.prec());
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real pow2(long e, prec_t p)
{
    Real r(1L, p);
    mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
    return r;
}

Real pi_const(prec_t p)
{
    Real r(p);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

// ---------------------------------------------------------------- Complex

Complex::Complex(const Real& r, const Real& i) : re(r), im(i)
{
    prec_t p = std::max(r.prec(), i.prec());
    if (re.prec() < p) re = re.with_prec(p);
    if (im.prec() < p) im = im.with_prec(p);
}

Complex& Complex::operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
Complex& Complex::operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
Complex& Complex::operator*=(const Complex& o) { *this = *this * o; return *this; }
Complex& Complex::operator/=(const Complex& o) { *this = *this / o; return *this; }
Complex& Complex::operator*=(const Real& o) { re *= o; im *= o; return *this; }
Complex& Complex::operator*=(long k) { re *= k; im *= k; return *this; }
Complex& Complex::operator/=(long k) { re /= k; im /= k; return *this; }

std::string Complex::str(int digits) const
{
    if (im.is_zero()) return re.str(digits);
    std::string s = re.str(digits);
    s += im.sign() < 0 ? " - " : " + ";
    s += abs(im).str(digits) + "i";
    return s;
}

Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }

Complex operator*(const Complex& a, const Complex& b)
{
    prec_t p = std::max(a.prec(), b.prec());
    Complex r(p);
    Real t(p);
    mpfr_mul(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(r.re.get(), r.re.get(), t.get(), MPFR_RNDN);
    mpfr_mul(r.im.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(r.im.get(), r.im.get(), t.get(), MPFR_RNDN);
    return r;
}

Complex operator/(const Complex& a, const Complex& b) { return a * inv(b); }
Complex operator*(const Complex& a, const Real& b) { return Complex(a.re * b, a.im * b); }
Complex operator*(const Real& a, const Complex& b) { return b * a; }
Complex operator/(const Complex& a, const Real& b) { return Complex(a.re / b, a.im / b); }
Complex operator*(const Complex& a, long k) { return Complex(a.re * k, a.im * k); }
Complex operator/(const Complex& a, long k) { return Complex(a.re / k, a.im / k); }
Complex operator+(const Complex& a, long k) { return Complex(a.re + Real(k, a.prec()), a.im); }
Complex operator-(long k, const Complex& a) { return Complex(Real(k, a.prec()) - a.re, -a.im); }
Complex operator-(const Complex& a, long k) { return Complex(a.re - Real(k, a.prec()), a.im); }
Complex operator+(long k, const Complex& a) { return a + k; }
Complex operator*(long k, const Complex& a) { return a * k; }
Complex operator/(long k, const Complex& a) { return Complex(k, a.prec()) / a; }

Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real abs(const Complex& z)
{
    Real r(z.prec());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}

Real arg(const Complex& z) { return atan2(z.im, z.re); }
Complex conj(const Complex& z) { return Complex(z.re, -z.im); }

Complex inv(const Complex& z)
{
    Real n = norm(z);
    return Complex(z.re / n, -z.im / n);
}

Complex exp(const Complex& z)
{
    prec_t p = z.prec();
    Real m = exp(z.re);
    Real s(p), c(p);
    mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
    return Complex(m * c, m * s);
}

Complex log(const Complex& z) { return Complex(log(abs(z)), arg(z)); }

Complex sqrt(const Complex& z)
{
    prec_t p = z.prec();
    if (z.is_zero()) return Complex(p);
    Real r = abs(z);
    Real a = sqrt((r + abs(z.re)) / 2L);
    Real b = abs(z.im) / (a * 2L);
    if (z.re.sign() >= 0) return Complex(a, z.im.sign() < 0 ? -b : b);
    return Complex(b, z.im.sign() < 0 ? -a : a);
}

Complex pow(const Complex& z, long n)
{
    if (n < 0) return inv(pow(z, -n));
    Complex result(1L, z.prec());
    Complex base = z;
    while (n) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

Complex expi_pi(const mpq_class& r, prec_t p)
{
    // reduce r modulo 2 exactly first
    mpq_class q = r;
    mpz_class two_den = 2 * q.get_den();
    mpz_class num = q.get_num() % two_den;
    if (num < 0) num += two_den;
    q = mpq_class(num, q.get_den());
    q.canonicalize();
    Real ang = pi_const(p + 16) * Real(q, p + 16);
    Real s(p), c(p);
    mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
    return Complex(c, s);
}

Complex i_unit(prec_t p) { return Complex(Real(p), Real(1L, p)); }

// ---------------------------------------------------------------- recognition

std::optional<mpq_class> recognize_rational(const Real& v, const mpz_class& max_den, const Real& tol)
{
    prec_t p = v.prec();
    Real x = v;
    // convergents h/k
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        Real fl = floor(x);
        mpz_class a;
        mpfr_get_z(a.get_mpz_t(), fl.get(), MPFR_RNDN);
        mpz_class h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_den) return std::nullopt;
        mpq_class cand(h2, k2);
        cand.canonicalize();
        if (abs(v - Real(cand, p)) < tol) return cand;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        Real frac = x - fl;
        if (frac.is_zero()) return std::nullopt;
        x = Real(1L, p) / frac;
    }
    return std::nullopt;
}

std::optional<mpq_class> recognize_rational(const Complex& v, const mpz_class& max_den, const Real& tol)
{
    if (!(abs(v.im) < tol)) return std::nullopt;
    return recognize_rational(v.re, max_den, tol);
}

// ---------------------------------------------------------------- parsing

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    void skip() { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; }
    bool eat(char c)
    {
        skip();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    bool eat(const char* w)
    {
        skip();
        size_t n = std::char_traits<char>::length(w);
        if (s.compare(i, n, w) == 0) { i += n; return true; }
        return false;
    }
    bool at_end() { skip(); return i >= s.size(); }
    [[noreturn]] void fail(const std::string& what)
    {
        throw std::invalid_argument("parse error at column " + std::to_string(i + 1) + " in '" + s + "': " + what);
    }
    mpz_class integer()
    {
        skip();
        size_t b = i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (b == i) fail("expected integer");
        return mpz_class(s.substr(b, i - b));
    }
    // integer with optional ^power
    mpz_class powered()
    {
        mpz_class base = integer();
        if (eat('^')) {
            mpz_class e = integer();
            mpz_class r;
            mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e.get_ui());
            return r;
        }
        return base;
    }
    mpq_class rational()
    {
        bool neg = eat('-');
        mpq_class q(powered());
        if (eat('/')) {
            mpz_class d = powered();
            if (d == 0) fail("zero denominator");
            q /= mpq_class(d);
        }
        q.canonicalize();
        return neg ? mpq_class(-q) : q;
    }
};

} // namespace

mpq_class parse_rational(const std::string& s)
{
    Cursor c{s};
    mpq_class q = c.rational();
    if (!c.at_end()) c.fail("trailing characters");
    return q;
}

std::string to_string(const mpq_class& q) { return q.get_str(); }

prec_t digits_to_bits(long digits) { return prec_t(std::ceil(double(digits) * 3.3219280948873623)) + 8; }

// ---------------------------------------------------------------- ConstExpr

struct ConstExpr::Node {
    enum Kind { Rat, Sqrt, Sum, Prod } kind;
    mpq_class value;
    std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodeP = std::shared_ptr<const ConstExpr::Node>;

NodeP make_rat(const mpq_class& q)
{
    auto n = std::make_shared<ConstExpr::Node>();
    n->kind = ConstExpr::Node::Rat;
    n->value = q;
    return n;
}

NodeP make(ConstExpr::Node::Kind k, std::vector<NodeP> kids)
{
    if (kids.size() == 1 && k != ConstExpr::Node::Sqrt) return kids[0];
    auto n = std::make_shared<ConstExpr::Node>();
    n->kind = k;
    n->kids = std::move(kids);
    return n;
}

NodeP parse_sum(Cursor& c);

NodeP parse_factor(Cursor& c)
{
    if (c.eat("sqrt")) {
        if (!c.eat('(')) c.fail("expected '(' after sqrt");
        NodeP inner = parse_sum(c);
        if (!c.eat(')')) c.fail("expected ')'");
        return make(ConstExpr::Node::Sqrt, {inner});
    }
    if (c.eat('(')) {
        NodeP inner = parse_sum(c);
        if (!c.eat(')')) c.fail("expected ')'");
        return inner;
    }
    if (c.eat('-')) {
        NodeP f = parse_factor(c);
        return make(ConstExpr::Node::Prod, {make_rat(-1), f});
    }
    return make_rat(c.rational());
}

NodeP parse_term(Cursor& c)
{
    std::vector<NodeP> fs{parse_factor(c)};
    while (c.eat('*')) fs.push_back(parse_factor(c));
    return make(ConstExpr::Node::Prod, std::move(fs));
}

NodeP parse_sum(Cursor& c)
{
    std::vector<NodeP> ts{parse_term(c)};
    for (;;) {
        if (c.eat('+')) ts.push_back(parse_term(c));
        else if (c.eat('-')) ts.push_back(make(ConstExpr::Node::Prod, {make_rat(-1), parse_term(c)}));
        else break;
    }
    return make(ConstExpr::Node::Sum, std::move(ts));
}

Real eval_node(const ConstExpr::Node& n, prec_t p)
{
    switch (n.kind) {
    case ConstExpr::Node::Rat: return Real(n.value, p);
    case ConstExpr::Node::Sqrt: {
        Real v = eval_node(*n.kids[0], p);
        if (v.sign() < 0) throw std::domain_error("sqrt of negative constant");
        return sqrt(v);
    }
    case ConstExpr::Node::Sum: {
        Real s(p);
        for (auto& k : n.kids) s += eval_node(*k, p);
        return s;
    }
    case ConstExpr::Node::Prod: {
        Real s(1L, p);
        for (auto& k : n.kids) s *= eval_node(*k, p);
        return s;
    }
    }
    return Real(p);
}

std::string str_node(const ConstExpr::Node& n, bool in_prod)
{
    switch (n.kind) {
    case ConstExpr::Node::Rat: return n.value.get_str();
    case ConstExpr::Node::Sqrt: return "sqrt(" + str_node(*n.kids[0], false) + ")";
    case ConstExpr::Node::Sum: {
        std::string s;
        for (size_t i = 0; i < n.kids.size(); ++i) s += (i ? "+" : "") + str_node(*n.kids[i], false);
        return in_prod ? "(" + s + ")" : s;
    }
    case ConstExpr::Node::Prod: {
        std::string s;
        for (size_t i = 0; i < n.kids.size(); ++i) s += (i ? "*" : "") + str_node(*n.kids[i], true);
        return s;
    }
    }
    return "";
}

int depth_node(const ConstExpr::Node& n)
{
    int d = 0;
    for (auto& k : n.kids) d = std::max(d, depth_node(*k));
    return d + (n.kind == ConstExpr::Node::Sqrt ? 1 : 0);
}

} // namespace

ConstExpr ConstExpr::parse(const std::string& text)
{
    Cursor c{text};
    NodeP n = parse_sum(c);
    if (!c.at_end()) c.fail("trailing characters");
    return ConstExpr(n);
}

ConstExpr ConstExpr::rational(const mpq_class& q) { return ConstExpr(make_rat(q)); }
ConstExpr ConstExpr::sqrt_of(const ConstExpr& e) { return ConstExpr(make(Node::Sqrt, {e.root_})); }
ConstExpr ConstExpr::operator*(const ConstExpr& o) const { return ConstExpr(make(Node::Prod, {root_, o.root_})); }
ConstExpr ConstExpr::operator+(const ConstExpr& o) const { return ConstExpr(make(Node::Sum, {root_, o.root_})); }

Real ConstExpr::eval(prec_t p) const
{
    if (!root_) throw std::logic_error("empty constant expression");
    // nested roots and sums lose a few bits each; 16 guard bits cover depth 3
    return eval_node(*root_, p + 16).with_prec(p);
}

std::string ConstExpr::str() const { return root_ ? str_node(*root_, false) : ""; }
int ConstExpr::depth() const { return root_ ? depth_node(*root_) : 0; }

} // namespace bimod
