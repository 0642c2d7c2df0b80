#include "bimod/exactmath.hpp"

#include <cmath>
#include <regex>
#include <stdexcept>

namespace bimod {

Complex QuadraticNumber::eval(prec_t p) const
{
    prec_t w = p + 8;
    Complex root(w);
    if (D >= 0) root = Complex(sqrt(Real(D, w)));
    else root = Complex(Real(w), sqrt(Real(mpz_class(-D), w)));
    Complex v = Complex(Real(r, w)) + root * Real(s, w);
    return v.with_prec(p);
}

QuadraticNumber QuadraticNumber::operator+(const QuadraticNumber& o) const
{
    if (s != 0 && o.s != 0 && D != o.D) throw std::invalid_argument("mixed quadratic fields");
    return {r + o.r, s + o.s, s != 0 ? D : o.D};
}

QuadraticNumber QuadraticNumber::operator*(const QuadraticNumber& o) const
{
    if (s != 0 && o.s != 0 && D != o.D) throw std::invalid_argument("mixed quadratic fields");
    mpz_class d = s != 0 ? D : o.D;
    return {r * o.r + s * o.s * mpq_class(d), r * o.s + s * o.r, d};
}

bool QuadraticNumber::operator==(const QuadraticNumber& o) const
{
    if (r != o.r || s != o.s) return false;
    return s == 0 || D == o.D;
}

std::string QuadraticNumber::str() const
{
    if (s == 0) return r.get_str();
    std::string out = r == 0 ? "" : r.get_str() + (s > 0 ? "+" : "");
    return out + s.get_str() + "*sqrt(" + D.get_str() + ")";
}

std::string GroupTag::str() const
{
    return std::string(gamma1 ? "Gamma1(" : "Gamma0(") + std::to_string(level) + ")";
}

double SeriesCase::growth() const
{
    auto mag = [](const QuadraticNumber& q) {
        double r = q.r.get_d(), s = q.s.get_d(), d = q.D.get_d();
        if (d >= 0) return std::abs(r + s * std::sqrt(d));
        return std::hypot(r, s * std::sqrt(-d));
    };
    return std::max(mag(alpha), mag(beta));
}

namespace {

QuadraticNumber qn(const mpq_class& r, const mpq_class& s = 0, long D = 1) { return {r, s, D}; }

SeriesCase sporadic_entry(long a, long b, long c)
{
    SeriesCase cs;
    cs.kind = SeriesCase::Kind::Sporadic;
    cs.a = a;
    cs.b = b;
    cs.c = c;
    cs.name = std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c);
    // alpha is the root that sigma_2 is written with
    if (a == 7 && c == -8) {
        cs.group = {6, false}; cs.alpha = qn(-1); cs.beta = qn(8);
        cs.recipe = "t = 1^3 6^9 / 2^3 3^9, f = 2^1 3^6 / 1^2 6^3";
    } else if (a == 10 && c == 9) {
        cs.group = {6, false}; cs.alpha = qn(1); cs.beta = qn(9);
        cs.recipe = "t = 1^4 6^8 / 2^8 3^4, f = 2^6 3^1 / 1^3 6^2";
    } else if (a == -17 && c == 72) {
        cs.group = {6, false}; cs.alpha = qn(-8); cs.beta = qn(-9);
        cs.recipe = "t = 2^1 6^5 / 1^5 3^1, f = 1^6 6^1 / 2^3 3^2";
    } else if (a == 12 && c == 32) {
        cs.group = {8, false}; cs.alpha = qn(4); cs.beta = qn(8);
        cs.recipe = "t = 1^4 4^2 8^4 / 2^10, f = 2^10 / 1^4 4^4";
    } else if (a == -9 && c == 27) {
        cs.group = {9, false};
        cs.alpha = qn(mpq_class(-9, 2), mpq_class(3, 2), -3);
        cs.beta = qn(mpq_class(-9, 2), mpq_class(-3, 2), -3);
        cs.recipe = "t = 9^3 / 1^3, f = 1^3 / 3^1";
    } else if (a == 11 && c == -1) {
        cs.group = {5, true};
        cs.alpha = qn(mpq_class(11, 2), mpq_class(5, 2), 5);
        cs.beta = qn(mpq_class(11, 2), mpq_class(-5, 2), 5);
        cs.recipe = "t = q prod (1-q^n)^(5 (n/5)), f = prod (1-q^5n)^2 (1-q^n)^(-3 [n=+-1 mod 5], 2 [n=+-2 mod 5])";
    } else {
        throw std::invalid_argument("not a sporadic case: " + cs.name);
    }
    return cs;
}

} // namespace

SeriesCase SeriesCase::make_sporadic(long a, long b, long c) { return sporadic_entry(a, b, c); }

SeriesCase SeriesCase::make_hypergeometric(const mpq_class& a)
{
    SeriesCase cs;
    cs.kind = Kind::Hypergeometric;
    cs.a = a;
    cs.b = a * (1 - a);
    cs.c = 0;
    cs.params = {a, 1 - a};
    cs.name = a.get_str();
    cs.alpha = qn(1);
    cs.beta = qn(0);
    if (a == mpq_class(1, 2)) {
        cs.group = {4, false};
        cs.recipe = "t = theta2^4/theta3^4 = 16 1^8 4^16 / 2^24, f = theta4^2 = 1^4 / 2^2";
    } else if (a == mpq_class(1, 3)) {
        cs.group = {3, false};
        cs.recipe = "t = -27 3^12 / 1^12, f = sum q^(m^2+mn+n^2)";
    } else if (a == mpq_class(1, 4)) {
        cs.group = {2, false};
        cs.recipe = "t = -64 2^24 / 1^24, f^2 = 2 E2(2 tau) - E2(tau)";
    } else {
        cs.group = {1, false};
    }
    return cs;
}

SeriesCase SeriesCase::make_general(const std::vector<mpq_class>& params)
{
    SeriesCase cs;
    cs.kind = Kind::Hypergeometric;
    cs.params = params;
    cs.a = params.empty() ? mpq_class(0) : params[0];
    cs.b = 0;
    cs.c = 0;
    cs.alpha = qn(1);
    cs.beta = qn(0);
    cs.name = "hyp(";
    for (size_t i = 0; i < params.size(); ++i) cs.name += (i ? "," : "") + params[i].get_str();
    cs.name += ")";
    return cs;
}

const std::vector<SeriesCase>& sporadic_cases()
{
    static const std::vector<SeriesCase> all = {
        sporadic_entry(7, 2, -8),   sporadic_entry(10, 3, 9),  sporadic_entry(-17, -6, 72),
        sporadic_entry(12, 4, 32),  sporadic_entry(-9, -3, 27), sporadic_entry(11, 3, -1),
    };
    return all;
}

const std::vector<SeriesCase>& hypergeometric_cases()
{
    static const std::vector<SeriesCase> all = {
        SeriesCase::make_hypergeometric(mpq_class(1, 2)),
        SeriesCase::make_hypergeometric(mpq_class(1, 3)),
        SeriesCase::make_hypergeometric(mpq_class(1, 4)),
    };
    return all;
}

SeriesCase case_by_name(const std::string& name)
{
    std::string s;
    for (char ch : name)
        if (ch != ' ' && ch != '(' && ch != ')') s += ch;
    static const std::regex triple(R"((-?\d+),(-?\d+),(-?\d+))");
    std::smatch m;
    if (std::regex_match(s, m, triple))
        return SeriesCase::make_sporadic(std::stol(m[1]), std::stol(m[2]), std::stol(m[3]));
    mpq_class a = parse_rational(s);
    if (a <= 0 || a >= 1) throw std::invalid_argument("bad hypergeometric parameter: " + name);
    return SeriesCase::make_hypergeometric(a);
}

mpz_class binom(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
    return r;
}

std::vector<mpz_class> apery_seq_z(const SeriesCase& cs, long N)
{
    if (!cs.sporadic()) throw std::invalid_argument("integer sequence needs a sporadic case");
    mpz_class a = cs.a.get_num(), b = cs.b.get_num(), c = cs.c.get_num();
    std::vector<mpz_class> u;
    u.reserve(N + 1);
    u.push_back(1);
    if (N >= 1) u.push_back(b);
    mpz_class t;
    for (long n = 1; n + 1 <= N; ++n) {
        mpz_class nn = n;
        t = (a * nn * nn + a * nn + b) * u[n] - c * nn * nn * u[n - 1];
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), (unsigned long)((n + 1) * (n + 1)));
        u.push_back(t);
    }
    return u;
}

std::vector<mpq_class> apery_seq(const SeriesCase& cs, long N)
{
    std::vector<mpq_class> u;
    if (N < 0) return u;
    u.reserve(N + 1);
    if (cs.sporadic()) {
        for (auto& z : apery_seq_z(cs, N)) u.emplace_back(z);
        return u;
    }
    u.push_back(1);
    for (long n = 0; n < N; ++n) {
        mpq_class v = u.back();
        for (auto& p : cs.params) v *= p + n;
        mpz_class den = 1;
        for (size_t i = 0; i < cs.params.size(); ++i) den *= n + 1;
        v /= mpq_class(den);
        u.push_back(v);
    }
    return u;
}

mpz_class apery_closed(const SeriesCase& cs, long n)
{
    if (!cs.sporadic()) throw std::invalid_argument("closed form exists for sporadic cases only");
    long a = mpz_class(cs.a.get_num()).get_si(), c = mpz_class(cs.c.get_num()).get_si();
    mpz_class s = 0, pw;
    auto ipow = [](long base, long e) {
        mpz_class r;
        mpz_class bb = base;
        mpz_pow_ui(r.get_mpz_t(), bb.get_mpz_t(), (unsigned long)e);
        return r;
    };
    auto cube_sum = [&](long k) {
        mpz_class t = 0;
        for (long j = 0; j <= k; ++j) {
            mpz_class bj = binom(k, j);
            t += bj * bj * bj;
        }
        return t;
    };
    if (a == 7 && c == -8) {
        s = cube_sum(n);
    } else if (a == 10 && c == 9) {
        for (long k = 0; k <= n; ++k) {
            mpz_class bk = binom(n, k);
            s += bk * bk * binom(2 * k, k);
        }
    } else if (a == -17 && c == 72) {
        for (long k = 0; k <= n; ++k) s += ipow(-8, n - k) * binom(n, k) * cube_sum(k);
    } else if (a == 12 && c == 32) {
        for (long k = 0; k <= n; ++k) s += binom(n, k) * binom(2 * k, k) * binom(2 * (n - k), n - k);
    } else if (a == -9 && c == 27) {
        for (long k = 0; 3 * k <= n; ++k) {
            mpz_class f3, f1;
            mpz_fac_ui(f3.get_mpz_t(), 3 * k);
            mpz_fac_ui(f1.get_mpz_t(), k);
            s += ipow(-3, n - 3 * k) * binom(n, 3 * k) * (f3 / (f1 * f1 * f1));
        }
    } else if (a == 11 && c == -1) {
        for (long k = 0; k <= n; ++k) {
            mpz_class bk = binom(n, k);
            s += bk * bk * binom(n + k, n);
        }
    } else {
        throw std::invalid_argument("unknown sporadic case");
    }
    return s;
}

namespace {
mpq_class qpow(const mpq_class& x, long e)
{
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), (unsigned long)e);
    mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), (unsigned long)e);
    return mpq_class(num, den);
}
} // namespace

mpq_class tn(long n, const mpq_class& b, const mpq_class& c)
{
    mpq_class s = 0;
    for (long m = 0; 2 * m <= n; ++m) s += mpq_class(double_coeff(n, m)) * qpow(b, n - 2 * m) * qpow(c, m);
    return s;
}

mpq_class legendre(long n, const mpq_class& x)
{
    mpq_class lo = (x - 1) / 2, hi = (x + 1) / 2, s = 0;
    for (long m = 0; m <= n; ++m) {
        mpz_class bm = binom(n, m);
        s += mpq_class(bm * bm) * qpow(lo, m) * qpow(hi, n - m);
    }
    return s;
}

mpz_class double_coeff(long n, long m)
{
    if (m < 0 || 2 * m > n) throw std::domain_error("double_coeff: m out of range");
    return binom(n, 2 * m) * binom(2 * m, m);
}

int kronecker(const mpz_class& a, const mpz_class& n) { return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t()); }

} // namespace bimod
