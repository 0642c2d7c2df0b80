#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bimod {

using prec_t = mpfr_prec_t;

// Binary floating value with its own mantissa precision. Binary operations
// produce a result at the larger operand precision, rounded to nearest.
class Real {
public:
    explicit Real(prec_t p = 64);
    Real(long v, prec_t p);
    Real(double v, prec_t p);
    Real(const mpz_class& v, prec_t p);
    Real(const mpq_class& v, prec_t p);
    Real(const std::string& decimal, prec_t p);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    // Copy rounded to a new precision.
    Real with_prec(prec_t p) const;

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);
    Real& operator*=(long k);
    Real& operator/=(long k);
    Real operator-() const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // log2|x| as a double (-inf for zero); safe for huge exponents.
    double log2abs() const;
    long exponent() const { return mpfr_get_exp(v_); }
    std::string str(int digits = 30) const;

private:
    mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator*(const Real& a, long k);
Real operator/(const Real& a, long k);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real floor(const Real& x);
Real pow(const Real& x, long n);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);
// 2^e at precision p
Real pow2(long e, prec_t p);

class Complex {
public:
    explicit Complex(prec_t p = 64) : re(p), im(p) {}
    Complex(const Real& r) : re(r), im(r.prec()) {}
    Complex(const Real& r, const Real& i);
    Complex(long r, prec_t p) : re(r, p), im(p) {}
    Complex(const mpq_class& r, prec_t p) : re(r, p), im(p) {}

    prec_t prec() const { return std::max(re.prec(), im.prec()); }
    Complex with_prec(prec_t p) const { return Complex(re.with_prec(p), im.with_prec(p)); }

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& o);
    Complex& operator*=(long k);
    Complex& operator/=(long k);
    Complex operator-() const { return Complex(-re, -im); }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    std::string str(int digits = 30) const;

    Real re, im;
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator*(const Complex& a, long k);
Complex operator/(const Complex& a, long k);
Complex operator+(const Complex& a, long k);
Complex operator-(long k, const Complex& a);
Complex operator-(const Complex& a, long k);
Complex operator+(long k, const Complex& a);
Complex operator*(long k, const Complex& a);
Complex operator/(long k, const Complex& a);

Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex conj(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);  // principal branch
Complex sqrt(const Complex& z); // principal branch, Re >= 0
Complex pow(const Complex& z, long n);
Complex inv(const Complex& z);
// exp(pi*i*r) for rational r, exact on the unit circle up to rounding
Complex expi_pi(const mpq_class& r, prec_t p);
Complex i_unit(prec_t p);

// pi with relative error below 2^(2-P).
Real pi_const(prec_t p);

// Continued-fraction reconstruction: the first convergent p/q with q <= max_den
// and |v - p/q| < tol. Requires |Im v| < tol.
std::optional<mpq_class> recognize_rational(const Complex& v, const mpz_class& max_den,
                                            const Real& tol);
std::optional<mpq_class> recognize_rational(const Real& v, const mpz_class& max_den,
                                            const Real& tol);

// Rational literal with optional integer powers: "-7/21^2", "64^2/7^2", "12".
mpq_class parse_rational(const std::string& s);
// n/d in lowest terms (the two-argument mpq_class constructor does not reduce).
inline mpq_class rat(const mpz_class& n, const mpz_class& d)
{
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}
std::string to_string(const mpq_class& q);

// Constant expressions for table targets: sums and products of rationals and
// square roots, e.g. 3*sqrt(35), 2*sqrt(8+6*sqrt(2)), 8*(2+sqrt(5)).
class ConstExpr {
public:
    struct Node;

    ConstExpr() = default;
    static ConstExpr parse(const std::string& text);
    static ConstExpr rational(const mpq_class& q);
    static ConstExpr sqrt_of(const ConstExpr& e);
    ConstExpr operator*(const ConstExpr& o) const;
    ConstExpr operator+(const ConstExpr& o) const;

    // Relative error below 2^(8-P). Throws std::domain_error on sqrt of a
    // negative value.
    Real eval(prec_t p) const;
    std::string str() const;
    int depth() const;
    bool empty() const { return !root_; }

private:
    explicit ConstExpr(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
    std::shared_ptr<const Node> root_;
};

// Decimal digits to bits and back.
prec_t digits_to_bits(long digits);

} // namespace bimod
