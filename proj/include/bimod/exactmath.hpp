#pragma once

#include "bimod/numerics.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace bimod {

// r + s*sqrt(D), D a squarefree-or-not integer; D < 0 gives complex values.
struct QuadraticNumber {
    mpq_class r, s;
    mpz_class D;

    Complex eval(prec_t p) const;
    QuadraticNumber operator+(const QuadraticNumber& o) const;
    QuadraticNumber operator*(const QuadraticNumber& o) const;
    bool operator==(const QuadraticNumber& o) const;
    std::string str() const;
};

// The modular group a case lives on: Gamma0(level), or Gamma1(level) when gamma1.
struct GroupTag {
    int level = 1;
    bool gamma1 = false;
    std::string str() const;
};

struct SeriesCase {
    enum class Kind { Sporadic, Hypergeometric };

    Kind kind = Kind::Sporadic;
    // Sporadic: recurrence (n+1)^2 u_{n+1} = (a n^2 + a n + b) u_n - c n^2 u_{n-1}.
    // Hypergeometric: a is the parameter; b = a(1-a), c = 0.
    mpq_class a, b, c;
    // Hypergeometric numerator parameters; u_n = prod_i (p_i)_n / (n!)^len.
    std::vector<mpq_class> params;
    std::string name;
    GroupTag group;
    // Roots of 1 - pa X + pc X^2 = (1 - alpha X)(1 - beta X); |alpha| >= |beta|.
    QuadraticNumber alpha, beta;
    // Human-readable modular recipe for t and f.
    std::string recipe;

    bool sporadic() const { return kind == Kind::Sporadic; }
    // Coefficients of the X-polynomial 1 - pa X + pc X^2 in the bimodular x, y.
    // Sporadic: (a, c). Hypergeometric: (1, 0) in the Hauptmodul T = t/(t-1).
    mpq_class poly_a() const { return sporadic() ? a : mpq_class(1); }
    mpq_class poly_c() const { return sporadic() ? c : mpq_class(0); }
    // max(|alpha|, |beta|): growth rate of u_n.
    double growth() const;

    static SeriesCase make_sporadic(long a, long b, long c);
    static SeriesCase make_hypergeometric(const mpq_class& a);
    static SeriesCase make_general(const std::vector<mpq_class>& params);
};

const std::vector<SeriesCase>& sporadic_cases();
const std::vector<SeriesCase>& hypergeometric_cases();
// Accepts "7,2,-8", "(7,2,-8)", "1/2". Throws std::invalid_argument.
SeriesCase case_by_name(const std::string& name);

mpz_class binom(long n, long k);

// u_0..u_N, exact.
std::vector<mpq_class> apery_seq(const SeriesCase& cs, long N);
// Integer values for sporadic cases (throws for hypergeometric).
std::vector<mpz_class> apery_seq_z(const SeriesCase& cs, long N);
// Table binomial-sum formula for u_n. Throws std::invalid_argument for
// hypergeometric input.
mpz_class apery_closed(const SeriesCase& cs, long n);

// Coefficient of x^n in (x^2 + b x + c)^n.
mpq_class tn(long n, const mpq_class& b, const mpq_class& c);
// Legendre polynomial, sum_m C(n,m)^2 ((x-1)/2)^m ((x+1)/2)^(n-m).
mpq_class legendre(long n, const mpq_class& x);
// C(n,2m) C(2m,m); throws std::domain_error unless 0 <= m <= n/2.
mpz_class double_coeff(long n, long m);

// Kronecker symbol (a/n).
int kronecker(const mpz_class& a, const mpz_class& n);

} // namespace bimod
