#pragma once

#include "bimod/exactmath.hpp"

#include <gmpxx.h>

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bimod {

// Bivariate power series over Q truncated at total degree `order`.
class BiSeries {
public:
    using Key = std::pair<int, int>;

    explicit BiSeries(int order = 0, std::array<std::string, 2> names = {"x", "y"});
    static BiSeries constant(const mpq_class& c, int order, std::array<std::string, 2> names = {"x", "y"});
    static BiSeries monomial(int i, int j, const mpq_class& c, int order,
                             std::array<std::string, 2> names = {"x", "y"});

    int order() const { return order_; }
    const std::array<std::string, 2>& names() const { return names_; }
    const std::map<Key, mpq_class>& terms() const { return c_; }
    mpq_class coeff(int i, int j) const;
    void set(int i, int j, const mpq_class& v);
    void add_to(int i, int j, const mpq_class& v);
    bool is_zero() const { return c_.empty(); }
    // Smallest total degree with a nonzero coefficient (order+1 if zero).
    int valuation() const;
    mpq_class constant_term() const { return coeff(0, 0); }

    BiSeries truncated(int order) const;
    BiSeries operator+(const BiSeries& o) const;
    BiSeries operator-(const BiSeries& o) const;
    BiSeries operator-() const;
    BiSeries operator*(const BiSeries& o) const;
    BiSeries operator*(const mpq_class& s) const;
    BiSeries& operator+=(const BiSeries& o);
    // Multiply by x^di y^dj.
    BiSeries shift(int di, int dj) const;
    BiSeries theta_x() const;
    BiSeries theta_y() const;
    // Multiplicative inverse; requires a nonzero constant term.
    BiSeries inverse() const;
    BiSeries pow(unsigned long e) const;
    // (1 + u)^e for u with zero constant term, via the binomial series.
    static BiSeries binomial_series(const BiSeries& u, const mpq_class& e);
    // sum_k coeffs[k] z^k for z with zero constant term.
    static BiSeries compose(const std::vector<mpq_class>& coeffs, const BiSeries& z);

    bool operator==(const BiSeries& o) const { return c_ == o.c_; }
    // First (by total degree, then i) coefficient where the two differ.
    std::optional<Key> first_difference(const BiSeries& o) const;
    std::string str(int max_terms = 12) const;

private:
    void prune();
    int order_;
    std::array<std::string, 2> names_;
    std::map<Key, mpq_class> c_;
};

struct CheckReport {
    bool ok = true;
    int order = 0;
    int trusted_degree = 0;
    std::optional<BiSeries::Key> first_bad;
    mpq_class lhs, rhs;
    std::string detail;
};

// F(x,y) = sum u_n C(n,2m) C(2m,m) x^n y^m.
BiSeries series_F(const SeriesCase& cs, int order);

// x(X,Y) and w(X,Y) = x^2 y = XY(1-aX+cX^2)(1-aY+cY^2)/(1-cXY)^4. y itself has a
// pole at the origin and is never formed.
struct XYSeries {
    BiSeries x;
    BiSeries x2y;
};
XYSeries substitute_xy(const SeriesCase& cs, int order);

CheckReport wz_check(const SeriesCase& cs, int order);

// sum u_n P_n(x) t^n against the product of two 2F1's, in (x,t).
CheckReport brafman_check(const mpq_class& a, int order);

struct PDESystem {
    enum class Kind { Sporadic, Hyper, T2n, RogersStraub, Cubic };
    Kind kind;
    SeriesCase cs;  // for Sporadic / Hyper

    std::string name() const;
    static PDESystem sporadic(const SeriesCase& cs) { return {Kind::Sporadic, cs}; }
    static PDESystem hyper(const mpq_class& a) { return {Kind::Hyper, SeriesCase::make_hypergeometric(a)}; }
    static PDESystem t2n() { return {Kind::T2n, {}}; }
    static PDESystem rogers_straub() { return {Kind::RogersStraub, {}}; }
    static PDESystem cubic() { return {Kind::Cubic, {}}; }
    // Parses "7,2,-8", "1/2", "t2n", "rs", "cubic".
    static PDESystem by_name(const std::string& s);
    static std::vector<PDESystem> all();
};

// One term x^dx y^dy P(theta_x, theta_y) of a differential operator.
struct OpTerm {
    int dx, dy;
    std::function<mpq_class(long n, long m)> poly;
};
using Operator = std::vector<OpTerm>;

std::array<Operator, 2> pde_operators(const PDESystem& sys);
// The double series the system annihilates.
BiSeries pde_series(const PDESystem& sys, int order);
BiSeries apply_operator(const Operator& op, const BiSeries& f);
// Highest total degree of the residual unaffected by truncation of F.
int trusted_degree(const Operator& op, int order);

struct PDEReport {
    std::string system;
    int order = 0;
    std::array<CheckReport, 2> eq;
    bool ok() const { return eq[0].ok && eq[1].ok; }
};
PDEReport pde_residual(const PDESystem& sys, int order);

} // namespace bimod
