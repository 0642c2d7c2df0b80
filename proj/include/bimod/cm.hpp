#pragma once

#include "bimod/exactmath.hpp"
#include "bimod/numerics.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace bimod {

// A x^2 + B xy + C y^2; the CM point is tau = (-B + sqrt(d)) / 2A.
struct QuadForm {
    long A = 1, B = 0, C = 1;

    long disc() const { return B * B - 4 * A * C; }
    long content() const;
    auto operator<=>(const QuadForm&) const = default;
    std::string str() const;
};

struct Mat2 {
    long a = 1, b = 0, c = 0, d = 1;

    long det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const;
    Mat2 inverse_sl2() const { return {d, -b, -c, a}; }
    bool operator==(const Mat2&) const = default;
    std::string str() const;
};

// Gamma_0(N), or +-Gamma_1(N) when gamma1 is set.
struct LevelGroup {
    int N = 1;
    bool gamma1 = false;

    bool contains(const Mat2& m) const;
    // Admissible bottom row (c, d) of an element, up to sign.
    bool bottom_row_ok(long c, long d) const;
    static LevelGroup of(const SeriesCase& cs);
    std::string str() const;
};

// The form whose root is M tau when Q has root tau (det M > 0); not reduced.
QuadForm act(const Mat2& M, const QuadForm& Q);
QuadForm primitive(const QuadForm& Q);
QuadForm conjugate(const QuadForm& Q);  // tau -> -conj(tau)
// Level form of the point: N | A, gcd(A/N, B, C) = 1 (Gamma_1(5): also 5 | B).
QuadForm level_form(const LevelGroup& G, const QuadForm& Q);
// Representative of the G-orbit with minimal A (maximal Im tau), B in (-A, A],
// ties broken lexicographically. Equal canonical forms <=> G-equivalent points.
QuadForm canonical(const LevelGroup& G, const QuadForm& Q, Mat2* to_canonical = nullptr);
bool equivalent(const LevelGroup& G, const QuadForm& Q1, const QuadForm& Q2);

// SL2(Z)-reduced form; M (if given) satisfies tau_reduced = M tau.
QuadForm reduce(const QuadForm& Q, Mat2* M = nullptr);
bool is_reduced(const QuadForm& Q);
bool valid_discriminant(long d);
// Reduced primitive forms of discriminant d; one per class.
std::vector<QuadForm> class_forms(long d);
long class_number(long d);

struct DiscFactor {
    long d0;  // fundamental discriminant
    long r;   // conductor, d = r^2 d0
};
DiscFactor fundamental(long d);

// Right coset representatives of G in SL2(Z).
std::vector<Mat2> coset_reps(const LevelGroup& G);
// G-inequivalent CM points of discriminant d, as canonical level forms.
std::vector<QuadForm> cm_points(const LevelGroup& G, long d);
// Ogg's count |CM(d)| on X_0(6).
long ogg_count(long d);

// The form of M tau, re-normalized to a canonical level form.
QuadForm apply_matrix(const LevelGroup& G, const QuadForm& Q, const Mat2& M);
// w_m for an exact divisor m of N.
Mat2 atkin_lehner_matrix(int N, int m);
QuadForm atkin_lehner(const LevelGroup& G, const QuadForm& Q, int m);

// Galois orbit label from the congruence lemmas (N = 8 or 9). Throws
// std::domain_error when the discriminant is outside the covered cases.
std::string classify_orbit(int N, const QuadForm& Q);

struct TauAlpha {
    Complex tau;
    Mat2 alpha;  // (-B, -2C; 2A, B), fixes tau, det = |d|
};
TauAlpha tau_alpha(const QuadForm& Q, prec_t p);
Complex tau_of(const QuadForm& Q, prec_t p);
// tau = (-B + sqrt(d)) / 2A exactly in Q(sqrt d), as (rational part, coefficient of sqrt d).
std::pair<mpq_class, mpq_class> tau_exact(const QuadForm& Q);

struct CMPair {
    QuadForm q1, q2;
    Complex x, y;
};
// All (unordered) pairs from CM(d1) x CM(d2) with x, y within tol of the targets.
// For level 8 the discriminant variants 4d and d/4 are also scanned; with all_scales,
// every d k^2 and d / k^2 with k | N (the same order at a different level scale).
std::vector<CMPair> find_cm_pairs(const SeriesCase& cs, long d1, long d2, const mpq_class& x, const mpq_class& y,
                                  prec_t p, const Real& tol, bool all_scales = false);

} // namespace bimod
