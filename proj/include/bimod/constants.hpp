#pragma once

#include "bimod/cm.hpp"
#include "bimod/exactmath.hpp"
#include "bimod/modular.hpp"
#include "bimod/numerics.hpp"

#include <optional>

namespace bimod {

struct PointData {
    QuadForm Q;
    Complex tau;
    Mat2 alpha;
    CaseValue v;
    Complex h;      // (g|_2 alpha)/g at tau, expected -1
    Complex dh;     // theta_q h at tau
    Complex delta;  // theta_q h / f^2
    Complex deltaX; // the same with g replaced by theta_q X (unified variable)
    Real residual;  // |theta_q g/g - theta_q h/2 - 1/(2 pi Im tau)|
};

// Evaluates at the point of Q (Q need not be canonical). g is theta_q t with t
// the case's Hauptmodul.
PointData point_data(const SeriesCase& cs, const QuadForm& Q, prec_t p);

Real lemma_pi_residual(const SeriesCase& cs, const QuadForm& Q, prec_t p);
Complex delta(const SeriesCase& cs, const QuadForm& Q, prec_t p);

struct ThetaPartials {
    Complex xX, xY, yX, yY;  // theta_x X, theta_x Y, theta_y X, theta_y Y
};
// Closed forms in the variables of 1 - aX + cX^2 with (a, c) = (poly_a, poly_c).
// Throws std::domain_error at X == Y or a vanishing denominator.
ThetaPartials theta_partials(const mpq_class& a, const mpq_class& c, const Complex& X, const Complex& Y);

struct CaseAtCM {
    SeriesCase cs;
    PointData p1, p2;
    bool flip_f2 = false;  // a = 1/4: f2 replaced by -f2 (branch of the square root)
    Complex f1, f2, eps;
    Complex x, y, F;
};
CaseAtCM case_at_cm(const SeriesCase& cs, const QuadForm& Q1, const QuadForm& Q2, prec_t p, bool flip_f2 = false);

struct Constants {
    Complex B1, C1, B2, C2;
};
// Theorem formulas (sporadic) or the hypergeometric variants in t.
Constants theorem_constants(const CaseAtCM& cc);
// Sporadic theorem formulas applied in the unified variable X with delta taken
// from g_X = theta_q X. Equals theorem_constants for sporadic cases.
Constants unified_constants(const CaseAtCM& cc);

// Representatives tau1' ~ tau1, tau2' ~ tau2 (same Gamma-orbits) with F(tau1', tau2')
// equal to the series value S0 = sum u_n sum_m C(n,2m)C(2m,m) x^n y^m. Tries both
// orders of the pair.
std::optional<CaseAtCM> align_representatives(const SeriesCase& cs, const QuadForm& Q1, const QuadForm& Q2,
                                              const Complex& S0, prec_t p, const Real& tol);

} // namespace bimod
