#include "bimod/constants.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bimod {

namespace {

Complex mobius(const Mat2& m, const Complex& tau) { return (tau * m.a + m.b) / (tau * m.c + m.d); }

struct HDelta {
    Complex h, dh;
};

// h = (g|_2 alpha)/g and theta_q h at tau, with theta_q(g|_2 alpha) in closed form.
HDelta h_and_derivative(const Mat2& al, const Complex& tau, const Complex& g, const Complex& dg, const Complex& ga,
                        const Complex& dga)
{
    const prec_t p = tau.prec();
    const long det = al.det();
    Complex j = tau * al.c + al.d;
    Complex j2 = j * j, j3 = j2 * j;
    Complex pi_i(Real(p), pi_const(p));
    Complex G = ga * det / j2;
    Complex dG = dga * (det * det) / (j2 * j2) - ga * (al.c * det) / (pi_i * j3);
    HDelta r;
    r.h = G / g;
    r.dh = (dG - r.h * dg) / g;
    return r;
}

bool near_integer(const Real& v, const Real& tol, long& out)
{
    Real r = floor(v + Real(mpq_class(1, 2), v.prec()));
    if (!(abs(v - r) < tol)) return false;
    if (abs(r) > Real(1e15, v.prec())) return false;
    out = long(r.to_double());
    return true;
}

// (a, b; c, d) in SL2(Z) with the given bottom row.
Mat2 complete(long c, long d)
{
    long x0 = 1, x1 = 0, r0 = d, r1 = -c, y0 = 0, y1 = 1;
    while (r1 != 0) {
        long q = r0 / r1, t;
        t = r0 - q * r1; r0 = r1; r1 = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    // x0 d - y0 c = r0 = +-1
    Mat2 m{x0 * r0, y0 * r0, c, d};
    if (m.det() != 1) throw std::logic_error("complete: bottom row not coprime");
    return m;
}

} // namespace

PointData point_data(const SeriesCase& cs, const QuadForm& Q, prec_t p)
{
    const prec_t wp = p + 32;
    PointData pd;
    pd.Q = Q;
    TauAlpha ta = tau_alpha(Q, wp);
    pd.tau = ta.tau;
    pd.alpha = ta.alpha;
    pd.v = case_eval(cs, pd.tau, wp);
    CaseValue va = case_eval(cs, mobius(pd.alpha, pd.tau), wp);
    HDelta hd = h_and_derivative(pd.alpha, pd.tau, pd.v.g, pd.v.dg, va.g, va.dg);
    pd.h = hd.h;
    pd.dh = hd.dh;
    Complex f2 = pd.v.f * pd.v.f;
    pd.delta = hd.dh / f2;
    HDelta hx = h_and_derivative(pd.alpha, pd.tau, pd.v.gX, pd.v.dgX, va.gX, va.dgX);
    pd.deltaX = hx.dh / f2;
    Real rhs = Real(1L, wp) / (pi_const(wp) * pd.tau.im * 2);
    pd.residual = abs(pd.v.dg / pd.v.g - hd.dh / 2L - Complex(rhs));
    return pd;
}

Real lemma_pi_residual(const SeriesCase& cs, const QuadForm& Q, prec_t p)
{
    PointData pd = point_data(cs, Q, p);
    if (pd.v.g.is_zero()) throw std::domain_error("g vanishes at " + Q.str());
    return pd.residual;
}

Complex delta(const SeriesCase& cs, const QuadForm& Q, prec_t p) { return point_data(cs, Q, p).delta; }

ThetaPartials theta_partials(const mpq_class& aq, const mpq_class& cq, const Complex& X, const Complex& Y)
{
    const prec_t p = X.prec();
    Complex a(aq, p), c(cq, p);
    Complex XY = X * Y;
    Complex D = 1 - a * (X + Y) + c * (X * X + XY * 4L + Y * Y) - a * c * XY * (X + Y) + c * c * XY * XY;
    if (D.is_zero()) throw std::domain_error("theta_partials: vanishing denominator");
    auto px = [&](const Complex& Z) { return 1 - a * Z + c * Z * Z; };
    ThetaPartials r;
    r.xX = X * (1 - c * Y * Y) * px(X) / D;
    r.xY = Y * (1 - c * X * X) * px(Y) / D;
    if ((Y - X).is_zero()) throw std::domain_error("theta_partials: X == Y");
    auto ty = [&](const Complex& U, const Complex& V) {
        Complex UV = U * V;
        Complex omc = 1 - c * UV;
        Complex tail = 1 - a * U * 2L + c * U * U * 3L + c * UV * (3 - a * U * 2L + c * U * U);
        return UV * px(U) * px(V) / ((V - U) * omc * omc) * tail / D;
    };
    r.yX = ty(X, Y);
    r.yY = ty(Y, X);
    return r;
}

CaseAtCM case_at_cm(const SeriesCase& cs, const QuadForm& Q1, const QuadForm& Q2, prec_t p, bool flip_f2)
{
    CaseAtCM cc;
    cc.cs = cs;
    cc.p1 = point_data(cs, Q1, p);
    cc.p2 = point_data(cs, Q2, p);
    cc.flip_f2 = flip_f2;
    cc.f1 = cc.p1.v.f;
    cc.f2 = flip_f2 ? -cc.p2.v.f : cc.p2.v.f;
    if (cc.f1.is_zero()) throw std::domain_error("f vanishes at " + Q1.str());
    cc.eps = cc.f2 / cc.f1;
    XYF r = xyF_from(cs, cc.p1.v.X, cc.p2.v.X, cc.f1, cc.f2);
    cc.x = r.x;
    cc.y = r.y;
    cc.F = r.F;
    return cc;
}

namespace {

Constants sporadic_formulas(const mpq_class& aq, const mpq_class& cq, const Complex& X, const Complex& Y,
                            const Complex& d1, const Complex& d2, const Complex& eps, const Real& im1,
                            const Real& im2)
{
    const prec_t p = X.prec();
    Complex a(aq, p), c(cq, p);
    ThetaPartials tp = theta_partials(aq, cq, X, Y);
    Complex omc = 1 - c * X * Y;
    Complex pX = 1 - a * X + c * X * X, pY = 1 - a * Y + c * Y * Y;
    Complex kX = (2 - d1 - a * X * 4L + c * X * X * 6L) / (X * pX * 4L);
    Complex kY = (2 - d2 - a * Y * 4L + c * Y * Y * 6L) / (Y * pY * 4L);
    Complex wX = omc / (X * pX * im1 * 4L) * eps;
    Complex wY = omc / (Y * pY * im2 * 4L) / eps;
    auto BC = [&](const Complex& tX, const Complex& tY, Complex& B, Complex& C) {
        B = c * (X * tY + Y * tX) / omc + tX * kX + tY * kY;
        C = wX * tX + wY * tY;
    };
    Constants k;
    BC(tp.xX, tp.xY, k.B1, k.C1);
    BC(tp.yX, tp.yY, k.B2, k.C2);
    return k;
}

} // namespace

Constants theorem_constants(const CaseAtCM& cc)
{
    const Complex& t1 = cc.p1.v.t;
    const Complex& t2 = cc.p2.v.t;
    const Real& im1 = cc.p1.tau.im;
    const Real& im2 = cc.p2.tau.im;
    if (cc.cs.sporadic())
        return sporadic_formulas(cc.cs.a, cc.cs.c, t1, t2, cc.p1.delta, cc.p2.delta, cc.eps, im1, im2);
    const Complex& d1 = cc.p1.delta;
    const Complex& d2 = cc.p2.delta;
    Complex omt = 1 - t1 * t2;
    Complex pre = (1 - t1) * (1 - t2) / (omt * 4L);
    Constants k;
    k.B1 = pre * (4 - d1 - d2);
    Complex e1 = cc.eps / im1, e2 = inv(cc.eps) / im2;
    k.C1 = pre * (e1 + e2);
    Complex diff = t2 - t1;
    if (diff.is_zero()) throw std::domain_error("theorem_constants: t1 == t2");
    Complex den = omt * diff * 4L;
    Complex s1 = (1 - t1 * t1) * t2, s2 = (1 - t2 * t2) * t1;
    k.B2 = ((2 - d1) * s1 - (2 - d2) * s2) / den;
    k.C2 = (e1 * s1 - e2 * s2) / den;
    return k;
}

Constants unified_constants(const CaseAtCM& cc)
{
    return sporadic_formulas(cc.cs.poly_a(), cc.cs.poly_c(), cc.p1.v.X, cc.p2.v.X, cc.p1.deltaX, cc.p2.deltaX,
                             cc.eps, cc.p1.tau.im, cc.p2.tau.im);
}

std::optional<CaseAtCM> align_representatives(const SeriesCase& cs, const QuadForm& Q1, const QuadForm& Q2,
                                              const Complex& S0, prec_t p, const Real& tol)
{
    const LevelGroup G = LevelGroup::of(cs);
    const bool square_only = !cs.sporadic() && cs.a == mpq_class(1, 4);
    const Real itol = pow2(-40, p);
    auto accept = [&](const QuadForm& a, const QuadForm& b) -> std::optional<CaseAtCM> {
        CaseAtCM cc = case_at_cm(cs, a, b, p);
        Real scale = max(Real(1L, p), abs(S0));
        if (abs(cc.F - S0) < tol * scale) return cc;
        if (square_only && abs(cc.F + S0) < tol * scale) return case_at_cm(cs, a, b, p, true);
        return std::nullopt;
    };
    for (int order = 0; order < 2; ++order) {
        const QuadForm& qa = order ? Q2 : Q1;
        const QuadForm& qb = order ? Q1 : Q2;
        if (auto r = accept(qa, qb)) return r;
        Complex ta = tau_of(qa, p), tb = tau_of(qb, p);
        CaseValue va = case_eval(cs, ta, p), vb = case_eval(cs, tb, p);
        Complex F0 = xyF_from(cs, va.X, vb.X, va.f, vb.f).F;
        Complex R = S0 / F0;
        // F(g1 ta, g2 tb) = chi * j1 j2 F(ta, tb): solve j2 = +-R / j1 for the bottom row of g2.
        for (long c1 = 0; c1 <= 6L * G.N; c1 += G.N)
            for (long d1 = -12; d1 <= 12; ++d1) {
                if (c1 == 0 && d1 != 1) continue;
                if (!G.bottom_row_ok(c1, d1)) continue;
                Complex j1 = ta * c1 + d1;
                for (int s : {1, -1}) {
                    Complex target = R / j1 * long(s);
                    long c2, d2;
                    if (!near_integer(target.im / tb.im, itol, c2)) continue;
                    if (!near_integer(target.re - tb.re * c2, itol, d2)) continue;
                    if (c2 < 0 || (c2 == 0 && d2 < 0)) {
                        c2 = -c2;
                        d2 = -d2;
                    }
                    if (!G.bottom_row_ok(c2, d2)) continue;
                    QuadForm na = act(complete(c1, d1), qa), nb = act(complete(c2, d2), qb);
                    if (auto r = accept(na, nb)) return r;
                }
            }
    }
    return std::nullopt;
}

} // namespace bimod
