#include "bimod/modular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace bimod {

// ---------------------------------------------------------------- QSeries

QSeries::QSeries(mpq_class lead, std::vector<mpq_class> coeffs) : lead_(std::move(lead)), c_(std::move(coeffs)) {}

QSeries QSeries::one(int M)
{
    std::vector<mpq_class> c(M + 1);
    c[0] = 1;
    return QSeries(0, c);
}

bool QSeries::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const mpq_class& v) { return v == 0; });
}

QSeries QSeries::truncated(int M) const
{
    std::vector<mpq_class> c(M + 1);
    for (int k = 0; k <= M && k < int(c_.size()); ++k) c[k] = c_[k];
    return QSeries(lead_, c);
}

QSeries QSeries::operator*(const QSeries& o) const
{
    int M = std::min(order(), o.order());
    std::vector<mpq_class> c(M + 1);
    for (int i = 0; i <= M; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; i + j <= M; ++j) c[i + j] += c_[i] * o.c_[j];
    }
    return QSeries(lead_ + o.lead_, c);
}

QSeries QSeries::operator*(const mpq_class& s) const
{
    QSeries r(*this);
    for (auto& v : r.c_) v *= s;
    return r;
}

QSeries QSeries::operator+(const QSeries& o) const
{
    mpq_class diff = o.lead_ - lead_;
    if (diff.get_den() != 1) throw std::invalid_argument("QSeries: leads differ by a non-integer");
    long s = diff.get_num().get_si();
    mpq_class lead = s >= 0 ? lead_ : o.lead_;
    long off_a = s >= 0 ? 0 : -s, off_b = s >= 0 ? s : 0;
    long M = std::min(off_a + order(), off_b + o.order());
    std::vector<mpq_class> c(M + 1);
    for (long k = 0; k <= M; ++k) {
        if (k >= off_a && k - off_a <= order()) c[k] += c_[k - off_a];
        if (k >= off_b && k - off_b <= o.order()) c[k] += o.c_[k - off_b];
    }
    return QSeries(lead, c);
}

QSeries QSeries::operator-(const QSeries& o) const { return *this + o * mpq_class(-1); }

QSeries QSeries::inverse() const
{
    QSeries n = normalized();
    if (n.c_.empty() || n.c_[0] == 0) throw std::domain_error("QSeries::inverse of zero series");
    int M = n.order();
    std::vector<mpq_class> r(M + 1);
    mpq_class inv0 = 1 / n.c_[0];
    r[0] = inv0;
    for (int k = 1; k <= M; ++k) {
        mpq_class s = 0;
        for (int i = 1; i <= k; ++i) s += n.c_[i] * r[k - i];
        r[k] = -s * inv0;
    }
    return QSeries(-n.lead_, r);
}

QSeries QSeries::pow(long e) const
{
    if (e < 0) return inverse().pow(-e);
    QSeries result = one(order());
    QSeries base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

QSeries QSeries::sqrt() const
{
    if (lead_ != 0 || c_.empty() || c_[0] != 1) throw std::domain_error("QSeries::sqrt needs 1 + O(q)");
    int M = order();
    std::vector<mpq_class> s(M + 1);
    s[0] = 1;
    for (int k = 1; k <= M; ++k) {
        mpq_class acc = c_[k];
        for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
        s[k] = acc / 2;
    }
    return QSeries(0, s);
}

QSeries QSeries::theta() const
{
    QSeries r(*this);
    for (size_t k = 0; k < r.c_.size(); ++k) r.c_[k] *= lead_ + long(k);
    return r;
}

QSeries QSeries::dilate(int k) const
{
    std::vector<mpq_class> c(size_t(order()) * k + 1);
    for (int i = 0; i <= order(); ++i) c[size_t(i) * k] = c_[i];
    return QSeries(lead_ * k, c);
}

QSeries QSeries::normalized() const
{
    size_t z = 0;
    while (z < c_.size() && c_[z] == 0) ++z;
    if (z == 0 || z == c_.size()) return *this;
    return QSeries(lead_ + long(z), std::vector<mpq_class>(c_.begin() + z, c_.end()));
}

std::optional<int> QSeries::first_difference(const QSeries& o) const
{
    QSeries d = *this - o;
    for (int k = 0; k <= d.order(); ++k)
        if (d.c_[k] != 0) return k;
    return std::nullopt;
}

std::string QSeries::str(int terms) const
{
    std::ostringstream os;
    int shown = 0;
    for (int k = 0; k <= order() && shown < terms; ++k) {
        if (c_[k] == 0) continue;
        mpq_class e = lead_ + k;
        if (shown) os << (c_[k] < 0 ? " - " : " + ");
        else if (c_[k] < 0) os << "-";
        mpq_class a = abs(c_[k]);
        if (e == 0) os << a.get_str();
        else {
            if (a != 1) os << a.get_str() << "*";
            os << "q";
            if (e != 1) os << "^" << (e.get_den() == 1 ? e.get_str() : "(" + e.get_str() + ")");
        }
        ++shown;
    }
    if (!shown) os << "0";
    os << " + O(q^" << mpq_class(lead_ + order() + 1).get_str() << ")";
    return os.str();
}

// ---------------------------------------------------------------- products

PeriodicProduct PeriodicProduct::eta_quotient(const std::vector<std::pair<int, int>>& factors, const mpq_class& scale)
{
    PeriodicProduct pp;
    pp.scale = scale;
    int L = 1;
    for (auto& [k, e] : factors) L = std::lcm(L, k);
    pp.period = L;
    pp.expo.assign(L, 0);
    mpq_class lead = 0;
    for (auto& [k, e] : factors) {
        lead += rat(k * e, 24);
        for (int r = 0; r < L; ++r)
            if (r % k == 0) pp.expo[r] += e;
    }
    pp.lead = lead;
    return pp;
}

PeriodicProduct PeriodicProduct::operator*(const PeriodicProduct& o) const
{
    PeriodicProduct r;
    r.scale = scale * o.scale;
    r.lead = lead + o.lead;
    r.period = std::lcm(period, o.period);
    r.expo.assign(r.period, 0);
    for (int n = 0; n < r.period; ++n) r.expo[n] = expo[n % period] + o.expo[n % o.period];
    return r;
}

PeriodicProduct PeriodicProduct::pow(long e) const
{
    PeriodicProduct r = *this;
    mpq_class s = 1;
    for (long i = 0; i < std::abs(e); ++i) s *= scale;
    r.scale = e >= 0 ? s : mpq_class(1 / s);
    r.lead = lead * e;
    for (auto& v : r.expo) v *= e;
    return r;
}

QSeries PeriodicProduct::expand(int M) const
{
    std::vector<mpq_class> c(M + 1);
    c[0] = 1;
    for (int n = 1; n <= M; ++n) {
        long e = expo[n % period];
        for (long i = 0; i < e; ++i)
            for (int k = M; k >= n; --k) c[k] -= c[k - n];
        for (long i = 0; i < -e; ++i)
            for (int k = n; k <= M; ++k) c[k] += c[k - n];
    }
    for (auto& v : c) v *= scale;
    return QSeries(lead, c);
}

long q_terms(const Real& im_tau, prec_t p)
{
    double y = im_tau.to_double();
    if (!(y > 0)) throw std::domain_error("q-expansion needs Im(tau) > 0");
    double n = (double(p) + 40.0) * std::log(2.0) / (2.0 * M_PI * y);
    return long(n * 1.05) + 16;
}

Complex qpow(const mpq_class& r, const Complex& tau, prec_t p)
{
    // e^{2 pi i r tau} = e^{-2 pi r Im tau} e^{2 pi i r Re tau}
    Real two_pi_r = pi_const(p) * Real(mpq_class(2 * r), p);
    Real mod = exp(-(two_pi_r * tau.im));
    Real ang = two_pi_r * tau.re;
    return Complex(mod * cos(ang), mod * sin(ang));
}

PeriodicProduct::Value PeriodicProduct::eval(const Complex& tau, prec_t p) const
{
    if (tau.im.sign() <= 0) throw std::domain_error("PeriodicProduct::eval: Im(tau) <= 0");
    prec_t wp = p + 32;
    Complex t = tau.with_prec(wp);
    Complex q = qpow(1, t, wp);
    long N = q_terms(t.im, wp);
    Complex v(1L, wp), L1(lead, wp), dL1(wp);
    Complex qn(1L, wp);
    for (long n = 1; n <= N; ++n) {
        qn *= q;
        long e = expo[n % period];
        if (!e) continue;
        Complex w = 1 - qn;
        v *= bimod::pow(w, e);
        Complex r = qn / w;
        L1 -= r * (e * n);
        dL1 -= (r / w) * (e * n * n);
    }
    v *= Complex(scale, wp) * qpow(lead, t, wp);
    return {v.with_prec(p), L1.with_prec(p), dL1.with_prec(p)};
}

// ---------------------------------------------------------------- eta family

Complex eta(const Complex& tau, prec_t p)
{
    static const PeriodicProduct e1 = PeriodicProduct::eta_quotient({{1, 1}});
    return e1.eval(tau, p).v;
}

Complex eta_multiplier(long a, long b, long c, long d, prec_t p)
{
    if (a * d - b * c != 1) throw std::invalid_argument("eta_multiplier: matrix not unimodular");
    if (c < 0 || (c == 0 && d < 0)) { a = -a; b = -b; c = -c; d = -d; }
    if (c == 0) return expi_pi(rat(b, 12), p);
    mpz_class A = a, B = b, C = c, D = d;
    mpq_class e;
    int sym;
    if (c % 2) {
        sym = mpz_jacobi(D.get_mpz_t(), C.get_mpz_t());
        mpz_class num = B * D * (1 - C * C) + C * (A + D);
        e = rat(1 - C, 4) + rat(num, 12);
    } else {
        mpz_class ad = abs(D);
        sym = mpz_jacobi(C.get_mpz_t(), ad.get_mpz_t());
        mpz_class num = A * C * (1 - D * D) + D * (B - C + 3);
        e = rat(num, 12);
    }
    e.canonicalize();
    Complex z = expi_pi(e, p);
    return sym < 0 ? -z : z;
}

namespace {

PeriodicProduct gen_eta_product(int g)
{
    if (g != 1 && g != 2) throw std::invalid_argument("gen_eta: only E_{1,0}, E_{2,0} supported");
    // E_{g,0}(5 tau) = q^{5 B(g/5)/2} prod_{n = +-g mod 5} (1 - q^n)
    PeriodicProduct pp;
    pp.period = 5;
    pp.expo.assign(5, 0);
    pp.expo[g] = 1;
    pp.expo[5 - g] = 1;
    mpq_class x(g, 5);
    mpq_class B2 = x * x - x + mpq_class(1, 6);
    pp.lead = 5 * B2 / 2;
    return pp;
}

} // namespace

Complex gen_eta(int g, const Complex& tau, prec_t p)
{
    Complex t5 = tau / 5L;
    return gen_eta_product(g).eval(t5, p).v;
}

QSeries gen_eta_series(int g, int M) { return gen_eta_product(g).expand(M); }

Complex theta_and_eisenstein(ThetaKind kind, const Complex& tau, prec_t p)
{
    if (tau.im.sign() <= 0) throw std::domain_error("theta: Im(tau) <= 0");
    prec_t wp = p + 32;
    Complex t = tau.with_prec(wp);
    Complex q = qpow(1, t, wp);
    long N = q_terms(t.im, wp);
    switch (kind) {
    case ThetaKind::Theta2: {
        // 2 q^{1/4} sum_{n>=0} q^{n(n+1)}
        Complex s(1L, wp), qpw(1L, wp), step = q * q;  // q^{n(n+1)}: ratio q^{2n+2}
        Complex ratio = q * q;
        for (long n = 1; n * n <= N + 1; ++n) {
            qpw *= ratio;
            ratio *= step;
            s += qpw;
        }
        return (s * qpow(mpq_class(1, 4), t, wp) * 2L).with_prec(p);
    }
    case ThetaKind::Theta3:
    case ThetaKind::Theta4: {
        Complex s(1L, wp), qpw(1L, wp), ratio = q, step = q * q;  // q^{n^2}: ratio q^{2n+1}
        bool alt = kind == ThetaKind::Theta4;
        for (long n = 1; n * n <= N + 1; ++n) {
            qpw *= ratio;
            ratio *= step;
            if (alt && (n % 2)) s -= qpw * 2L;
            else s += qpw * 2L;
        }
        return s.with_prec(p);
    }
    case ThetaKind::E2: {
        Complex s(wp), qn(1L, wp);
        for (long n = 1; n <= N; ++n) {
            qn *= q;
            s += qn / (1 - qn) * n;
        }
        return (1 - s * 24L).with_prec(p);
    }
    case ThetaKind::L: {
        // 1 + 6 sum (n/3) q^n / (1 - q^n)
        Complex s(wp), qn(1L, wp);
        for (long n = 1; n <= N; ++n) {
            qn *= q;
            if (n % 3 == 1) s += qn / (1 - qn);
            else if (n % 3 == 2) s -= qn / (1 - qn);
        }
        return (1 + s * 6L).with_prec(p);
    }
    }
    throw std::logic_error("unknown theta kind");
}

QSeries theta_series(ThetaKind kind, int M)
{
    std::vector<mpq_class> c(M + 1);
    switch (kind) {
    case ThetaKind::Theta2:
        for (long n = 0; n * (n + 1) <= M; ++n) c[n * (n + 1)] += 2;
        return QSeries(mpq_class(1, 4), c);
    case ThetaKind::Theta3:
    case ThetaKind::Theta4:
        c[0] = 1;
        for (long n = 1; n * n <= M; ++n) c[n * n] += (kind == ThetaKind::Theta4 && n % 2) ? -2 : 2;
        return QSeries(0, c);
    case ThetaKind::E2:
        c[0] = 1;
        for (long n = 1; n <= M; ++n)
            for (long k = n; k <= M; k += n) c[k] -= 24 * n;
        return QSeries(0, c);
    case ThetaKind::L: {
        long B = long(std::sqrt(double(M))) * 2 + 2;
        for (long m = -B; m <= B; ++m)
            for (long n = -B; n <= B; ++n) {
                long v = m * m + m * n + n * n;
                if (v <= M) c[v] += 1;
            }
        return QSeries(0, c);
    }
    }
    throw std::logic_error("unknown theta kind");
}

// ---------------------------------------------------------------- per case

TFG case_tfg(const SeriesCase& cs, int M)
{
    if (M < 2) throw std::invalid_argument("case_tfg: q-order must be at least 2");
    const CaseModularData& md = modular_data(cs);
    TFG r;
    r.t = md.t.expand(M);
    r.g = r.t.theta();
    switch (md.fkind) {
    case FKind::Product:
        r.f = md.f.expand(M);
        r.f2 = r.f * r.f;
        break;
    case FKind::CubicTheta:
        r.f = theta_series(ThetaKind::L, M);
        r.f2 = r.f * r.f;
        break;
    case FKind::SqrtE2: {
        QSeries e2 = theta_series(ThetaKind::E2, M);
        r.f2 = e2.dilate(2).truncated(M) * mpq_class(2) - e2;
        r.f = r.f2.sqrt();
        break;
    }
    }
    return r;
}

std::optional<int> tfg_identity_mismatch(const SeriesCase& cs, int M)
{
    TFG s = case_tfg(cs, M);
    QSeries rhs = s.f2 * s.t;
    if (cs.sporadic()) {
        QSeries one = QSeries::one(M);
        QSeries poly = one - s.t * cs.a + s.t * s.t * cs.c;
        rhs = rhs * poly;
    }
    return s.g.first_difference(rhs);
}

CaseValue case_eval(const SeriesCase& cs, const Complex& tau, prec_t p)
{
    const CaseModularData& md = modular_data(cs);
    CaseValue cv;
    auto tv = md.t.eval(tau, p);
    cv.t = tv.v;
    cv.g = tv.v * tv.L1;
    cv.dg = tv.v * (tv.L1 * tv.L1 + tv.dL1);
    switch (md.fkind) {
    case FKind::Product: cv.f = md.f.eval(tau, p).v; break;
    case FKind::CubicTheta: cv.f = theta_and_eisenstein(ThetaKind::L, tau, p); break;
    case FKind::SqrtE2: {
        Complex t2 = tau * 2L;
        cv.f = sqrt(theta_and_eisenstein(ThetaKind::E2, t2, p) * 2L - theta_and_eisenstein(ThetaKind::E2, tau, p));
        break;
    }
    }
    if (cs.sporadic()) {
        cv.X = cv.t;
        cv.gX = cv.g;
        cv.dgX = cv.dg;
    } else {
        Complex tm1 = cv.t - 1;
        Complex tm1sq = tm1 * tm1;
        cv.X = cv.t / tm1;
        cv.gX = -(cv.g / tm1sq);
        cv.dgX = (cv.g * cv.g * 2L) / (tm1sq * tm1) - cv.dg / tm1sq;
    }
    return cv;
}

XYF xyF_from(const SeriesCase& cs, const Complex& X1, const Complex& X2, const Complex& f1, const Complex& f2)
{
    prec_t p = X1.prec();
    Complex a(cs.poly_a(), p), c(cs.poly_c(), p);
    Complex XY = X1 * X2;
    Complex one_m = 1 - c * XY;
    Complex num = (X1 + X2) * (1 + c * XY) - a * XY * 2L;
    Complex px1 = 1 - a * X1 + c * X1 * X1, px2 = 1 - a * X2 + c * X2 * X2;
    XYF r;
    r.x = num / (one_m * one_m);
    r.y = XY * px1 * px2 / (num * num);
    r.F = one_m * f1 * f2;
    return r;
}

XYF bimodular_xyF(const SeriesCase& cs, const Complex& tau1, const Complex& tau2, prec_t p)
{
    CaseValue v1 = case_eval(cs, tau1, p), v2 = case_eval(cs, tau2, p);
    return xyF_from(cs, v1.X, v2.X, v1.f, v2.f);
}

TransformCheck check_transform(const SeriesCase& cs, const std::string& tag, const Complex& tau1,
                               const Complex& tau2, prec_t p)
{
    const CaseModularData& md = modular_data(cs);
    auto it = std::find_if(md.generators.begin(), md.generators.end(), [&](const Generator& g) { return g.tag == tag; });
    if (it == md.generators.end()) throw std::invalid_argument("unknown generator '" + tag + "' for case " + cs.name);
    const Generator& g = *it;
    TransformCheck tc;
    tc.tag = tag;
    tc.expected_chi = g.chi;

    auto act = [&](const Complex& z) { return (z * g.a + g.b) / (z * g.c + g.d); };
    CaseValue v1 = case_eval(cs, tau1, p), v2 = case_eval(cs, tau2, p);
    Complex s1 = act(tau1), s2 = act(tau2);
    CaseValue w1 = case_eval(cs, s1, p), w2 = case_eval(cs, s2, p);
    XYF base = xyF_from(cs, v1.X, v2.X, v1.f, v2.f);
    XYF img = xyF_from(cs, w1.X, w2.X, w1.f, w2.f);
    long det = g.a * g.d - g.b * g.c;
    Complex j = (tau1 * g.c + g.d) * (tau2 * g.c + g.d);
    Complex Fg = img.F * det / j;
    tc.ratio = g.square_only ? (Fg * Fg) / (base.F * base.F) : Fg / base.F;
    tc.residual = abs(tc.ratio - g.chi);

    // which involution of X the generator induces
    Complex a(cs.poly_a(), p), c(cs.poly_c(), p);
    Complex al = cs.sporadic() ? cs.alpha.eval(p) : Complex(1L, p);
    Complex be = cs.sporadic() ? cs.beta.eval(p) : Complex(p);
    Complex X = v1.X, Y = w1.X;
    std::vector<std::optional<Complex>> cand(4);
    if (!c.is_zero()) cand[0] = 1 / (c * X);
    cand[1] = (1 - al * X) / (al * (1 - be * X));
    if (!be.is_zero()) cand[2] = (1 - be * X) / (be * (1 - al * X));
    cand[3] = X;
    Real tol = pow2(24 - long(p), p) * max(Real(1L, p), abs(Y));
    for (int i = 0; i < 4; ++i)
        if (cand[i] && abs(*cand[i] - Y) < tol) { tc.sigma = i + 1; break; }

    tc.ok = tc.residual < pow2(16 - long(p) + 8, p);
    return tc;
}

// ---------------------------------------------------------------- section 3

Section3Result section3_identity(Section3Kind kind, const Complex& tau1, const Complex& tau2, prec_t p)
{
    prec_t wp = p + 32;
    Complex z1 = tau1.with_prec(wp), z2 = tau2.with_prec(wp);
    Section3Result r;
    Real eps = pow2(-long(p) - 16, wp);

    // Generic n-outer summation: term(n,m) = coeff(n,m) * A^{pa(n,m)} B^{pb(n,m)} / D^{pd(n)}.
    struct Mono {
        Complex A, B, D;
    };
    auto run = [&](auto coeff, auto mlo, auto mhi, auto pa, auto pb, auto pd, const Mono& mono) {
        Complex total(wp);
        int quiet = 0;
        long n = 0;
        for (; n <= 20000; ++n) {
            Complex block(wp);
            for (long m = mlo(n); m <= mhi(n); ++m) {
                mpq_class c = coeff(n, m);
                if (c == 0) continue;
                Complex term = pow(mono.A, pa(n, m)) * pow(mono.B, pb(n, m)) / pow(mono.D, pd(n));
                block += term * Complex(c, wp);
            }
            total += block;
            Real scale = max(Real(1L, wp), abs(total));
            if (abs(block) < eps * scale) {
                if (++quiet >= 3 && n > 4) break;
            } else quiet = 0;
        }
        r.terms = n;
        return total;
    };

    switch (kind) {
    case Section3Kind::T2n:
    case Section3Kind::RS: {
        Complex th31 = theta_and_eisenstein(ThetaKind::Theta3, z1, wp), th32 = theta_and_eisenstein(ThetaKind::Theta3, z2, wp);
        Complex th41 = theta_and_eisenstein(ThetaKind::Theta4, z1, wp), th42 = theta_and_eisenstein(ThetaKind::Theta4, z2, wp);
        Complex t1 = th41 * th41 / (th31 * th31), t2 = th42 * th42 / (th32 * th32);
        Complex t12 = t1 * t2;
        Complex P = t12 * (1 - t1 * t1) * (1 - t2 * t2);
        Complex S = (1 + t12) * (1 + t12);
        r.closed = (1 + t12) / 2L * th31 * th31 * th32 * th32;
        if (kind == Section3Kind::T2n) {
            Complex s = (t1 + t2) * (1 - t12);
            // coefficient u_n C(2n,2m) C(2m,m); u_n by product recurrence, cached
            std::vector<mpq_class> un{1};
            auto coeff = [&](long n, long m) -> mpq_class {
                while (long(un.size()) <= n) {
                    long k = long(un.size()) - 1;
                    un.push_back(un.back() * rat(2 * k + 1, 2 * k + 2) * rat(2 * k + 1, 2 * k + 2));
                }
                return un[n] * mpq_class(binom(2 * n, 2 * m) * binom(2 * m, m));
            };
            r.series = run(
                coeff, [](long) { return 0L; }, [](long n) { return n; },
                [](long n, long m) { return 2 * n - 2 * m; }, [](long, long m) { return m; },
                [](long n) { return 2 * n; }, Mono{s, P, S});
        } else {
            Complex Dd = (t1 - t2) * (t1 - t2);
            // x^n y^m = P^{n-m} Dd^{2m-n} / (S^n 16^m)
            auto coeff = [](long n, long m) -> mpq_class {
                mpz_class b = binom(n, m);
                return rat(binom(2 * n, n) * b * b * binom(2 * m, n), mpz_class(1) << (4 * m));
            };
            r.series = run(
                coeff, [](long n) { return (n + 1) / 2; }, [](long n) { return n; },
                [](long n, long m) { return n - m; }, [](long n, long m) { return 2 * m - n; },
                [](long n) { return n; }, Mono{P, Dd, S});
        }
        break;
    }
    case Section3Kind::T3n: {
        auto abc = [&](const Complex& z) {
            Complex a = theta_and_eisenstein(ThetaKind::L, z, wp);
            Complex b = (theta_and_eisenstein(ThetaKind::L, z * 3L, wp) * 3L - a) / 2L;
            return std::pair<Complex, Complex>{a, b};
        };
        auto [a1, b1] = abc(z1);
        auto [a2, b2] = abc(z2);
        Complex t1 = b1 / a1, t2 = b2 / a2;
        Complex t12 = t1 * t2;
        Complex N = t1 + t2 - t12 * t12 * 2L;
        Complex Dn = 1 + t12 * (t1 + t2) * 4L;
        Complex P3 = t12 * (1 - t1 * t1 * t1) * (1 - t2 * t2 * t2);
        r.closed = sqrt(Dn) * a1 * a2 / 3L;
        std::vector<mpq_class> un{1};
        auto coeff = [&](long n, long m) -> mpq_class {
            while (long(un.size()) <= n) {
                long k = long(un.size()) - 1;
                un.push_back(un.back() * rat(3 * k + 1, 3 * k + 3) * rat(3 * k + 2, 3 * k + 3));
            }
            return un[n] * mpq_class(binom(3 * n, 2 * m) * binom(2 * m, m));
        };
        // x^n y^m = N^{3n-2m} P3^m / Dn^{3n}
        r.series = run(
            coeff, [](long) { return 0L; }, [](long n) { return 3 * n / 2; },
            [](long n, long m) { return 3 * n - 2 * m; }, [](long, long m) { return m; },
            [](long n) { return 3 * n; }, Mono{N, P3, Dn});
        break;
    }
    }
    r.residual = abs(r.series - r.closed).with_prec(p);
    r.series = r.series.with_prec(p);
    r.closed = r.closed.with_prec(p);
    return r;
}

Complex parse_complex(const std::string& s, prec_t p)
{
    static const std::regex re(R"(^\s*([+-]?[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)?\s*(?:([+-])\s*([0-9]*\.?[0-9]*(?:[eE][+-]?[0-9]+)?)\s*\*?\s*i)?\s*$)");
    static const std::regex pure_im(R"(^\s*([+-]?)\s*([0-9]*\.?[0-9]*(?:[eE][+-]?[0-9]+)?)\s*\*?\s*i\s*$)");
    std::smatch m;
    if (std::regex_match(s, m, pure_im)) {
        std::string mag = m[2].str().empty() ? "1" : m[2].str();
        Real im(mag, p);
        if (m[1] == "-") im = -im;
        return Complex(Real(p), im);
    }
    if (std::regex_match(s, m, re) && m[1].matched) {
        Real re_part(m[1].str(), p);
        Real im(p);
        if (m[2].matched) {
            std::string mag = m[3].str().empty() ? "1" : m[3].str();
            im = Real(mag, p);
            if (m[2] == "-") im = -im;
        }
        return Complex(re_part, im);
    }
    throw std::invalid_argument("cannot parse complex number '" + s + "'");
}

} // namespace bimod
