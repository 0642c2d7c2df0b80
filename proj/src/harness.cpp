#include "bimod/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace bimod {

// ---------------------------------------------------------------- table parsing

TableParseError::TableParseError(const std::string& source, int line_, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line_) + ": " + msg), line(line_)
{
}

namespace {

std::string trim(const std::string& s)
{
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

} // namespace

std::vector<TableRow> parse_table(std::istream& in, const std::string& source)
{
    std::vector<TableRow> rows;
    std::set<std::string> ids;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fail = [&](const std::string& msg) { throw TableParseError(source, ln, msg); };
        auto f = split(t, '|');
        if (f.size() < 9) fail("expected at least 9 '|'-separated fields, got " + std::to_string(f.size()));
        TableRow r;
        r.line = ln;
        r.id = f[0];
        if (r.id.empty()) fail("empty row id");
        if (!ids.insert(r.id).second) fail("duplicate row id '" + r.id + "'");
        try {
            r.cs = case_by_name(f[1]);
        } catch (const std::exception& e) {
            fail("bad family '" + f[1] + "': " + e.what());
        }
        for (const auto& d : split(f[2], ',')) {
            try {
                size_t pos;
                long v = std::stol(d, &pos);
                if (pos != d.size()) throw std::invalid_argument(d);
                if (!valid_discriminant(v)) fail("not a negative discriminant: " + d);
                r.discs.push_back(v);
            } catch (const TableParseError&) {
                throw;
            } catch (const std::exception&) {
                fail("bad discriminant '" + d + "'");
            }
        }
        if (r.discs.empty() || r.discs.size() > 2) fail("expected one or two discriminants");
        auto rational = [&](const std::string& s, const char* what) {
            try {
                return parse_rational(s);
            } catch (const std::exception& e) {
                fail(std::string("bad ") + what + " '" + s + "': " + e.what());
            }
            return mpq_class();
        };
        auto integer = [&](const std::string& s, const char* what) {
            mpq_class q = rational(s, what);
            if (q.get_den() != 1) fail(std::string(what) + " must be an integer: " + s);
            return mpz_class(q.get_num());
        };
        auto constant = [&](const std::string& s) {
            try {
                return ConstExpr::parse(s);
            } catch (const std::exception& e) {
                fail("bad constant '" + s + "': " + e.what());
            }
            return ConstExpr();
        };
        r.x = rational(f[3], "x");
        r.y = rational(f[4], "y");
        r.A = integer(f[5], "A");
        r.B = integer(f[6], "B");
        if (r.A == 0) fail("A must be nonzero");
        r.C_text = f[7];
        r.C = constant(f[7]);
        r.ref = f[8];
        for (size_t i = 9; i < f.size(); ++i) {
            if (f[i].empty()) continue;
            auto eq = f[i].find('=');
            if (eq == std::string::npos) fail("expected key=value, got '" + f[i] + "'");
            std::string k = trim(f[i].substr(0, eq)), v = trim(f[i].substr(eq + 1));
            if (k == "weight") {
                if (v == "n") r.weight = Weight::N;
                else if (v == "m") r.weight = Weight::M;
                else fail("weight must be n or m");
            } else if (k == "max_terms") {
                mpz_class m = integer(v, "max_terms");
                if (m <= 0 || !m.fits_slong_p()) fail("max_terms out of range");
                r.max_terms = m.get_si();
            } else if (k == "alt_x") {
                r.alt_x = rational(v, "alt_x");
            } else if (k == "alt_y") {
                r.alt_y = rational(v, "alt_y");
            } else if (k == "alt_C") {
                r.alt_C = constant(v);
                r.alt_C_text = v;
            } else {
                fail("unknown key '" + k + "'");
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<TableRow> load_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file " + path);
    return parse_table(in, path);
}

std::string default_table_path() { return std::string(BIMOD_DATA_DIR) + "/tables.txt"; }

// ---------------------------------------------------------------- series evaluation

namespace {

using cd = std::complex<double>;

std::vector<cd> roots(const SeriesCase& cs)
{
    auto val = [](const QuadraticNumber& q) {
        double r = q.r.get_d(), s = q.s.get_d(), d = q.D.get_d();
        return d >= 0 ? cd(r + s * std::sqrt(d), 0) : cd(r, s * std::sqrt(-d));
    };
    std::vector<cd> v{val(cs.alpha)};
    cd b = val(cs.beta);
    if (std::abs(b) > 0) v.push_back(b);
    return v;
}

double y_growth(const mpq_class& y)
{
    double yd = y.get_d();
    return yd >= 0 ? 1 + 2 * std::sqrt(yd) : std::sqrt(1 + 4 * -yd);
}

double log2_abs(const Real& v) { return v.is_zero() ? -std::numeric_limits<double>::infinity() : v.log2abs(); }

double log2_abs(const mpz_class& z)
{
    if (z == 0) return -std::numeric_limits<double>::infinity();
    long e;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log2(std::abs(m)) + double(e);
}

// Stream of u_n: exact integers for sporadic cases, a rounded ratio product otherwise.
class USeq {
public:
    USeq(const SeriesCase& cs, prec_t wp) : cs_(cs), wp_(wp), uf_(1L, wp)
    {
        if (cs.sporadic()) {
            a_ = mpz_class(cs.a.get_num());
            b_ = mpz_class(cs.b.get_num());
            c_ = mpz_class(cs.c.get_num());
        }
    }
    long n() const { return n_; }
    Real value() const { return cs_.sporadic() ? Real(u_, wp_) : uf_; }
    double log2() const { return cs_.sporadic() ? log2_abs(u_) : log2_abs(uf_); }
    void next()
    {
        const long n = n_;
        if (cs_.sporadic()) {
            mpz_class nn = n;
            mpz_class v = (a_ * nn * nn + a_ * nn + b_) * u_ - c_ * nn * nn * prev_;
            mpz_class d = mpz_class(n + 1) * (n + 1);
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
            prev_ = u_;
            u_ = v;
        } else {
            mpq_class r = 1;
            for (const auto& p : cs_.params) r *= (p + n);
            for (size_t i = 0; i < cs_.params.size(); ++i) r /= (n + 1);
            uf_ = uf_ * Real(r, wp_);
        }
        ++n_;
    }

private:
    const SeriesCase& cs_;
    prec_t wp_;
    mpz_class a_, b_, c_, u_ = 1, prev_ = 0;
    Real uf_;
    long n_ = 0;
};

// Tail estimate from an envelope sampled in blocks: log2 of sum_{k>n} E_k assuming the
// envelope keeps decaying at the observed block ratio (+5%).
class TailEstimator {
public:
    // floor: log2 of the asymptotic ratio, a lower bound for the estimate
    explicit TailEstimator(int block, double floor = -std::numeric_limits<double>::infinity())
        : block_(block), floor_(floor) {}
    void push(double log2_env)
    {
        last_ = log2_env;
        cur_max_ = std::max(cur_max_, log2_env);
        if (++count_ % block_ == 0) {
            blocks_.push_back(cur_max_);
            if (blocks_.size() > 3) blocks_.pop_front();
            cur_max_ = -std::numeric_limits<double>::infinity();
        }
    }
    // log2 ratio per term; +inf when undetermined or not decaying.
    double log2_ratio() const
    {
        if (blocks_.size() < 3) return std::numeric_limits<double>::infinity();
        double r1 = (blocks_[2] - blocks_[1]) / block_, r0 = (blocks_[1] - blocks_[0]) / block_;
        if (std::isinf(blocks_[2]) && blocks_[2] < 0) return -std::numeric_limits<double>::infinity();
        return std::max({r0, r1, floor_});
    }
    double log2_tail() const
    {
        double lr = log2_ratio();
        if (lr >= 0) return std::numeric_limits<double>::infinity();
        if (std::isinf(lr)) return -std::numeric_limits<double>::infinity();
        double r = std::exp2(lr);
        return last_ + lr - std::log2(1 - r) + 1;
    }

private:
    int block_;
    double floor_;
    long count_ = 0;
    double last_ = 0;
    double cur_max_ = -std::numeric_limits<double>::infinity();
    std::deque<double> blocks_;
};

Real exp2_real(double l, prec_t p)
{
    if (std::isinf(l)) return l < 0 ? Real(0L, p) : Real(std::numeric_limits<double>::infinity(), p);
    double fl = std::floor(l);
    return Real(std::exp2(l - fl), p) * pow2(long(fl), p);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log2_weight(double lA, double lB, long n) { return std::log2(std::exp2(lA) * double(n) + std::exp2(lB)); }

SeriesValue sum_n_outer(const SeriesSpec& s, const SeriesOptions& opt, double ratio)
{
    const prec_t P = opt.precision, wp = P + 48;
    const mpz_class p = s.y.get_num(), q = s.y.get_den();
    const mpz_class q4p = q - 4 * p;
    const Real xr(s.x, wp), qinv = Real(1L, wp) / Real(q, wp);
    const double lx = s.x == 0 ? kNegInf : log2_abs(Real(s.x, 64));
    const double ly = std::log2(y_growth(s.y));
    const double lg = std::log2(s.cs.growth());
    const double lA = log2_abs(Real(mpz_class(abs(s.A)), 64)), lB = log2_abs(Real(mpz_class(abs(s.B)), 64));
    const double ltarget = -double(P) + 16;

    USeq u(s.cs, wp);
    mpz_class V = 1, Vp = 0, W = 0, Wp = 0;  // q^floor(n/2) T_n(y) and q^floor(n/2) y T_n'(y)
    Real xs(1L, wp);                          // x^n / q^floor(n/2)
    Real sum(wp);
    TailEstimator tail(16, std::log2(ratio));
    double calib = kNegInf;
    SeriesValue out;
    out.order = SumOrder::NOuter;
    out.ratio = ratio;
    long stop_at = -1;
    for (long n = 0;; ++n) {
        if (stop_at < 0 && n >= opt.max_terms)
            throw ConvergenceError("not converged after " + std::to_string(n) + " terms (n-order ratio " +
                                   std::to_string(ratio) + ")");
        Real inner = s.weight == Weight::N ? Real(mpz_class((s.A * n + s.B) * V), wp)
                                           : Real(mpz_class(s.A * W + s.B * V), wp);
        Real term = u.value() * xs * inner;
        sum += term;
        // smooth envelope (growth |x| rho_y)^n (A n + |B|), calibrated against the observed terms
        double base = double(n) * (lg + lx + ly) + log2_weight(lA, lB, n);
        if (!std::isinf(base)) calib = std::max(calib, log2_abs(term) - base);
        tail.push(std::isinf(calib) ? base : base + calib);
        if (stop_at < 0) {
            bool done = s.x == 0 || (n >= 48 && tail.log2_tail() < ltarget + std::max(0.0, log2_abs(sum)));
            if (done) {
                out.value = sum;
                out.tail_bound = s.x == 0 ? Real(0L, wp) : exp2_real(tail.log2_tail(), wp);
                out.terms = n + 1;
                if (opt.extra_terms <= 0 || s.x == 0) break;
                stop_at = n;
            }
        } else if (n >= stop_at + opt.extra_terms) {
            out.extension_change = abs(sum - out.value);
            break;
        }
        const bool odd = n % 2 == 1;
        mpz_class k1 = 2 * n + 1;
        if (odd) k1 *= q;
        mpz_class Vn = k1 * V - mpz_class(n) * q4p * Vp;
        mpz_class Wn = k1 * W - mpz_class(n) * q4p * Wp + mpz_class(4 * n) * p * Vp;
        mpz_divexact_ui(Vn.get_mpz_t(), Vn.get_mpz_t(), (unsigned long)(n + 1));
        mpz_divexact_ui(Wn.get_mpz_t(), Wn.get_mpz_t(), (unsigned long)(n + 1));
        Vp = std::move(V);
        V = std::move(Vn);
        Wp = std::move(W);
        W = std::move(Wn);
        xs *= xr;
        if (odd) xs *= qinv;
        u.next();
    }
    return out;
}

struct PrecisionLoss {
    double bits;
};

// sum_m C(2m,m) y^m sum_{n>=2m} u_n x^n C(n,2m) (A k + B). The inner sums cancel
// (about 2 log2(|1-z|/(1-|z|)) bits per m for z = root * x), so they run at P + extra bits.
SeriesValue sum_m_outer(const SeriesSpec& s, const SeriesOptions& opt, double ratio, double extra)
{
    const prec_t P = opt.precision, wp = P + 48 + prec_t(std::ceil(extra));
    const Real xr(s.x, wp), yr(s.y, wp);
    const Real Ar(s.A, wp), Br(s.B, wp);
    const double lA = log2_abs(Real(mpz_class(abs(s.A)), 64)), lB = log2_abs(Real(mpz_class(abs(s.B)), 64));
    const double ltarget = -double(P) + 16;

    USeq u(s.cs, wp);
    std::vector<Real> U;  // u_n x^n
    Real xn(1L, wp);
    auto ensure = [&](long n) {
        while (long(U.size()) <= n) {
            U.push_back(u.value() * xn);
            xn *= xr;
            u.next();
        }
    };
    double inner_floor = kNegInf;
    for (cd a : roots(s.cs)) inner_floor = std::max(inner_floor, std::log2(std::abs(a * s.x.get_d())));
    Real sum(wp), w(1L, wp);  // w = C(2m,m) y^m
    TailEstimator outer(2, std::log2(ratio));
    double ocalib = kNegInf;
    SeriesValue out;
    out.order = SumOrder::MOuter;
    out.ratio = ratio;
    long stop_at = -1;
    for (long m = 0;; ++m) {
        if (stop_at < 0 && m >= opt.max_terms)
            throw ConvergenceError("not converged after " + std::to_string(m) + " outer terms (m-order ratio " +
                                   std::to_string(ratio) + ")");
        const double lw = log2_abs(w);
        Real inner(wp);
        bool ext_end = false;
        if (!w.is_zero()) {
            TailEstimator it(16, inner_floor);
            double icalib = kNegInf;
            Real binom(1L, wp);  // C(n, 2m)
            double labs = kNegInf;
            const double itarget = ltarget - 8 - lw;
            for (long n = 2 * m;; ++n) {
                if (n - 2 * m > opt.max_terms && stop_at >= 0) {
                    ext_end = true;
                    break;
                }
                if (n - 2 * m > opt.max_terms)
                    throw ConvergenceError("inner sum not converged after " + std::to_string(opt.max_terms) +
                                           " terms at m=" + std::to_string(m));
                ensure(n);
                Real k = s.weight == Weight::N ? Real(n, wp) : Real(m, wp);
                inner += U[n] * binom * (Ar * k + Br);
                double lt = log2_abs(U[n]) + log2_abs(binom) + log2_weight(lA, lB, n);
                labs = std::max(labs, lt);
                double ib = double(n) * inner_floor + log2_abs(binom) + log2_weight(lA, lB, n);
                if (!std::isinf(ib)) icalib = std::max(icalib, lt - ib);
                it.push(std::isinf(icalib) ? lt : ib + icalib);
                if (s.x == 0 || U[n].is_zero()) break;
                if (n - 2 * m >= 48 && it.log2_tail() < itarget) break;
                binom = binom * (n + 1) / (n + 1 - 2 * m);
            }
            // rounding error (about 2^(labs - wp)) must stay below the inner target
            if (!ext_end && labs - double(wp) > itarget - 16) throw PrecisionLoss{labs - itarget + 16 - double(P + 48)};
        }
        if (ext_end) {
            out.extension_change = abs(sum - out.value);
            break;
        }
        Real term = w * inner;
        sum += term;
        double ob = ratio > 0 ? double(m) * std::log2(ratio) : kNegInf;
        if (!std::isinf(ob)) ocalib = std::max(ocalib, log2_abs(term) - ob);
        outer.push(std::isinf(ocalib) ? log2_abs(term) : ob + ocalib);
        if (stop_at < 0) {
            bool done = s.y == 0 || s.x == 0 ||
                        (m >= 6 && outer.log2_tail() < ltarget + std::max(0.0, log2_abs(sum)));
            if (done) {
                out.value = sum;
                out.tail_bound = (s.y == 0 || s.x == 0) ? Real(0L, wp) : exp2_real(outer.log2_tail(), wp);
                out.terms = m + 1;
                if (opt.extra_terms <= 0 || s.y == 0 || s.x == 0) break;
                stop_at = m;
            }
        } else if (m >= stop_at + opt.extra_terms) {
            out.extension_change = abs(sum - out.value);
            break;
        }
        w = w * yr * ((2 * m + 1) * (2 * m + 2)) / ((m + 1) * (m + 1));
    }
    return out;
}

SeriesValue sum_m_outer(const SeriesSpec& s, const SeriesOptions& opt, double ratio)
{
    // predicted cancellation over the expected number of outer terms
    double per_m = 0;
    for (cd a : roots(s.cs)) {
        cd z = a * s.x.get_d();
        per_m = std::max(per_m, 2 * std::log2(std::abs(1.0 - z) / (1 - std::abs(z))));
    }
    const double M = (ratio > 0 ? double(opt.precision) * std::log(2.0) / -std::log(ratio) + 8 : 1) + double(opt.extra_terms);
    double extra = per_m * M + 16;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return sum_m_outer(s, opt, ratio, extra);
        } catch (const PrecisionLoss& e) {
            extra = std::max(extra + 64, e.bits + 32);
        }
    }
    throw ConvergenceError("m-ordered sum loses too much precision to cancellation");
}

} // namespace

double n_order_ratio(const SeriesCase& cs, const mpq_class& x, const mpq_class& y)
{
    return std::abs(x.get_d()) * cs.growth() * y_growth(y);
}

double m_order_ratio(const SeriesCase& cs, const mpq_class& x, const mpq_class& y)
{
    double r = 0;
    for (cd a : roots(cs)) {
        cd z = a * x.get_d();
        if (std::abs(z) >= 1) return std::numeric_limits<double>::infinity();
        r = std::max(r, 4 * std::abs(y.get_d()) * std::norm(z) / std::norm(1.0 - z));
    }
    return r;
}

Complex eval_series_complex(const SeriesCase& cs, const Complex& x, const Complex& y, prec_t P, long max_terms)
{
    const prec_t wp = P + 32;
    const cd xd(x.re.to_double(), x.im.to_double()), yd(y.re.to_double(), y.im.to_double());
    const cd sy = std::sqrt(yd);
    const double ratio = std::abs(xd) * cs.growth() * std::max(std::abs(1.0 + 2.0 * sy), std::abs(1.0 - 2.0 * sy));
    if (!(ratio < 1)) throw ConvergenceError("double series diverges (ratio " + std::to_string(ratio) + ")");
    const Complex xw = x.with_prec(wp), yw = y.with_prec(wp);
    const Complex disc = 1 - yw * 4L;
    // T_n = sum_m C(n,2m) C(2m,m) y^m: (n+1) T_{n+1} = (2n+1) T_n - n (1 - 4y) T_{n-1}
    Complex Tprev(0L, wp), T(1L, wp), xn(1L, wp), sum(wp);
    USeq u(cs, wp);
    TailEstimator tail(16, std::log2(ratio));
    const double ltarget = -double(P) + 8;
    for (long n = 0;; ++n) {
        if (n > max_terms) throw ConvergenceError("double series not converged after " + std::to_string(max_terms) + " terms");
        Complex term = T * xn * u.value();
        sum += term;
        tail.push(log2_abs(abs(term)));
        if (n >= 32 && tail.log2_tail() < ltarget + std::max(0.0, log2_abs(abs(sum)))) break;
        Complex Tn = (T * (2 * n + 1) - Tprev * disc * n) / (n + 1);
        Tprev = T;
        T = Tn;
        xn *= xw;
        u.next();
    }
    return sum.with_prec(P);
}

SeriesValue eval_series(const SeriesSpec& s, const SeriesOptions& opt)
{
    const double rn = n_order_ratio(s.cs, s.x, s.y), rm = m_order_ratio(s.cs, s.x, s.y);
    const double bits = double(opt.precision) * std::log(2.0);
    SumOrder order = opt.order;
    if (order == SumOrder::Auto) {
        const double inf = std::numeric_limits<double>::infinity();
        double cost_n = inf, cost_m = inf;
        if (rn < 1) {
            double N = bits / -std::log(rn) + 48;
            double lq = std::log2(s.y.get_den().get_d()) / 2 + std::log2(s.cs.growth() + 1);
            cost_n = N + N * N * lq / 6400;
        }
        if (rm < 1) {
            double M = rm > 0 ? bits / -std::log(rm) + 6 : 1;
            double zmax = std::abs(s.x.get_d()) * s.cs.growth();
            double L = zmax > 0 ? bits / -std::log(zmax) + 48 : 1;
            cost_m = 3 * M * (L + 2 * M);
        }
        if (std::isinf(cost_n) && std::isinf(cost_m))
            throw ConvergenceError("series diverges in both summation orders (n-order ratio " + std::to_string(rn) +
                                   ")");
        order = cost_n <= cost_m ? SumOrder::NOuter : SumOrder::MOuter;
    }
    return order == SumOrder::NOuter ? sum_n_outer(s, opt, rn) : sum_m_outer(s, opt, rm);
}

// ---------------------------------------------------------------- verification

namespace {

struct Attempt {
    bool ok = false;
    std::string error;
    Real err, tail;
    long terms = 0;
};

Attempt attempt(const TableRow& row, const mpq_class& x, const mpq_class& y, const ConstExpr& C, prec_t P,
                const Real& tol, long max_terms)
{
    Attempt a;
    try {
        SeriesSpec s{row.cs, x, y, row.A, row.B, row.weight};
        SeriesOptions opt;
        opt.precision = P;
        opt.max_terms = max_terms;
        SeriesValue v = eval_series(s, opt);
        const prec_t wp = P + 48;
        Real target = C.eval(wp) / pi_const(wp);
        a.err = abs(v.value - target);
        a.tail = v.tail_bound;
        a.terms = v.terms;
        a.ok = a.err < tol && a.tail < tol;
    } catch (const std::exception& e) {
        a.error = e.what();
    }
    return a;
}

std::string fmt(const Real& r) { return r.str(3); }

} // namespace

VerifyReport verify_row(const TableRow& row, prec_t P, const Real& tol, long max_terms)
{
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.id = row.id;
    rep.precision_bits = P;
    const long mt = row.max_terms > 0 ? row.max_terms : max_terms;
    Attempt a = attempt(row, row.x, row.y, row.C, P, tol, mt);
    rep.variant = "printed";
    const bool has_alt = row.alt_x || row.alt_y || row.alt_C;
    if (!a.ok && has_alt) {
        std::string keys;
        auto add = [&](const char* k) { keys += keys.empty() ? k : std::string("+") + k; };
        if (row.alt_x) add("alt_x");
        if (row.alt_y) add("alt_y");
        if (row.alt_C) add("alt_C");
        Attempt b = attempt(row, row.alt_x.value_or(row.x), row.alt_y.value_or(row.y), row.alt_C.value_or(row.C), P,
                            tol, mt);
        rep.notes.push_back("printed values " +
                            (a.error.empty() ? "fail (|sum - C/pi| = " + fmt(a.err) + ")" : "error: " + a.error));
        rep.notes.push_back(keys + " variant " +
                            (b.error.empty() ? std::string(b.ok ? "passes" : "fails") + " (|sum - C/pi| = " +
                                                   fmt(b.err) + ")"
                                             : "error: " + b.error));
        if (b.ok) {
            a = b;
            rep.variant = keys;
        }
    }
    rep.pass = a.ok;
    rep.error = a.error;
    if (a.error.empty()) {
        rep.achieved = a.err;
        rep.tail_bound = a.tail;
    }
    rep.terms = a.terms;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

VerifySummary verify_all(const std::vector<TableRow>& rows, prec_t P, const Real& tol,
                         const std::optional<std::regex>& filter, long max_terms)
{
    VerifySummary s;
    for (const auto& r : rows) {
        if (filter && !std::regex_search(r.id, *filter)) continue;
        s.reports.push_back(verify_row(r, P, tol, max_terms));
        (s.reports.back().pass ? s.passed : s.failed)++;
    }
    return s;
}

std::string reports_json(const std::vector<VerifyReport>& reports)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports)
        arr.push_back({{"id", r.id},
                       {"status", r.status()},
                       {"error", r.error},
                       {"terms", r.terms},
                       {"seconds", r.seconds},
                       {"precision_bits", long(r.precision_bits)}});
    return arr.dump(2);
}

RederiveResult rederive_row(const TableRow& row, prec_t P, const Real& tol)
{
    RederiveResult res;
    res.id = row.id;
    const long d1 = row.discs.front(), d2 = row.discs.back();
    struct Variant {
        std::string name;
        mpq_class x, y;
    };
    std::vector<Variant> variants{{"printed", row.x, row.y}};
    if (row.alt_x || row.alt_y)
        variants.push_back({"alt", row.alt_x.value_or(row.x), row.alt_y.value_or(row.y)});
    std::vector<std::pair<std::string, ConstExpr>> consts{{"printed", row.C}};
    if (row.alt_C) consts.push_back({"alt_C", *row.alt_C});
    const prec_t wp = P + 48;
    const Real A(row.A, wp);
    const Real match_tol = pow2(-long(P) / 2, wp);
    Real best(std::numeric_limits<double>::infinity(), wp);
    // printed discriminants, then other level scales, then other orders of the same field
    struct Search {
        long d1, d2;
        bool wide;
    };
    std::vector<Search> searches{{d1, d2, false}, {d1, d2, true}};
    {
        std::vector<long> field;
        for (long d : {d1, d2}) {
            DiscFactor df = fundamental(d);
            for (long f = 1; f <= 2 * df.r; ++f)
                if (std::find(field.begin(), field.end(), df.d0 * f * f) == field.end()) field.push_back(df.d0 * f * f);
        }
        for (size_t i = 0; i < field.size(); ++i)
            for (size_t j = i; j < field.size(); ++j) {
                long a = field[i], b = field[j];
                if ((a == d1 && b == d2) || (a == d2 && b == d1)) continue;
                searches.push_back({a, b, false});
            }
    }
    for (const auto& sr : searches)
        for (const auto& v : variants) {
            std::vector<CMPair> pairs;
            try {
                pairs = find_cm_pairs(row.cs, sr.d1, sr.d2, v.x, v.y, P, match_tol, sr.wide);
            } catch (const std::exception& e) {
                res.error = e.what();
                continue;
            }
            if (pairs.empty()) continue;
            res.found = true;
            SeriesOptions opt;
            opt.precision = P;
            opt.max_terms = row.max_terms > 0 ? row.max_terms : 100000;
            Complex S0;
            try {
                S0 = Complex(eval_series({row.cs, v.x, v.y, 0, 1, Weight::N}, opt).value);
            } catch (const std::exception& e) {
                res.error = e.what();
                continue;
            }
            for (const auto& pr : pairs) {
                auto cc = align_representatives(row.cs, pr.q1, pr.q2, S0, P, match_tol);
                if (!cc) continue;
                res.aligned = true;
                Constants k = theorem_constants(*cc);
                Complex rb = row.weight == Weight::N ? k.B1 : k.B2;
                Complex rc = row.weight == Weight::N ? k.C1 : k.C2;
                Real eb = abs(rb - Complex(Real(row.B, wp) / A));
                for (const auto& [cname, C] : consts) {
                    Real ec = abs(rc - Complex(C.eval(wp) / A));
                    Real worst = max(eb, ec);
                    if (worst < best) {
                        best = worst;
                        res.q1 = cc->p1.Q;
                        res.q2 = cc->p2.Q;
                        res.k = k;
                        res.ratio_B = rb;
                        res.ratio_C = rc;
                        res.err_B = eb;
                        res.err_C = ec;
                        res.variant = v.name + (cname == "printed" ? "" : "+" + cname);
                        res.pass = eb < tol && ec < tol;
                    }
                }
                if (res.pass) return res;
            }
        }
    if (!res.found && res.error.empty()) res.error = "no CM pair reproduces (x, y)";
    else if (res.found && !res.aligned && res.error.empty()) res.error = "no representatives match the series value";
    else if (!res.pass && res.error.empty()) res.error = "constants do not match";
    return res;
}

} // namespace bimod
