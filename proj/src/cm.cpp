#include "bimod/cm.hpp"
#include "bimod/modular.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bimod {

namespace {

using i128 = __int128;

long mod(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

long floor_div(long a, long b)
{
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Returns g = gcd(a, b) with x a + y b = g.
long ext_gcd(long a, long b, long& x, long& y)
{
    if (b == 0) {
        x = a < 0 ? -1 : 1;
        y = 0;
        return std::abs(a);
    }
    long x1, y1;
    long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

long checked(i128 v)
{
    if (v > i128(std::numeric_limits<long>::max()) || v < i128(std::numeric_limits<long>::min()))
        throw std::overflow_error("quadratic form coefficient overflow");
    return long(v);
}

QuadForm scale(const QuadForm& Q, long k) { return {Q.A * k, Q.B * k, Q.C * k}; }

// Translate tau by an integer so that B lies in (-A, A].
QuadForm translate_B(const QuadForm& Q, long* shift = nullptr)
{
    // B - 2Ak in (-A, A]  <=>  k = ceil((B - A) / 2A)
    long k = -floor_div(-(Q.B - Q.A), 2 * Q.A);
    if (shift) *shift = k;
    return act({1, k, 0, 1}, Q);
}

} // namespace

// ---------------------------------------------------------------- basics

long QuadForm::content() const { return std::gcd(std::gcd(std::abs(A), std::abs(B)), std::abs(C)); }

std::string QuadForm::str() const
{
    std::ostringstream os;
    os << '[' << A << ',' << B << ',' << C << ']';
    return os.str();
}

Mat2 Mat2::operator*(const Mat2& o) const
{
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

std::string Mat2::str() const
{
    std::ostringstream os;
    os << '(' << a << ',' << b << ';' << c << ',' << d << ')';
    return os.str();
}

bool LevelGroup::bottom_row_ok(long c, long d) const
{
    if (mod(c, N) != 0) return false;
    if (std::gcd(std::abs(c), std::abs(d)) != 1) return false;
    if (gamma1) {
        long r = mod(d, N);
        return r == 1 || r == N - 1;
    }
    return true;
}

bool LevelGroup::contains(const Mat2& m) const
{
    if (m.det() != 1) return false;
    return bottom_row_ok(m.c, m.d);
}

LevelGroup LevelGroup::of(const SeriesCase& cs) { return {cs.group.level, cs.group.gamma1}; }

std::string LevelGroup::str() const
{
    return std::string(gamma1 ? "Gamma1(" : "Gamma0(") + std::to_string(N) + ")";
}

QuadForm act(const Mat2& M, const QuadForm& Q)
{
    i128 A = Q.A, B = Q.B, C = Q.C, a = M.a, b = M.b, c = M.c, d = M.d;
    return {checked(A * d * d - B * c * d + C * c * c), checked(-2 * A * b * d + B * (a * d + b * c) - 2 * C * a * c),
            checked(A * b * b - B * a * b + C * a * a)};
}

QuadForm primitive(const QuadForm& Q)
{
    long g = Q.content();
    if (g == 0) throw std::invalid_argument("zero quadratic form");
    return {Q.A / g, Q.B / g, Q.C / g};
}

QuadForm conjugate(const QuadForm& Q) { return {Q.A, -Q.B, Q.C}; }

namespace {

long level_scale(const LevelGroup& G, const QuadForm& P)
{
    if (G.gamma1) return (mod(P.A, G.N) == 0 && mod(P.B, G.N) == 0) ? 1 : G.N;
    return G.N / std::gcd(long(G.N), std::abs(P.A));
}

} // namespace

QuadForm level_form(const LevelGroup& G, const QuadForm& Q)
{
    if (Q.A <= 0 || Q.disc() >= 0) throw std::invalid_argument("not a positive definite form: " + Q.str());
    QuadForm P = primitive(Q);
    return scale(P, level_scale(G, P));
}

QuadForm canonical(const LevelGroup& G, const QuadForm& Q, Mat2* to_canonical)
{
    const long D = -Q.disc();
    if (Q.A <= 0 || D <= 0) throw std::invalid_argument("not a positive definite form: " + Q.str());
    long s0;
    QuadForm best = translate_B(Q, &s0);
    Mat2 best_m{1, s0, 0, 1};
    // A' = A |c tau + d|^2 <= A forces c^2 |d| <= 4 A^2 and |d - cB/2A| <= 1.
    for (long c = G.N; i128(c) * c * D <= i128(4) * Q.A * Q.A; c += G.N) {
        long lo = floor_div(c * Q.B, 2 * Q.A) - 1;
        for (long d = lo; d <= lo + 3; ++d) {
            if (!G.bottom_row_ok(c, d)) continue;
            i128 Ap = i128(Q.A) * d * d - i128(Q.B) * c * d + i128(Q.C) * c * c;
            if (Ap > Q.A || Ap > best.A) continue;
            long x, y;
            ext_gcd(d, -c, x, y);  // x d - y c = 1
            Mat2 m{x, y, c, d};
            if (m.det() != 1) throw std::logic_error("canonical: bad completion");
            long s;
            QuadForm R = translate_B(act(m, Q), &s);
            if (R < best) {
                best = R;
                best_m = Mat2{1, s, 0, 1} * m;
            }
        }
    }
    if (to_canonical) *to_canonical = best_m;
    return best;
}

bool equivalent(const LevelGroup& G, const QuadForm& Q1, const QuadForm& Q2)
{
    return Q1.disc() == Q2.disc() && canonical(G, Q1) == canonical(G, Q2);
}

bool is_reduced(const QuadForm& Q)
{
    if (!(std::abs(Q.B) <= Q.A && Q.A <= Q.C)) return false;
    if ((std::abs(Q.B) == Q.A || Q.A == Q.C) && Q.B < 0) return false;
    return true;
}

QuadForm reduce(const QuadForm& Q, Mat2* M)
{
    if (Q.A <= 0 || Q.disc() >= 0) throw std::invalid_argument("not a positive definite form: " + Q.str());
    Mat2 acc;
    QuadForm R = Q;
    const Mat2 S{0, -1, 1, 0};
    for (int guard = 0; guard < 100000; ++guard) {
        long s;
        R = translate_B(R, &s);
        acc = Mat2{1, s, 0, 1} * acc;
        if (R.A > R.C || (R.A == R.C && R.B < 0)) {
            R = act(S, R);
            acc = S * acc;
            continue;
        }
        if (M) *M = acc;
        return R;
    }
    throw std::runtime_error("reduce: no convergence");
}

bool valid_discriminant(long d) { return d < 0 && (mod(d, 4) == 0 || mod(d, 4) == 1); }

std::vector<QuadForm> class_forms(long d)
{
    if (!valid_discriminant(d)) throw std::invalid_argument("invalid discriminant " + std::to_string(d));
    std::vector<QuadForm> out;
    const long D = -d;
    for (long a = 1; 3 * a * a <= D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            if (mod(b - d, 2) != 0) continue;
            long num = b * b - d;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            QuadForm q{a, b, c};
            if (q.content() != 1) continue;
            out.push_back(q);
        }
    return out;
}

long class_number(long d) { return long(class_forms(d).size()); }

DiscFactor fundamental(long d)
{
    if (!valid_discriminant(d)) throw std::invalid_argument("invalid discriminant " + std::to_string(d));
    long n = -d, s = 1, k = 1;
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) k *= p;
        if (e % 2) s *= p;
    }
    s *= n;
    s = -s;  // squarefree kernel, d = s k^2
    if (mod(s, 4) == 1) return {s, k};
    return {4 * s, k / 2};
}

std::vector<Mat2> coset_reps(const LevelGroup& G)
{
    std::vector<Mat2> reps{Mat2{}};
    std::deque<Mat2> queue{Mat2{}};
    const Mat2 gens[] = {{0, -1, 1, 0}, {1, 1, 0, 1}};
    while (!queue.empty()) {
        Mat2 g = queue.front();
        queue.pop_front();
        for (const auto& s : gens) {
            Mat2 h = g * s;
            bool seen = false;
            for (const auto& r : reps)
                if (G.contains(h * r.inverse_sl2())) {
                    seen = true;
                    break;
                }
            if (!seen) {
                reps.push_back(h);
                queue.push_back(h);
            }
        }
    }
    return reps;
}

std::vector<QuadForm> cm_points(const LevelGroup& G, long d)
{
    if (!valid_discriminant(d)) return {};
    static std::map<std::pair<int, bool>, std::vector<Mat2>> cache;
    auto& reps = cache[{G.N, G.gamma1}];
    if (reps.empty()) reps = coset_reps(G);
    std::set<QuadForm> pts;
    for (long k = 1; k <= G.N; ++k) {
        if (G.N % k != 0 || d % (k * k) != 0 || !valid_discriminant(d / (k * k))) continue;
        for (const auto& f : class_forms(d / (k * k)))
            for (const auto& g : reps) {
                QuadForm q = act(g, f);
                if (level_scale(G, q) != k) continue;
                pts.insert(canonical(G, scale(q, k)));
            }
    }
    return {pts.begin(), pts.end()};
}

long ogg_count(long d)
{
    DiscFactor f = fundamental(d);
    long n = class_number(d);
    for (long p : {2L, 3L}) {
        if (f.r % p == 0)
            n *= 2;
        else
            n *= 1 + kronecker(mpz_class(d), mpz_class(p));
    }
    return n;
}

QuadForm apply_matrix(const LevelGroup& G, const QuadForm& Q, const Mat2& M)
{
    if (M.det() <= 0) throw std::invalid_argument("matrix must have positive determinant");
    return canonical(G, level_form(G, act(M, Q)));
}

Mat2 atkin_lehner_matrix(int N, int m)
{
    if (m <= 0 || N % m != 0 || std::gcd(m, N / m) != 1)
        throw std::invalid_argument("not an exact divisor: " + std::to_string(m) + " of " + std::to_string(N));
    if (m == N) return {0, -1, N, 0};
    // (m, y; N, m w) with m w - (N/m) y = 1.
    long w, y;
    ext_gcd(m, N / m, w, y);
    return {m, -y, N, m * w};
}

QuadForm atkin_lehner(const LevelGroup& G, const QuadForm& Q, int m)
{
    return apply_matrix(G, Q, atkin_lehner_matrix(G.N, m));
}

// ---------------------------------------------------------------- Galois orbit labels

namespace {

long vp(long n, long p)
{
    long e = 0;
    n = std::abs(n);
    while (n != 0 && n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

std::string label(int k) { return "C" + std::to_string(k); }

[[noreturn]] void uncovered(int N, long d)
{
    throw std::domain_error("discriminant " + std::to_string(d) + " not covered by the level " + std::to_string(N) +
                            " orbit classification");
}

std::string classify8(const QuadForm& Q)
{
    const long d = Q.disc();
    const DiscFactor f = fundamental(d);
    const long B = mod(Q.B, 16);
    const bool Ceven = mod(Q.C, 2) == 0;
    const long e2 = vp(f.r, 2);
    if (mod(d, 64) == 0) {
        if (B == 0) return label(Ceven ? 1 : 2);
        if (B == 8) return label(Ceven ? 3 : 4);
        uncovered(8, d);
    }
    if (mod(d, 8) == 1) {
        long b = 0;
        while (mod(b * b - d, 32) != 0) ++b;
        if (B == mod(b, 16)) return label(1);
        if (B == mod(-b, 16)) return label(2);
        uncovered(8, d);
    }
    if (mod(f.d0, 8) == 1 && e2 == 1) {
        long b1 = 0, b2 = 0;
        while (mod(b1 * b1 - f.d0, 16) != 8) ++b1;
        while (mod(b2 * b2 - f.d0, 16) != 0) ++b2;
        if (B == mod(2 * b1, 16)) return label(1);
        if (B == mod(-2 * b1, 16)) return label(2);
        if (B == mod(2 * b2, 16)) return label(Ceven ? 3 : 4);
        if (B == mod(-2 * b2, 16)) return label(Ceven ? 5 : 6);
        uncovered(8, d);
    }
    if (mod(f.d0, 2) == 1 && e2 == 2) {
        if (B == 4) return label(Ceven ? 1 : 2);
        if (B == 12) return label(Ceven ? 3 : 4);
        uncovered(8, d);
    }
    if (vp(f.d0, 2) == 2 && e2 == 1) {
        if (B == 4) return label(1);
        if (B == 12) return label(2);
        uncovered(8, d);
    }
    if (vp(f.d0, 2) == 3 && e2 == 1) {
        if (B == 0) return label(1);
        if (B == 8) return label(2);
        uncovered(8, d);
    }
    uncovered(8, d);
}

std::string classify9(const QuadForm& Q)
{
    const long d = Q.disc();
    const DiscFactor f = fundamental(d);
    const long B = mod(Q.B, 9);
    const bool C3 = mod(Q.C, 3) == 0;
    const long e3 = vp(f.r, 3);
    if (mod(d, 27) == 0) {
        if (B == 3) return label(1);
        if (B == 6) return label(2);
        if (B == 0) return label(C3 ? 4 : 3);
        uncovered(9, d);
    }
    if (mod(f.d0, 3) == 1 && e3 == 0) {
        long b = 0;
        while (mod(b * b - d, 9) != 0) ++b;
        if (B == b) return label(1);
        if (B == mod(-b, 9)) return label(2);
        uncovered(9, d);
    }
    if (mod(f.d0, 3) == 1 && e3 == 1) {
        if (B == 3) return label(C3 ? 2 : 1);
        if (B == 6) return label(C3 ? 4 : 3);
        if (B == 0) return label(5);
        uncovered(9, d);
    }
    if (mod(f.d0, 3) == 2 && e3 == 1) {
        if (B == 3) return label(1);
        if (B == 6) return label(2);
        if (B == 0) return label(3);
        uncovered(9, d);
    }
    uncovered(9, d);
}

} // namespace

std::string classify_orbit(int N, const QuadForm& Q)
{
    if (mod(Q.A, N) != 0) throw std::invalid_argument("form " + Q.str() + " is not a level form");
    if (N == 8) return classify8(Q);
    if (N == 9) return classify9(Q);
    throw std::invalid_argument("orbit classification is only available for levels 8 and 9");
}

// ---------------------------------------------------------------- points

Complex tau_of(const QuadForm& Q, prec_t p)
{
    Real im = sqrt(Real(-Q.disc(), p)) / (2 * Q.A);
    return Complex(Real(rat(-Q.B, 2 * Q.A), p), im);
}

TauAlpha tau_alpha(const QuadForm& Q, prec_t p) { return {tau_of(Q, p), Mat2{-Q.B, -2 * Q.C, 2 * Q.A, Q.B}}; }

std::pair<mpq_class, mpq_class> tau_exact(const QuadForm& Q) { return {rat(-Q.B, 2 * Q.A), rat(1, 2 * Q.A)}; }

std::vector<CMPair> find_cm_pairs(const SeriesCase& cs, long d1, long d2, const mpq_class& x, const mpq_class& y,
                                  prec_t p, const Real& tol, bool all_scales)
{
    const LevelGroup G = LevelGroup::of(cs);
    auto points = [&](long d) {
        std::set<long> ds{d};
        if (G.N == 8) ds.insert(4 * d);
        if (G.N == 8 && d % 4 == 0) ds.insert(d / 4);
        if (all_scales)
            for (long k = 2; k <= G.N; ++k) {
                if (G.N % k != 0) continue;
                ds.insert(d * k * k);
                if (d % (k * k) == 0) ds.insert(d / (k * k));
            }
        std::vector<QuadForm> v;
        for (long e : ds) {
            auto w = cm_points(G, e);
            v.insert(v.end(), w.begin(), w.end());
        }
        return v;
    };
    struct Pt {
        QuadForm q;
        CaseValue v;
    };
    std::map<QuadForm, CaseValue> cache;
    auto eval = [&](const std::vector<QuadForm>& qs) {
        std::vector<Pt> out;
        for (const auto& q : qs) {
            auto it = cache.find(q);
            if (it == cache.end()) it = cache.emplace(q, case_eval(cs, tau_of(q, p), p)).first;
            out.push_back({q, it->second});
        }
        return out;
    };
    const auto P1 = eval(points(d1));
    const auto P2 = d2 == d1 ? P1 : eval(points(d2));
    const Real xt(x, p), yt(y, p);
    const Real one(1L, p);
    std::vector<CMPair> out;
    std::set<std::pair<QuadForm, QuadForm>> seen;
    for (const auto& a : P1)
        for (const auto& b : P2) {
            if (a.q == b.q) continue;
            auto key = std::minmax(a.q, b.q);
            if (!seen.insert(key).second) continue;
            XYF r = xyF_from(cs, a.v.X, b.v.X, a.v.f, b.v.f);
            if (!(abs(r.x - Complex(xt)) < tol * max(one, abs(xt)))) continue;
            if (!(abs(r.y - Complex(yt)) < tol * max(one, abs(yt)))) continue;
            out.push_back({a.q, b.q, r.x, r.y});
        }
    return out;
}

} // namespace bimod
