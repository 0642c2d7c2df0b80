#include "bimod/powerseries.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bimod {

BiSeries::BiSeries(int order, std::array<std::string, 2> names) : order_(order), names_(std::move(names)) {}

BiSeries BiSeries::constant(const mpq_class& c, int order, std::array<std::string, 2> names)
{
    BiSeries s(order, std::move(names));
    s.set(0, 0, c);
    return s;
}

BiSeries BiSeries::monomial(int i, int j, const mpq_class& c, int order, std::array<std::string, 2> names)
{
    BiSeries s(order, std::move(names));
    s.set(i, j, c);
    return s;
}

mpq_class BiSeries::coeff(int i, int j) const
{
    auto it = c_.find({i, j});
    return it == c_.end() ? mpq_class(0) : it->second;
}

void BiSeries::set(int i, int j, const mpq_class& v)
{
    if (i < 0 || j < 0 || i + j > order_) return;
    if (v == 0) c_.erase({i, j});
    else c_[{i, j}] = v;
}

void BiSeries::add_to(int i, int j, const mpq_class& v)
{
    if (i < 0 || j < 0 || i + j > order_ || v == 0) return;
    auto& slot = c_[{i, j}];
    slot += v;
    if (slot == 0) c_.erase({i, j});
}

void BiSeries::prune()
{
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second == 0 || it->first.first + it->first.second > order_) it = c_.erase(it);
        else ++it;
    }
}

int BiSeries::valuation() const
{
    int v = order_ + 1;
    for (auto& [k, _] : c_) v = std::min(v, k.first + k.second);
    return v;
}

BiSeries BiSeries::truncated(int order) const
{
    BiSeries r(order, names_);
    for (auto& [k, v] : c_) r.set(k.first, k.second, v);
    return r;
}

BiSeries BiSeries::operator+(const BiSeries& o) const
{
    BiSeries r(std::min(order_, o.order_), names_);
    for (auto& [k, v] : c_) r.add_to(k.first, k.second, v);
    for (auto& [k, v] : o.c_) r.add_to(k.first, k.second, v);
    return r;
}

BiSeries& BiSeries::operator+=(const BiSeries& o)
{
    *this = *this + o;
    return *this;
}

BiSeries BiSeries::operator-() const
{
    BiSeries r(*this);
    for (auto& [k, v] : r.c_) v = -v;
    return r;
}

BiSeries BiSeries::operator-(const BiSeries& o) const { return *this + (-o); }

BiSeries BiSeries::operator*(const BiSeries& o) const
{
    BiSeries r(std::min(order_, o.order_), names_);
    int D = r.order_;
    for (auto& [ka, va] : c_) {
        int da = ka.first + ka.second;
        for (auto& [kb, vb] : o.c_) {
            if (da + kb.first + kb.second > D) continue;
            r.add_to(ka.first + kb.first, ka.second + kb.second, va * vb);
        }
    }
    return r;
}

BiSeries BiSeries::operator*(const mpq_class& s) const
{
    BiSeries r(order_, names_);
    if (s == 0) return r;
    for (auto& [k, v] : c_) r.c_[k] = v * s;
    return r;
}

BiSeries BiSeries::shift(int di, int dj) const
{
    BiSeries r(order_, names_);
    for (auto& [k, v] : c_) r.set(k.first + di, k.second + dj, v);
    return r;
}

BiSeries BiSeries::theta_x() const
{
    BiSeries r(order_, names_);
    for (auto& [k, v] : c_) r.set(k.first, k.second, v * k.first);
    return r;
}

BiSeries BiSeries::theta_y() const
{
    BiSeries r(order_, names_);
    for (auto& [k, v] : c_) r.set(k.first, k.second, v * k.second);
    return r;
}

BiSeries BiSeries::inverse() const
{
    mpq_class c0 = constant_term();
    if (c0 == 0) throw std::domain_error("BiSeries::inverse: zero constant term");
    // 1/S = (1/c0) * sum_k (-u)^k with u = S/c0 - 1
    BiSeries u = (*this) * mpq_class(1 / c0);
    u.set(0, 0, 0);
    std::vector<mpq_class> geo(order_ + 1);
    for (int k = 0; k <= order_; ++k) geo[k] = (k % 2) ? -1 : 1;
    return compose(geo, u) * mpq_class(1 / c0);
}

BiSeries BiSeries::pow(unsigned long e) const
{
    BiSeries result = constant(1, order_, names_);
    BiSeries base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

BiSeries BiSeries::binomial_series(const BiSeries& u, const mpq_class& e)
{
    if (u.constant_term() != 0) throw std::domain_error("binomial_series: nonzero constant term");
    std::vector<mpq_class> coeffs(u.order_ + 1);
    mpq_class c = 1;
    for (int k = 0; k <= u.order_; ++k) {
        coeffs[k] = c;
        c = c * (e - k) / (k + 1);
    }
    return compose(coeffs, u);
}

BiSeries BiSeries::compose(const std::vector<mpq_class>& coeffs, const BiSeries& z)
{
    if (z.constant_term() != 0) throw std::domain_error("compose: inner series has a constant term");
    int D = z.order_;
    // Horner from the top; z has valuation >= 1 so only D+1 coefficients matter
    int K = std::min<int>(int(coeffs.size()) - 1, D);
    BiSeries acc(D, z.names_);
    for (int k = K; k >= 0; --k) acc = acc * z + constant(coeffs[k], D, z.names_);
    return acc;
}

std::optional<BiSeries::Key> BiSeries::first_difference(const BiSeries& o) const
{
    int D = std::min(order_, o.order_);
    for (int deg = 0; deg <= D; ++deg)
        for (int i = 0; i <= deg; ++i)
            if (coeff(i, deg - i) != o.coeff(i, deg - i)) return Key{i, deg - i};
    return std::nullopt;
}

std::string BiSeries::str(int max_terms) const
{
    std::vector<std::pair<Key, mpq_class>> v(c_.begin(), c_.end());
    std::stable_sort(v.begin(), v.end(), [](auto& a, auto& b) {
        int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        return da != db ? da < db : a.first.first > b.first.first;
    });
    std::ostringstream os;
    int shown = 0;
    for (auto& [k, c] : v) {
        if (shown == max_terms) { os << " + ..."; break; }
        if (shown) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        mpq_class a = abs(c);
        bool unit = a == 1 && (k.first || k.second);
        if (!unit) os << a.get_str();
        auto var = [&](int e, const std::string& nm) {
            if (!e) return;
            if (!unit) os << "*";
            os << nm;
            if (e > 1) os << "^" << e;
            unit = false;
        };
        var(k.first, names_[0]);
        var(k.second, names_[1]);
        ++shown;
    }
    if (!shown) os << "0";
    os << " + O(" << order_ + 1 << ")";
    return os.str();
}

// ---------------------------------------------------------------- F and WZ

BiSeries series_F(const SeriesCase& cs, int order)
{
    auto u = apery_seq(cs, order);
    BiSeries F(order);
    for (int n = 0; n <= order; ++n)
        for (int m = 0; 2 * m <= n && n + m <= order; ++m)
            F.set(n, m, u[n] * mpq_class(double_coeff(n, m)));
    return F;
}

XYSeries substitute_xy(const SeriesCase& cs, int order)
{
    if (order < 2) throw std::invalid_argument("substitute_xy: order must be at least 2 to resolve y");
    std::array<std::string, 2> nm{"X", "Y"};
    mpq_class a = cs.poly_a(), c = cs.poly_c();
    BiSeries X = BiSeries::monomial(1, 0, 1, order, nm), Y = BiSeries::monomial(0, 1, 1, order, nm);
    BiSeries one = BiSeries::constant(1, order, nm);
    BiSeries XY = X * Y;
    BiSeries num = (X + Y) * (one + XY * c) - XY * mpq_class(2 * a);
    BiSeries den_inv = (one - XY * c).inverse();
    BiSeries den2 = den_inv * den_inv;
    BiSeries px = one - X * a + X * X * c, py = one - Y * a + Y * Y * c;
    XYSeries r{num * den2, XY * px * py * den2 * den2};
    return r;
}

CheckReport wz_check(const SeriesCase& cs, int order)
{
    CheckReport rep;
    rep.order = order;
    rep.trusted_degree = order;
    XYSeries s = substitute_xy(cs, order);
    auto u = apery_seq(cs, order);
    std::array<std::string, 2> nm{"X", "Y"};

    // x^n y^m = x^(n-2m) w^m; x has valuation 1 and w valuation 2
    std::vector<BiSeries> xp{BiSeries::constant(1, order, nm)}, wp{BiSeries::constant(1, order, nm)};
    for (int k = 1; k <= order; ++k) xp.push_back(xp.back() * s.x);
    for (int k = 1; 2 * k <= order; ++k) wp.push_back(wp.back() * s.x2y);
    BiSeries lhs(order, nm);
    for (int n = 0; n <= order; ++n)
        for (int m = 0; 2 * m <= n; ++m)
            lhs += (xp[n - 2 * m] * wp[m]) * (u[n] * mpq_class(double_coeff(n, m)));

    BiSeries gx(order, nm), gy(order, nm);
    for (int n = 0; n <= order; ++n) {
        gx.set(n, 0, u[n]);
        gy.set(0, n, u[n]);
    }
    BiSeries rhs = (BiSeries::constant(1, order, nm) - BiSeries::monomial(1, 1, cs.poly_c(), order, nm)) * gx * gy;
    auto bad = lhs.first_difference(rhs);
    if (bad) {
        rep.ok = false;
        rep.first_bad = bad;
        rep.lhs = lhs.coeff(bad->first, bad->second);
        rep.rhs = rhs.coeff(bad->first, bad->second);
    }
    return rep;
}

CheckReport brafman_check(const mpq_class& a, int order)
{
    CheckReport rep;
    rep.order = order;
    rep.trusted_degree = order;
    std::array<std::string, 2> nm{"x", "t"};
    SeriesCase hc = SeriesCase::make_hypergeometric(a);
    auto u = apery_seq(hc, order);

    BiSeries lhs(order, nm);
    for (int n = 0; n <= order; ++n) {
        // P_n(x) = sum_m C(2m,m) C(n,2m) ((x^2-1)/4)^m x^(n-2m), expanded in x
        for (int m = 0; 2 * m <= n; ++m) {
            mpq_class w = u[n] * mpq_class(double_coeff(n, m)) / mpq_class(mpz_class(1) << (2 * m));
            for (int k = 0; k <= m; ++k) {
                mpq_class term = w * mpq_class(binom(m, k)) * ((m - k) % 2 ? -1 : 1);
                lhs.add_to(n - 2 * m + 2 * k, n, term);
            }
        }
    }

    BiSeries one = BiSeries::constant(1, order, nm);
    BiSeries t = BiSeries::monomial(0, 1, 1, order, nm);
    BiSeries xt = BiSeries::monomial(1, 1, 1, order, nm);
    BiSeries rho = BiSeries::binomial_series(t * t - xt * mpq_class(2), mpq_class(1, 2));
    BiSeries z1 = (one - t - rho) * mpq_class(1, 2);
    BiSeries z2 = (one + t - rho) * mpq_class(1, 2);
    BiSeries rhs = BiSeries::compose(u, z1) * BiSeries::compose(u, z2);

    auto bad = lhs.first_difference(rhs);
    if (bad) {
        rep.ok = false;
        rep.first_bad = bad;
        rep.lhs = lhs.coeff(bad->first, bad->second);
        rep.rhs = rhs.coeff(bad->first, bad->second);
    }
    return rep;
}

// ---------------------------------------------------------------- PDEs

std::string PDESystem::name() const
{
    switch (kind) {
    case Kind::Sporadic: return "sporadic(" + cs.name + ")";
    case Kind::Hyper: return "hyper(" + cs.name + ")";
    case Kind::T2n: return "t2n";
    case Kind::RogersStraub: return "rs";
    case Kind::Cubic: return "cubic";
    }
    return "?";
}

PDESystem PDESystem::by_name(const std::string& s)
{
    if (s == "t2n" || s == "T2n") return t2n();
    if (s == "rs" || s == "rogers-straub") return rogers_straub();
    if (s == "cubic" || s == "t3n") return cubic();
    SeriesCase cs = case_by_name(s);
    return cs.sporadic() ? sporadic(cs) : PDESystem{Kind::Hyper, cs};
}

std::vector<PDESystem> PDESystem::all()
{
    std::vector<PDESystem> v;
    for (auto& cs : sporadic_cases()) v.push_back(sporadic(cs));
    for (auto& cs : hypergeometric_cases()) v.push_back({Kind::Hyper, cs});
    v.push_back(t2n());
    v.push_back(rogers_straub());
    v.push_back(cubic());
    return v;
}

std::array<Operator, 2> pde_operators(const PDESystem& sys)
{
    using Q = mpq_class;
    // theta_y^2 - y (2 theta_y - k theta_x + 1)(2 theta_y - k theta_x)
    auto second = [](long k) {
        return Operator{
            {0, 0, [](long, long m) { return Q(m * m); }},
            {0, 1, [k](long n, long m) { return Q(-(2 * m - k * n + 1) * (2 * m - k * n)); }},
        };
    };
    switch (sys.kind) {
    case PDESystem::Kind::Sporadic: {
        Q a = sys.cs.a, b = sys.cs.b, c = sys.cs.c;
        Operator e1{
            {0, 0, [](long n, long m) { return Q(n * (n - 2 * m)); }},
            {1, 0, [a, b](long n, long) { return Q(-(a * n * n + a * n + b)); }},
            {2, 0, [c](long n, long m) { return Q(c * (n + 1) * (n + 1) + c * (n + 1) * 2 * m); }},
            {2, 1, [c](long n, long m) { return Q(c * (n + 1) * (4 * n - 8 * m)); }},
        };
        return {e1, second(1)};
    }
    case PDESystem::Kind::Hyper: {
        Q a = sys.cs.a;
        Operator e1{
            {0, 0, [](long n, long m) { return Q(n * (n - 2 * m)); }},
            {1, 0, [a](long n, long) { return Q(-(n + a) * (n + 1 - a)); }},
        };
        return {e1, second(1)};
    }
    case PDESystem::Kind::T2n: {
        Operator e1{
            {0, 0, [](long n, long m) { return Q(4 * n * (n - m)); }},
            {1, 0, [](long n, long m) { return Q(-(2 * n + 1) * (2 * n + 1) - 2 * (2 * n + 1) * m); }},
            {1, 1, [](long n, long m) { return Q(-2 * (2 * n + 1) * (4 * n - 4 * m)); }},
        };
        return {e1, second(2)};
    }
    case PDESystem::Kind::RogersStraub: {
        Operator e1{
            {0, 0, [](long n, long m) { return Q((n - m) * (n - m)); }},
            {1, 0, [](long n, long m) { return Q(2 * (n - 2 * m) * (2 * n + 1)); }},
        };
        Operator e2{
            {0, 0, [](long n, long m) { return Q(m * (2 * m - n)); }},
            {1, 1, [](long n, long m) { return Q(-4 * (2 * n + 1) * (2 * m + 1)); }},
        };
        return {e1, e2};
    }
    case PDESystem::Kind::Cubic: {
        Operator e1{
            {0, 0, [](long n, long m) { return Q(3 * n * (3 * n - 2 * m)); }},
            {1, 0, [](long n, long m) { return Q(-(3 * n + 1) * (3 * n + 2) - 6 * (2 * n + 1) * m); }},
            {1, 1, [](long n, long m) { return Q(-2 * (3 * n + 2) - 6 * (2 * n + 1) * (9 * n - 4 * m)); }},
        };
        return {e1, second(3)};
    }
    }
    throw std::logic_error("unknown PDE system");
}

BiSeries pde_series(const PDESystem& sys, int order)
{
    switch (sys.kind) {
    case PDESystem::Kind::Sporadic:
    case PDESystem::Kind::Hyper: return series_F(sys.cs, order);
    case PDESystem::Kind::T2n: {
        auto u = apery_seq(SeriesCase::make_hypergeometric(mpq_class(1, 2)), order);
        BiSeries F(order);
        for (int n = 0; n <= order; ++n)
            for (int m = 0; m <= n && n + m <= order; ++m)
                F.set(n, m, u[n] * mpq_class(binom(2 * n, 2 * m) * binom(2 * m, m)));
        return F;
    }
    case PDESystem::Kind::RogersStraub: {
        BiSeries F(order);
        for (int n = 0; n <= order; ++n)
            for (int m = 0; m <= n && n + m <= order; ++m) {
                mpz_class b = binom(n, m);
                F.set(n, m, mpq_class(binom(2 * n, n) * b * b * binom(2 * m, n)));
            }
        return F;
    }
    case PDESystem::Kind::Cubic: {
        auto u = apery_seq(SeriesCase::make_hypergeometric(mpq_class(1, 3)), order);
        BiSeries F(order);
        for (int n = 0; n <= order; ++n)
            for (int m = 0; 2 * m <= 3 * n && n + m <= order; ++m)
                F.set(n, m, u[n] * mpq_class(binom(3 * n, 2 * m) * binom(2 * m, m)));
        return F;
    }
    }
    throw std::logic_error("unknown PDE system");
}

BiSeries apply_operator(const Operator& op, const BiSeries& f)
{
    BiSeries r(f.order(), f.names());
    for (auto& term : op)
        for (auto& [k, v] : f.terms()) r.add_to(k.first + term.dx, k.second + term.dy, term.poly(k.first, k.second) * v);
    return r;
}

int trusted_degree(const Operator& op, int order)
{
    int shift = 0;
    for (auto& t : op) shift = std::max(shift, t.dx + t.dy);
    return order - shift;
}

PDEReport pde_residual(const PDESystem& sys, int order)
{
    if (order < 4) throw std::invalid_argument("pde_residual: order must be at least 4");
    PDEReport rep;
    rep.system = sys.name();
    rep.order = order;
    BiSeries F = pde_series(sys, order);
    auto ops = pde_operators(sys);
    for (int e = 0; e < 2; ++e) {
        CheckReport& cr = rep.eq[e];
        cr.order = order;
        cr.trusted_degree = trusted_degree(ops[e], order);
        BiSeries R = apply_operator(ops[e], F);
        for (auto& [k, v] : R.terms()) {
            if (k.first + k.second > cr.trusted_degree) continue;
            if (!cr.first_bad || k.first + k.second < cr.first_bad->first + cr.first_bad->second) {
                cr.ok = false;
                cr.first_bad = k;
                cr.lhs = v;
                cr.rhs = 0;
            }
        }
    }
    return rep;
}

} // namespace bimod
