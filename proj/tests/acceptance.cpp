// Acceptance run: one PASS/FAIL line per criterion.
#include "bimod/cm.hpp"
#include "bimod/constants.hpp"
#include "bimod/exactmath.hpp"
#include "bimod/harness.hpp"
#include "bimod/modular.hpp"
#include "bimod/powerseries.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace bimod;

namespace {

const prec_t P = 192;

struct Criterion {
    std::string name;
    std::vector<std::string> failures;
    std::vector<std::string> info;

    void expect(bool ok, const std::string& what)
    {
        if (!ok) failures.push_back(what);
    }
    bool report() const
    {
        bool ok = failures.empty();
        std::cout << name << (ok ? " PASS" : " FAIL");
        for (const auto& s : info) std::cout << "; " << s;
        std::cout << "\n";
        for (const auto& f : failures) std::cout << "    " << f << "\n";
        return ok;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- AC1

bool ac1(const std::vector<TableRow>& rows)
{
    Criterion c{"AC1 table reproduction"};
    auto t0 = std::chrono::steady_clock::now();
    VerifySummary s = verify_all(rows, P, Real("1e-25", P));
    double total = seconds_since(t0);
    double slowest = 0;
    std::string slow_id;
    for (const auto& r : s.reports) {
        c.expect(r.pass, r.id + ": " + r.status() + (r.error.empty() ? "" : " (" + r.error + ")") +
                             " |sum - C/pi| = " + r.achieved.str(3));
        if (r.seconds > slowest) {
            slowest = r.seconds;
            slow_id = r.id;
        }
        if (r.id.rfind("T11-760", 0) == 0 || r.id.rfind("H4-760", 0) == 0)
            c.expect(r.seconds < 600, r.id + " took " + fmt(r.seconds) + " s");
    }
    c.expect(total < 1800, "total " + fmt(total) + " s");
    c.expect(s.reports.size() == rows.size() && !rows.empty(), "row count");
    c.info.push_back(std::to_string(s.passed) + "/" + std::to_string(rows.size()) + " rows within 1e-25 at 192 bits");
    c.info.push_back("total " + fmt(total) + " s, slowest " + slow_id + " " + fmt(slowest) + " s");
    return c.report();
}

// ---------------------------------------------------------------- AC2

bool ac2()
{
    Criterion c{"AC2 formal identities"};
    for (const auto& cs : sporadic_cases()) c.expect(wz_check(cs, 8).ok, "wz " + cs.name);
    for (const mpq_class& a : {mpq_class(1, 2), mpq_class(1, 3), mpq_class(1, 4), mpq_class(1, 6)})
        c.expect(brafman_check(a, 8).ok, "brafman a=" + a.get_str());
    auto systems = PDESystem::all();
    for (const auto& sys : systems) c.expect(pde_residual(sys, 10).ok(), "pde " + sys.name());
    c.info.push_back("wz 6 cases, brafman 4 parameters at degree 8; " + std::to_string(systems.size()) +
                     " PDE systems at D=10");
    return c.report();
}

// ---------------------------------------------------------------- AC3

bool ac3()
{
    Criterion c{"AC3 sequence oracles"};
    for (const auto& cs : sporadic_cases()) {
        auto u = apery_seq_z(cs, 60);
        for (long n = 0; n <= 60; ++n)
            c.expect(u[n] == apery_closed(cs, n), cs.name + " n=" + std::to_string(n));
    }
    int checked = 0;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
            mpq_class x = rat(3 * i + 1, 4 + j), y = rat(i - 2 * j, 7 + j);
            for (long n = 0; n <= 12; ++n) {
                // sum_m C(n,2m) C(2m,m) x^(n-2m) y^m = T_n(x, y)
                mpq_class s = 0;
                for (long m = 0; 2 * m <= n; ++m) {
                    mpq_class xp = 1, ym = 1;
                    for (long k = 0; k < n - 2 * m; ++k) xp *= x;
                    for (long k = 0; k < m; ++k) ym *= y;
                    s += double_coeff(n, m) * xp * ym;
                }
                c.expect(s == tn(n, x, y), "grid " + x.get_str() + "," + y.get_str() + " n=" + std::to_string(n));
                ++checked;
            }
        }
    c.info.push_back("6 cases n<=60; " + std::to_string(checked) + " grid checks");
    return c.report();
}

// ---------------------------------------------------------------- AC4

bool ac4()
{
    Criterion c{"AC4 modular layer"};
    std::mt19937 rng(2024);
    std::uniform_int_distribution<long> dist(-12, 12);
    std::uniform_real_distribution<double> ure(-0.5, 0.5), uim(0.7, 1.5);
    int matrices = 0;
    Real worst(0L, P);
    while (matrices < 200) {
        long cc = dist(rng), d = dist(rng);
        if (cc < 0 || std::gcd(cc, d) != 1 || (cc == 0 && d != 1)) continue;
        long a = 0, b = 0;
        for (long s = -40; s <= 40 && a == 0 && b == 0; ++s)
            for (long t = -40; t <= 40; ++t)
                if (s * d - t * cc == 1) {
                    a = s;
                    b = t;
                    break;
                }
        if (a * d - b * cc != 1) continue;
        if (cc == 0) b = dist(rng);
        Complex tau(Real(ure(rng), P), Real(uim(rng), P));
        Complex gt = (tau * a + b) / (tau * cc + d);
        Complex rhs = eta_multiplier(a, b, cc, d, P) * eta(tau, P);
        if (cc != 0) rhs = rhs * sqrt((tau * cc + d) / i_unit(P));
        Complex lhs = eta(gt, P);
        Real res = abs(lhs - rhs) / max(Real(1L, P), abs(lhs));
        worst = max(worst, res);
        ++matrices;
    }
    c.expect(worst < pow2(16 - long(P), P), "eta law residual " + worst.str(3));
    for (const auto& cs : sporadic_cases())
        c.expect(!tfg_identity_mismatch(cs, 50), "g != f^2 t(1-at+ct^2) for " + cs.name);
    const Real tol("1e-40", P);
    Real worst_theta(0L, P), worst_cubic(0L, P);
    for (int k = 0; k < 5; ++k) {
        Complex tau(Real(ure(rng), P), Real(uim(rng), P));
        Complex t2 = theta_and_eisenstein(ThetaKind::Theta2, tau, P);
        Complex t3 = theta_and_eisenstein(ThetaKind::Theta3, tau, P);
        Complex t4 = theta_and_eisenstein(ThetaKind::Theta4, tau, P);
        worst_theta = max(worst_theta, abs(pow(t2, 4) + pow(t4, 4) - pow(t3, 4)));
        Complex a = theta_and_eisenstein(ThetaKind::L, tau, P);
        Complex b = (theta_and_eisenstein(ThetaKind::L, tau * 3L, P) * 3L - a) / 2L;
        Complex cb = (theta_and_eisenstein(ThetaKind::L, tau / 3L, P) - a) / 2L;
        worst_cubic = max(worst_cubic, abs(pow(a, 3) - pow(b, 3) - pow(cb, 3)));
    }
    c.expect(worst_theta < tol, "theta relation " + worst_theta.str(3));
    c.expect(worst_cubic < tol, "cubic relation " + worst_cubic.str(3));
    c.info.push_back("eta law on 200 matrices, max residual " + worst.str(3));
    c.info.push_back("tfg exact through q^50; theta " + worst_theta.str(3) + ", cubic " + worst_cubic.str(3));
    return c.report();
}

// ---------------------------------------------------------------- AC5

struct Example {
    std::string label;
    LevelGroup G;
    std::vector<QuadForm> forms;  // Q1..Q8 as listed
};

// Image index (1-based) of each listed form, 0 if the image is not in the list.
std::vector<int> permutation(const Example& ex, const std::function<QuadForm(const QuadForm&)>& f)
{
    std::map<QuadForm, int> idx;
    for (size_t i = 0; i < ex.forms.size(); ++i) idx[canonical(ex.G, ex.forms[i])] = int(i) + 1;
    std::vector<int> out;
    for (const auto& q : ex.forms) {
        auto it = idx.find(canonical(ex.G, f(q)));
        out.push_back(it == idx.end() ? 0 : it->second);
    }
    return out;
}

// "(1,4)(2,3)" -> image list.
std::vector<int> from_cycles(const std::string& cyc, int n)
{
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    std::vector<int> cur;
    int num = 0;
    bool in = false;
    for (char ch : cyc) {
        if (ch >= '0' && ch <= '9') {
            num = num * 10 + (ch - '0');
            in = true;
        } else if (in) {
            cur.push_back(num);
            num = 0;
            in = false;
        }
        if (ch == ')') {
            for (size_t i = 0; i < cur.size(); ++i) p[cur[i] - 1] = cur[(i + 1) % cur.size()];
            cur.clear();
        }
    }
    return p;
}

bool ac5()
{
    Criterion c{"AC5 CM layer"};
    const LevelGroup G6{6, false};
    long ogg_checked = 0;
    for (long d = -3; d >= -5000; --d) {
        if (!valid_discriminant(d)) continue;
        long got = long(cm_points(G6, d).size()), want = ogg_count(d);
        c.expect(got == want, "Ogg count d=" + std::to_string(d) + ": " + std::to_string(got) + " vs " +
                                  std::to_string(want));
        ++ogg_checked;
    }
    c.info.push_back("Ogg count for " + std::to_string(ogg_checked) + " discriminants");

    const prec_t p50 = digits_to_bits(50);
    const Real rtol = Real("1e-40", p50);
    const mpz_class maxden("1000000000000");
    int rationals = 0;
    auto check_xy = [&](const std::string& name, const QuadForm& q1, const QuadForm& q2, const mpq_class& x,
                        const mpq_class& y) {
        const SeriesCase cs = case_by_name(name);
        XYF r = bimodular_xyF(cs, tau_of(q1, p50), tau_of(q2, p50), p50);
        auto rx = recognize_rational(r.x, maxden, rtol);
        auto ry = recognize_rational(r.y, maxden, rtol);
        c.expect(rx && *rx == x, name + " x(" + q1.str() + "," + q2.str() + ") = " + r.x.str(20) + ", want " +
                                     x.get_str());
        c.expect(ry && *ry == y, name + " y(" + q1.str() + "," + q2.str() + ") = " + r.y.str(20) + ", want " +
                                     y.get_str());
        rationals += 2;
    };
    auto check_perm = [&](const Example& ex, const std::string& what,
                          const std::function<QuadForm(const QuadForm&)>& f, const std::string& cycles) {
        auto got = permutation(ex, f), want = from_cycles(cycles, int(ex.forms.size()));
        c.expect(got == want, ex.label + " " + what + " is not " + cycles);
    };
    auto check_set = [&](const Example& ex, long d) {
        auto pts = cm_points(ex.G, d);
        std::set<QuadForm> want;
        for (const auto& q : ex.forms) want.insert(canonical(ex.G, q));
        std::set<QuadForm> have(pts.begin(), pts.end());
        c.expect(std::includes(have.begin(), have.end(), want.begin(), want.end()),
                 ex.label + ": listed forms are not CM points");
        return pts.size();
    };
    auto conj = [&](const LevelGroup& G) { return [G](const QuadForm& q) { return conjugate(q); }; };

    // d = -420 on X0(6)
    {
        Example ex{"d=-420", G6, {{6, 6, 19}, {30, 30, 11}, {42, 42, 13}, {66, 30, 5},
                                  {78, 42, 7}, {114, 6, 1}, {210, 210, 53}, {318, 210, 35}}};
        c.expect(check_set(ex, -420) == 8, "d=-420 point count");
        auto img = permutation(ex, [&](const QuadForm& q) { return atkin_lehner(G6, q, 2); });
        c.expect(img[0] == 8, "d=-420 w2 Q1");
        img = permutation(ex, [&](const QuadForm& q) { return atkin_lehner(G6, q, 3); });
        c.expect(img[0] == 7, "d=-420 w3 Q1");
        img = permutation(ex, [&](const QuadForm& q) { return atkin_lehner(G6, q, 6); });
        c.expect(img[0] == 6, "d=-420 w6 Q1");
        check_xy("-17,-6,72", ex.forms[0], ex.forms[1], rat(-71, 1008), rat(1, 142 * 142));
    }
    // d = -112 on X0(8)
    {
        const LevelGroup G{8, false};
        Example ex{"d=-112", G, {{8, 4, 4}, {56, -28, 4}, {32, 4, 1}, {32, -28, 7},
                                 {8, -4, 4}, {56, 28, 4}, {32, -4, 1}, {32, 28, 7}}};
        c.expect(check_set(ex, -112) == 8, "d=-112 point count");
        const char* labels[] = {"C1", "C1", "C2", "C2", "C3", "C3", "C4", "C4"};
        for (int i = 0; i < 8; ++i)
            c.expect(classify_orbit(8, ex.forms[i]) == labels[i], "d=-112 orbit of " + ex.forms[i].str());
        auto img = permutation(ex, [&](const QuadForm& q) { return atkin_lehner(G, q, 8); });
        c.expect(img[0] == 7, "d=-112 w8 Q1");
        img = permutation(ex, [&](const QuadForm& q) { return apply_matrix(G, q, {4, 1, 8, 4}); });
        c.expect(img[0] == 4, "d=-112 (4,1;8,4) Q1");
        img = permutation(ex, conj(G));
        c.expect(img[0] == 5, "d=-112 conjugation Q1");
        check_xy("12,4,32", ex.forms[0], ex.forms[1], rat(16, 63), rat(1, 256));
        check_xy("12,4,32", ex.forms[0], ex.forms[2], rat(1, 8), rat(1, 256));
        check_xy("12,4,32", ex.forms[0], ex.forms[4], rat(-1, 252), mpq_class(16));
        check_xy("12,4,32", ex.forms[0], ex.forms[7], rat(1, 8), mpq_class(16));
    }
    // d = -480 on X0(8)
    {
        const LevelGroup G{8, false};
        Example ex{"d=-480", G, {{8, 0, 15}, {24, 0, 5}, {40, 0, 3}, {120, 0, 1},
                                 {88, 64, 13}, {104, 64, 11}, {136, 128, 31}, {248, 128, 17}}};
        size_t n = check_set(ex, -480);
        c.expect(n == 16, "d=-480 has " + std::to_string(n) + " points");
        std::set<std::string> lab;
        for (const auto& q : ex.forms) lab.insert(classify_orbit(8, q));
        c.expect(lab.size() == 1, "d=-480 first orbit is not a single orbit");
        check_xy("12,4,32", ex.forms[0], ex.forms[1], rat(11, 240), rat(1, 22 * 22));
        check_xy("12,4,32", ex.forms[0], ex.forms[2], rat(31, 320), rat(1, 62 * 62));
        check_xy("12,4,32", ex.forms[0], ex.forms[4], rat(11, 16), rat(1, 22 * 22));
        check_xy("12,4,32", ex.forms[0], ex.forms[5], rat(31, 96), rat(1, 62 * 62));
    }
    // d = -1008 on X0(9)
    {
        const LevelGroup G{9, false};
        Example ex{"d=-1008", G, {{9, 0, 28}, {36, 0, 7}, {63, 0, 4}, {252, 0, 1},
                                  {99, 90, 23}, {99, -90, 23}, {261, 180, 32}, {261, -180, 32}}};
        check_set(ex, -1008);
        for (const auto& q : ex.forms) c.expect(classify_orbit(9, q) == "C3", "d=-1008 orbit of " + q.str());
        check_perm(ex, "w9", [&](const QuadForm& q) { return atkin_lehner(G, q, 9); }, "(1,4)(2,3)(5,6)(7,8)");
        check_perm(ex, "(-3,-2;9,3)", [&](const QuadForm& q) { return apply_matrix(G, q, {-3, -2, 9, 3}); },
                   "(1,7)(2,5)(3,6)(4,8)");
        check_perm(ex, "conjugation", conj(G), "(5,6)(7,8)");
        check_xy("-9,-3,27", ex.forms[0], ex.forms[1], rat(52, 675), rat(1, 2704));
        check_xy("-9,-3,27", ex.forms[0], ex.forms[2], rat(13, 27), rat(1, 2704));
    }
    // d = -760 on X1(5)
    {
        const LevelGroup G{5, true};
        Example ex{"d=-760", G, {{5, 0, 38}, {10, 0, 19}, {95, 0, 2}, {190, 0, 1},
                                 {970, 780, 157}, {515, 420, 86}, {430, 420, 103}, {785, 780, 194}}};
        c.expect(check_set(ex, -760) == 8, "d=-760 point count");
        check_perm(ex, "w5", [&](const QuadForm& q) { return atkin_lehner(G, q, 5); }, "(1,4)(2,3)(5,8)(6,7)");
        check_perm(ex, "(2,-1;5,-2)", [&](const QuadForm& q) { return apply_matrix(G, q, {2, -1, 5, -2}); },
                   "(1,5)(2,6)(3,7)(4,8)");
        check_xy("11,3,-1", ex.forms[0], ex.forms[2], rat(19601, 217800), rat(1, 39202L * 39202L));
    }
    c.info.push_back("5 worked discriminants, " + std::to_string(rationals) + " rational values at 50 digits");
    return c.report();
}

// ---------------------------------------------------------------- AC6

bool ac6(const std::vector<TableRow>& rows)
{
    Criterion c{"AC6 constants layer"};
    struct Pt {
        const char* cs;
        QuadForm Q;
    };
    const std::vector<Pt> pts = {
        {"-17,-6,72", {6, 6, 19}}, {"-17,-6,72", {30, 30, 11}}, {"7,2,-8", {30, 30, 11}},
        {"10,3,9", {6, 6, 19}},    {"12,4,32", {8, 4, 4}},      {"12,4,32", {8, 0, 15}},
        {"-9,-3,27", {9, 0, 28}},  {"-9,-3,27", {36, 0, 7}},    {"11,3,-1", {5, 0, 38}},
        {"11,3,-1", {10, 0, 19}},  {"1/2", {4, 4, 2}},          {"1/3", {3, 3, 2}},
        {"1/4", {2, 2, 89}},
    };
    const Real lim("1e-30", P);
    Real worst(0L, P);
    for (const auto& pt : pts) {
        Real r = lemma_pi_residual(case_by_name(pt.cs), pt.Q, P);
        c.expect(r < lim, std::string("lemma residual ") + pt.cs + " " + pt.Q.str() + " = " + r.str(3));
        worst = max(worst, r);
    }
    c.info.push_back(std::to_string(pts.size()) + " CM points, max lemma residual " + worst.str(3));

    // three rows per table plus the worked and companion rows
    std::set<std::string> required = {"T17-420a", "T7-240b", "T7-240b-m", "H2-7", "H2-7-m"};
    std::map<std::string, int> per_table;
    std::vector<const TableRow*> chosen;
    for (const auto& r : rows) {
        std::string table = r.id.substr(0, r.id.find('-'));
        if (required.count(r.id) || per_table[table] < 3) {
            chosen.push_back(&r);
            if (!required.count(r.id)) ++per_table[table];
        }
    }
    const Real tol("1e-25", P);
    int ok = 0;
    for (const TableRow* r : chosen) {
        RederiveResult res = rederive_row(*r, P, tol);
        c.expect(res.pass, "rederive " + r->id + (res.error.empty() ? "" : ": " + res.error));
        ok += res.pass;
    }
    for (const auto& id : required)
        c.expect(std::any_of(chosen.begin(), chosen.end(), [&](const TableRow* r) { return r->id == id; }),
                 "row " + id + " missing");
    c.expect(ok >= 20, "fewer than 20 rows rederived");
    c.info.push_back("rederived " + std::to_string(ok) + "/" + std::to_string(chosen.size()) + " rows across " +
                     std::to_string(per_table.size()) + " tables");
    return c.report();
}

// ---------------------------------------------------------------- AC7

bool ac7(const std::vector<TableRow>& rows)
{
    Criterion c{"AC7 discrepancy handling"};
    auto it = std::find_if(rows.begin(), rows.end(), [](const TableRow& r) { return r.id == "T7-660-m"; });
    if (it == rows.end()) {
        c.expect(false, "row T7-660-m not in the table");
        return c.report();
    }
    const Real tol("1e-25", P);
    TableRow printed = *it;
    printed.alt_x.reset();
    printed.alt_y.reset();
    printed.alt_C.reset();
    TableRow alt = printed;
    alt.y = *it->alt_y;
    bool p_ok = verify_row(printed, P, tol).pass, a_ok = verify_row(alt, P, tol).pass;
    c.expect(p_ok != a_ok, "expected exactly one variant to pass");
    c.expect(!p_ok && a_ok, "y = 1/994^2 should fail and y = 1/194^2 pass");
    VerifyReport rep = verify_row(*it, P, tol);
    c.expect(rep.pass && rep.variant == "alt_y", "report variant " + rep.variant);
    c.expect(!rep.notes.empty(), "discrepancy not reported");
    c.info.push_back(std::string("y=1/994^2 ") + (p_ok ? "passes" : "fails") + ", y=1/194^2 " +
                     (a_ok ? "passes" : "fails"));
    for (const auto& n : rep.notes) c.info.push_back(n);
    return c.report();
}

} // namespace

int main()
{
    std::vector<TableRow> rows = load_table(default_table_path());
    bool ok = true;
    ok &= ac1(rows);
    ok &= ac2();
    ok &= ac3();
    ok &= ac4();
    ok &= ac5();
    ok &= ac6(rows);
    ok &= ac7(rows);
    std::cout << (ok ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
    return ok ? 0 : 1;
}
