#include "bimod/cm.hpp"
#include "bimod/constants.hpp"
#include "bimod/harness.hpp"
#include "bimod/modular.hpp"
#include "bimod/powerseries.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

using namespace bimod;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

prec_t bits_for(long digits, prec_t bits) { return digits > 0 ? digits_to_bits(digits) : bits; }

std::string fmt_seconds(double s)
{
    std::ostringstream o;
    o << std::fixed << std::setprecision(3) << s << "s";
    return o.str();
}

std::vector<SeriesCase> cases_for(const std::string& name)
{
    if (name != "all") return {case_by_name(name)};
    return sporadic_cases();
}

int run_verify(const std::string& tables, long digits, prec_t bits, const std::string& tol_text,
               const std::string& rows, bool rederive, const std::string& json_out, long max_terms)
{
    const prec_t P = bits_for(digits, bits);
    auto table = load_table(tables.empty() ? default_table_path() : tables);
    const Real tol(tol_text, P);
    std::optional<std::regex> filter;
    if (!rows.empty()) filter = std::regex(rows);
    auto t0 = Clock::now();
    VerifySummary sum;
    int rederive_fail = 0;
    for (const auto& row : table) {
        if (filter && !std::regex_search(row.id, *filter)) continue;
        VerifyReport rep = verify_row(row, P, tol, max_terms);
        std::cout << std::left << std::setw(12) << row.id << " " << std::setw(5) << rep.status();
        if (rep.error.empty())
            std::cout << " err " << rep.achieved.str(3) << " tail " << rep.tail_bound.str(3);
        else
            std::cout << " " << rep.error;
        std::cout << " terms " << rep.terms << " " << fmt_seconds(rep.seconds);
        if (rep.variant != "printed" && !rep.variant.empty()) std::cout << " [" << rep.variant << "]";
        std::cout << "\n";
        for (const auto& n : rep.notes) std::cout << "    " << n << "\n";
        if (rederive) {
            RederiveResult rr = rederive_row(row, P, tol);
            std::cout << "    rederive " << (rr.pass ? "pass" : "FAIL");
            if (rr.aligned)
                std::cout << " " << rr.q1.str() << " " << rr.q2.str() << " B/A " << rr.ratio_B.re.str(20) << " C/A "
                          << rr.ratio_C.re.str(20) << " (err " << max(rr.err_B, rr.err_C).str(3) << ")";
            if (!rr.error.empty()) std::cout << " " << rr.error;
            std::cout << "\n";
            if (!rr.pass) ++rederive_fail;
        }
        (rep.status() == "pass" ? sum.passed : sum.failed)++;
        sum.reports.push_back(std::move(rep));
    }
    std::cout << sum.passed << " passed, " << sum.failed << " failed";
    if (rederive) std::cout << ", " << rederive_fail << " rederive failures";
    std::cout << " (" << fmt_seconds(since(t0)) << ", " << P << " bits)\n";
    if (!json_out.empty()) {
        std::ofstream f(json_out);
        if (!f) throw std::runtime_error("cannot write " + json_out);
        f << reports_json(sum.reports) << "\n";
    }
    return sum.ok() && rederive_fail == 0 ? 0 : 1;
}

void print_check(const std::string& what, const CheckReport& r, double secs)
{
    std::cout << std::left << std::setw(28) << what << " " << (r.ok ? "pass" : "FAIL") << " order " << r.order
              << " trusted " << r.trusted_degree << " " << fmt_seconds(secs);
    if (!r.ok) {
        if (r.first_bad) std::cout << " first mismatch at x^" << r.first_bad->first << " y^" << r.first_bad->second;
        if (!r.detail.empty()) std::cout << " " << r.detail;
    }
    std::cout << "\n";
}

int run_wz(const std::string& name, int order)
{
    bool ok = true;
    if (name.find('/') != std::string::npos && name != "all") {
        auto t0 = Clock::now();
        CheckReport r = brafman_check(parse_rational(name), order);
        print_check("brafman " + name, r, since(t0));
        return r.ok ? 0 : 1;
    }
    for (const auto& cs : cases_for(name)) {
        auto t0 = Clock::now();
        CheckReport r = wz_check(cs, order);
        print_check("wz " + cs.name, r, since(t0));
        ok = ok && r.ok;
    }
    if (name == "all")
        for (const char* a : {"1/2", "1/3", "1/4", "1/6"}) {
            auto t0 = Clock::now();
            CheckReport r = brafman_check(parse_rational(a), order);
            print_check(std::string("brafman ") + a, r, since(t0));
            ok = ok && r.ok;
        }
    return ok ? 0 : 1;
}

int run_pde(const std::string& name, int order)
{
    std::vector<PDESystem> systems = name == "all" ? PDESystem::all() : std::vector{PDESystem::by_name(name)};
    bool ok = true;
    for (const auto& sys : systems) {
        auto t0 = Clock::now();
        PDEReport r = pde_residual(sys, order);
        double s = since(t0);
        for (int k = 0; k < 2; ++k)
            print_check(sys.name() + " eq" + std::to_string(k + 1), r.eq[k], s);
        ok = ok && r.ok();
    }
    return ok ? 0 : 1;
}

int run_modular(const std::string& name, const std::string& t1, const std::string& t2, long digits)
{
    const prec_t p = digits_to_bits(digits);
    const SeriesCase cs = case_by_name(name);
    Complex tau1 = parse_complex(t1, p), tau2 = parse_complex(t2, p);
    if (!(tau1.im > Real(0L, p)) || !(tau2.im > Real(0L, p)))
        throw std::invalid_argument("tau must lie in the upper half plane");
    CaseValue v1 = case_eval(cs, tau1, p), v2 = case_eval(cs, tau2, p);
    XYF r = bimodular_xyF(cs, tau1, tau2, p);
    const int d = int(digits);
    std::cout << "case " << cs.name << " on " << cs.group.str() << "\n";
    std::cout << "t1 = " << v1.t.str(d) << "\nt2 = " << v2.t.str(d) << "\n";
    std::cout << "f1 = " << v1.f.str(d) << "\nf2 = " << v2.f.str(d) << "\n";
    std::cout << "x  = " << r.x.str(d) << "\ny  = " << r.y.str(d) << "\nF  = " << r.F.str(d) << "\n";
    try {
        Complex S = eval_series_complex(cs, r.x, r.y, p);
        std::cout << "double series residual |F - S| = " << abs(r.F - S).str(3) << "\n";
    } catch (const ConvergenceError& e) {
        std::cout << "double series residual: n/a (" << e.what() << ")\n";
    }
    return 0;
}

LevelGroup group_for(int level)
{
    if (level == 5) return LevelGroup{5, true};
    return LevelGroup{level, false};
}

int run_cm(int level, long d, bool orbits)
{
    const LevelGroup G = group_for(level);
    auto pts = cm_points(G, d);
    std::cout << "CM(" << d << ") on " << G.str() << ": " << pts.size() << " points\n";
    std::map<QuadForm, size_t> index;
    for (size_t i = 0; i < pts.size(); ++i) index[pts[i]] = i + 1;
    const bool labels = orbits && (level == 8 || level == 9);
    for (size_t i = 0; i < pts.size(); ++i) {
        std::cout << "  Q" << i + 1 << " = " << pts[i].str();
        if (labels) {
            try {
                std::cout << "  " << classify_orbit(level, pts[i]);
            } catch (const std::domain_error&) {
                std::cout << "  -";
            }
        }
        std::cout << "\n";
    }
    if (!orbits) return 0;
    for (int m = 2; m <= level; ++m) {
        if (level % m != 0 || std::gcd(m, level / m) != 1) continue;
        std::cout << "w" << m << ":";
        for (size_t i = 0; i < pts.size(); ++i) {
            QuadForm img = atkin_lehner(G, pts[i], m);
            auto it = index.find(img);
            std::cout << " Q" << i + 1 << "->" << (it == index.end() ? img.str() : "Q" + std::to_string(it->second));
        }
        std::cout << "\n";
    }
    return 0;
}

int run_constants(const std::string& name, long d1, long d2, long digits)
{
    const prec_t p = digits_to_bits(digits);
    const SeriesCase cs = case_by_name(name);
    const LevelGroup G = LevelGroup::of(cs);
    if (d2 == 0) d2 = d1;
    auto P1 = cm_points(G, d1), P2 = cm_points(G, d2);
    const int dd = int(std::min<long>(digits, 30));
    const Real tol = pow2(-long(p) / 2, p);
    std::set<std::pair<QuadForm, QuadForm>> seen;
    int shown = 0;
    for (const auto& a : P1)
        for (const auto& b : P2) {
            if (a == b || seen.count({b, a})) continue;
            seen.insert({a, b});
            CaseAtCM cc;
            try {
                cc = case_at_cm(cs, a, b, p);
            } catch (const std::domain_error&) {
                continue;
            }
            auto rx = recognize_rational(cc.x, mpz_class("100000000000"), pow2(16 - long(p), p));
            auto ry = recognize_rational(cc.y, mpz_class("100000000000"), pow2(16 - long(p), p));
            if (!rx || !ry) continue;
            bool aligned = false;
            try {
                SeriesOptions opt;
                opt.precision = p;
                opt.max_terms = 20000;
                Complex S0(eval_series({cs, *rx, *ry, 0, 1, Weight::N}, opt).value);
                if (auto al = align_representatives(cs, a, b, S0, p, tol)) {
                    cc = *al;
                    aligned = true;
                }
            } catch (const std::exception&) {
            }
            Constants k = theorem_constants(cc);
            ++shown;
            std::cout << cc.p1.Q.str() << " " << cc.p2.Q.str() << "  x = " << to_string(*rx) << "  y = " << to_string(*ry)
                      << (aligned ? "" : "  (series diverges or unaligned)") << "\n";
            std::cout << "  t1 = " << cc.p1.v.t.str(dd) << "\n  t2 = " << cc.p2.v.t.str(dd) << "\n";
            std::cout << "  eps = " << cc.eps.str(dd) << "\n";
            std::cout << "  delta1 = " << cc.p1.delta.str(dd) << "\n  delta2 = " << cc.p2.delta.str(dd) << "\n";
            std::cout << "  B1 = " << k.B1.str(dd) << "\n  C1 = " << k.C1.str(dd) << "\n";
            std::cout << "  B2 = " << k.B2.str(dd) << "\n  C2 = " << k.C2.str(dd) << "\n";
        }
    if (shown == 0) std::cout << "no pair in CM(" << d1 << ") x CM(" << d2 << ") with rational x, y\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Apery-like sequences, bimodular forms and 1/pi series"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "verify table rows");
    std::string tables, tol_text = "1e-25", rows, json_out;
    long vdigits = 0, max_terms = 100000;
    prec_t vbits = 192;
    bool rederive = false;
    verify->add_option("--tables", tables, "table file (default: bundled tables)");
    verify->add_option("--digits", vdigits, "working precision in decimal digits");
    verify->add_option("--bits", vbits, "working precision in bits (default 192)");
    verify->add_option("--tol", tol_text, "tolerance on |sum - C/pi|");
    verify->add_option("--rows", rows, "regex on row ids");
    verify->add_option("--max-terms", max_terms, "default term limit");
    verify->add_flag("--rederive", rederive, "rederive constants from CM points");
    verify->add_option("--json", json_out, "write a JSON report");

    auto* wz = app.add_subcommand("wz", "WZ / Brafman identity in exact series");
    std::string wz_case = "all";
    int wz_order = 8;
    wz->add_option("--case", wz_case, "a,b,c, a rational parameter for Brafman, or all");
    wz->add_option("--order", wz_order, "total degree");

    auto* pde = app.add_subcommand("pde", "PDE systems against the double series");
    std::string pde_sys = "all";
    int pde_order = 10;
    pde->add_option("--system", pde_sys, "a,b,c | 1/2 | t2n | rs | cubic | all");
    pde->add_option("--order", pde_order, "total degree");

    auto* mod = app.add_subcommand("modular", "bimodular parameterization at (tau1, tau2)");
    std::string mcase, tau1, tau2;
    long mdigits = 40;
    mod->add_option("--case", mcase, "case")->required();
    mod->add_option("--tau1", tau1, "a+bi")->required();
    mod->add_option("--tau2", tau2, "c+di")->required();
    mod->add_option("--digits", mdigits, "decimal digits");

    auto* cm = app.add_subcommand("cm", "CM points, orbits and Atkin-Lehner actions");
    int level = 6;
    long cdisc = 0;
    bool orbits = false;
    cm->add_option("--level", level, "N (5 means Gamma1(5))")->required();
    cm->add_option("--disc", cdisc, "discriminant")->required();
    cm->add_flag("--orbits", orbits, "orbit labels and action tables");

    auto* con = app.add_subcommand("constants", "theorem constants at CM pairs");
    std::string ccase;
    long kd1 = 0, kd2 = 0, kdigits = 40;
    con->add_option("--case", ccase, "case")->required();
    con->add_option("--disc", kd1, "discriminant of tau1")->required();
    con->add_option("--disc2", kd2, "discriminant of tau2 (default: same)");
    con->add_option("--digits", kdigits, "decimal digits");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*verify) return run_verify(tables, vdigits, vbits, tol_text, rows, rederive, json_out, max_terms);
        if (*wz) return run_wz(wz_case, wz_order);
        if (*pde) return run_pde(pde_sys, pde_order);
        if (*mod) return run_modular(mcase, tau1, tau2, mdigits);
        if (*cm) return run_cm(level, cdisc, orbits);
        if (*con) return run_constants(ccase, kd1, kd2, kdigits);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
