#include "bimod/harness.hpp"

#include <doctest.h>
#include <json.hpp>

#include <map>
#include <sstream>

using namespace bimod;

namespace {

const prec_t P = 192;

std::vector<TableRow>& table()
{
    static std::vector<TableRow> rows = load_table(default_table_path());
    return rows;
}

const TableRow& row(const std::string& id)
{
    for (const auto& r : table())
        if (r.id == id) return r;
    throw std::runtime_error("no row " + id);
}

int parse_error_line(const std::string& text)
{
    std::istringstream in(text);
    try {
        parse_table(in, "test");
    } catch (const TableParseError& e) {
        return e.line;
    }
    return 0;
}

Real tol() { return Real("1e-25", P); }

} // namespace

TEST_CASE("table parsing")
{
    std::istringstream in("# comment\n\n"
                          "R1 | 7,2,-8 | -96 | -1/12 | -1/8 | 9 | 3 | 4*sqrt(2) | ref\n"
                          "R2 | 1/2 | -12,-48 | 1/2^2 | 1/54 | 60 | 8 | 45*sqrt(3) | ref | weight=m | max_terms=500 | "
                          "alt_y=1/55\n");
    auto rows = parse_table(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].id == "R1");
    CHECK(rows[0].x == rat(-1, 12));
    CHECK(rows[0].line == 3);
    CHECK(rows[1].discs == std::vector<long>{-12, -48});
    CHECK(rows[1].x == rat(1, 4));
    CHECK(rows[1].weight == Weight::M);
    CHECK(rows[1].max_terms == 500);
    REQUIRE(rows[1].alt_y);
    CHECK(*rows[1].alt_y == rat(1, 55));
    CHECK_FALSE(rows[1].alt_x);
}

TEST_CASE("table parse errors carry line numbers")
{
    const std::string ok = "R1 | 7,2,-8 | -96 | -1/12 | -1/8 | 9 | 3 | 4*sqrt(2) | ref\n";
    CHECK(parse_error_line(ok + "R2 | 7,2,-8 | -96 | -1/12 | -1/8 | 9 | 3\n") == 2);
    CHECK(parse_error_line(ok + ok) == 2);
    CHECK(parse_error_line("\n" + std::string("R | 1,1,1 | -96 | 1 | 1 | 1 | 1 | 1 | r\n")) == 2);
    CHECK(parse_error_line("R | 7,2,-8 | -5 | 1 | 1 | 1 | 1 | 1 | r\n") == 1);
    CHECK(parse_error_line("R | 7,2,-8 | -96 | 1/0 | 1 | 1 | 1 | 1 | r\n") == 1);
    CHECK(parse_error_line("R | 7,2,-8 | -96 | 1 | 1 | 1/2 | 1 | 1 | r\n") == 1);
    CHECK(parse_error_line("R | 7,2,-8 | -96 | 1 | 1 | 1 | 1 | sqrt( | r\n") == 1);
    CHECK(parse_error_line("R | 7,2,-8 | -96 | 1 | 1 | 1 | 1 | 1 | r | colour=red\n") == 1);
    CHECK(parse_error_line("R | 7,2,-8 | -96 | 1 | 1 | 1 | 1 | 1 | r | weight=k\n") == 1);
    CHECK(parse_error_line(ok) == 0);
    CHECK_THROWS(load_table("/nonexistent/tables.txt"));
}

TEST_CASE("bundled tables")
{
    std::map<std::string, int> count;
    for (const auto& r : table()) count[r.cs.name]++;
    CHECK(count["7,2,-8"] == 16);
    CHECK(count["10,3,9"] == 13);
    CHECK(count["-17,-6,72"] == 18);
    CHECK(count["-9,-3,27"] == 8);
    CHECK(count["11,3,-1"] == 2);
    CHECK(count["12,4,32"] == 25);
    CHECK(count["1/2"] == 7);
    CHECK(count["1/3"] == 25);
    CHECK(count["1/4"] == 28);
    CHECK(table().size() == 142);
}

TEST_CASE("single-variable series")
{
    SeriesOptions opt;
    opt.precision = P;
    // sum (1/2)_n^3 / n!^3 (6n + 1) / 4^n = 4 / pi
    SeriesCase cs = SeriesCase::make_general({mpq_class(1, 2), mpq_class(1, 2), mpq_class(1, 2)});
    SeriesValue v = eval_series({cs, rat(1, 4), 0, 6, 1}, opt);
    CHECK(abs(v.value - Real(4L, P) / pi_const(P)) < pow2(-170, P));
    SeriesValue z = eval_series({case_by_name("7,2,-8"), 0, rat(1, 9), 5, 3}, opt);
    CHECK(abs(z.value - Real(3L, P)) < pow2(-180, P));
}

TEST_CASE("two-variable series examples")
{
    SeriesOptions opt;
    opt.precision = P;
    SeriesValue v = eval_series({case_by_name("1/2"), rat(-17, 32), rat(1, 34 * 34), 30, 7}, opt);
    CHECK(abs(v.value - Real(12L, P) / pi_const(P)) < pow2(-170, P));
    CHECK_THROWS_AS(eval_series({case_by_name("7,2,-8"), 1, 1, 1, 1}, opt), ConvergenceError);
}

TEST_CASE("summation orders agree")
{
    const TableRow& r = row("T12-60");
    SeriesOptions opt;
    opt.precision = P;
    SeriesSpec s{r.cs, r.x, r.y, r.A, r.B, r.weight};
    opt.order = SumOrder::NOuter;
    SeriesValue a = eval_series(s, opt);
    opt.order = SumOrder::MOuter;
    SeriesValue b = eval_series(s, opt);
    CHECK(a.order == SumOrder::NOuter);
    CHECK(b.order == SumOrder::MOuter);
    CHECK(abs(a.value - b.value) < pow2(-170, P));
}

TEST_CASE("tail bounds are sound")
{
    for (const char* id : {"T7-240b", "T10-96", "T17-420a", "T12-3040c", "H2-16", "H3-120b", "H4-520b", "T7-660-m"}) {
        const TableRow& r = row(id);
        SeriesOptions opt;
        opt.precision = P;
        opt.extra_terms = 200;
        SeriesValue v = eval_series({r.cs, r.x, r.y, r.A, r.B, r.weight}, opt);
        CHECK_MESSAGE(v.extension_change <= v.tail_bound, id << " change " << v.extension_change.str(3) << " bound "
                                                            << v.tail_bound.str(3));
    }
}

TEST_CASE("row verification")
{
    for (const char* id : {"T17-420a", "T7-240b-m", "T12-3040c", "H2-7-m"}) {
        VerifyReport rep = verify_row(row(id), P, tol());
        CHECK_MESSAGE(rep.pass, id);
        CHECK(rep.variant == "printed");
        CHECK(rep.achieved < tol());
        CHECK(rep.tail_bound < tol());
        CHECK(rep.precision_bits == P);
    }
    TableRow bad = row("T17-420a");
    bad.C = ConstExpr::parse("3*sqrt(34)");
    VerifyReport rep = verify_row(bad, P, tol());
    CHECK_FALSE(rep.pass);
    CHECK(rep.status() == "fail");
    TableRow div = bad;
    div.x = 2;
    VerifyReport err = verify_row(div, P, tol());
    CHECK(err.status() == "error");
    CHECK_FALSE(err.error.empty());
}

TEST_CASE("variant rows report which value verified")
{
    VerifyReport rep = verify_row(row("T7-660-m"), P, tol());
    CHECK(rep.pass);
    CHECK(rep.variant == "alt_y");
    REQUIRE(rep.notes.size() == 2);
    CHECK(rep.notes[0].find("printed values fail") != std::string::npos);
}

TEST_CASE("verification is deterministic")
{
    const TableRow& r = row("T10-240a");
    VerifyReport a = verify_row(r, P, tol()), b = verify_row(r, P, tol());
    CHECK(mpfr_equal_p(a.achieved.get(), b.achieved.get()));
    CHECK(a.terms == b.terms);
}

TEST_CASE("verify_all and JSON reports")
{
    auto none = verify_all(table(), P, tol(), std::regex("^no-such-row$"));
    CHECK(none.reports.empty());
    CHECK(none.ok());
    auto some = verify_all(table(), P, tol(), std::regex("^T9-"));
    CHECK(some.reports.size() == 8);
    CHECK(some.ok());
    auto j = nlohmann::json::parse(reports_json(some.reports));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 8);
    for (const auto& e : j) {
        CHECK(e.size() == 6);
        for (const char* k : {"id", "status", "error", "terms", "seconds", "precision_bits"}) CHECK(e.contains(k));
        CHECK(e["status"] == "pass");
    }
}

TEST_CASE("rederivation from CM points")
{
    RederiveResult r = rederive_row(row("T10-96"), P, tol());
    CHECK(r.pass);
    CHECK(abs(r.ratio_B - Complex(Real(mpq_class(12, 32), P))) < tol());
    CHECK(abs(r.ratio_C - Complex(sqrt(Real(3L, P)) * 9L / 32L)) < tol());
    for (const char* id : {"T9-1008", "T11-760", "H2-16", "H3-60"}) {
        RederiveResult rr = rederive_row(row(id), P, tol());
        CHECK_MESSAGE(rr.pass, id << " " << rr.error);
    }
    TableRow bad = row("T17-420a");
    bad.y = rat(1, 143 * 143);
    RederiveResult nr = rederive_row(bad, P, tol());
    CHECK_FALSE(nr.found);
    CHECK_FALSE(nr.pass);
}
