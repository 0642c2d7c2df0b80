#pragma once

#include "bimod/cm.hpp"
#include "bimod/constants.hpp"
#include "bimod/exactmath.hpp"
#include "bimod/numerics.hpp"

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bimod {

enum class Weight { N, M };  // (A n + B) or (A m + B)

struct TableRow {
    std::string id;
    SeriesCase cs;
    std::vector<long> discs;
    mpq_class x, y;
    mpz_class A, B;
    ConstExpr C;
    std::string C_text;
    Weight weight = Weight::N;
    std::string ref;
    long max_terms = 0;  // 0: use the caller's default
    std::optional<mpq_class> alt_x, alt_y;
    std::optional<ConstExpr> alt_C;
    std::string alt_C_text;
    int line = 0;
};

struct TableParseError : std::runtime_error {
    TableParseError(const std::string& source, int line, const std::string& msg);
    int line;
};

std::vector<TableRow> parse_table(std::istream& in, const std::string& source = "<input>");
std::vector<TableRow> load_table(const std::string& path);
std::string default_table_path();

// ---------------------------------------------------------------- series

struct SeriesSpec {
    SeriesCase cs;
    mpq_class x, y;
    mpz_class A = 0, B = 1;
    Weight weight = Weight::N;
};

enum class SumOrder { Auto, NOuter, MOuter };

struct SeriesOptions {
    prec_t precision = 192;
    long max_terms = 100000;
    SumOrder order = SumOrder::Auto;
    long extra_terms = 0;  // keep summing this many outer terms past the stopping point
};

struct SeriesValue {
    Real value;
    Real tail_bound;   // estimated bound on the discarded tail
    long terms = 0;    // outer terms summed
    SumOrder order = SumOrder::NOuter;
    double ratio = 0;  // asymptotic ratio of the chosen outer order
    Real extension_change;  // |sum with extra_terms - value|
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Growth of the n-ordered terms: |x| * max(|alpha|,|beta|) * max|1 +- 2 sqrt(y)|.
double n_order_ratio(const SeriesCase& cs, const mpq_class& x, const mpq_class& y);
// Growth of the m-ordered terms (infinite when an inner n-sum diverges).
double m_order_ratio(const SeriesCase& cs, const mpq_class& x, const mpq_class& y);

SeriesValue eval_series(const SeriesSpec& s, const SeriesOptions& opt = {});
// Unweighted sum u_n C(n,2m) C(2m,m) x^n y^m at complex arguments (n-ordered).
Complex eval_series_complex(const SeriesCase& cs, const Complex& x, const Complex& y, prec_t P,
                            long max_terms = 100000);

// ---------------------------------------------------------------- verification

struct VerifyReport {
    std::string id;
    bool pass = false;
    std::string error;    // non-empty on evaluation errors
    std::string variant;  // "printed", or the alternative keys that verified
    std::vector<std::string> notes;
    Real achieved;        // |sum - C/pi|
    Real tail_bound;
    long terms = 0;
    double seconds = 0;
    prec_t precision_bits = 0;
    std::string status() const { return error.empty() ? (pass ? "pass" : "fail") : "error"; }
};

VerifyReport verify_row(const TableRow& row, prec_t P, const Real& tol, long max_terms = 100000);

struct VerifySummary {
    std::vector<VerifyReport> reports;
    int passed = 0, failed = 0;
    bool ok() const { return failed == 0; }
};
VerifySummary verify_all(const std::vector<TableRow>& rows, prec_t P, const Real& tol,
                         const std::optional<std::regex>& filter = std::nullopt, long max_terms = 100000);

// {id, status, error, terms, seconds, precision_bits} per report.
std::string reports_json(const std::vector<VerifyReport>& reports);

struct RederiveResult {
    std::string id;
    bool found = false;  // a CM pair reproduces (x, y)
    bool aligned = false;
    bool pass = false;
    QuadForm q1, q2;     // aligned representatives
    Constants k;
    Complex ratio_B;     // B1 or B2 (by weight), to compare with B/A
    Complex ratio_C;     // C1 or C2, to compare with C/A
    Real err_B, err_C;
    std::string variant;
    std::string error;
};
RederiveResult rederive_row(const TableRow& row, prec_t P, const Real& tol);

} // namespace bimod
