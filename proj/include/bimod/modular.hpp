#pragma once

#include "bimod/exactmath.hpp"
#include "bimod/numerics.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace bimod {

// q^lead * sum_k c[k] q^k, known through q^(lead + M) where M = c.size() - 1.
class QSeries {
public:
    QSeries() = default;
    QSeries(mpq_class lead, std::vector<mpq_class> coeffs);
    static QSeries one(int M);

    const mpq_class& lead() const { return lead_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    int order() const { return int(c_.size()) - 1; }
    mpq_class operator[](int k) const { return k < int(c_.size()) ? c_[k] : mpq_class(0); }
    bool is_zero() const;

    QSeries truncated(int M) const;
    QSeries operator*(const QSeries& o) const;
    QSeries operator*(const mpq_class& s) const;
    // Leads must differ by an integer.
    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries inverse() const;
    QSeries pow(long e) const;
    // Requires lead 0 and constant term 1.
    QSeries sqrt() const;
    // q d/dq termwise.
    QSeries theta() const;
    // q -> q^k.
    QSeries dilate(int k) const;
    // Leading nonzero coefficient moved to index 0 (lead adjusted).
    QSeries normalized() const;
    // First index where the two differ, comparing through the shorter length.
    std::optional<int> first_difference(const QSeries& o) const;
    std::string str(int terms = 8) const;

private:
    mpq_class lead_ = 0;
    std::vector<mpq_class> c_;
};

// scale * q^lead * prod_{n>=1} (1 - q^n)^{expo[n mod period]}.
struct PeriodicProduct {
    mpq_class scale = 1;
    mpq_class lead = 0;
    int period = 1;
    std::vector<long> expo{0};

    // {(k, e)}: prod eta(k tau)^e.
    static PeriodicProduct eta_quotient(const std::vector<std::pair<int, int>>& factors, const mpq_class& scale = 1);
    PeriodicProduct operator*(const PeriodicProduct& o) const;
    PeriodicProduct pow(long e) const;

    QSeries expand(int M) const;

    struct Value {
        Complex v;    // the product
        Complex L1;   // theta_q log v
        Complex dL1;  // theta_q L1
    };
    Value eval(const Complex& tau, prec_t p) const;
};

// Number of q-terms so that |q|^n n^2 < 2^(-p-16).
long q_terms(const Real& im_tau, prec_t p);
Complex qpow(const mpq_class& r, const Complex& tau, prec_t p);  // e^{2 pi i r tau}

Complex eta(const Complex& tau, prec_t p);
// Root of unity eps with eta(g tau) = eps sqrt((c tau + d)/i) eta(tau), for c > 0;
// e^{pi i b/12} when c = 0 and d = 1.
Complex eta_multiplier(long a, long b, long c, long d, prec_t p);
// E_{g,0}(tau) for g in {1, 2}.
Complex gen_eta(int g, const Complex& tau, prec_t p);
QSeries gen_eta_series(int g, int M);  // in powers of q^(1/5): returns E_{g,0}(5 tau)

enum class ThetaKind { Theta2, Theta3, Theta4, E2, L };
Complex theta_and_eisenstein(ThetaKind kind, const Complex& tau, prec_t p);
QSeries theta_series(ThetaKind kind, int M);

// ---------------------------------------------------------------- per case

enum class FKind { Product, CubicTheta, SqrtE2 };

struct Generator {
    std::string tag;
    long a, b, c, d;
    int chi;           // chi_2 value
    bool square_only;  // only F^2 transforms (a = 1/4)
};

struct CaseModularData {
    SeriesCase cs;
    PeriodicProduct t;
    FKind fkind = FKind::Product;
    PeriodicProduct f;  // FKind::Product
    std::vector<Generator> generators;
};

const CaseModularData& modular_data(const SeriesCase& cs);

struct TFG {
    QSeries t, f, g;
    QSeries f2;  // f^2 (direct for SqrtE2)
};
TFG case_tfg(const SeriesCase& cs, int M);
// g == f^2 t (1 - a t + c t^2) for sporadic, g == f^2 t for hypergeometric.
std::optional<int> tfg_identity_mismatch(const SeriesCase& cs, int M);

struct CaseValue {
    Complex t, f, g, dg;  // g = theta_q t, dg = theta_q g
    // Variable X of the unified bimodular formulas: t for sporadic, t/(t-1) otherwise.
    Complex X, gX, dgX;
};
CaseValue case_eval(const SeriesCase& cs, const Complex& tau, prec_t p);

struct XYF {
    Complex x, y, F;
};
// From unified variables X1, X2 and f-values.
XYF xyF_from(const SeriesCase& cs, const Complex& X1, const Complex& X2, const Complex& f1, const Complex& f2);
XYF bimodular_xyF(const SeriesCase& cs, const Complex& tau1, const Complex& tau2, prec_t p);

struct TransformCheck {
    std::string tag;
    int expected_chi = 0;
    Complex ratio;     // (F|gamma) / F, or the F^2 analogue
    Real residual;     // |F|gamma - chi F| / |F|
    int sigma = 0;     // 1: X -> 1/(cX), 2: X -> (1-alpha X)/(alpha(1-beta X)), 3: alpha<->beta, 4: X fixed
    bool ok = false;
};
TransformCheck check_transform(const SeriesCase& cs, const std::string& tag, const Complex& tau1,
                               const Complex& tau2, prec_t p);

enum class Section3Kind { T2n, RS, T3n };
struct Section3Result {
    Complex series, closed;
    Real residual;
    long terms = 0;
};
Section3Result section3_identity(Section3Kind kind, const Complex& tau1, const Complex& tau2, prec_t p);

Complex parse_complex(const std::string& s, prec_t p);

} // namespace bimod
