#include "bimod/harness.hpp"
#include "bimod/modular.hpp"

#include <doctest.h>

#include <random>

using namespace bimod;

namespace {

const prec_t P = 160;

bool close(const Complex& a, const Complex& b, long bits)
{
    return abs(a - b) < pow2(-bits, P) * max(Real(1L, P), abs(b));
}

Complex cx(const char* re, const char* im) { return Complex(Real(re, P), Real(im, P)); }

// Points with moderate imaginary part, varied real part.
std::vector<Complex> sample_taus(unsigned seed, int n)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.6, 1.4);
    std::vector<Complex> v;
    for (int i = 0; i < n; ++i) v.emplace_back(Real(re(rng), P), Real(im(rng), P));
    return v;
}

} // namespace

TEST_CASE("q-series arithmetic")
{
    QSeries a(0, {1, 2, 3, 4, 5, 6});
    QSeries one = QSeries::one(5);
    CHECK((a * a.inverse()).first_difference(one) == std::nullopt);
    QSeries r = a.sqrt();
    CHECK((r * r).first_difference(a) == std::nullopt);
    CHECK(a.theta()[3] == 12);
    CHECK(a.dilate(2)[4] == 3);
    CHECK(a.dilate(2)[3] == 0);
    CHECK(a.pow(3).first_difference(a * a * a) == std::nullopt);
    QSeries b(1, {0, 0, 2});
    CHECK(b.normalized().lead() == 3);
    CHECK(b.normalized()[0] == 2);
}

TEST_CASE("eta and theta values against independent values")
{
    Complex tau = cx("0.1", "0.9");
    CHECK(close(eta(tau, P), cx("0.78761366917582962775969891443716528549223437556237",
                                "0.018989024764606504396142689746417354094244705818522"), 150));
    CHECK(close(theta_and_eisenstein(ThetaKind::Theta2, tau, P),
                cx("0.48048673933045074409979271721719898605257512330797",
                   "0.076107363031434610423027202454525905422469973737427"), 150));
    CHECK(close(theta_and_eisenstein(ThetaKind::Theta3, tau, P),
                cx("1.0056638296764382575874153169312360919474137154996",
                   "0.0041150134843065417275967328248333416909243437164991"), 150));
    CHECK(close(theta_and_eisenstein(ThetaKind::Theta4, tau, P),
                cx("0.99433616983770538676498385983537420466079483917214",
                   "-0.0041150131313112368479171330937511486495043585535799"), 150));
    CHECK(close(theta_and_eisenstein(ThetaKind::E2, tau, P),
                cx("0.93176271241574500935233089827365099352358165176493",
                   "-0.050223133020011637072798202802718906747741446213352"), 150));
}

TEST_CASE("eta transformation law")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> dist(-9, 9);
    int checked = 0;
    Complex tau = cx("0.137", "1.21");
    while (checked < 40) {
        long c = dist(rng), d = dist(rng);
        if (std::gcd(c, d) != 1) continue;
        // complete (a, b; c, d) in SL2(Z)
        long a = 0, b = 0;
        for (long s = -20; s <= 20 && a == 0 && b == 0; ++s)
            for (long t = -20; t <= 20; ++t)
                if (s * d - t * c == 1) {
                    a = s;
                    b = t;
                    break;
                }
        if (a * d - b * c != 1) continue;
        if (c < 0 || (c == 0 && d < 0)) { a = -a; b = -b; c = -c; d = -d; }
        Complex gt = (tau * a + b) / (tau * c + d);
        Complex lhs = eta(gt, P);
        Complex rhs = eta_multiplier(a, b, c, d, P) * eta(tau, P);
        if (c != 0) rhs = rhs * sqrt((tau * c + d) / i_unit(P));
        CHECK_MESSAGE(close(lhs, rhs, P - 16), a << " " << b << " " << c << " " << d);
        ++checked;
    }
    CHECK_THROWS(eta_multiplier(1, 1, 1, 1, P));
}

TEST_CASE("g equals f^2 t (1 - a t + c t^2) through order 50")
{
    for (const auto& cs : sporadic_cases()) CHECK_MESSAGE(!tfg_identity_mismatch(cs, 50), cs.name);
    for (const auto& cs : hypergeometric_cases()) CHECK_MESSAGE(!tfg_identity_mismatch(cs, 40), cs.name);
}

TEST_CASE("theta and cubic theta relations")
{
    for (const Complex& tau : sample_taus(11, 5)) {
        Complex t2 = theta_and_eisenstein(ThetaKind::Theta2, tau, P);
        Complex t3 = theta_and_eisenstein(ThetaKind::Theta3, tau, P);
        Complex t4 = theta_and_eisenstein(ThetaKind::Theta4, tau, P);
        CHECK(close(pow(t2, 4) + pow(t4, 4), pow(t3, 4), 140));
        // a(q), b(q) = (3 a(q^3) - a(q)) / 2, c(q) = (a(q^(1/3)) - a(q)) / 2
        Complex a = theta_and_eisenstein(ThetaKind::L, tau, P);
        Complex b = (theta_and_eisenstein(ThetaKind::L, tau * 3L, P) * 3L - a) / 2L;
        Complex c = (theta_and_eisenstein(ThetaKind::L, tau / 3L, P) - a) / 2L;
        CHECK(close(pow(a, 3), pow(b, 3) + pow(c, 3), 140));
    }
}

TEST_CASE("generalized eta quotient reproduces the level 5 Hauptmodul")
{
    const SeriesCase cs = case_by_name("11,3,-1");
    for (const Complex& tau : sample_taus(5, 3)) {
        Complex z = tau * 5L;
        Complex t = pow(gen_eta(1, z, P) / gen_eta(2, z, P), 5);
        CHECK(close(t, case_eval(cs, tau, P).t, 140));
    }
}

TEST_CASE("bimodular parameterization matches the double series")
{
    Complex t1 = cx("0.3", "0.8"), t2 = cx("0.5", "1.3");
    for (const auto& cs : sporadic_cases()) {
        XYF r = bimodular_xyF(cs, t1, t2, P);
        XYF s = bimodular_xyF(cs, t2, t1, P);
        CHECK_MESSAGE(close(r.F, s.F, 140), cs.name);
        CHECK(close(r.F, eval_series_complex(cs, r.x, r.y, P), 130));
    }
    for (const auto& cs : hypergeometric_cases()) {
        auto taus = sample_taus(100 + cs.a.get_den().get_ui(), 10);
        for (int i = 0; i < 5; ++i) {
            Complex a = taus[2 * i], b = taus[2 * i + 1];
            a.im = a.im + Real(1.0, P);
            b.im = b.im + Real(0.5, P);
            XYF r = bimodular_xyF(cs, a, b, P);
            CHECK_MESSAGE(close(r.F, eval_series_complex(cs, r.x, r.y, P), 130), cs.name);
        }
    }
}

TEST_CASE("normalizer generators act with the expected characters")
{
    Complex t1 = cx("0.11", "0.93"), t2 = cx("-0.23", "1.07");
    std::vector<SeriesCase> all = sporadic_cases();
    for (const auto& h : hypergeometric_cases()) all.push_back(h);
    for (const auto& cs : all)
        for (const auto& g : modular_data(cs).generators) {
            TransformCheck tc = check_transform(cs, g.tag, t1, t2, P);
            CHECK_MESSAGE(tc.ok, cs.name << " " << g.tag << " residual " << tc.residual.str(3));
        }
    CHECK_THROWS(check_transform(case_by_name("7,2,-8"), "nope", t1, t2, P));
}

TEST_CASE("closed forms of the special double series")
{
    Complex t1 = cx("0.05", "1.1"), t2 = cx("-0.1", "1.3");
    for (auto k : {Section3Kind::T2n, Section3Kind::RS, Section3Kind::T3n}) {
        Section3Result r = section3_identity(k, t1, t2, P);
        CHECK(r.residual < pow2(16 - long(P), P) * max(Real(1L, P), abs(r.closed)));
    }
}

TEST_CASE("parse_complex")
{
    Complex z = parse_complex("0.25-1.5i", 64);
    CHECK(z.re.to_double() == 0.25);
    CHECK(z.im.to_double() == -1.5);
    CHECK(parse_complex("2i", 64).im.to_double() == 2);
    CHECK(parse_complex("-3", 64).re.to_double() == -3);
    CHECK_THROWS(parse_complex("1+", 64));
}
