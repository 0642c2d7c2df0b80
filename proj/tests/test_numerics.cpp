#include "bimod/numerics.hpp"

#include <doctest.h>

using namespace bimod;

TEST_CASE("real arithmetic keeps the larger precision")
{
    Real a(1L, 64), b(3L, 256);
    Real c = a / b;
    CHECK(c.prec() == 256);
    CHECK(abs(c * 3L - Real(1L, 256)) < pow2(-250, 256));
}

TEST_CASE("pi and elementary functions")
{
    const prec_t p = 200;
    Real pi = pi_const(p);
    CHECK(abs(pi - Real("3.14159265358979323846264338327950288419716939937510582097494", p)) < pow2(-195, p));
    CHECK(abs(sin(pi)) < pow2(-190, p));
    CHECK(abs(exp(log(Real(7L, p))) - Real(7L, p)) < pow2(-190, p));
    Complex z = expi_pi(mpq_class(1, 3), p);
    CHECK(abs(z.re - Real(mpq_class(1, 2), p)) < pow2(-195, p));
    CHECK(abs(pow(z, 6) - Complex(1L, p)) < pow2(-190, p));
}

TEST_CASE("complex sqrt and log use principal branches")
{
    const prec_t p = 128;
    Complex m1(-1L, p);
    Complex s = sqrt(m1);
    CHECK(abs(s.re) < pow2(-120, p));
    CHECK(s.im > Real(0L, p));
    Complex l = log(m1);
    CHECK(abs(l.im - pi_const(p)) < pow2(-120, p));
}

TEST_CASE("recognize_rational")
{
    const prec_t p = 200;
    Real v = Real(mpq_class(19601, 217800), p);
    auto r = recognize_rational(v, mpz_class(1000000), pow2(-150, p));
    REQUIRE(r);
    CHECK(*r == mpq_class(19601, 217800));
    // 1/39202^2 needs a large denominator
    mpq_class y = rat(1, mpz_class(39202) * 39202);
    auto ry = recognize_rational(Real(y, p), mpz_class("10000000000"), pow2(-150, p));
    REQUIRE(ry);
    CHECK(*ry == y);
    CHECK_FALSE(recognize_rational(pi_const(p), mpz_class(1000000), pow2(-150, p)));
    Complex c(Real(mpq_class(-71, 1008), p), Real(1e-10, p));
    CHECK_FALSE(recognize_rational(c, mpz_class(10000), pow2(-150, p)));
}

TEST_CASE("parse_rational accepts integer powers")
{
    CHECK(parse_rational("-7/21^2") == rat(-7, 441));
    CHECK(parse_rational("64^2/7^2") == rat(4096, 49));
    CHECK(parse_rational("12") == 12);
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("ConstExpr grammar")
{
    const prec_t p = 200;
    auto close = [&](const std::string& s, const Real& v) {
        return abs(ConstExpr::parse(s).eval(p) - v) < pow2(-185, p) * max(Real(1L, p), abs(v));
    };
    Real s2 = sqrt(Real(2L, p)), s5 = sqrt(Real(5L, p));
    CHECK(close("3*sqrt(35)", sqrt(Real(35L, p)) * 3L));
    CHECK(close("2*sqrt(8+6*sqrt(2))", sqrt(Real(8L, p) + s2 * 6L) * 2L));
    CHECK(close("8*(2+sqrt(5))", (s5 + Real(2L, p)) * 8L));
    CHECK(close("56", Real(56L, p)));
    CHECK(close("-1/2", Real(mpq_class(-1, 2), p)));
    CHECK_THROWS_AS(ConstExpr::parse("sqrt(-3)").eval(p), std::domain_error);
    CHECK_THROWS(ConstExpr::parse("3*"));
    CHECK_THROWS(ConstExpr::parse("sqrt(2"));
}

TEST_CASE("digits to bits")
{
    CHECK(digits_to_bits(50) >= 166);
    CHECK(digits_to_bits(50) <= 180);
}
