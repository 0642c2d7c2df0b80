#include "bimod/exactmath.hpp"

#include <doctest.h>

using namespace bimod;

namespace {

std::vector<long> first_terms(const SeriesCase& cs, int n)
{
    std::vector<long> out;
    for (const auto& v : apery_seq_z(cs, n)) out.push_back(v.get_si());
    return out;
}

} // namespace

TEST_CASE("sporadic sequences match independent values")
{
    using V = std::vector<long>;
    CHECK(first_terms(case_by_name("7,2,-8"), 9) == V{1, 2, 10, 56, 346, 2252, 15184, 104960, 739162, 5280932});
    CHECK(first_terms(case_by_name("10,3,9"), 9) == V{1, 3, 15, 93, 639, 4653, 35169, 272835, 2157759, 17319837});
    CHECK(first_terms(case_by_name("-17,-6,72"), 9) ==
          V{1, -6, 42, -312, 2394, -18756, 149136, -1199232, 9729882, -79527084});
    CHECK(first_terms(case_by_name("12,4,32"), 9) == V{1, 4, 20, 112, 676, 4304, 28496, 194240, 1353508, 9593104});
    CHECK(first_terms(case_by_name("-9,-3,27"), 9) == V{1, -3, 9, -21, 9, 297, -2421, 12933, -52407, 145293});
    CHECK(first_terms(case_by_name("11,3,-1"), 9) ==
          V{1, 3, 19, 147, 1251, 11253, 104959, 1004307, 9793891, 96918753});
}

TEST_CASE("recurrence and closed forms agree for n <= 60")
{
    for (const auto& cs : sporadic_cases()) {
        auto u = apery_seq_z(cs, 60);
        for (long n = 0; n <= 60; ++n) REQUIRE_MESSAGE(u[n] == apery_closed(cs, n), cs.name << " n=" << n);
    }
    CHECK_THROWS_AS(apery_closed(SeriesCase::make_hypergeometric(mpq_class(1, 2)), 3), std::invalid_argument);
}

TEST_CASE("hypergeometric sequences")
{
    auto u = apery_seq(SeriesCase::make_hypergeometric(mpq_class(1, 2)), 10);
    for (long n = 0; n <= 10; ++n) CHECK(u[n] == rat(binom(2 * n, n) * binom(2 * n, n), mpz_class(1) << (4 * n)));
    auto v = apery_seq(SeriesCase::make_hypergeometric(mpq_class(1, 3)), 6);
    // (3n)! / (n!^3 27^n)
    for (long n = 0; n <= 6; ++n) {
        mpz_class num = 1, den = 1;
        for (long k = 1; k <= 3 * n; ++k) num *= k;
        for (long k = 1; k <= n; ++k) den *= k * k * k * 27;
        CHECK(v[n] == rat(num, den));
    }
}

TEST_CASE("T_n, Legendre and double coefficients")
{
    CHECK(tn(5, 3, -2) == -477);
    CHECK(tn(4, mpq_class(1, 2), mpq_class(1, 3)) == rat(83, 48));
    CHECK(tn(0, 7, 7) == 1);
    CHECK(legendre(7, mpq_class(2, 3)) == rat(1403, 5832));
    CHECK(legendre(2, 0) == rat(-1, 2));
    for (long n = 0; n <= 12; ++n)
        for (int i = -2; i <= 2; ++i) {
            mpq_class x = rat(i, 3);
            CHECK(legendre(n, x) == tn(n, x, (x * x - 1) / 4));
        }
    CHECK(double_coeff(6, 2) == 90);
    CHECK(double_coeff(4, 0) == 1);
    CHECK_THROWS_AS(double_coeff(4, 3), std::domain_error);
}

TEST_CASE("combinatorial identity on a rational grid")
{
    // sum_m C(n,2m) C(2m,m) y^m is the x^n coefficient of (x^2 + x + y)^n
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
            mpq_class y = rat(i, 5 + j);
            for (long n = 0; n <= 12; ++n) {
                mpq_class s = 0, ym = 1;
                for (long m = 0; 2 * m <= n; ++m, ym *= y) s += double_coeff(n, m) * ym;
                CHECK(s == tn(n, 1, y));
            }
        }
}

TEST_CASE("kronecker symbol")
{
    CHECK(kronecker(2, 7) == 1);
    CHECK(kronecker(-1, 7) == -1);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(-7, 2) == 1);
    CHECK(kronecker(6, 3) == 0);
    CHECK(kronecker(-420, 11) == kronecker(-420 % 11 + 11, 11));
}

TEST_CASE("quadratic numbers")
{
    QuadraticNumber a{1, 1, 2}, b{1, -1, 2};
    QuadraticNumber p = a * b;
    CHECK(p == QuadraticNumber{-1, 0, 2});
    CHECK(abs(a.eval(128).re - (Real(1L, 128) + sqrt(Real(2L, 128)))) < pow2(-120, 128));
    QuadraticNumber c{0, 1, -3};
    CHECK(abs(c.eval(128).im - sqrt(Real(3L, 128))) < pow2(-120, 128));
}

TEST_CASE("case lookup")
{
    CHECK(case_by_name("(7,2,-8)").a == 7);
    CHECK(case_by_name("1/3").params.size() == 2);
    CHECK(sporadic_cases().size() == 6);
    CHECK(hypergeometric_cases().size() >= 3);
    CHECK_THROWS_AS(case_by_name("1,2,3"), std::invalid_argument);
    CHECK_THROWS_AS(case_by_name("banana"), std::invalid_argument);
}
