// Modular parametrizations of every case: Hauptmodul t, weight-1 form f,
// and normalizer generators with their chi_2 values.
#include "bimod/modular.hpp"

#include <stdexcept>

namespace bimod {

namespace {

using EQ = std::vector<std::pair<int, int>>;

PeriodicProduct periodic(long lead, std::vector<long> expo)
{
    PeriodicProduct pp;
    pp.lead = lead;
    pp.period = int(expo.size());
    pp.expo = std::move(expo);
    return pp;
}

std::vector<Generator> gamma0_6(int chi2, int chi3)
{
    return {
        {"w2", 2, -1, 6, -2, chi2, false},
        {"w3", 3, 1, 6, 3, chi3, false},
        {"w6", 0, -1, 6, 0, chi2 * chi3, false},
    };
}

std::vector<CaseModularData> build()
{
    std::vector<CaseModularData> v;
    auto add = [&](const SeriesCase& cs, PeriodicProduct t, FKind fk, PeriodicProduct f, std::vector<Generator> g) {
        v.push_back({cs, std::move(t), fk, std::move(f), std::move(g)});
    };
    const auto& sp = sporadic_cases();
    // t = 1^3 6^9 / 2^3 3^9,   f = 2^1 3^6 / 1^2 6^3
    add(sp[0], PeriodicProduct::eta_quotient(EQ{{1, 3}, {6, 9}, {2, -3}, {3, -9}}), FKind::Product,
        PeriodicProduct::eta_quotient(EQ{{2, 1}, {3, 6}, {1, -2}, {6, -3}}), gamma0_6(1, -1));
    // t = 1^4 6^8 / 2^8 3^4,   f = 2^6 3^1 / 1^3 6^2
    add(sp[1], PeriodicProduct::eta_quotient(EQ{{1, 4}, {6, 8}, {2, -8}, {3, -4}}), FKind::Product,
        PeriodicProduct::eta_quotient(EQ{{2, 6}, {3, 1}, {1, -3}, {6, -2}}), gamma0_6(-1, 1));
    // t = 2^1 6^5 / 1^5 3^1,   f = 1^6 6^1 / 2^3 3^2
    add(sp[2], PeriodicProduct::eta_quotient(EQ{{2, 1}, {6, 5}, {1, -5}, {3, -1}}), FKind::Product,
        PeriodicProduct::eta_quotient(EQ{{1, 6}, {6, 1}, {2, -3}, {3, -2}}), gamma0_6(-1, -1));
    // t = 1^4 4^2 8^4 / 2^10,  f = 2^10 / 1^4 4^4
    add(sp[3], PeriodicProduct::eta_quotient(EQ{{1, 4}, {4, 2}, {8, 4}, {2, -10}}), FKind::Product,
        PeriodicProduct::eta_quotient(EQ{{2, 10}, {1, -4}, {4, -4}}),
        {{"m4184", 4, 1, 8, 4, 1, false}, {"w8", 0, -1, 8, 0, -1, false}});
    // t = 9^3 / 1^3,           f = 1^3 / 3^1
    add(sp[4], PeriodicProduct::eta_quotient(EQ{{9, 3}, {1, -3}}), FKind::Product,
        PeriodicProduct::eta_quotient(EQ{{1, 3}, {3, -1}}),
        {{"m-3-293", -3, -2, 9, 3, -1, false}, {"w9", 0, -1, 9, 0, 1, false}});
    // t = q prod (1-q^n)^{5 (n/5)},  f exponents by n mod 5: 2, -3, 2, 2, -3
    add(sp[5], periodic(1, {0, 5, -5, -5, 5}), FKind::Product, periodic(0, {2, -3, 2, 2, -3}),
        {{"m2-15-2", 2, -1, 5, -2, 1, false}, {"w5", 0, -1, 5, 0, -1, false}});

    const auto& hy = hypergeometric_cases();
    for (const auto& cs : hy) {
        if (cs.a == mpq_class(1, 2))
            // t = 16 1^8 4^16 / 2^24 = theta2^4/theta3^4,  f = 1^4 / 2^2 = theta4^2
            add(cs, PeriodicProduct::eta_quotient(EQ{{1, 8}, {4, 16}, {2, -24}}, 16), FKind::Product,
                PeriodicProduct::eta_quotient(EQ{{1, 4}, {2, -2}}), {{"w", 1, 0, 2, 1, -1, false}});
        else if (cs.a == mpq_class(1, 3))
            // t = -27 3^12 / 1^12,  f = L(tau)
            add(cs, PeriodicProduct::eta_quotient(EQ{{3, 12}, {1, -12}}, -27), FKind::CubicTheta, {},
                {{"w3", 0, -1, 3, 0, -1, false}});
        else if (cs.a == mpq_class(1, 4))
            // t = -64 2^24 / 1^24,  f^2 = 2 E2(2 tau) - E2(tau)
            add(cs, PeriodicProduct::eta_quotient(EQ{{2, 24}, {1, -24}}, -64), FKind::SqrtE2, {},
                {{"w2", 0, -1, 2, 0, 1, true}});
    }
    return v;
}

} // namespace

const CaseModularData& modular_data(const SeriesCase& cs)
{
    static const std::vector<CaseModularData> table = build();
    for (const auto& md : table) {
        if (md.cs.kind != cs.kind) continue;
        if (cs.sporadic() ? (md.cs.a == cs.a && md.cs.b == cs.b && md.cs.c == cs.c) : md.cs.a == cs.a) return md;
    }
    throw std::invalid_argument("no modular parametrization for case " + cs.name);
}

} // namespace bimod
