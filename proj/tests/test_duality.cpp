#include <gtest/gtest.h>

#include <random>

#include "abcf/duality.hpp"

using namespace abcf;

namespace {

ParamPair pp(const char* a, const char* b) { return ParamPair::parse(a, b); }

const char* golden_a = "(1-sqrt(5))/2";

} // namespace

TEST(HasDual, Examples)
{
    EXPECT_TRUE(has_dual(pp("-1/2", "1/2")));
    EXPECT_TRUE(has_dual(pp("-1", "0")));
    EXPECT_TRUE(has_dual(pp("-1", "1")));
    EXPECT_FALSE(has_dual(pp("-4/5", "2/5"))); // strong cycles at both ends
    EXPECT_FALSE(has_dual(pp("-1/2", "3/2")));
}

TEST(DualParams, Examples)
{
    auto h = dual_report(pp("-1/2", "1/2"));
    ASSERT_TRUE(h.dual);
    EXPECT_EQ(h.dual->a, ExtendedReal(Surd::make(1, -1, 2, 5)));
    EXPECT_EQ(h.dual->b, ExtendedReal(Surd::make(-1, 1, 2, 5)));
    EXPECT_FALSE(h.self_dual);
    EXPECT_FALSE(h.approximate);

    for (auto [a, b] : {std::pair{golden_a, "(3-sqrt(5))/2"}, std::pair{"-3/8", "2/3"}, std::pair{"-1", "0"},
                        std::pair{"-1", "1"}}) {
        auto r = dual_report(pp(a, b));
        ASSERT_TRUE(r.dual) << a << "," << b;
        EXPECT_TRUE(r.self_dual) << a << "," << b << " -> " << r.dual->str();
    }

    auto s = dual_report(pp("-4/5", "2/5"));
    EXPECT_FALSE(s.has_dual);
    EXPECT_TRUE(s.strong_endpoint.has_value());
}

TEST(DualParams, SymmetricOnExactPairs)
{
    for (auto [a, b] : {std::pair{"-1/2", "1/2"}, std::pair{golden_a, "(sqrt(5)-1)/2"}, std::pair{"-3/8", "2/3"},
                        std::pair{"-2/3", "3/8"}, std::pair{"-1", "0"}, std::pair{"0", "1"}}) {
        auto P = pp(a, b);
        auto r = dual_report(P);
        ASSERT_TRUE(r.dual) << P.str();
        auto back = dual_report(*r.dual);
        ASSERT_TRUE(back.dual) << r.dual->str();
        EXPECT_EQ(back.dual->a, P.a);
        EXPECT_EQ(back.dual->b, P.b);
    }
}

TEST(DualParams, DualRegimeProperties)
{
    // has_dual forces -1 <= a <= 0 <= b <= 1, and no levels strictly between a and 0
    // (lower part) or 0 and b (upper part)
    for (auto [a, b] : {std::pair{"-1/2", "1/2"}, std::pair{golden_a, "(3-sqrt(5))/2"}, std::pair{"-3/8", "2/3"},
                        std::pair{"-1", "0"}, std::pair{"-1", "1"}, std::pair{"-4/5", "2/5"},
                        std::pair{"-1/2", "3/2"}, std::pair{"-3/2", "1/2"}}) {
        auto P = pp(a, b);
        if (!has_dual(P))
            continue;
        EXPECT_GE(P.a, ExtendedReal(-1));
        EXPECT_LE(P.b, ExtendedReal(1));
        auto D = build_domain(P);
        for (const auto& r : D.rects) {
            if (r.comp == Component::lower)
                EXPECT_FALSE(P.a < r.w.hi && r.w.hi.sign() < 0) << P.str() << " level " << r.w.hi.str();
            else
                EXPECT_FALSE(r.w.lo.sign() > 0 && r.w.lo < P.b) << P.str() << " level " << r.w.lo.str();
        }
    }
}

TEST(VerifyDuality, HurwitzPairBothWays)
{
    auto H = pp("-1/2", "1/2"), G = pp(golden_a, "(sqrt(5)-1)/2");
    auto c1 = verify_duality(H, G), c2 = verify_duality(G, H);
    EXPECT_TRUE(c1.ok) << c1.detail;
    EXPECT_TRUE(c1.certified);
    EXPECT_TRUE(c2.ok) << c2.detail;
    EXPECT_TRUE(verify_duality(pp("-3/8", "2/3"), pp("-3/8", "2/3")).ok);
}

TEST(VerifyDuality, PerturbedDualFails)
{
    auto H = pp("-1/2", "1/2");
    auto r = dual_report(H);
    ParamPair bad{r.dual->a + ExtendedReal::rational(1, 1000), r.dual->b};
    auto c = verify_duality(H, bad);
    EXPECT_FALSE(c.ok);
    ASSERT_TRUE(c.witness.has_value()) << c.detail;
}

TEST(Juxtaposition, RandomReducedGeodesics)
{
    auto H = pp("-1/2", "1/2");
    auto G = Geometry::build(H);
    auto dual = *dual_report(H).dual;
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long long> c(-40, 40), r(1, 30), k(1, 9);
    int checked = 0;
    while (checked < 100) {
        // away from the sqrt5 corners of the Hurwitz domain
        long long d = checked % 2 ? 2 : 3;
        Geodesic g{Surd::make(c(rng), k(rng), r(rng), d), Surd::make(c(rng), k(rng), r(rng), d)};
        if (g.u == g.w)
            continue;
        Geodesic h;
        try {
            h = reduce(g, G, 200).first;
        } catch (const Error&) {
            continue;
        }
        if (h.u.is_zero())
            continue;
        auto res = juxtaposition_check(h, G, dual, 15);
        EXPECT_TRUE(res.ok) << h.str() << ": " << res.detail;
        ++checked;
    }
    EXPECT_TRUE(juxtaposition_check({Surd::make(0, 1, 3, 5), 3}, G, dual, 0).ok);
}

TEST(Juxtaposition, ReversedPeriod)
{
    auto H = pp("-1/2", "1/2");
    auto G = Geometry::build(H);
    auto dual = *dual_report(H).dual;
    // words T^n S with several digits give purely periodic reduced axes
    int periodic = 0;
    for (auto word : std::vector<std::vector<Digit>>{{3, -2}, {2, 3, -4}, {5, 2, 2}, {-3, 4, 2, -2}, {3}}) {
        UnimodularMap A;
        for (Digit d : word)
            A = A * UnimodularMap::T(d) * UnimodularMap::S();
        auto cyc = reduced_cycle(word_axis(A), G);
        auto res = juxtaposition_check(cyc.front(), G, dual, 8);
        EXPECT_TRUE(res.ok) << res.detail;
        periodic += res.periodic_checked;
    }
    EXPECT_GE(periodic, 3);
}
