#include <gtest/gtest.h>

#include <random>

#include "abcf/attractor.hpp"

using namespace abcf;

namespace {

ParamPair pp(const char* a, const char* b) { return ParamPair::parse(a, b); }
ExtendedReal q(long long p, long long r) { return ExtendedReal::rational(p, r); }
const ExtendedReal inf = ExtendedReal::inf();

Rect up(ExtendedReal u0, ExtendedReal u1, ExtendedReal level) { return {{u0, u1}, {level, inf}, Component::upper}; }
Rect lo(ExtendedReal u0, ExtendedReal u1, ExtendedReal level) { return {{u0, u1}, {inf, level}, Component::lower}; }

const std::vector<std::pair<const char*, const char*>> exact_params = {
    {"-4/5", "2/5"},
    {"-1", "0"},
    {"0", "1"},
    {"-1", "1"},
    {"-1/2", "1/2"},
    {"(1-sqrt(5))/2", "(sqrt(5)-1)/2"},
    {"(1-sqrt(5))/2", "(3-sqrt(5))/2"},
    {"(sqrt(5)-3)/2", "(sqrt(5)-1)/2"},
    {"-3/8", "2/3"},
    {"-2/3", "3/8"},
    {"-1/2", "3/2"},
    {"-3/2", "1/2"},
    {"-7/10", "1/2"},
    {"-2/5", "4/5"},
    {"-3/5", "7/10"},
    {"-sqrt(2)/2", "1/2"},
};

// random exact point of a rectangle clipped to [-6,6]^2
std::pair<ExtendedReal, ExtendedReal> random_point(std::mt19937_64& rng, const Rect& r)
{
    std::uniform_int_distribution<long long> t(1, 999999);
    auto pick = [&](const Interval& I) {
        ExtendedReal l = I.lo.is_inf() ? ExtendedReal(-6) : I.lo;
        ExtendedReal h = I.hi.is_inf() ? ExtendedReal(6) : I.hi;
        if (l < ExtendedReal(-6))
            l = ExtendedReal(-6);
        if (h > ExtendedReal(6))
            h = ExtendedReal(6);
        if (h < l)
            h = l + ExtendedReal(1);
        return l + (h - l) * q(t(rng), 1000003);
    };
    return {pick(r.u), pick(r.w)};
}

} // namespace

TEST(NaturalExtension, Examples)
{
    auto P = pp("-4/5", "2/5");
    auto [u1, w1] = natural_extension_step(5, -2, P);
    EXPECT_EQ(u1, ExtendedReal(6));
    EXPECT_EQ(w1, ExtendedReal(-1));
    auto [u2, w2] = natural_extension_step(2, 0, P);
    EXPECT_EQ(u2, q(-1, 2));
    EXPECT_TRUE(w2.is_inf());
    auto [u3, w3] = natural_extension_step(-3, 1, P);
    EXPECT_EQ(u3, ExtendedReal(-4));
    EXPECT_EQ(w3, ExtendedReal(0));
    EXPECT_THROW(natural_extension_step(q(1, 3), q(1, 3), P), Error);
}

TEST(NaturalExtension, PreimagesInvertTheStep)
{
    std::mt19937_64 rng(3);
    auto P = pp("-3/8", "2/3");
    std::uniform_int_distribution<long long> n(-5000, 5000);
    for (int i = 0; i < 2000; ++i) {
        ExtendedReal u = q(n(rng), 997), w = q(n(rng), 991);
        if (u == w)
            continue;
        auto img = natural_extension_step(u, w, P);
        if (img.second.is_inf())
            continue;
        auto pre = natural_extension_preimages(img.first, img.second, P);
        bool found = false;
        for (auto& c : pre) {
            auto back = natural_extension_step(c.first, c.second, P);
            EXPECT_TRUE(back.first == img.first && back.second == img.second);
            found = found || (c.first == u && c.second == w);
        }
        EXPECT_TRUE(found);
    }
}

TEST(Cycles, WeakCycleFamily)
{
    for (long long n = 2; n <= 9; ++n) {
        auto P = ParamPair::make(q(-1, n), q(n - 1, n));
        auto [ca, cb] = detect_cycle(P);
        EXPECT_EQ(ca.status, CycleStatus::weak_cycle) << n;
        EXPECT_EQ(cb.status, CycleStatus::weak_cycle) << n;
        EXPECT_TRUE(ca.cycle_end.is_zero());
        EXPECT_TRUE(cb.cycle_end.is_zero());
    }
}

TEST(Cycles, FourFifthsTwoFifths)
{
    auto P = pp("-4/5", "2/5");
    auto [ca, cb] = detect_cycle(P, 50);
    EXPECT_NE(ca.status, CycleStatus::eventually_periodic);
    EXPECT_NE(cb.status, CycleStatus::eventually_periodic);
    EXPECT_EQ(ca.status, CycleStatus::strong_cycle);
    EXPECT_EQ(ca.cycle_end, ExtendedReal(-4));
}

TEST(Cycles, WordsReproduceCycleEnds)
{
    for (auto [a, b] : exact_params) {
        auto P = pp(a, b);
        auto [ca, cb] = detect_cycle(P);
        for (const CycleInfo* c : {&ca, &cb}) {
            if (c->status == CycleStatus::eventually_periodic)
                continue;
            const ExtendedReal& e = c->endpoint == 'a' ? P.a : P.b;
            EXPECT_TRUE(word_to_matrix(c->upper_word)(e).identical(c->cycle_end)) << P.str();
            EXPECT_TRUE(word_to_matrix(c->lower_word)(e).identical(c->cycle_end)) << P.str();
            EXPECT_TRUE(c->upper.points[c->m].identical(c->lower.points[c->k]));
            bool strong = word_to_matrix(c->upper_word) == word_to_matrix(c->lower_word);
            EXPECT_EQ(strong, c->status == CycleStatus::strong_cycle);
            if (c->status == CycleStatus::weak_cycle)
                EXPECT_TRUE(c->cycle_end.is_zero());
        }
    }
}

TEST(Cycles, OrbitsFollowTheMap)
{
    auto P = pp("-3/8", "2/3");
    auto [ca, cb] = detect_cycle(P);
    EXPECT_EQ(ca.upper.points[0], ExtendedReal(-1) / P.a);
    EXPECT_EQ(ca.lower.points[0], P.a + ExtendedReal(1));
    EXPECT_EQ(cb.upper.points[0], P.b - ExtendedReal(1));
    EXPECT_EQ(cb.lower.points[0], ExtendedReal(-1) / P.b);
    for (std::size_t i = 0; i + 1 < ca.upper.points.size(); ++i)
        EXPECT_EQ(ca.upper.points[i + 1], f_ab(ca.upper.points[i], P));
}

TEST(Cycles, FloatParametersExhaustTheBudget)
{
    auto P = ParamPair::make(-0.5 + 1e-9 * std::sqrt(2.0), 0.5 + 1e-9 * std::sqrt(2.0));
    try {
        detect_cycle(P, 300);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::finiteness_undetected);
    }
}

TEST(Domain, FourFifthsFullDomain)
{
    auto P = pp("-4/5", "2/5");
    // hand-completed from the strip corners: translates of Λ = S(strip) until re-entry
    std::vector<Rect> expect = {up(inf, -2, q(-3, 5)),  up(-2, q(-3, 2), q(-1, 3)), up(q(-3, 2), -1, q(1, 4)),
                                up(-1, q(-1, 2), q(2, 3)), up(q(-1, 2), 0, q(5, 4)),  up(0, q(1, 2), q(5, 3)),
                                up(q(1, 2), q(2, 3), 3),   lo(q(-1, 3), 0, -5),       lo(0, 1, q(-5, 2)),
                                lo(1, 2, q(-3, 2)),        lo(2, 3, q(-1, 2)),        lo(3, inf, q(1, 5))};
    auto D = build_domain(P);
    EXPECT_TRUE(same_region(D.rects, expect));
    EXPECT_EQ(D.rects.size(), expect.size());
}

TEST(Domain, FourFifthsStripCorners)
{
    auto P = pp("-4/5", "2/5");
    auto m = family_index(P);
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(*m, 2);
    auto strip = family_strip(P, 2);
    std::vector<Rect> expect = {up(inf, -2, q(-3, 5)), up(inf, q(-3, 2), q(-1, 3)), up(inf, -1, q(1, 4)),
                                lo(2, inf, q(-1, 2)), lo(3, inf, q(1, 5))};
    // clip to the strip a <= w <= b
    std::vector<Rect> clipped;
    for (auto r : expect) {
        r.w = *intersect(r.w, {P.a, P.b});
        clipped.push_back(r);
    }
    EXPECT_TRUE(same_region(strip, clipped));
}

TEST(Domain, FourFifthsHatLambda)
{
    auto P = pp("-4/5", "2/5");
    auto H = hat_lambda_of(build_domain(P), P);
    std::vector<Rect> expect = {
        {{q(-3, 5), q(-1, 3)}, {0, q(1, 2)}, Component::upper}, {{q(-1, 3), q(1, 4)}, {0, q(2, 3)}, Component::upper},
        {{q(1, 4), q(2, 5)}, {0, 1}, Component::upper},         {{q(-4, 5), q(-1, 2)}, {q(-1, 2), 0}, Component::lower},
        {{q(-1, 2), q(1, 5)}, {q(-1, 3), 0}, Component::lower}};
    EXPECT_TRUE(same_region(H.rects, expect));
    EXPECT_EQ(H.rects.size(), 5u);
}

TEST(Domain, EveryExactDomainIsInvariant)
{
    for (auto [a, b] : exact_params) {
        auto P = pp(a, b);
        auto D = build_domain(P);
        auto defect = invariance_defect(D, P);
        EXPECT_FALSE(defect.has_value()) << P.str() << " witness (" << defect->first.str() << ", "
                                         << defect->second.str() << ")";
        EXPECT_TRUE(staircase_monotone(D)) << P.str();
    }
}

TEST(Domain, RandomFamilyParametersAreInvariant)
{
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long long> n(1, 999);
    int built = 0;
    for (int i = 0; i < 400 && built < 40; ++i) {
        ExtendedReal a = -q(n(rng), 1000), b = q(n(rng), 1000);
        if (b - a < ExtendedReal(1) || -(a * b) > ExtendedReal(1))
            continue;
        auto P = ParamPair::make(a, b);
        bool edge = false;
        if (!family_index(P, &edge) && !family_index(mirror_params(P), &edge))
            continue;
        auto D = build_domain(P);
        EXPECT_TRUE(is_invariant(D, P)) << P.str();
        EXPECT_TRUE(staircase_monotone(D)) << P.str();
        ++built;
    }
    EXPECT_GE(built, 20);
}

TEST(Domain, MirrorSymmetry)
{
    auto D = build_domain(pp("-1/2", "3/2"));
    auto M = build_domain(pp("-3/2", "1/2"));
    EXPECT_TRUE(same_region(mirror(D).rects, M.rects));
    EXPECT_TRUE(same_region(build_domain(pp("0", "1")).rects, mirror(build_domain(pp("-1", "0"))).rects));
}

TEST(Domain, UnsupportedAndMismatch)
{
    auto expect_code = [](auto&& f, Errc c) {
        try {
            f();
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), c) << e.what();
        }
    };
    expect_code([] { build_domain(ParamPair::make(-0.3, 0.8)); }, Errc::unsupported_params);
    // -1/a = b + 1 exactly: boundary of the family conditions
    expect_code([] { build_domain(pp("-2/3", "1/2")); }, Errc::unsupported_params);
    expect_code([] { family_strip(pp("-4/5", "2/5"), 3); }, Errc::case_mismatch);
    expect_code([] { family_strip(pp("-1/2", "1/2"), 1); }, Errc::case_mismatch);
}

TEST(Domain, Contains)
{
    auto P = pp("-4/5", "2/5");
    auto D = build_domain(P);
    for (const auto& r : D.rects) {
        ExtendedReal u = r.u.lo.is_inf() ? r.u.hi - ExtendedReal(1)
                         : r.u.hi.is_inf() ? r.u.lo + ExtendedReal(1)
                                           : (r.u.lo + r.u.hi) / ExtendedReal(2);
        ExtendedReal w = r.w.lo.is_inf() ? r.w.hi - ExtendedReal(1) : r.w.lo + ExtendedReal(1);
        EXPECT_TRUE(contains(D, u, w));
    }
    EXPECT_FALSE(contains(D, 50, 5));
    EXPECT_FALSE(contains(D, 0, 0));
    EXPECT_TRUE(contains(D, -2, q(-1, 3))); // corner
    EXPECT_TRUE(contains(D, 3.0 + 1e-13, 0.2));
}

TEST(Lambda, EmptyStripGivesEmptyLambda)
{
    auto P = pp("-1/2", "1/2");
    StepDomain D;
    D.rects.push_back(up(-1, 1, 5));
    EXPECT_TRUE(lambda_of(D, P).empty());
    EXPECT_TRUE(hat_lambda_of(D, P).empty());
    EXPECT_TRUE(lambda_of(StepDomain{}, P).empty());
}

TEST(Lambda, FourFifthsUExtent)
{
    auto P = pp("-4/5", "2/5");
    auto L = lambda_of(build_domain(P), P);
    for (const auto& r : L.rects) {
        EXPECT_GE(r.u.lo, ExtendedReal(-1));
        EXPECT_LE(r.u.hi, ExtendedReal(1));
    }
}

TEST(Lambda, ContainmentRegions)
{
    // one parameter pair per sign regime of b < 1 / b >= 1 and a > -1 / a <= -1
    for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
             {"-4/5", "2/5"}, {"-1/2", "3/2"}, {"-3/2", "1/2"}, {"-1", "1"}, {"-3/8", "2/3"}, {"-1/2", "1/2"}}) {
        auto P = pp(a, b);
        auto L = lambda_of(build_domain(P), P);
        ASSERT_FALSE(L.empty());
        ExtendedReal one(1), zero(0);
        for (const auto& r : L.rects) {
            // split at u = 0 and test each half against its allowed box
            for (int side : {-1, 1}) {
                auto part = intersect(r.u, side < 0 ? Interval{-one, zero} : Interval{zero, one});
                auto outside = intersect(r.u, side < 0 ? Interval{inf, -one} : Interval{one, inf});
                EXPECT_TRUE(!outside || !outside->proper()) << P.str() << " " << r.u.str();
                if (!part || !part->proper())
                    continue;
                if (r.comp == Component::upper) {
                    ExtendedReal floor_w = side < 0 ? ExtendedReal(-1) / P.a
                                                    : (P.b < one ? ExtendedReal(-1) / (P.b - one) : inf);
                    ASSERT_FALSE(floor_w.is_inf()) << P.str() << " upper part on u > 0 with b >= 1";
                    EXPECT_GE(r.w.lo, floor_w) << P.str();
                } else {
                    ExtendedReal ceil_w = side > 0 ? ExtendedReal(-1) / P.b
                                                   : (P.a > -one ? ExtendedReal(-1) / (P.a + one) : inf);
                    ASSERT_FALSE(ceil_w.is_inf()) << P.str() << " lower part on u < 0 with a <= -1";
                    EXPECT_LE(r.w.hi, ceil_w) << P.str();
                }
            }
        }
    }
}

TEST(Dynamics, EssentialBijectivity)
{
    std::mt19937_64 rng(43);
    for (auto [a, b] : exact_params) {
        auto P = pp(a, b);
        auto D = build_domain(P);
        int ok = 0, total = 0;
        for (int i = 0; i < 600; ++i) {
            const Rect& r = D.rects[i % D.rects.size()];
            auto [u, w] = random_point(rng, r);
            if (!contains(D, u, w) || u == w)
                continue;
            ++total;
            auto [u1, w1] = natural_extension_step(u, w, P);
            if (u1.is_inf() || w1.is_inf() || !contains(D, u1, w1))
                continue;
            int in_d = 0;
            bool back = false;
            for (auto& c : natural_extension_preimages(u1, w1, P))
                if (!c.first.is_inf() && contains(D, c.first, c.second)) {
                    ++in_d;
                    back = back || (c.first == u && c.second == w);
                }
            if (in_d == 1 && back)
                ++ok;
        }
        ASSERT_GT(total, 300);
        EXPECT_GE(ok, total * 999 / 1000) << P.str() << " " << ok << "/" << total;
    }
}

TEST(Dynamics, TrappingCountsTranslationRunsOnce)
{
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> U(-1000, 1000);
    for (auto [a, b] : exact_params) {
        auto P = pp(a, b);
        auto D = build_domain(P);
        const double da = P.a.to_double(), db = P.b.to_double();
        int trapped = 0, n = 2000;
        for (int i = 0; i < n; ++i) {
            double u = U(rng), w = U(rng);
            for (int step = 0; step <= 200; ++step) {
                if (contains(D, u, w)) {
                    ++trapped;
                    break;
                }
                if (w < da || w >= db) {
                    // one reduction step: the whole run of translations
                    double k = w < da ? std::ceil(da - w) : std::floor(w - db) + 1;
                    if (w < da) {
                        u += k;
                        w += k;
                    } else {
                        u -= k;
                        w -= k;
                    }
                    if (w < da)
                        w += 1, u += 1;
                } else {
                    u = -1 / u;
                    w = -1 / w;
                }
            }
        }
        EXPECT_GE(trapped, n * 999 / 1000) << P.str() << " " << trapped << "/" << n;
    }
}

TEST(Oracle, SimulationMatchesExactDomains)
{
    for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
             {"-4/5", "2/5"}, {"-1", "1"}, {"-1/2", "1/2"}, {"(1-sqrt(5))/2", "(3-sqrt(5))/2"}, {"-3/8", "2/3"},
             {"-1/2", "3/2"}, {"(1-sqrt(5))/2", "(sqrt(5)-1)/2"}}) {
        auto P = pp(a, b);
        auto A = approx_domain(P, {100000, 100, 1e-2, 8.0, 7});
        double h = boundary_hausdorff(A, build_domain(P));
        EXPECT_LT(h, 1e-2) << P.str();
    }
}

TEST(Oracle, ClassicalHatLambdaHoldsSimulatedPoints)
{
    auto P = pp("-1", "0");
    auto H = hat_lambda_of(build_domain(P), P);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> U(-10, 10);
    int inside = 0, total = 0;
    for (int s = 0; s < 20000; ++s) {
        double u = U(rng), w = U(rng);
        for (int t = 0; t < 60; ++t) {
            auto [u1, w1] = detail::step_double(u, w, -1, 0);
            u = u1;
            w = w1;
            if (t > 30 && w >= -1 && w <= 0) {
                ++total;
                inside += contains(H, ExtendedReal(w), ExtendedReal(-1 / u));
            }
        }
    }
    ASSERT_GT(total, 1000);
    EXPECT_GE(inside, total * 999 / 1000);
}

TEST(Oracle, EmptyRequest)
{
    EXPECT_TRUE(approx_domain(pp("-1/2", "1/2"), {0, 100, 1e-2, 8.0, 1}).empty());
}
