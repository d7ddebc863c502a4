#include <gtest/gtest.h>

#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "abcf/moebius.hpp"

using namespace abcf;

namespace {

using hp = boost::multiprecision::cpp_bin_float_50;

hp high(const Surd& s)
{
    hp v = hp(s.p()) + hp(s.q()) * boost::multiprecision::sqrt(hp(s.d()));
    return v / hp(s.r());
}

Surd golden_conj() { return Surd::make(1, -1, 2, 5); } // (1-sqrt5)/2

} // namespace

TEST(SurdNormalize, ReducesRationals)
{
    Surd s = Surd::make(2, 0, 4, 5);
    EXPECT_EQ(s.p(), 1);
    EXPECT_EQ(s.q(), 0);
    EXPECT_EQ(s.r(), 2);
    EXPECT_EQ(s.d(), 0);
}

TEST(SurdNormalize, KeepsCanonicalForm)
{
    Surd s = Surd::make(1, -1, 2, 5);
    EXPECT_EQ(s.p(), 1);
    EXPECT_EQ(s.q(), -1);
    EXPECT_EQ(s.r(), 2);
    EXPECT_EQ(s.d(), 5);
}

TEST(SurdNormalize, NormalizesSignOfDenominator)
{
    EXPECT_EQ(Surd::make(-2, 2, -4, 5), golden_conj());
}

TEST(SurdNormalize, ExtractsSquares)
{
    Surd s = Surd::make(0, 1, 1, 8);
    EXPECT_EQ(s.q(), 2);
    EXPECT_EQ(s.d(), 2);
    EXPECT_TRUE(Surd::make(1, 1, 1, 9).is_integer());
    EXPECT_EQ(Surd::make(1, 1, 1, 9), Surd(4));
}

TEST(SurdNormalize, RejectsZeroDenominator)
{
    try {
        Surd::make(1, 0, 0, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_denominator);
    }
}

TEST(SurdCompare, Examples)
{
    EXPECT_TRUE(golden_conj() < Surd::rational(-1, 2));
    EXPECT_TRUE(Surd(0) == Surd(0));
    // (3 - sqrt5)/2 ~ 0.382 against 1/2
    EXPECT_TRUE(Surd::make(3, -1, 2, 5) < Surd::rational(1, 2));
}

TEST(SurdCompare, MixedFieldsRejected)
{
    Surd r2 = Surd::make(0, 1, 1, 2), r5 = Surd::make(0, 1, 1, 5);
    try {
        (void)(r2 < r5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::unsupported_field);
    }
    EXPECT_TRUE(r2 < Surd(2)); // rational against any field is fine
}

TEST(SurdCompare, AgreesWithHighPrecisionOnRandomPairs)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> coef(-1000, 1000), den(1, 500);
    for (int i = 0; i < 3000; ++i) {
        long long d = std::vector<long long>{2, 3, 5, 7, 13}[i % 5];
        Surd x = Surd::make(coef(rng), coef(rng), den(rng), d);
        Surd y = Surd::make(coef(rng), coef(rng), den(rng), d);
        hp hx = high(x), hy = high(y);
        EXPECT_EQ(x < y, hx < hy);
        EXPECT_EQ(x == y, hx == hy);
        EXPECT_NEAR(x.to_double(), static_cast<double>(hx), 1e-12 * (1 + fabs(static_cast<double>(hx))));
    }
}

TEST(SurdArith, FieldOperationsMatchHighPrecision)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long long> coef(-50, 50), den(1, 40);
    for (int i = 0; i < 2000; ++i) {
        Surd x = Surd::make(coef(rng), coef(rng), den(rng), 3);
        Surd y = Surd::make(coef(rng), coef(rng), den(rng), 3);
        if (y.sign() == 0)
            continue;
        hp hx = high(x), hy = high(y);
        EXPECT_LT(boost::multiprecision::abs(high(x + y) - (hx + hy)), hp(1e-40));
        EXPECT_LT(boost::multiprecision::abs(high(x * y) - (hx * hy)), hp(1e-40));
        EXPECT_LT(boost::multiprecision::abs(high(x / y) - (hx / hy)), hp(1e-35) * (1 + boost::multiprecision::abs(hx / hy)));
        EXPECT_EQ(x.floor(), bigint(static_cast<long long>(static_cast<double>(boost::multiprecision::floor(hx)))));
    }
}

TEST(SurdFloor, IrrationalValues)
{
    EXPECT_EQ(Surd::make(0, 1, 1, 2).floor(), 1);
    EXPECT_EQ(Surd::make(0, -1, 1, 2).floor(), -2);
    EXPECT_EQ(golden_conj().floor(), -1);
    EXPECT_EQ(Surd::rational(-7, 2).floor(), -4);
}

TEST(SurdText, RoundTrips)
{
    std::vector<Surd> xs = {Surd(0), Surd(-3), Surd::rational(-4, 5), golden_conj(), Surd::make(0, 1, 1, 2),
                            Surd::make(2, 1, 2, 2), Surd::make(0, -3, 7, 5), Surd::make(5, 2, 1, 3)};
    for (const auto& x : xs) {
        ExtendedReal y = parse_real(x.str());
        ASSERT_TRUE(y.is_exact()) << x.str();
        EXPECT_EQ(y.surd(), x) << x.str();
    }
    EXPECT_EQ(golden_conj().str(), "(1-sqrt(5))/2");
    EXPECT_EQ(Surd::make(0, 1, 1, 2).str(), "sqrt(2)");
}

TEST(RealParse, Syntax)
{
    EXPECT_EQ(parse_real("-4/5"), ExtendedReal(Surd::rational(-4, 5)));
    EXPECT_EQ(parse_real("(1-sqrt(5))/2"), ExtendedReal(golden_conj()));
    EXPECT_EQ(parse_real("(1+3*sqrt(8))/2").surd(), Surd::make(1, 6, 2, 2));
    EXPECT_TRUE(parse_real("0.3").is_float());
    EXPECT_DOUBLE_EQ(parse_real("1e-3").to_double(), 1e-3);
    EXPECT_TRUE(parse_real("inf").is_inf());
    EXPECT_THROW(parse_real("2+"), Error);
    EXPECT_THROW(parse_real("sqrt(-2)"), Error);
}

TEST(ExtendedRealOps, InfinityRules)
{
    ExtendedReal inf = ExtendedReal::inf(), zero(0);
    EXPECT_TRUE((ExtendedReal(-1) / zero).is_inf());
    EXPECT_TRUE((ExtendedReal(-1) / inf).is_zero());
    EXPECT_TRUE((inf - ExtendedReal(1)).is_inf());
    EXPECT_THROW(inf - inf, Error);
    EXPECT_TRUE(ExtendedReal(1.0 / 0.0).is_inf());
}

TEST(ExtendedRealOps, FloatsPropagate)
{
    ExtendedReal x = ExtendedReal(0.25) + ExtendedReal(Surd::rational(1, 2));
    EXPECT_TRUE(x.is_float());
    EXPECT_DOUBLE_EQ(x.to_double(), 0.75);
}

TEST(Moebius, Examples)
{
    EXPECT_EQ(moebius_apply(UnimodularMap::S(), 2), ExtendedReal(Surd::rational(-1, 2)));
    EXPECT_TRUE(moebius_apply(UnimodularMap::T(3), ExtendedReal::inf()).is_inf());
    ExtendedReal x = Surd::make(3, -1, 2, 5);
    ExtendedReal y = moebius_apply(UnimodularMap::S(), x);
    EXPECT_EQ(y, ExtendedReal(Surd::make(-3, -1, 2, 5)));
    // (3 - sqrt5)(3 + sqrt5) = 4
    EXPECT_EQ(x * y, ExtendedReal(-1));
    EXPECT_TRUE(moebius_apply(UnimodularMap::S(), 0).is_inf());
    EXPECT_TRUE(moebius_apply(UnimodularMap::S(), ExtendedReal::inf()).is_zero());
}

TEST(Moebius, Words)
{
    EXPECT_EQ(word_to_matrix({}), UnimodularMap());
    EXPECT_EQ(word_to_matrix({Letter::s(), Letter::s()}), UnimodularMap());
    EXPECT_EQ(word_to_matrix({Letter::t(2), Letter::s()}), UnimodularMap(2, -1, 1, 0));
    EXPECT_THROW(UnimodularMap(1, 1, 1, 1), Error);
}

TEST(Moebius, ActionIsHomomorphismAndBijective)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> len(0, 20), pick(0, 1), ex(-4, 4);
    auto random_word = [&] {
        Word w;
        int n = len(rng);
        for (int i = 0; i < n; ++i)
            w.push_back(pick(rng) ? Letter::s() : Letter::t(ex(rng)));
        return w;
    };
    std::vector<ExtendedReal> xs = {ExtendedReal::inf(), 0, Surd::rational(3, 7), Surd::make(1, 2, 3, 7),
                                    Surd::make(-5, 1, 2, 5)};
    for (int i = 0; i < 300; ++i) {
        UnimodularMap m = word_to_matrix(random_word()), n = word_to_matrix(random_word());
        for (const auto& x : xs) {
            ExtendedReal lhs = moebius_apply(m * n, x);
            ExtendedReal rhs = moebius_apply(m, moebius_apply(n, x));
            EXPECT_TRUE(lhs.identical(rhs));
            EXPECT_TRUE(moebius_apply(m.inverse(), lhs).identical(moebius_apply(n, x)));
            if (x.is_exact() && lhs.is_exact())
                EXPECT_EQ(lhs.field(), x.field() == 0 ? 0 : x.field());
        }
    }
}

TEST(ExtendedRealCompare, AcrossFields)
{
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long long> coef(-1000, 1000), den(1, 500);
    const long long ds[] = {2, 3, 5, 7, 13};
    for (int i = 0; i < 3000; ++i) {
        Surd x = Surd::make(coef(rng), coef(rng), den(rng), ds[i % 5]);
        Surd y = Surd::make(coef(rng), coef(rng), den(rng), ds[(i + 1 + i / 5) % 5]);
        EXPECT_EQ(ExtendedReal(x) < ExtendedReal(y), high(x) < high(y));
    }
    EXPECT_TRUE(ExtendedReal(Surd::make(0, 1, 1, 3)) < ExtendedReal(Surd::make(0, 1, 1, 5)));
    EXPECT_TRUE(ExtendedReal(Surd::make(1, 1, 1, 2)) > ExtendedReal(Surd::make(0, 1, 1, 5))); // 1+sqrt2 > sqrt5
}
