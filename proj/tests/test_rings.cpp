#include "ctb/rings.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace ctb;

namespace
{

struct RingGen
{
    std::mt19937_64 rng;
    explicit RingGen(std::uint64_t seed) : rng(seed) {}

    BigInt coeff(int bound)
    {
        return BigInt(std::uniform_int_distribution<int>(-bound, bound)(rng));
    }
    ZRootTwo zroottwo(int bound = 50) { return {coeff(bound), coeff(bound)}; }
    ZOmega zomega(int bound = 50) { return {coeff(bound), coeff(bound), coeff(bound), coeff(bound)}; }
    DOmega domega(int bound = 50)
    {
        return DOmega(zomega(bound), std::uniform_int_distribution<int>(0, 9)(rng));
    }
};

bool in_zomega_after_scaling(const DOmega& x, int k)
{
    // (√2)^k x ∈ Z[ω]  <=>  k >= lde, checked from the raw product rather than lde()
    ZOmega n = x.num();
    int denom = x.k();
    for (int i = 0; i < k; ++i)
    {
        if (denom > 0)
            --denom;
        else
            n = n.mul_sqrt2();
    }
    return denom == 0;
}

} // namespace

TEST(ZRootTwo, SpecExamples)
{
    EXPECT_EQ(ZRootTwo(1, 0) * ZRootTwo(0, 1), ZRootTwo(0, 1));
    EXPECT_EQ(ZRootTwo(1, 1) * ZRootTwo(-1, 1), ZRootTwo(1));
    EXPECT_EQ(ZRootTwo(1, 1).conj_sqrt2(), ZRootTwo(1, -1));
    EXPECT_EQ(ZRootTwo::lambda_pow(3), ZRootTwo(7, 5));
    EXPECT_EQ(ZRootTwo::lambda_pow(-2) * ZRootTwo::lambda_pow(2), ZRootTwo(1));
}

TEST(ZRootTwo, ExactSign)
{
    EXPECT_EQ(ZRootTwo(0).sign(), 0);
    EXPECT_EQ(ZRootTwo(3, -2).sign(), 1);   // 3 - 2.83
    EXPECT_EQ(ZRootTwo(-3, 2).sign(), -1);
    EXPECT_EQ(ZRootTwo(-1, 1).sign(), 1);
    EXPECT_EQ(ZRootTwo(1, -1).sign(), -1);
    RingGen g(7);
    for (int i = 0; i < 2000; ++i)
    {
        const ZRootTwo x = g.zroottwo(1000);
        const double v = x.value();
        if (std::abs(v) > 1e-9)
            EXPECT_EQ(x.sign(), v > 0 ? 1 : -1) << x;
    }
}

TEST(ZOmega, OmegaFourthPowerIsMinusOne)
{
    const ZOmega w = ZOmega::omega();
    EXPECT_EQ(w * ZOmega::omega_pow(3), ZOmega(0, 0, 0, -1));
    EXPECT_EQ(ZOmega::omega_pow(8), ZOmega(1));
    EXPECT_EQ(ZOmega::omega_pow(-1), ZOmega(-1, 0, 0, 0));
}

TEST(ZOmega, Conjugations)
{
    const ZOmega w = ZOmega::omega();
    EXPECT_EQ(w.conj(), ZOmega(-1, 0, 0, 0));
    EXPECT_EQ(w * w.conj(), ZOmega(1));
    EXPECT_EQ(ZOmega(5).conj(), ZOmega(5));
    EXPECT_EQ(ZOmega(ZRootTwo(1, 1)).conj_sqrt2(), ZOmega(ZRootTwo(1, -1)));
}

TEST(ZOmega, NormCC)
{
    EXPECT_EQ(ZOmega(1).norm_cc(), ZRootTwo(1));
    EXPECT_EQ(ZOmega::omega().norm_cc(), ZRootTwo(1));
    EXPECT_EQ((ZOmega(1) + ZOmega::omega()).norm_cc(), ZRootTwo(2, 1));
}

TEST(DOmega, LeastDenominatorExponent)
{
    EXPECT_EQ(DOmega(1).lde(), 0);
    EXPECT_EQ(DOmega(ZOmega(1), 1).lde(), 1);
    EXPECT_EQ(DOmega(ZOmega::omega(), 2).lde(), 2);
    // 2/√2^2 = 1
    EXPECT_EQ(DOmega(ZOmega(2), 2), DOmega(1));
    // √2 = ω - ω³ is divisible once
    EXPECT_EQ(DOmega(ZOmega(-1, 0, 1, 0), 1), DOmega(1));
}

TEST(Embedding, Examples)
{
    const double s = std::sqrt(2.0);
    auto e = embed(ZRootTwo(0, 1));
    EXPECT_NEAR(e.value.real(), s, 1e-15);
    EXPECT_NEAR(e.conjugate.real(), -s, 1e-15);

    e = embed(ZOmega::omega());
    EXPECT_NEAR(e.value.real(), 1 / s, 1e-15);
    EXPECT_NEAR(e.value.imag(), 1 / s, 1e-15);
    EXPECT_NEAR(e.conjugate.real(), -1 / s, 1e-15);
    EXPECT_NEAR(e.conjugate.imag(), -1 / s, 1e-15);

    const ZRootTwo cube = ZRootTwo::lambda_pow(3);
    e = embed(cube);
    EXPECT_NEAR(e.value.real(), 7 + 5 * s, 1e-13);
    EXPECT_NEAR(e.conjugate.real(), 7 - 5 * s, 1e-13);
    EXPECT_NEAR(e.conjugate.real(), std::pow(1 - s, 3), 1e-13);
}

TEST(RingProperties, RingLaws)
{
    RingGen g(11);
    for (int i = 0; i < 500; ++i)
    {
        const ZOmega x = g.zomega(), y = g.zomega(), z = g.zomega();
        EXPECT_EQ(x * y, y * x);
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_EQ(x + (-x), ZOmega(0));

        const ZRootTwo p = g.zroottwo(), q = g.zroottwo(), r = g.zroottwo();
        EXPECT_EQ(p * q, q * p);
        EXPECT_EQ((p * q) * r, p * (q * r));
        EXPECT_EQ(p * (q + r), p * q + p * r);

        const DOmega u = g.domega(), v = g.domega(), w = g.domega();
        EXPECT_EQ(u * v, v * u);
        EXPECT_EQ((u + v) * w, u * w + v * w);
        EXPECT_EQ((u - v) + v, u);
    }
}

TEST(RingProperties, ConjugationsAreCommutingInvolutiveHomomorphisms)
{
    RingGen g(12);
    for (int i = 0; i < 500; ++i)
    {
        const ZOmega x = g.zomega(), y = g.zomega();
        EXPECT_EQ(x.conj().conj(), x);
        EXPECT_EQ(x.conj_sqrt2().conj_sqrt2(), x);
        EXPECT_EQ(x.conj().conj_sqrt2(), x.conj_sqrt2().conj());
        EXPECT_EQ((x * y).conj(), x.conj() * y.conj());
        EXPECT_EQ((x + y).conj(), x.conj() + y.conj());
        EXPECT_EQ((x * y).conj_sqrt2(), x.conj_sqrt2() * y.conj_sqrt2());

        const DOmega u = g.domega(), v = g.domega();
        EXPECT_EQ((u * v).conj_sqrt2(), u.conj_sqrt2() * v.conj_sqrt2());
        EXPECT_EQ((u + v).conj_sqrt2(), u.conj_sqrt2() + v.conj_sqrt2());
        const auto e = embed(u.conj_sqrt2());
        EXPECT_NEAR(std::abs(e.value - embed(u).conjugate), 0.0, 1e-9);
    }
}

TEST(RingProperties, NormIsMultiplicativeAndNonNegative)
{
    RingGen g(13);
    for (int i = 0; i < 500; ++i)
    {
        const ZOmega x = g.zomega(), y = g.zomega();
        const ZOmega xx = x * x.conj();
        EXPECT_EQ(xx.b(), 0);
        EXPECT_EQ(xx.a(), -xx.c());
        EXPECT_EQ((x * y).norm_cc(), x.norm_cc() * y.norm_cc());
        EXPECT_GE(x.norm_cc().sign(), 0);
        EXPECT_GE(x.norm_cc().conj_sqrt2().sign(), 0);
        EXPECT_NEAR(x.norm_cc().value(), std::norm(x.value()), 1e-9 * (1 + std::norm(x.value())));
    }
}

TEST(RingProperties, SqrtTwoDivisibilityPredicate)
{
    // Enumerate all small numerators and compare against the set {y·√2}.
    const ZOmega root2(-1, 0, 1, 0);
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int c = -3; c <= 3; ++c)
                for (int d = -3; d <= 3; ++d)
                {
                    const ZOmega x(a, b, c, d);
                    const bool predicate = x.divisible_by_sqrt2();
                    // x/√2 = x·√2 / 2
                    const ZOmega twice = x * root2;
                    const bool exact = twice.divisible_by_int(2);
                    ASSERT_EQ(predicate, exact) << x;
                    if (predicate)
                        EXPECT_EQ(x.div_sqrt2() * root2, x);
                    EXPECT_EQ(x.mul_sqrt2(), x * root2);
                }
}

TEST(RingProperties, LeastDenominatorExponentIsLeast)
{
    RingGen g(14);
    for (int i = 0; i < 1000; ++i)
    {
        const DOmega x = g.domega(20);
        const int k = x.lde();
        EXPECT_TRUE(in_zomega_after_scaling(x, k));
        if (k > 0)
        {
            EXPECT_FALSE(x.num().divisible_by_sqrt2());
            EXPECT_FALSE(in_zomega_after_scaling(x, k - 1));
        }
        EXPECT_NEAR(std::abs(x.value() - x.num().value() / std::pow(std::sqrt(2.0), k)), 0.0, 1e-12);
    }
}

TEST(RingProperties, EmbeddingIsMultiplicative)
{
    RingGen g(15);
    for (int i = 0; i < 500; ++i)
    {
        const DOmega x = g.domega(), y = g.domega();
        const auto ex = embed(x), ey = embed(y), exy = embed(x * y);
        const double scale = 1 + std::abs(ex.value) * std::abs(ey.value);
        EXPECT_NEAR(std::abs(exy.value - ex.value * ey.value), 0.0, 1e-12 * scale);
        const double cscale = 1 + std::abs(ex.conjugate) * std::abs(ey.conjugate);
        EXPECT_NEAR(std::abs(exy.conjugate - ex.conjugate * ey.conjugate), 0.0, 1e-12 * cscale);
    }
}

TEST(RingProperties, EuclideanDivision)
{
    RingGen g(16);
    for (int i = 0; i < 500; ++i)
    {
        const ZOmega x = g.zomega(1000), d = g.zomega(30);
        if (d.is_zero())
            continue;
        const auto [q, r] = x.divmod(d);
        EXPECT_EQ(q * d + r, x);
        EXPECT_LT(r.norm(), d.norm());
        EXPECT_EQ((x * d).divide_exact(d), x);

        const ZRootTwo p = g.zroottwo(1000), e = g.zroottwo(30);
        if (e.is_zero())
            continue;
        const auto [q2, r2] = p.divmod(e);
        EXPECT_EQ(q2 * e + r2, p);
        EXPECT_LT(abs(r2.norm()), abs(e.norm()));
    }
}

TEST(Serialization, DOmegaRoundTrip)
{
    EXPECT_EQ(DOmega(ZOmega(1, -2, 4, -4), 3).to_string(), "(1,-2,4,-4)/√2^3");
    EXPECT_EQ(DOmega::parse("(0,0,0,1)/√2^0"), DOmega(1));
    EXPECT_FALSE(DOmega::parse("(0,0,1)/√2^0"));
    EXPECT_FALSE(DOmega::parse("(0,0,0,1)/2^0"));
    RingGen g(17);
    for (int i = 0; i < 300; ++i)
    {
        const DOmega x = g.domega(100000);
        EXPECT_EQ(DOmega::parse(x.to_string()), x);
    }
    // non-canonical input is canonicalized
    EXPECT_EQ(DOmega::parse("(0,0,0,2)/√2^2"), DOmega(1));
}
