#include "ctb/noise.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gtest/gtest.h"

using namespace ctb;

namespace
{

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

// ∫∫ f(φ) dφ dα over |φ/2 ± α| ≤ δ, integrated as a genuine 2-D region.
template <class F>
double region_integral(double delta, F f)
{
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double phi) {
        const double half = delta - std::abs(phi) / 2;
        return gauss_kronrod<double, 15>::integrate([&](double) { return f(phi); }, -half, half, 0, 1e-14);
    };
    // split at φ = 0 where the α-range has a kink
    return gauss_kronrod<double, 61>::integrate(inner, -2 * delta, 0, 8, 1e-14) +
           gauss_kronrod<double, 61>::integrate(inner, 0, 2 * delta, 8, 1e-14);
}

double s2(double phi)
{
    return std::pow(std::sin(phi / 2), 2);
}

CMat2 mat(cd a, cd b, cd c, cd d)
{
    CMat2 m;
    m << a, b, c, d;
    return m;
}

double max_abs(const CMat2& m)
{
    return m.cwiseAbs().maxCoeff();
}

} // namespace

TEST(NoiseParams, Examples)
{
    auto np = noise_params_from_eps(0);
    EXPECT_EQ(np.delta, 0);
    EXPECT_EQ(np.p, 0);
    EXPECT_TRUE(np.small_eps_valid);

    np = noise_params_from_eps(2);
    EXPECT_NEAR(np.delta, kPi, 1e-15);
    EXPECT_NEAR(np.p, 8 * kPi * kPi / 15, 1e-13);
    EXPECT_NEAR(np.p, 5.2638, 1e-4);
    EXPECT_FALSE(np.small_eps_valid);

    np = noise_params_from_eps(1e-3);
    EXPECT_NEAR(np.p / 5.333333e-7, 1, 1e-3);
    EXPECT_TRUE(np.small_eps_valid);
    EXPECT_NEAR(np.delta, std::acos(1 - 0.5e-6), 1e-12);

    EXPECT_THROW(noise_params_from_eps(2.0001), DomainError);
    EXPECT_THROW(noise_params_from_eps(-1e-9), DomainError);
}

TEST(NoiseParams, DeltaMatchesArccos)
{
    for (double eps : {0.05, 0.3, 0.9, 1.5, 1.99})
        EXPECT_NEAR(noise_params_from_eps(eps).delta, std::acos(1 - eps * eps / 2), 1e-12);
}

TEST(NoiseParams, QuadraticLimit)
{
    const double eps[] = {1e-2, 1e-3, 1e-4};
    const double tol[] = {1e-3, 1e-5, 1e-7};
    for (int i = 0; i < 3; ++i)
    {
        const double p = noise_params_from_eps(eps[i]).p;
        EXPECT_NEAR(p / (eps[i] * eps[i]) / (8.0 / 15), 1, tol[i]);
    }
}

TEST(ClosedFormWeights, Examples)
{
    EXPECT_THROW(closed_form_weights(0), DomainError);
    EXPECT_THROW(closed_form_weights(-0.1), DomainError);
    EXPECT_THROW(closed_form_weights(3.2), DomainError);

    for (double d : {1e-9, 1e-7, 1e-5})
    {
        const auto w = closed_form_weights(d);
        EXPECT_NEAR(w.w_keep, 1, 1e-9);
        EXPECT_NEAR(w.w_flip, 0, 1e-9);
    }

    const auto w = closed_form_weights(0.3);
    EXPECT_LE(std::abs(2 * 0.09 / 5 - w.w_flip), std::pow(0.3, 4));

    EXPECT_GT(2 * 0.01 + std::cos(0.2) - 1, 0);
}

TEST(ClosedFormWeights, NormalizedAndTaylor)
{
    for (double d = 1e-6; d <= kPi; d *= 1.7)
    {
        const auto w = closed_form_weights(d);
        EXPECT_NEAR(w.w_keep + w.w_flip, 1, 1e-12) << d;
        EXPECT_GE(w.w_flip, 0);
        if (d < 0.5)
        {
            EXPECT_NEAR(w.w_keep, 1 - 2 * d * d / 5, 0.1 * std::pow(d, 4) + 1e-15) << d;
            EXPECT_NEAR(w.w_flip, 2 * d * d / 5, 0.1 * std::pow(d, 4) + 1e-15) << d;
        }
    }
    // series and closed-form branches meet smoothly
    const double below = closed_form_weights(0.999999e-6).w_flip;
    const double above = closed_form_weights(1.000001e-6).w_flip;
    EXPECT_NEAR(above / below, std::pow(1.000001 / 0.999999, 2), 1e-9);
}

TEST(ClosedFormWeights, QuadratureOracle)
{
    for (double d : {0.05, 0.1, 0.2, 0.4, 1.0, 2.0, kPi})
    {
        const double norm = region_integral(d, s2);
        const double sc = region_integral(d, [](double p) { return s2(p) * (1 - s2(p)); });
        const double s4 = region_integral(d, [](double p) { return s2(p) * s2(p); });

        const double c2 = std::cos(2 * d), c4 = std::cos(4 * d);
        EXPECT_NEAR(norm, 2 * d * d + c2 - 1, 1e-10) << d;
        EXPECT_NEAR(sc, (8 * d * d + c4 - 1) / 16, 1e-10) << d;
        EXPECT_NEAR(s4, (24 * d * d + 16 * c2 - c4 - 15) / 16, 1e-10) << d;

        const auto w = closed_form_weights(d);
        EXPECT_NEAR(w.w_keep, sc / norm, 1e-8) << d;
        EXPECT_NEAR(w.w_flip, s4 / norm, 1e-8) << d;
    }
}

TEST(SampleUnitaryNoise, RegionGeometry)
{
    const auto set = sample_unitary_noise(0.1, 20000, 1);
    ASSERT_EQ(set.samples.size(), 20000u);
    EXPECT_GT(set.acceptance_rate, 0);
    EXPECT_LE(set.acceptance_rate, 1);
    for (const auto& s : set.samples)
    {
        EXPECT_LE(std::abs(s.phi), 0.2);
        EXPECT_LE(std::abs(s.alpha), 0.1);
        EXPECT_LE(std::abs(s.phi / 2 + s.alpha), 0.1);
        EXPECT_LE(std::abs(s.phi / 2 - s.alpha), 0.1);
        EXPECT_NEAR(s.axis[0] * s.axis[0] + s.axis[1] * s.axis[1] + s.axis[2] * s.axis[2], 1, 1e-12);
    }
}

TEST(SampleUnitaryNoise, MeanSinSquaredMatchesQuadrature)
{
    const std::size_t n = 100000;
    const auto set = sample_unitary_noise(kPi, n, 2);
    double sum = 0, sum2 = 0;
    for (const auto& s : set.samples)
    {
        const double v = s2(s.phi);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double sigma = std::sqrt((sum2 / n - mean * mean) / n);
    const double expected = region_integral(kPi, [](double p) { return s2(p) * s2(p); }) / region_integral(kPi, s2);
    EXPECT_LE(std::abs(mean - expected), 3 * sigma) << mean << " vs " << expected;
}

TEST(SampleUnitaryNoise, AxisIsIsotropic)
{
    const std::size_t n = 50000;
    const auto set = sample_unitary_noise(0.05, n, 3);
    double sum = 0, sum2 = 0;
    for (const auto& s : set.samples)
    {
        sum += s.axis[2];
        sum2 += s.axis[2] * s.axis[2];
    }
    const double mean = sum / n;
    const double sigma = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_LE(std::abs(mean), 3 * sigma);
}

TEST(SampleUnitaryNoise, Deterministic)
{
    const auto a = sample_unitary_noise(0.3, 5000, 9);
    const auto b = sample_unitary_noise(0.3, 5000, 9);
    const auto c = sample_unitary_noise(0.3, 5000, 10);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i)
    {
        EXPECT_EQ(a.samples[i].phi, b.samples[i].phi);
        EXPECT_EQ(a.samples[i].axis, b.samples[i].axis);
    }
    EXPECT_NE(a.samples[0].phi, c.samples[0].phi);
    // a prefix of a longer draw is the shorter draw
    const auto d = sample_unitary_noise(0.3, 9000, 9);
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        EXPECT_EQ(a.samples[i].alpha, d.samples[i].alpha);
}

TEST(RotationMatrix, IsUnitaryWithExpectedTrace)
{
    for (const auto& s : sample_unitary_noise(2.0, 200, 5).samples)
    {
        const CMat2 R = rotation_matrix(s);
        EXPECT_LE(max_abs(R * R.adjoint() - CMat2::Identity()), 1e-14);
        EXPECT_NEAR(R.trace().real(), 2 * std::cos(s.phi / 2), 1e-14);
        EXPECT_NEAR(R.determinant().real(), 1, 1e-14);
    }
}

TEST(AverageChannel, Examples)
{
    const CMat2 I = CMat2::Identity();
    for (double d : {0.0, 0.1, 1.0, kPi})
        EXPECT_LE(max_abs(average_channel_mc(d, I, 5000, 1).mean - I), 1e-12);

    // traceless σz: (1 - p)σz
    const CMat2 Z = pauli_basis()[3];
    const double d1 = 0.1;
    auto est = average_channel_mc(d1, Z, 100000, 2);
    const double p1 = exact_depolarizing_p(d1);
    EXPECT_NEAR(p1, 8 * d1 * d1 / 15, 2 * std::pow(d1, 4));
    EXPECT_NEAR(1 - p1, 0.994667, 1e-4);
    for (int i = 0; i < 4; ++i)
        EXPECT_LE(std::abs((est.mean - (1 - p1) * Z)(i)), 3 * est.stderr_abs(i) + 1e-12) << i;

    // |0><0| at δ = 0.2
    const CMat2 P0 = mat(1, 0, 0, 0);
    const double d2 = 0.2;
    est = average_channel_mc(d2, P0, 100000, 3);
    const CMat2 exact = depolarize(exact_depolarizing_p(d2), P0);
    const CMat2 formula = depolarize(8 * d2 * d2 / 15, P0);
    for (int i = 0; i < 4; ++i)
    {
        EXPECT_LE(std::abs((est.mean - exact)(i)), 3 * est.stderr_abs(i) + 1e-12) << i;
        EXPECT_LE(std::abs((est.mean - formula)(i)), std::max(3 * est.stderr_abs(i), 2 * std::pow(d2, 4))) << i;
    }
}

TEST(AverageChannel, ClosedFormIsDepolarizing)
{
    const CMat2 A = mat(cd(0.3, 0.1), cd(-1, 2), cd(0.5, -0.7), cd(1.1, 0));
    for (double d : {0.05, 0.4, 1.3, kPi})
        EXPECT_LE(max_abs(averaged_channel(d, A) - depolarize(exact_depolarizing_p(d), A)), 1e-12) << d;
}

TEST(AverageChannel, TracePreservingAndUnital)
{
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    for (int i = 0; i < 5; ++i)
    {
        const CMat2 A = mat(cd(g(rng), g(rng)), cd(g(rng), g(rng)), cd(g(rng), g(rng)), cd(g(rng), g(rng)));
        const auto est = average_channel_mc(0.4, A, 4000, 7 + i);
        EXPECT_NEAR(std::abs(est.mean.trace() - A.trace()), 0, 1e-12);
    }
    EXPECT_LE(max_abs(average_channel_mc(0.4, CMat2::Identity(), 4000, 1).mean - CMat2::Identity()), 1e-12);
}

TEST(AverageChannel, PtmConvergesToDepolarizing)
{
    for (double d : {0.05, 0.1, 0.2, 0.4})
    {
        const auto v = validate_noise(d, 100000, 11);
        EXPECT_LE(v.ptm_distance, std::max(3 * v.ptm_sigma, 2 * std::pow(d, 4))) << d;
        EXPECT_LE(std::abs(v.p_fitted - v.p_exact), 3 * v.p_fitted_stderr + 1e-15) << d;
        EXPECT_NEAR(v.p_formula, v.p_exact, 2 * std::pow(d, 4)) << d;
        EXPECT_EQ(v.samples, 100000u);
        // against the small-δ formula as well
        const auto est = average_ptm_mc(d, 100000, 11);
        const double gap = (est.mean - depolarizing_ptm(v.p_formula)).cwiseAbs().maxCoeff();
        EXPECT_LE(gap, std::max(3 * v.ptm_sigma, 2 * std::pow(d, 4))) << d;
    }
}

TEST(Bounds, EpsTot)
{
    EXPECT_EQ(eps_tot_bound(0, 1'000'000), 0);
    EXPECT_EQ(eps_tot_bound(1, 1), 2);
    EXPECT_NEAR(eps_tot_bound(0.01, 100), 2 * (1 - std::pow(0.99, 100)), 1e-14);
    EXPECT_NEAR(eps_tot_bound(0.01, 100), 1.26794, 1e-5);
    EXPECT_EQ(eps_tot_bound(0.3, 0), 0);
    EXPECT_THROW(eps_tot_bound(1.5, 3), DomainError);
}

TEST(Bounds, Triangle)
{
    EXPECT_EQ(triangle_bound(0, 50).value, 0);
    EXPECT_NEAR(triangle_bound(0.1, 1).value, 0.2, 1e-15);
    const auto t = triangle_bound(1e-3, 1000);
    EXPECT_NEAR(t.raw, 2.0, 1e-12);
    EXPECT_NEAR(t.value, 2.0, 1e-12);
    EXPECT_NEAR(triangle_bound(1e-2, 1000).raw, 20, 1e-12);
    EXPECT_EQ(triangle_bound(1e-2, 1000).value, 2);
}

TEST(Bounds, Energy)
{
    auto e = energy_error_bounds(0, 100, 3);
    EXPECT_EQ(e.averaged, 0);
    EXPECT_EQ(e.naive, 0);

    e = energy_error_bounds(1e-3, 1000, 1);
    EXPECT_NEAR(e.naive, 2.0, 1e-12);
    EXPECT_NEAR(e.averaged, 1.066e-3, 1e-6);
}

TEST(Bounds, AveragedNeverExceedsNaive)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> log_eps(-8, std::log10(0.5));
    std::uniform_int_distribution<std::uint64_t> len(1, 1'000'000);
    for (int i = 0; i < 5000; ++i)
    {
        const auto e = energy_error_bounds(std::pow(10, log_eps(rng)), len(rng), 2.5);
        EXPECT_LE(e.averaged, e.naive);
    }
}

TEST(Variance, Examples)
{
    const CMat2 I = CMat2::Identity();
    const CMat2 X = pauli_basis()[1];
    EXPECT_EQ(variance_trace_norm(0, mat(1, 2, 3, 4)), 0);
    EXPECT_NEAR(variance_trace_norm(0.1, I), 0, 1e-15);
    EXPECT_NEAR(variance_trace_norm(0.1, X), 0.38, 1e-15);
}

TEST(Variance, MonteCarloAgrees)
{
    const CMat2 A = mat(cd(0.3, 0.1), cd(-1, 0.2), cd(0.5, -0.7), cd(1.1, 0));
    for (const CMat2& M : {pauli_basis()[1], CMat2(mat(1, 0, 0, 0)), A})
        for (double d : {0.1, 0.4})
        {
            const auto est = variance_trace_norm_mc(d, M, 100000, 12);
            const double expected = variance_trace_norm(exact_depolarizing_p(d), M);
            EXPECT_LE(std::abs(est.trace_norm - expected), 3 * est.stderr_abs) << d << " " << est.trace_norm;
        }
    EXPECT_NEAR(variance_trace_norm_mc(0.3, CMat2::Identity(), 1000, 1).trace_norm, 0, 1e-12);
}
