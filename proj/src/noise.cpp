#include "ctb/noise.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ctb/seed.hpp"

namespace ctb
{

namespace
{

using Real50 = boost::multiprecision::cpp_bin_float_50;
using cd = std::complex<double>;

constexpr std::size_t kBatch = 4096;

// Below this the closed forms lose digits even at 50-digit precision; use the series.
constexpr double kSeriesDelta = 1e-6;

void check_delta(double delta)
{
    if (!(delta >= 0 && delta <= std::numbers::pi))
        throw DomainError("delta must lie in [0, pi]");
}

// Running mean and second moment, one per entry.
template <class M>
struct Moments
{
    M sum = M::Zero();
    M sum_sq = M::Zero();
    std::size_t n = 0;

    void add(const M& x)
    {
        sum += x;
        sum_sq += x.cwiseProduct(x);
        ++n;
    }
    M mean() const { return sum / double(n); }
    M stderr_abs() const
    {
        if (n < 2)
            return M::Zero();
        const M m = mean();
        const M var = (sum_sq / double(n) - m.cwiseProduct(m)).cwiseMax(0.0) * (double(n) / double(n - 1));
        return (var / double(n)).cwiseSqrt();
    }
};

CMat2 conj_by(const CMat2& R, const CMat2& A)
{
    return R * A * R.adjoint();
}

} // namespace

NoiseParams noise_params_from_eps(double eps)
{
    if (!(eps >= 0 && eps <= 2))
        throw DomainError("eps must lie in [0, 2]");
    NoiseParams np;
    np.eps = eps;
    // arccos(1 - ε²/2) = 2·asin(ε/2), without the cancellation near ε = 0.
    np.delta = 2 * std::asin(eps / 2);
    np.p = 8 * np.delta * np.delta / 15;
    np.p_small_eps = 8 * eps * eps / 15;
    np.small_eps_valid = eps == 0 || std::abs(np.delta - eps) / eps < 0.05;
    return np;
}

NoiseSampleSet sample_unitary_noise(double delta, std::size_t count, std::uint64_t seed)
{
    check_delta(delta);
    NoiseSampleSet out;
    out.samples.reserve(count);
    if (delta == 0)
    {
        out.samples.resize(count);
        out.acceptance_rate = 1;
        return out;
    }

    const double smax = std::pow(std::sin(std::min(delta, std::numbers::pi / 2)), 2);
    std::size_t proposed = 0;
    for (std::uint64_t batch = 0; out.samples.size() < count; ++batch)
    {
        std::mt19937_64 rng(derive_seed(seed, batch));
        std::uniform_real_distribution<double> phi_d(-2 * delta, 2 * delta);
        std::uniform_real_distribution<double> alpha_d(-delta, delta);
        std::uniform_real_distribution<double> unit(0, 1);
        const std::size_t want = std::min(kBatch, count - out.samples.size());
        for (std::size_t got = 0; got < want;)
        {
            ++proposed;
            const double phi = phi_d(rng);
            const double alpha = alpha_d(rng);
            const double u = unit(rng);
            const double z = 2 * unit(rng) - 1;
            const double az = 2 * std::numbers::pi * unit(rng);
            if (std::abs(phi / 2 + alpha) > delta || std::abs(phi / 2 - alpha) > delta)
                continue;
            const double s = std::sin(phi / 2);
            if (u * smax > s * s)
                continue;
            const double r = std::sqrt(std::max(0.0, 1 - z * z));
            out.samples.push_back({alpha, phi, {r * std::cos(az), r * std::sin(az), z}});
            ++got;
        }
    }
    out.acceptance_rate = proposed ? double(count) / double(proposed) : 1;
    return out;
}

CMat2 rotation_matrix(const UnitaryNoiseSample& s)
{
    const double c = std::cos(s.phi / 2), sn = std::sin(s.phi / 2);
    const auto& n = s.axis;
    const cd i(0, 1);
    CMat2 R;
    R << c - i * sn * n[2], -i * sn * cd(n[0], -n[1]), -i * sn * cd(n[0], n[1]), c + i * sn * n[2];
    return R;
}

const std::array<CMat2, 4>& pauli_basis()
{
    static const std::array<CMat2, 4> p = [] {
        std::array<CMat2, 4> m;
        m[0] << 1, 0, 0, 1;
        m[1] << 0, 1, 1, 0;
        m[2] << 0, cd(0, -1), cd(0, 1), 0;
        m[3] << 1, 0, 0, -1;
        return m;
    }();
    return p;
}

Weights closed_form_weights(double delta)
{
    check_delta(delta);
    if (delta == 0)
        throw DomainError("closed-form weights are 0/0 at delta = 0; the limit is (1, 0)");
    if (delta < kSeriesDelta)
    {
        const double d2 = delta * delta;
        const double flip = d2 * (2.0 / 5 - d2 * (47.0 / 525 - d2 * 86.0 / 7875));
        return {1 - flip, flip};
    }
    const Real50 d = delta;
    const Real50 c2 = cos(2 * d), c4 = cos(4 * d);
    const Real50 denom = 16 * (2 * d * d + c2 - 1);
    const Real50 keep = (8 * d * d + c4 - 1) / denom;
    const Real50 flip = (24 * d * d + 16 * c2 - c4 - 15) / denom;
    return {static_cast<double>(keep), static_cast<double>(flip)};
}

double exact_depolarizing_p(double delta)
{
    return delta == 0 ? 0 : 4 * closed_form_weights(delta).w_flip / 3;
}

CMat2 averaged_channel(double delta, const CMat2& A)
{
    if (delta == 0)
        return A;
    const Weights w = closed_form_weights(delta);
    const auto& P = pauli_basis();
    return w.w_keep * A + (w.w_flip / 3) * (P[1] * A * P[1] + P[2] * A * P[2] + P[3] * A * P[3]);
}

CMat2 depolarize(double p, const CMat2& A)
{
    return (1 - p) * A + p * A.trace() * CMat2::Identity() / 2.0;
}

ChannelEstimate average_channel_mc(double delta, const CMat2& A, std::size_t count, std::uint64_t seed)
{
    ChannelEstimate est;
    if (delta == 0 || count == 0)
    {
        check_delta(delta);
        est.mean = A;
        return est;
    }
    const NoiseSampleSet set = sample_unitary_noise(delta, count, seed);
    Moments<Eigen::Matrix2d> re, im;
    for (const auto& s : set.samples)
    {
        const CMat2 X = conj_by(rotation_matrix(s), A);
        re.add(X.real());
        im.add(X.imag());
    }
    est.mean = re.mean().cast<cd>() + cd(0, 1) * im.mean().cast<cd>();
    const Eigen::Matrix2d sr = re.stderr_abs(), si = im.stderr_abs();
    est.stderr_abs = (sr.cwiseProduct(sr) + si.cwiseProduct(si)).cwiseSqrt();
    est.samples = set.samples.size();
    est.acceptance_rate = set.acceptance_rate;
    return est;
}

PtmEstimate average_ptm_mc(double delta, std::size_t count, std::uint64_t seed)
{
    PtmEstimate est;
    if (delta == 0 || count == 0)
    {
        check_delta(delta);
        return est;
    }
    const NoiseSampleSet set = sample_unitary_noise(delta, count, seed);
    const auto& P = pauli_basis();
    Moments<Ptm> m;
    Moments<Eigen::Matrix<double, 1, 1>> f;
    for (const auto& s : set.samples)
    {
        const CMat2 R = rotation_matrix(s);
        Ptm T;
        for (int j = 0; j < 4; ++j)
        {
            const CMat2 X = conj_by(R, P[j]);
            for (int i = 0; i < 4; ++i)
                T(i, j) = 0.5 * (P[i] * X).trace().real();
        }
        m.add(T);
        f.add(Eigen::Matrix<double, 1, 1>((T(1, 1) + T(2, 2) + T(3, 3)) / 3));
    }
    est.mean = m.mean();
    est.stderr_abs = m.stderr_abs();
    est.fidelity_stderr = f.stderr_abs()(0);
    est.samples = set.samples.size();
    est.acceptance_rate = set.acceptance_rate;
    return est;
}

Ptm depolarizing_ptm(double p)
{
    Ptm T = Ptm::Identity() * (1 - p);
    T(0, 0) = 1;
    return T;
}

double eps_tot_bound(double p, std::uint64_t L)
{
    if (!(p >= 0 && p <= 1))
        throw DomainError("p must lie in [0, 1]");
    if (L == 0 || p == 0)
        return 0;
    if (p == 1)
        return 2;
    // 1 - (1-p)^L without cancellation for tiny p
    return -2 * std::expm1(double(L) * std::log1p(-p));
}

TriangleBound triangle_bound(double eps, std::uint64_t L)
{
    if (!(eps >= 0))
        throw DomainError("eps must be non-negative");
    const double raw = 2 * double(L) * eps;
    return {std::min(raw, 2.0), raw};
}

EnergyBounds energy_error_bounds(double eps, std::uint64_t L, double h_norm)
{
    if (!(h_norm >= 0))
        throw DomainError("h_norm must be non-negative");
    const NoiseParams np = noise_params_from_eps(eps);
    // p = 8δ²/15 exceeds 1 for ε ≳ 1.3; the bound saturates there.
    return {h_norm * eps_tot_bound(std::min(np.p, 1.0), L), 2 * h_norm * double(L) * eps};
}

double variance_trace_norm(double p, const CMat2& A)
{
    const double tr_aa = (A.adjoint() * A).trace().real();
    const double tr_a2 = std::norm(A.trace());
    return p * ((2 - p) * tr_aa + (p / 2 - 1) * tr_a2);
}

VarianceEstimate variance_trace_norm_mc(double delta, const CMat2& A, std::size_t count, std::uint64_t seed)
{
    VarianceEstimate est;
    if (delta == 0 || count == 0)
    {
        check_delta(delta);
        return est;
    }
    const CMat2 M = averaged_channel(delta, A);
    const NoiseSampleSet set = sample_unitary_noise(delta, count, seed);
    CMat2 op = CMat2::Zero();
    Moments<Eigen::Matrix<double, 1, 1>> fro;
    for (const auto& s : set.samples)
    {
        const CMat2 d = conj_by(rotation_matrix(s), A) - M;
        op += d * d.adjoint();
        fro.add(Eigen::Matrix<double, 1, 1>(d.squaredNorm()));
    }
    op /= double(set.samples.size());
    est.trace_norm = Eigen::JacobiSVD<CMat2>(op).singularValues().sum();
    est.stderr_abs = fro.stderr_abs()(0);
    est.samples = set.samples.size();
    return est;
}

NoiseValidation validate_noise(double delta, std::size_t count, std::uint64_t seed)
{
    NoiseValidation v;
    v.delta = delta;
    v.p_formula = 8 * delta * delta / 15;
    v.p_exact = exact_depolarizing_p(delta);
    const PtmEstimate est = average_ptm_mc(delta, count, seed);
    const double f = (est.mean(1, 1) + est.mean(2, 2) + est.mean(3, 3)) / 3;
    v.p_fitted = 1 - f;
    v.p_fitted_stderr = est.fidelity_stderr;
    v.ptm_distance = (est.mean - depolarizing_ptm(v.p_exact)).cwiseAbs().maxCoeff();
    v.ptm_sigma = est.stderr_abs.maxCoeff();
    v.samples = est.samples;
    v.acceptance_rate = est.acceptance_rate;
    return v;
}

} // namespace ctb
