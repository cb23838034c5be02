#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ctb
{

class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

using CMat2 = Eigen::Matrix2cd;

struct NoiseParams
{
    double eps = 0;
    double delta = 0;  // arccos(1 - ε²/2)
    double p = 0;      // 8δ²/15
    double p_small_eps = 0;  // 8ε²/15
    bool small_eps_valid = true;  // |δ - ε|/ε < 0.05
};

/// Throws DomainError unless 0 ≤ eps ≤ 2.
NoiseParams noise_params_from_eps(double eps);

/// U·Rz(θ)† = e^{iα} R_n(φ).
struct UnitaryNoiseSample
{
    double alpha = 0;
    double phi = 0;
    std::array<double, 3> axis{0, 0, 1};
};

struct NoiseSampleSet
{
    std::vector<UnitaryNoiseSample> samples;
    double acceptance_rate = 0;
};

/// (α, φ) with density ∝ sin²(φ/2) on |φ/2 ± α| ≤ δ, axis uniform on the sphere.
/// Deterministic in seed; drawn in fixed-size batches with derived per-batch seeds.
NoiseSampleSet sample_unitary_noise(double delta, std::size_t count, std::uint64_t seed);

/// R_n(φ) = exp(-iφ n·σ/2).
CMat2 rotation_matrix(const UnitaryNoiseSample& s);

const std::array<CMat2, 4>& pauli_basis();  // I, X, Y, Z

struct Weights
{
    double w_keep = 1;
    double w_flip = 0;
};

/// Normalized sin²cos² and sin⁴ integrals over the constraint region.
/// DomainError outside (0, π]; the δ → 0 limit is (1, 0).
Weights closed_form_weights(double delta);

/// Depolarizing probability of the exact average: 4·w_flip/3.
double exact_depolarizing_p(double delta);

/// w_keep·A + (w_flip/3)(XAX + YAY + ZAZ); identity map at δ = 0.
CMat2 averaged_channel(double delta, const CMat2& A);

/// (1 - p)A + p·tr(A)·I/2.
CMat2 depolarize(double p, const CMat2& A);

struct ChannelEstimate
{
    CMat2 mean = CMat2::Zero();
    Eigen::Matrix2d stderr_abs = Eigen::Matrix2d::Zero();  // per-entry standard error
    std::size_t samples = 0;
    double acceptance_rate = 1;
};

ChannelEstimate average_channel_mc(double delta, const CMat2& A, std::size_t count, std::uint64_t seed);

using Ptm = Eigen::Matrix4d;

struct PtmEstimate
{
    Ptm mean = Ptm::Identity();
    Ptm stderr_abs = Ptm::Zero();
    double fidelity_stderr = 0;  // of the mean Pauli diagonal (T11 + T22 + T33)/3
    std::size_t samples = 0;
    double acceptance_rate = 1;
};

/// Pauli transfer matrix ½tr(P_i Λ(P_j)) of the sampled average.
PtmEstimate average_ptm_mc(double delta, std::size_t count, std::uint64_t seed);

Ptm depolarizing_ptm(double p);

/// 2(1 - (1 - p)^L).
double eps_tot_bound(double p, std::uint64_t L);

struct TriangleBound
{
    double value = 0;  // clamped to 2
    double raw = 0;    // 2Lε
};

TriangleBound triangle_bound(double eps, std::uint64_t L);

struct EnergyBounds
{
    double averaged = 0;
    double naive = 0;
};

/// averaged = 2‖H‖(1 - (1 - p(ε))^L), naive = 2‖H‖Lε.
EnergyBounds energy_error_bounds(double eps, std::uint64_t L, double h_norm);

/// p((2 - p)tr(A†A) + (p/2 - 1)|tr A|²).
double variance_trace_norm(double p, const CMat2& A);

struct VarianceEstimate
{
    double trace_norm = 0;
    double stderr_abs = 0;
    std::size_t samples = 0;
};

/// Trace norm of E[(X - M)(X - M)†], X = R A R†, M the exact average.
VarianceEstimate variance_trace_norm_mc(double delta, const CMat2& A, std::size_t count, std::uint64_t seed);

struct NoiseValidation
{
    double delta = 0;
    double p_formula = 0;  // 8δ²/15
    double p_exact = 0;    // 4·w_flip/3
    double p_fitted = 0;   // 1 - mean Pauli diagonal of the MC PTM
    double p_fitted_stderr = 0;
    double ptm_distance = 0;  // max-entry gap between MC PTM and depolarizing(p_exact)
    double ptm_sigma = 0;     // largest per-entry standard error
    std::size_t samples = 0;
    double acceptance_rate = 0;
};

NoiseValidation validate_noise(double delta, std::size_t count, std::uint64_t seed);

} // namespace ctb
