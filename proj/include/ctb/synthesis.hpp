#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctb/exact_synthesis.hpp"
#include "ctb/grid.hpp"
#include "json.hpp"

namespace ctb
{

class BudgetInfeasible : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// √(2(1 - Re(u·e^{iθ/2}))) = ‖U(t,u) - Rz(θ)‖ for Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2}).
HighFloat single_gate_error_high(const DOmega& u, double theta);
double single_gate_error(const DOmega& u, double theta);

/// Largest singular value of U - Rz(θ) from a dense 2×2 SVD (cross-check only).
double dense_operator_distance(const Mat2& U, double theta);

struct SynthesisRequest
{
    double theta = 0;
    int n_t = 1;
    /// Defaults to 4·10^(-n_t/10).
    std::optional<double> eps_tilde_init;
    std::uint64_t seed = 0;
    std::size_t candidate_cap = kDefaultCandidateCap;
    int norm_retries = 64;
    std::uint64_t factor_budget = 100'000'000;
};

struct SynthesisResult
{
    double theta = 0;
    int n_t = 0;
    int k = 0;
    DOmega u;
    DOmega t;
    GateString gates;
    double eps = 0;
    int t_count = 0;
    double eps_tilde_final = 0;
    std::size_t candidates_examined = 0;
    std::size_t timeouts = 0;

    ExactUnitary unitary() const { return {u, t}; }
};

/// Default initial ε̃ for a budget.
double default_eps_tilde(int n_t);

/// Best Clifford+T approximation of Rz(θ) with at most n_t T gates.
SynthesisResult synthesize_budgeted(const SynthesisRequest& req);

nlohmann::ordered_json to_json(const SynthesisResult& r);

/// Memoizes synthesize_budgeted per angle (keyed on the exact double) for one budget and seed.
class SynthCache
{
public:
    SynthCache(int n_t, std::uint64_t seed) : n_t_(n_t), seed_(seed) {}

    const SynthesisResult& get(double theta);
    std::size_t size() const { return cache_.size(); }
    std::size_t computations() const { return computations_; }
    int n_t() const { return n_t_; }

private:
    int n_t_;
    std::uint64_t seed_;
    std::size_t computations_ = 0;
    std::unordered_map<std::uint64_t, SynthesisResult> cache_;
};

std::map<double, SynthesisResult> synth_cache(const std::vector<double>& angles, int n_t, std::uint64_t seed = 0);

} // namespace ctb
