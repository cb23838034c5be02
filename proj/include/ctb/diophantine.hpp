#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ctb/rings.hpp"

namespace ctb
{

class FactorTimeout : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct FactorOptions
{
    /// Pollard iterations allowed before giving up.
    std::uint64_t work_budget = 100'000'000;
    std::uint64_t seed = 0;
};

/// Prime factors of n ≥ 1 with multiplicity, ascending. Throws FactorTimeout.
std::vector<BigInt> factorize(const BigInt& n, const FactorOptions& opts = {});

bool is_probable_prime(const BigInt& n);

/// r with r² ≡ a (mod p) for prime p, or nullopt if a is a non-residue.
std::optional<BigInt> sqrt_mod(const BigInt& a, const BigInt& p, std::uint64_t seed = 0);

struct NormSolveOptions
{
    std::uint64_t seed = 0;
    /// Attempts (fresh random choices) before reporting no solution.
    int retries = 64;
    std::uint64_t work_budget = 100'000'000;
};

enum class NormStatus
{
    Solved,
    NoSolution,
    Timeout,
};

struct IntegralNormResult
{
    NormStatus status = NormStatus::NoSolution;
    ZOmega y;
};

/// y ∈ Z[ω] with y·y† = n exactly.
IntegralNormResult solve_integral_norm_equation(const ZRootTwo& n, const NormSolveOptions& opts = {});

struct NormSolveResult
{
    NormStatus status = NormStatus::NoSolution;
    std::optional<DOmega> t;
};

/// t ∈ D[ω] with t·t† = xi and lde(t) ≤ k.
NormSolveResult solve_norm_equation_detailed(const DReal& xi, int k, const NormSolveOptions& opts = {});

inline std::optional<DOmega> solve_norm_equation(const DReal& xi, int k, const NormSolveOptions& opts = {})
{
    return solve_norm_equation_detailed(xi, k, opts).t;
}

} // namespace ctb
