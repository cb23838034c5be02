#include "ctb/synthesis.hpp"

#include <bit>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "ctb/diophantine.hpp"
#include "ctb/seed.hpp"

namespace ctb
{

namespace
{

// Candidates closer than this in ε count as ties.
constexpr double kTieTol = 1e-14;

} // namespace

HighFloat single_gate_error_high(const DOmega& u, double theta)
{
    return eps_from_overlap(RotationTarget(theta).overlap(u));
}

double single_gate_error(const DOmega& u, double theta)
{
    return static_cast<double>(single_gate_error_high(u, theta));
}

double dense_operator_distance(const Mat2& U, double theta)
{
    Eigen::Matrix2cd D;
    const std::complex<double> z = std::polar(1.0, -theta / 2);
    D << U[0].value() - z, U[1].value(), U[2].value(), U[3].value() - std::conj(z);
    return Eigen::JacobiSVD<Eigen::Matrix2cd>(D).singularValues()(0);
}

double default_eps_tilde(int n_t)
{
    return 4 * std::pow(10.0, -n_t / 10.0);
}

SynthesisResult synthesize_budgeted(const SynthesisRequest& req)
{
    if (req.n_t < 1)
        throw std::invalid_argument("T budget must be at least 1");
    if (!std::isfinite(req.theta))
        throw std::invalid_argument("angle must be finite");

    SynthesisResult res;
    res.theta = req.theta;
    res.n_t = req.n_t;
    res.k = req.n_t / 2 + 1;
    double eps_tilde = req.eps_tilde_init.value_or(default_eps_tilde(req.n_t));
    if (!(eps_tilde > 0))
        throw std::invalid_argument("initial eps_tilde must be positive");

    for (;;)
    {
        eps_tilde = std::min(eps_tilde, 2.0);
        const CandidateSet cs = enumerate_u_candidates({req.theta, res.k, eps_tilde}, req.candidate_cap);

        const Candidate* best = nullptr;
        std::string best_key;
        DOmega best_t;
        for (std::size_t i = 0; i < cs.items.size(); ++i)
        {
            const Candidate& c = cs.items[i];
            // Sorted by ε: once past the best solved value, nothing can beat it.
            if (best && c.eps > best->eps + kTieTol)
                break;
            ++res.candidates_examined;

            const ZRootTwo n = ZRootTwo(BigInt(1) << res.k) - c.numerator.norm_cc();
            const DReal xi(n, 2 * res.k);
            const auto sol = solve_norm_equation_detailed(
                xi, res.k, {derive_seed(req.seed, i), req.norm_retries, req.factor_budget});
            if (sol.status == NormStatus::Timeout)
            {
                ++res.timeouts;
                continue;
            }
            if (!sol.t)
                continue;
            std::string key = c.u.to_string();
            if (!best || key < best_key)
            {
                best = &c;
                best_key = std::move(key);
                best_t = *sol.t;
            }
        }

        if (best)
        {
            const ExactUnitary U = with_minimal_t_count({best->u, best_t});
            res.u = U.u;
            res.t = U.t;
            res.gates = exact_decompose(U);
            res.t_count = t_count(res.gates);
            res.eps = static_cast<double>(best->eps);
            res.eps_tilde_final = eps_tilde;
            if (res.t_count > req.n_t)
                throw std::logic_error("synthesized T-count exceeds the budget");
            return res;
        }
        if (eps_tilde >= 2)
            throw BudgetInfeasible("no solvable candidate even at eps_tilde = 2");
        eps_tilde *= 2;
    }
}

nlohmann::ordered_json to_json(const SynthesisResult& r)
{
    nlohmann::ordered_json j;
    j["theta"] = r.theta;
    j["n_t"] = r.n_t;
    j["eps"] = r.eps;
    j["t_count"] = r.t_count;
    j["gates"] = r.gates.str();
    j["u"] = r.u.to_string();
    j["t"] = r.t.to_string();
    j["k"] = r.k;
    j["eps_tilde_final"] = r.eps_tilde_final;
    j["candidates_examined"] = r.candidates_examined;
    j["timeouts"] = r.timeouts;
    j["guard_tol"] = kGuardTol;
    return j;
}

const SynthesisResult& SynthCache::get(double theta)
{
    const std::uint64_t key = std::bit_cast<std::uint64_t>(theta);
    auto it = cache_.find(key);
    if (it == cache_.end())
    {
        SynthesisRequest req;
        req.theta = theta;
        req.n_t = n_t_;
        req.seed = seed_;
        ++computations_;
        it = cache_.emplace(key, synthesize_budgeted(req)).first;
    }
    return it->second;
}

std::map<double, SynthesisResult> synth_cache(const std::vector<double>& angles, int n_t, std::uint64_t seed)
{
    SynthCache cache(n_t, seed);
    std::map<double, SynthesisResult> out;
    for (double a : angles)
        out.emplace(a, cache.get(a));
    return out;
}

} // namespace ctb
