#include "ctb/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include <boost/multiprecision/miller_rabin.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace ctb
{

namespace
{

namespace mp = boost::multiprecision;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialLimit = 1'000'000;

const std::vector<u64>& small_primes()
{
    static const std::vector<u64> primes = [] {
        std::vector<bool> composite(kTrialLimit + 1, false);
        std::vector<u64> out;
        for (u64 i = 2; i <= kTrialLimit; ++i)
        {
            if (composite[i])
                continue;
            out.push_back(i);
            for (u64 j = i * i; j <= kTrialLimit; j += i)
                composite[j] = true;
        }
        return out;
    }();
    return primes;
}

u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1 % m;
    for (b %= m; e; e >>= 1)
    {
        if (e & 1)
            r = mulmod(r, b, m);
        b = mulmod(b, b, m);
    }
    return r;
}

bool is_prime_u64(u64 n)
{
    if (n < 2)
        return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0)
    {
        d >>= 1;
        ++s;
    }
    // Deterministic for all 64-bit n.
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool witness = true;
        for (int r = 1; r < s; ++r)
        {
            x = mulmod(x, x, n);
            if (x == n - 1)
            {
                witness = false;
                break;
            }
        }
        if (witness)
            return false;
    }
    return true;
}

struct Budget
{
    u64 remaining;
    void spend(u64 n)
    {
        if (n > remaining)
            throw FactorTimeout("factorization work budget exceeded");
        remaining -= n;
    }
};

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
u64 pollard_brent_u64(u64 n, std::mt19937_64& rng, Budget& budget)
{
    if (n % 2 == 0)
        return 2;
    std::uniform_int_distribution<u64> dist(1, n - 1);
    for (;;)
    {
        const u64 c = dist(rng);
        u64 y = dist(rng), x = 0, ys = 0, q = 1, g = 1;
        const u64 m = 128;
        for (u64 r = 1; g == 1; r <<= 1)
        {
            x = y;
            for (u64 i = 0; i < r; ++i)
                y = (mulmod(y, y, n) + c) % n;
            for (u64 k = 0; k < r && g == 1; k += m)
            {
                ys = y;
                const u64 steps = std::min(m, r - k);
                for (u64 i = 0; i < steps; ++i)
                {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                budget.spend(steps + r);
                g = std::gcd(q, n);
            }
        }
        if (g == n)
        {
            do
            {
                ys = (mulmod(ys, ys, n) + c) % n;
                g = std::gcd(x > ys ? x - ys : ys - x, n);
                budget.spend(1);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_u64(u64 n, std::vector<BigInt>& out, std::mt19937_64& rng, Budget& budget)
{
    if (n == 1)
        return;
    if (is_prime_u64(n))
    {
        out.emplace_back(n);
        return;
    }
    const u64 d = pollard_brent_u64(n, rng, budget);
    factor_u64(d, out, rng, budget);
    factor_u64(n / d, out, rng, budget);
}

BigInt pollard_brent_big(const BigInt& n, std::mt19937_64& rng, Budget& budget)
{
    if (n % 2 == 0)
        return 2;
    boost::random::mt19937_64 brng(rng());
    boost::random::uniform_int_distribution<BigInt> dist(1, n - 1);
    for (;;)
    {
        const BigInt c = dist(brng);
        BigInt y = dist(brng), x, ys, q = 1, g = 1;
        const u64 m = 128;
        for (u64 r = 1; g == 1; r <<= 1)
        {
            x = y;
            for (u64 i = 0; i < r; ++i)
                y = (y * y + c) % n;
            for (u64 k = 0; k < r && g == 1; k += m)
            {
                ys = y;
                const u64 steps = std::min(m, r - k);
                for (u64 i = 0; i < steps; ++i)
                {
                    y = (y * y + c) % n;
                    q = (q * abs(x - y)) % n;
                }
                budget.spend(steps + r);
                g = mp::gcd(q, n);
            }
        }
        if (g == n)
        {
            do
            {
                ys = (ys * ys + c) % n;
                g = mp::gcd(abs(x - ys), n);
                budget.spend(1);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_big(const BigInt& n, std::vector<BigInt>& out, std::mt19937_64& rng, Budget& budget)
{
    if (n <= std::numeric_limits<u64>::max())
    {
        factor_u64(n.convert_to<u64>(), out, rng, budget);
        return;
    }
    if (is_probable_prime(n))
    {
        out.push_back(n);
        return;
    }
    const BigInt d = pollard_brent_big(n, rng, budget);
    factor_big(d, out, rng, budget);
    factor_big(n / d, out, rng, budget);
}

} // namespace

bool is_probable_prime(const BigInt& n)
{
    if (n <= std::numeric_limits<u64>::max())
        return n >= 2 && is_prime_u64(n.convert_to<u64>());
    boost::random::mt19937 rng(12345);
    return mp::miller_rabin_test(n, 32, rng);
}

std::vector<BigInt> factorize(const BigInt& n_in, const FactorOptions& opts)
{
    if (n_in < 1)
        throw std::invalid_argument("factorize requires n >= 1");
    std::vector<BigInt> out;
    BigInt n = n_in;
    if (n <= std::numeric_limits<u64>::max())
    {
        u64 m = n.convert_to<u64>();
        for (u64 p : small_primes())
        {
            if (p * p > m)
                break;
            while (m % p == 0)
            {
                out.emplace_back(p);
                m /= p;
            }
        }
        n = m;
    }
    else
    {
        for (u64 p : small_primes())
        {
            if (BigInt(p) * p > n)
                break;
            while (n % p == 0)
            {
                out.emplace_back(p);
                n /= p;
            }
        }
    }
    if (n > 1)
    {
        Budget budget{opts.work_budget};
        std::mt19937_64 rng(opts.seed);
        if (n <= BigInt(kTrialLimit) * kTrialLimit)
            out.push_back(n);  // no factor below its square root
        else
            factor_big(n, out, rng, budget);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<BigInt> sqrt_mod(const BigInt& a_in, const BigInt& p, std::uint64_t seed)
{
    const BigInt a = ((a_in % p) + p) % p;
    if (a == 0 || p == 2)
        return a;
    const BigInt half = (p - 1) / 2;
    if (mp::powm(a, half, p) != 1)
        return std::nullopt;
    if (p % 4 == 3)
        return mp::powm(a, (p + 1) / 4, p);

    // Tonelli–Shanks
    BigInt q = p - 1;
    unsigned s = 0;
    while (q % 2 == 0)
    {
        q /= 2;
        ++s;
    }
    BigInt z;
    {
        boost::random::mt19937_64 rng(seed);
        boost::random::uniform_int_distribution<BigInt> dist(2, p - 1);
        bool found = false;
        for (int i = 0; i < 256 && !found; ++i)
        {
            z = dist(rng);
            found = mp::powm(z, half, p) == p - 1;
        }
        // Deterministic fallback; a non-residue always exists.
        if (!found)
            for (z = 2; mp::powm(z, half, p) != p - 1; ++z)
                ;
    }
    unsigned m = s;
    BigInt c = mp::powm(z, q, p);
    BigInt t = mp::powm(a, q, p);
    BigInt r = mp::powm(a, (q + 1) / 2, p);
    while (t != 1)
    {
        unsigned i = 0;
        for (BigInt tt = t; tt != 1; tt = tt * tt % p)
            ++i;
        BigInt b = c;
        for (unsigned j = 0; j + 1 < m - i; ++j)
            b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

namespace
{

ZOmega pow(const ZOmega& x, unsigned e)
{
    ZOmega r(1), b = x;
    for (; e; e >>= 1)
    {
        if (e & 1)
            r *= b;
        b *= b;
    }
    return r;
}

ZRootTwo pow(const ZRootTwo& x, unsigned e)
{
    ZRootTwo r(1), b = x;
    for (; e; e >>= 1)
    {
        if (e & 1)
            r *= b;
        b *= b;
    }
    return r;
}

// Times x divides n exactly; n is updated.
unsigned strip(ZRootTwo& n, const ZRootTwo& x)
{
    unsigned e = 0;
    while (auto q = n.divide_exact(x))
    {
        n = std::move(*q);
        ++e;
    }
    return e;
}

const ZOmega kI = ZOmega::omega_pow(2);
const ZOmega kISqrt2(1, 0, 1, 0);  // ω³ + ω = i√2

enum class Attempt
{
    Ok,
    NoSolution,
    Retry,
};

Attempt attempt_solve(const ZRootTwo& n, std::mt19937_64& rng, std::uint64_t work_budget, ZOmega& y)
{
    y = ZOmega(1);
    ZRootTwo rem = n;

    // √2 = δδ† up to a unit, δ = 1 + ω.
    unsigned e2 = 0;
    while (rem.divisible_by_sqrt2())
    {
        rem = rem.div_sqrt2();
        ++e2;
    }
    y *= pow(ZOmega(0, 0, 1, 1), e2);

    const BigInt N = abs(rem.norm());
    const auto primes = factorize(N, {work_budget, rng()});
    std::map<BigInt, unsigned> exps;
    for (const auto& p : primes)
        ++exps[p];

    for (const auto& [p, e] : exps)
    {
        const unsigned r8 = static_cast<unsigned>(p % 8);
        if (r8 == 1 || r8 == 7)
        {
            // p splits in Z[√2] as ηη•.
            const auto h = sqrt_mod(2, p, rng());
            if (!h)
                return Attempt::Retry;
            const ZRootTwo eta = ZRootTwo::gcd(ZRootTwo(p), ZRootTwo(*h, 1));
            if (abs(eta.norm()) != p)
                return Attempt::Retry;
            const ZRootTwo eta_c = eta.conj_sqrt2();
            const unsigned e1 = strip(rem, eta);
            const unsigned e1c = strip(rem, eta_c);
            if (e1 + e1c != e)
                return Attempt::Retry;
            if (r8 == 7)
            {
                // η stays prime in Z[ω]; needs an even power.
                if (e1 % 2 || e1c % 2)
                    return Attempt::NoSolution;
                y *= ZOmega(pow(eta, e1 / 2)) * ZOmega(pow(eta_c, e1c / 2));
                continue;
            }
            const auto hi = sqrt_mod(p - 1, p, rng());
            if (!hi)
                return Attempt::Retry;
            for (const auto& [factor, power] : {std::pair{eta, e1}, std::pair{eta_c, e1c}})
            {
                if (power == 0)
                    continue;
                const ZOmega tau = ZOmega::gcd(ZOmega(factor), ZOmega(*hi) + kI);
                if (abs(tau.norm()) != p)
                    return Attempt::Retry;
                y *= pow(tau, power);
            }
        }
        else
        {
            // p inert in Z[√2]; splits in Z[i] (p ≡ 5) or Z[√-2] (p ≡ 3).
            if (e % 2)
                return Attempt::NoSolution;
            const auto h = sqrt_mod(r8 == 5 ? p - 1 : p - 2, p, rng());
            if (!h)
                return Attempt::Retry;
            const ZOmega tau = ZOmega::gcd(ZOmega(p), ZOmega(*h) + (r8 == 5 ? kI : kISqrt2));
            if (tau.norm() != p * p)
                return Attempt::Retry;
            y *= pow(tau, e / 2);
        }
    }

    // n / (yy†) is a totally positive unit λ^{2m}.
    const auto unit = n.divide_exact(y.norm_cc());
    if (!unit || unit->norm() != 1 || unit->sign() <= 0 || unit->conj_sqrt2().sign() <= 0)
        return Attempt::Retry;
    const double lv = std::log(unit->value());
    const int m = static_cast<int>(std::lround(lv / (2 * std::log(1 + std::sqrt(2.0)))));
    const ZRootTwo root = ZRootTwo::lambda_pow(m);
    if (root * root != *unit)
        return Attempt::Retry;
    y *= ZOmega(root);
    return y.norm_cc() == n ? Attempt::Ok : Attempt::Retry;
}

} // namespace

IntegralNormResult solve_integral_norm_equation(const ZRootTwo& n, const NormSolveOptions& opts)
{
    IntegralNormResult res;
    if (n.is_zero())
    {
        res.status = NormStatus::Solved;
        res.y = ZOmega(0);
        return res;
    }
    if (n.sign() < 0 || n.conj_sqrt2().sign() < 0)
        return res;

    std::mt19937_64 rng(opts.seed);
    for (int attempt = 0; attempt < std::max(1, opts.retries); ++attempt)
    {
        Attempt a;
        try
        {
            a = attempt_solve(n, rng, opts.work_budget, res.y);
        }
        catch (const FactorTimeout&)
        {
            res.status = NormStatus::Timeout;
            return res;
        }
        if (a == Attempt::Ok)
        {
            res.status = NormStatus::Solved;
            return res;
        }
        if (a == Attempt::NoSolution)
            break;
    }
    res.status = NormStatus::NoSolution;
    res.y = ZOmega(0);
    return res;
}

NormSolveResult solve_norm_equation_detailed(const DReal& xi, int k, const NormSolveOptions& opts)
{
    NormSolveResult res;
    // xi = n / 2^j with an even exponent so that t = y / √2^j.
    const int j = (xi.lde() + 1) / 2;
    if (j > k)
        return res;
    const ZRootTwo n = xi.numerator_at(2 * j);
    const auto sol = solve_integral_norm_equation(n, opts);
    res.status = sol.status;
    if (sol.status == NormStatus::Solved)
    {
        DOmega t(sol.y, j);
        if (norm_cc(t) != xi)
            throw std::logic_error("norm equation verification failed");
        res.t = std::move(t);
    }
    return res;
}

} // namespace ctb
