#include "ctb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ctb
{

namespace
{

namespace mp = boost::multiprecision;

const double kSqrt2 = std::numbers::sqrt2;
const double kLambda = 1 + std::numbers::sqrt2;

const HighFloat& high_sqrt2()
{
    static const HighFloat s = mp::sqrt(HighFloat(2));
    return s;
}

std::int64_t checked_floor(double v)
{
    if (!(std::abs(v) < 4.0e18))
        throw std::overflow_error("grid coordinate out of 64-bit range");
    return static_cast<std::int64_t>(std::floor(v));
}

std::int64_t checked_ceil(double v)
{
    if (!(std::abs(v) < 4.0e18))
        throw std::overflow_error("grid coordinate out of 64-bit range");
    return static_cast<std::int64_t>(std::ceil(v));
}

// Range of cos(t) over t ∈ [lo, hi] (hi - lo ≤ 2π).
std::pair<double, double> cos_range(double lo, double hi)
{
    const double two_pi = 2 * std::numbers::pi;
    double mn = std::min(std::cos(lo), std::cos(hi));
    double mx = std::max(std::cos(lo), std::cos(hi));
    // Does [lo, hi] contain a multiple of 2π (max) or an odd multiple of π (min)?
    if (std::floor(hi / two_pi) >= std::ceil(lo / two_pi))
        mx = 1;
    if (std::floor((hi - std::numbers::pi) / two_pi) >= std::ceil((lo - std::numbers::pi) / two_pi))
        mn = -1;
    return {mn, mx};
}

HighFloat high_sqrt_clamped(const HighFloat& v)
{
    return v > 0 ? HighFloat(mp::sqrt(v)) : HighFloat(0);
}

} // namespace

std::vector<ZRootTwo> solve_interval_grid(double x0, double x1, double y0, double y1,
                                          std::size_t max_count)
{
    std::vector<ZRootTwo> out;
    if (!(x0 <= x1) || !(y0 <= y1))
        return out;

    // Rescale by λ^n so both intervals have comparable width; then the
    // number of b values visited is O(1 + number of solutions).
    const double dx = x1 - x0, dy = y1 - y0;
    int n = 0;
    if (dx > 0 && dy > 0)
        n = static_cast<int>(std::lround(std::log(dy / dx) / (2 * std::log(kLambda))));
    n = std::clamp(n, -200, 200);

    const double ln = std::pow(kLambda, n);
    const double lc = std::pow(kLambda, -n);
    double sx0 = x0 * ln, sx1 = x1 * ln;
    double sy0 = y0 * lc, sy1 = y1 * lc;
    // λ• = -1/λ
    if (n % 2 != 0)
    {
        std::swap(sy0, sy1);
        sy0 = -sy0;
        sy1 = -sy1;
    }
    const double slack = 1e-9 * (1 + std::max({std::abs(sx0), std::abs(sx1), std::abs(sy0), std::abs(sy1)}));
    sx0 -= slack;
    sy0 -= slack;
    sx1 += slack;
    sy1 += slack;

    const HighFloat hx0(x0), hx1(x1), hy0(y0), hy1(y1);
    const ZRootTwo unscale = ZRootTwo::lambda_pow(-n);

    // β' = a + b√2, β'• = a - b√2  =>  2b√2 = β' - β'•
    const std::int64_t b_lo = checked_ceil((sx0 - sy1) / (2 * kSqrt2));
    const std::int64_t b_hi = checked_floor((sx1 - sy0) / (2 * kSqrt2));
    for (std::int64_t b = b_lo; b <= b_hi; ++b)
    {
        const double bs = static_cast<double>(b) * kSqrt2;
        const double a_lo = std::max(sx0 - bs, sy0 + bs);
        const double a_hi = std::min(sx1 - bs, sy1 + bs);
        if (a_lo > a_hi)
            continue;
        for (std::int64_t a = checked_ceil(a_lo), ae = checked_floor(a_hi); a <= ae; ++a)
        {
            ZRootTwo beta = ZRootTwo(BigInt(a), BigInt(b)) * unscale;
            const HighFloat v = beta.value_high();
            if (v < hx0 || v > hx1)
                continue;
            const HighFloat w = beta.conj_sqrt2().value_high();
            if (w < hy0 || w > hy1)
                continue;
            out.push_back(std::move(beta));
            if (out.size() > max_count)
                throw EnumerationCapExceeded("interval grid exceeded candidate cap");
        }
    }
    std::sort(out.begin(), out.end(), [](const ZRootTwo& l, const ZRootTwo& r) { return (l - r).sign() < 0; });
    return out;
}

RotationTarget::RotationTarget(double theta)
{
    const HighFloat half = HighFloat(theta) / 2;
    cos_half = mp::cos(half);
    sin_half = -mp::sin(half);
}

HighFloat RotationTarget::overlap(const ZOmega& x, int k) const
{
    // Re(x·conj(target)) / √2^k
    const auto [re, im] = x.value_high();
    return (re * cos_half + im * sin_half) / mp::pow(high_sqrt2(), k);
}

HighFloat eps_from_overlap(const HighFloat& overlap)
{
    return high_sqrt_clamped(2 * (1 - overlap));
}

bool in_eps_region(const ZOmega& x, const EpsRegionQuery& q, const RotationTarget& target, double tol)
{
    const ZRootTwo slack = ZRootTwo(BigInt(1) << q.k) - x.norm_cc();
    if (slack.sign() < 0 || slack.conj_sqrt2().sign() < 0)
        return false;
    const HighFloat threshold = 1 - HighFloat(q.eps_tilde) * HighFloat(q.eps_tilde) / 2 - HighFloat(tol);
    return target.overlap(x, q.k) >= threshold;
}

CandidateSet enumerate_u_candidates(const EpsRegionQuery& q, std::size_t max_count)
{
    if (q.k < 0)
        throw std::invalid_argument("denominator exponent must be non-negative");
    if (!(q.eps_tilde > 0))
        throw std::invalid_argument("eps_tilde must be positive");

    CandidateSet result;
    const double g = result.guard_tol;
    const RotationTarget target(q.theta);

    // Cap: Re(u·e^{-iφ}) ≥ c with φ = -θ/2, widened by g.
    const double phi = -q.theta / 2;
    const double cos_phi = std::cos(phi), sin_phi = std::sin(phi);
    const HighFloat c = 1 - HighFloat(q.eps_tilde) * HighFloat(q.eps_tilde) / 2 - HighFloat(g);
    const double depth = q.eps_tilde * q.eps_tilde / 2 + g;  // 1 - c = 2 sin²(ψ/2)
    const double psi = depth >= 2 ? std::numbers::pi : 2 * std::asin(std::sqrt(depth / 2));

    // Short side of the cap is along the normal's dominant axis.
    const bool outer_real = std::abs(sin_phi) <= std::abs(cos_phi);
    std::pair<double, double> proj =
        outer_real ? cos_range(phi - psi, phi + psi)
                   : cos_range(phi - psi - std::numbers::pi / 2, phi + psi - std::numbers::pi / 2);
    proj.first = std::max(proj.first, -1.0) - g;
    proj.second = std::min(proj.second, 1.0) + g;

    const double scale = std::pow(kSqrt2, q.k);
    const HighFloat hscale = mp::pow(high_sqrt2(), q.k);
    const HighFloat disk = (1 + HighFloat(g)) * (1 + HighFloat(g));
    // Coefficient of the inner coordinate in the cap inequality, and of the outer one.
    const HighFloat m_inner = outer_real ? target.sin_half : target.cos_half;
    const HighFloat m_outer = outer_real ? target.cos_half : target.sin_half;

    for (int s = 0; s <= 1; ++s)
    {
        // ω = (1 + i)/√2 and ω• = -ω, so both coordinates shift by ±s/√2.
        const double off = s / kSqrt2;
        const HighFloat hoff = s / high_sqrt2();
        const auto outer = solve_interval_grid(scale * proj.first - off, scale * proj.second - off,
                                               -scale * (1 + g) + off, scale * (1 + g) + off, max_count);
        for (const ZRootTwo& alpha : outer)
        {
            const HighFloat r = (alpha.value_high() + hoff) / hscale;
            const HighFloat rc = (alpha.conj_sqrt2().value_high() - hoff) / hscale;
            const HighFloat h = high_sqrt_clamped(disk - r * r);
            const HighFloat hc = high_sqrt_clamped(disk - rc * rc);

            HighFloat lo = -h, hi = h;
            const HighFloat rhs = c - r * m_outer;
            if (m_inner > 0)
                lo = std::max(lo, HighFloat(rhs / m_inner));
            else if (m_inner < 0)
                hi = std::min(hi, HighFloat(rhs / m_inner));
            else if (rhs > 0)
                continue;
            if (lo > hi)
                continue;

            // Endpoint rounding to double is far below g·√2^k; pad anyway.
            const double pad = 1e-15 * (1 + scale);
            const auto inner = solve_interval_grid(
                static_cast<double>(lo * hscale) - off - pad, static_cast<double>(hi * hscale) - off + pad,
                -static_cast<double>(hc * hscale) + off - pad, static_cast<double>(hc * hscale) + off + pad,
                max_count);
            for (const ZRootTwo& beta : inner)
            {
                ZOmega x = outer_real ? ZOmega::from_parts(alpha, beta) : ZOmega::from_parts(beta, alpha);
                if (s)
                    x += ZOmega::omega();
                if (!in_eps_region(x, q, target, g))
                    continue;
                HighFloat eps = eps_from_overlap(target.overlap(x, q.k));
                DOmega u(x, q.k);
                result.items.push_back({std::move(u), std::move(x), std::move(eps)});
                if (result.items.size() > max_count)
                    throw EnumerationCapExceeded("candidate enumeration exceeded cap");
            }
        }
    }

    // Precompute sort keys; to_string on BigInts is not free.
    std::vector<std::pair<std::string, std::size_t>> keys;
    keys.reserve(result.items.size());
    for (std::size_t i = 0; i < result.items.size(); ++i)
        keys.emplace_back(result.items[i].u.to_string(), i);
    std::sort(keys.begin(), keys.end(), [&](const auto& l, const auto& r) {
        const HighFloat& el = result.items[l.second].eps;
        const HighFloat& er = result.items[r.second].eps;
        if (el != er)
            return el < er;
        return l.first < r.first;
    });
    std::vector<Candidate> sorted;
    sorted.reserve(keys.size());
    for (const auto& key : keys)
        sorted.push_back(std::move(result.items[key.second]));
    result.items = std::move(sorted);
    return result;
}

} // namespace ctb
