#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ctb/rings.hpp"

namespace ctb
{

/// Widening applied to every floating region test, in units of |u|.
inline constexpr double kGuardTol = 1e-12;
inline constexpr std::size_t kDefaultCandidateCap = 1'000'000;

class EnumerationCapExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Every β in Z[√2] with β ∈ [x0, x1] and β• ∈ [y0, y1], ascending in β.
/// Membership is checked against the given endpoints in high precision.
std::vector<ZRootTwo> solve_interval_grid(double x0, double x1, double y0, double y1,
                                          std::size_t max_count = kDefaultCandidateCap);

struct EpsRegionQuery
{
    double theta = 0;
    int k = 1;
    double eps_tilde = 1;
};

/// Target entry e^{-iθ/2} of Rz(θ) and the rotation overlap Re(u·e^{iθ/2}).
struct RotationTarget
{
    HighFloat cos_half;  // cos(θ/2)
    HighFloat sin_half;  // -sin(θ/2); target = cos_half + i·sin_half

    explicit RotationTarget(double theta);
    HighFloat overlap(const ZOmega& x, int k) const;
    HighFloat overlap(const DOmega& u) const { return overlap(u.num(), u.k()); }
};

/// √(2(1 - overlap)), clamped at 0.
HighFloat eps_from_overlap(const HighFloat& overlap);

struct Candidate
{
    DOmega u;
    ZOmega numerator;  // u·√2^k for the query's k
    HighFloat eps;
};

struct CandidateSet
{
    std::vector<Candidate> items;  // ascending eps, ties by u.to_string()
    double guard_tol = kGuardTol;
};

/// Exact membership test used by the enumerator's final filter:
/// |x|² ≤ 2^k and |x•|² ≤ 2^k exactly, overlap ≥ 1 - ε̃²/2 - tol in high precision.
bool in_eps_region(const ZOmega& x, const EpsRegionQuery& q, const RotationTarget& target,
                   double tol = kGuardTol);

/// All u = x/√2^k (lde(u) ≤ k) inside the ε̃-cap around e^{-iθ/2}.
//
// Z[ω] = Z[√2][i] ⊕ ω·Z[√2][i], and Z[√2][i] is the index-2 sublattice with
// a ≡ c (mod 2). Writing x = α + iβ + s·ω with α, β ∈ Z[√2] and s ∈ {0, 1}
// turns the 2-D region into an outer 1-D grid problem for one coordinate
// (the axis on which the cap's projection is short) and, per outer value, a
// 1-D problem for the other coordinate along the resulting slice. Both the
// value and the √2-conjugate are constrained (|u| ≤ 1, |u•| ≤ 1).
CandidateSet enumerate_u_candidates(const EpsRegionQuery& q,
                                    std::size_t max_count = kDefaultCandidateCap);

} // namespace ctb
