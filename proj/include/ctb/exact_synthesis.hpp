#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ctb/rings.hpp"

namespace ctb
{

/// Word over {H, S, T, X, Z, W}; the leftmost symbol is the leftmost matrix factor.
class GateString
{
public:
    GateString() = default;
    /// Throws std::invalid_argument on symbols outside "HSTXZW".
    explicit GateString(std::string symbols);
    static std::optional<GateString> parse(std::string_view text);

    const std::string& str() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }

    GateString& operator+=(const GateString& o)
    {
        symbols_ += o.symbols_;
        return *this;
    }
    friend GateString operator+(GateString a, const GateString& b) { return a += b; }
    friend bool operator==(const GateString&, const GateString&) = default;

private:
    std::string symbols_;
};

/// Row-major 2×2 matrix over D[ω].
using Mat2 = std::array<DOmega, 4>;

Mat2 mat_identity();
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 adjoint(const Mat2& m);
Mat2 gate_matrix(char symbol);
Mat2 gate_string_to_matrix(const GateString& g);

int t_count(const GateString& g);

class MalformedUnitary : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// [[u, -t†], [t, u†]]
struct ExactUnitary
{
    DOmega u;
    DOmega t;

    Mat2 matrix() const;
    bool is_unitary() const;
};

/// Clifford+T word whose exact product equals U (global phase carried by W symbols).
GateString exact_decompose(const ExactUnitary& U);
/// Same for any 2×2 unitary with entries in D[ω].
GateString exact_decompose(const Mat2& U);

/// Replaces t by ω·t when that lowers the T-count. Both choices give the same
/// u (hence the same approximation error); one of them always has T-count
/// 2·lde(u) - 2 for lde(u) ≥ 1, the other 2·lde(u).
ExactUnitary with_minimal_t_count(const ExactUnitary& U);

/// Largest denominator exponent among the entries of the Bloch-sphere
/// rotation of U; equals the minimal T-count.
int bloch_lde(const Mat2& U);

} // namespace ctb
