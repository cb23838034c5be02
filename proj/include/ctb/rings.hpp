#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace ctb
{

using BigInt = boost::multiprecision::cpp_int;

// 50 significant decimal digits; used wherever doubles would cancel badly
// (synthesis error near 1e-7 and below, exact-region re-checks).
using HighFloat = boost::multiprecision::cpp_bin_float_50;

class ZOmega;

/// a + b√2 with integer a, b.
class ZRootTwo
{
public:
    ZRootTwo() = default;
    ZRootTwo(BigInt a, BigInt b = 0) : a_(std::move(a)), b_(std::move(b)) {}
    ZRootTwo(int a) : a_(a), b_(0) {}

    const BigInt& a() const noexcept { return a_; }
    const BigInt& b() const noexcept { return b_; }

    static ZRootTwo sqrt2() { return {0, 1}; }
    /// Fundamental unit 1 + √2.
    static ZRootTwo lambda() { return {1, 1}; }
    /// λ^n for any integer n (λ^-1 = √2 - 1).
    static ZRootTwo lambda_pow(int n);

    ZRootTwo operator-() const { return {-a_, -b_}; }
    ZRootTwo& operator+=(const ZRootTwo& o);
    ZRootTwo& operator-=(const ZRootTwo& o);
    ZRootTwo& operator*=(const ZRootTwo& o);
    friend ZRootTwo operator+(ZRootTwo x, const ZRootTwo& y) { return x += y; }
    friend ZRootTwo operator-(ZRootTwo x, const ZRootTwo& y) { return x -= y; }
    friend ZRootTwo operator*(ZRootTwo x, const ZRootTwo& y) { return x *= y; }
    friend bool operator==(const ZRootTwo&, const ZRootTwo&) = default;

    /// Galois conjugate √2 -> -√2.
    ZRootTwo conj_sqrt2() const { return {a_, -b_}; }
    /// x * x• = a² - 2b².
    BigInt norm() const { return a_ * a_ - 2 * b_ * b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    /// Exact sign of the real value a + b√2.
    int sign() const;
    /// Both the value and its √2-conjugate are >= 0.
    bool is_doubly_nonnegative() const { return sign() >= 0 && conj_sqrt2().sign() >= 0; }

    bool divisible_by_sqrt2() const { return a_ % 2 == 0; }
    ZRootTwo div_sqrt2() const;
    ZRootTwo mul_sqrt2() const { return {2 * b_, a_}; }

    /// Exact quotient when divisible; nullopt otherwise.
    std::optional<ZRootTwo> divide_exact(const ZRootTwo& d) const;
    /// Euclidean division with the quotient rounded coefficient-wise.
    std::pair<ZRootTwo, ZRootTwo> divmod(const ZRootTwo& d) const;
    static ZRootTwo gcd(ZRootTwo x, ZRootTwo y);

    double value() const;
    HighFloat value_high() const;

private:
    BigInt a_ = 0;
    BigInt b_ = 0;
};

/// aω³ + bω² + cω + d, ω = e^{iπ/4}.
class ZOmega
{
public:
    ZOmega() = default;
    ZOmega(BigInt a, BigInt b, BigInt c, BigInt d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d))
    {
    }
    ZOmega(int d) : a_(0), b_(0), c_(0), d_(d) {}
    ZOmega(const ZRootTwo& x) : a_(-x.b()), b_(0), c_(x.b()), d_(x.a()) {}

    static ZOmega omega() { return {0, 0, 1, 0}; }
    /// ω^n, n taken mod 8.
    static ZOmega omega_pow(int n);
    /// α + iβ for α, β in Z[√2].
    static ZOmega from_parts(const ZRootTwo& re, const ZRootTwo& im);

    const BigInt& a() const noexcept { return a_; }
    const BigInt& b() const noexcept { return b_; }
    const BigInt& c() const noexcept { return c_; }
    const BigInt& d() const noexcept { return d_; }

    ZOmega operator-() const { return {-a_, -b_, -c_, -d_}; }
    ZOmega& operator+=(const ZOmega& o);
    ZOmega& operator-=(const ZOmega& o);
    friend ZOmega operator+(ZOmega x, const ZOmega& y) { return x += y; }
    friend ZOmega operator-(ZOmega x, const ZOmega& y) { return x -= y; }
    friend ZOmega operator*(const ZOmega& x, const ZOmega& y);
    ZOmega& operator*=(const ZOmega& o) { return *this = *this * o; }
    friend bool operator==(const ZOmega&, const ZOmega&) = default;

    /// Multiplication by ω^n (coefficient rotation).
    ZOmega mul_omega(int n) const;

    /// Complex conjugate.
    ZOmega conj() const { return {-c_, -b_, -a_, d_}; }
    /// Galois conjugate ω -> -ω (√2 -> -√2).
    ZOmega conj_sqrt2() const { return {-a_, b_, -c_, d_}; }
    /// u u† as an element of Z[√2].
    ZRootTwo norm_cc() const;
    /// Absolute norm N(x) = (xx†)(xx†)• in Z, always >= 0.
    BigInt norm() const { return norm_cc().norm(); }

    bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0 && d_ == 0; }
    bool is_real() const { return b_ == 0 && a_ == -c_; }
    /// Real element as Z[√2]; caller guarantees is_real().
    ZRootTwo to_zroottwo() const { return {d_, c_}; }

    // x√2 = (b-d, c+a, d+b, c-a); divisible by √2 iff a ≡ c and b ≡ d (mod 2).
    bool divisible_by_sqrt2() const { return (a_ + c_) % 2 == 0 && (b_ + d_) % 2 == 0; }
    ZOmega div_sqrt2() const;
    ZOmega mul_sqrt2() const { return {b_ - d_, c_ + a_, d_ + b_, c_ - a_}; }
    bool divisible_by_int(const BigInt& n) const;

    std::optional<ZOmega> divide_exact(const ZOmega& d) const;
    std::pair<ZOmega, ZOmega> divmod(const ZOmega& d) const;
    static ZOmega gcd(ZOmega x, ZOmega y);

    std::complex<double> value() const;
    std::pair<HighFloat, HighFloat> value_high() const;

private:
    BigInt a_ = 0;
    BigInt b_ = 0;
    BigInt c_ = 0;
    BigInt d_ = 0;
};

/// num / √2^k in D[ω], kept with k equal to the least denominator exponent.
class DOmega
{
public:
    DOmega() = default;
    DOmega(int n) : num_(n), k_(0) {}
    DOmega(ZOmega num, int k = 0);

    const ZOmega& num() const noexcept { return num_; }
    int k() const noexcept { return k_; }
    /// Least denominator exponent; equals k() by the canonical-form invariant.
    int lde() const noexcept { return k_; }
    /// Numerator for the (not necessarily least) denominator exponent k >= lde().
    ZOmega numerator_at(int k) const;

    static DOmega omega_pow(int n) { return DOmega(ZOmega::omega_pow(n)); }
    static DOmega inv_sqrt2_pow(int k) { return DOmega(ZOmega(1), k); }

    DOmega operator-() const { return DOmega(-num_, k_); }
    friend DOmega operator+(const DOmega& x, const DOmega& y);
    friend DOmega operator-(const DOmega& x, const DOmega& y);
    friend DOmega operator*(const DOmega& x, const DOmega& y);
    DOmega& operator+=(const DOmega& o) { return *this = *this + o; }
    DOmega& operator-=(const DOmega& o) { return *this = *this - o; }
    DOmega& operator*=(const DOmega& o) { return *this = *this * o; }
    friend bool operator==(const DOmega&, const DOmega&) = default;

    DOmega conj() const { return DOmega(num_.conj(), k_); }
    /// √2 ↦ -√2 also flips the sign of the denominator when k is odd.
    DOmega conj_sqrt2() const;
    bool is_zero() const { return num_.is_zero(); }

    std::complex<double> value() const;
    std::pair<HighFloat, HighFloat> value_high() const;

    /// "(a,b,c,d)/√2^k"
    std::string to_string() const;
    static std::optional<DOmega> parse(std::string_view text);

private:
    ZOmega num_;
    int k_ = 0;
};

/// num / √2^k in D[√2], canonical like DOmega.
class DReal
{
public:
    DReal() = default;
    DReal(int n) : num_(n), k_(0) {}
    DReal(ZRootTwo num, int k = 0);

    const ZRootTwo& num() const noexcept { return num_; }
    int k() const noexcept { return k_; }
    int lde() const noexcept { return k_; }
    ZRootTwo numerator_at(int k) const;

    DReal operator-() const { return DReal(-num_, k_); }
    friend DReal operator+(const DReal& x, const DReal& y);
    friend DReal operator-(const DReal& x, const DReal& y);
    friend DReal operator*(const DReal& x, const DReal& y);
    friend bool operator==(const DReal&, const DReal&) = default;

    DReal conj_sqrt2() const;
    int sign() const { return num_.sign(); }
    bool is_zero() const { return num_.is_zero(); }
    double value() const;

    std::string to_string() const;

private:
    ZRootTwo num_;
    int k_ = 0;
};

/// Real-embedded value of x together with its √2-conjugate.
struct Embedding
{
    std::complex<double> value;
    std::complex<double> conjugate;
};

// Coefficients are converted to double individually, so each embedding has
// relative error about 2^-52 per coefficient. Once coefficients exceed 2^50
// the result can lose all relative precision through cancellation
// (e.g. λ^-n = (√2-1)^n); use value_high() there.
Embedding embed(const ZRootTwo& x);
Embedding embed(const ZOmega& x);
Embedding embed(const DOmega& x);
Embedding embed(const DReal& x);

/// uu† of a D[ω] element.
DReal norm_cc(const DOmega& u);
DOmega to_domega(const DReal& x);
/// Real element of D[ω] as D[√2]; nullopt when not real.
std::optional<DReal> to_dreal(const DOmega& x);

std::ostream& operator<<(std::ostream& os, const ZRootTwo& x);
std::ostream& operator<<(std::ostream& os, const ZOmega& x);
std::ostream& operator<<(std::ostream& os, const DOmega& x);
std::ostream& operator<<(std::ostream& os, const DReal& x);

/// Round-half-up integer division, valid for either sign of the numerator (d > 0).
BigInt round_div(const BigInt& n, const BigInt& d);
/// floor division for d > 0.
BigInt floor_div(const BigInt& n, const BigInt& d);

double to_double(const BigInt& x);

} // namespace ctb
