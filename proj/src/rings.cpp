#include "ctb/rings.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ctb
{

namespace
{

const double kSqrt2 = std::sqrt(2.0);

const HighFloat& high_sqrt2()
{
    static const HighFloat s = boost::multiprecision::sqrt(HighFloat(2));
    return s;
}

} // namespace

double to_double(const BigInt& x)
{
    return x.convert_to<double>();
}

BigInt floor_div(const BigInt& n, const BigInt& d)
{
    BigInt q = n / d;
    if (n % d != 0 && n < 0)
        q -= 1;
    return q;
}

BigInt round_div(const BigInt& n, const BigInt& d)
{
    return floor_div(2 * n + d, 2 * d);
}

////////////////////////////////////////////////////////////
// ZRootTwo
////////////////////////////////////////////////////////////

ZRootTwo ZRootTwo::lambda_pow(int n)
{
    ZRootTwo base = n >= 0 ? lambda() : ZRootTwo(-1, 1);
    ZRootTwo result(1);
    for (unsigned e = static_cast<unsigned>(n >= 0 ? n : -n); e; e >>= 1)
    {
        if (e & 1)
            result *= base;
        base *= base;
    }
    return result;
}

ZRootTwo& ZRootTwo::operator+=(const ZRootTwo& o)
{
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

ZRootTwo& ZRootTwo::operator-=(const ZRootTwo& o)
{
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

ZRootTwo& ZRootTwo::operator*=(const ZRootTwo& o)
{
    BigInt a = a_ * o.a_ + 2 * b_ * o.b_;
    BigInt b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
}

int ZRootTwo::sign() const
{
    const int sa = a_.sign();
    const int sb = b_.sign();
    if (sa >= 0 && sb >= 0)
        return (sa > 0 || sb > 0) ? 1 : 0;
    if (sa <= 0 && sb <= 0)
        return -1;
    // opposite signs: compare a² with 2b²
    const BigInt diff = a_ * a_ - 2 * b_ * b_;
    const int sd = diff.sign();
    return sa > 0 ? sd : -sd;
}

ZRootTwo ZRootTwo::div_sqrt2() const
{
    if (!divisible_by_sqrt2())
        throw std::domain_error("ZRootTwo::div_sqrt2: not divisible");
    return {b_, a_ / 2};
}

std::optional<ZRootTwo> ZRootTwo::divide_exact(const ZRootTwo& d) const
{
    const BigInt n = d.norm();
    if (n == 0)
        throw std::domain_error("ZRootTwo::divide_exact: division by zero");
    const ZRootTwo p = *this * d.conj_sqrt2();
    if (p.a_ % n != 0 || p.b_ % n != 0)
        return std::nullopt;
    return ZRootTwo(p.a_ / n, p.b_ / n);
}

std::pair<ZRootTwo, ZRootTwo> ZRootTwo::divmod(const ZRootTwo& d) const
{
    BigInt n = d.norm();
    if (n == 0)
        throw std::domain_error("ZRootTwo::divmod: division by zero");
    ZRootTwo p = *this * d.conj_sqrt2();
    if (n < 0)
    {
        n = -n;
        p = -p;
    }
    ZRootTwo q(round_div(p.a_, n), round_div(p.b_, n));
    ZRootTwo r = *this - q * d;
    return {std::move(q), std::move(r)};
}

ZRootTwo ZRootTwo::gcd(ZRootTwo x, ZRootTwo y)
{
    while (!y.is_zero())
    {
        ZRootTwo r = x.divmod(y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x;
}

double ZRootTwo::value() const
{
    return to_double(a_) + kSqrt2 * to_double(b_);
}

HighFloat ZRootTwo::value_high() const
{
    return HighFloat(a_) + high_sqrt2() * HighFloat(b_);
}

////////////////////////////////////////////////////////////
// ZOmega
////////////////////////////////////////////////////////////

ZOmega ZOmega::omega_pow(int n)
{
    return ZOmega(1).mul_omega(n);
}

ZOmega ZOmega::from_parts(const ZRootTwo& re, const ZRootTwo& im)
{
    // α = p + q√2 -> (-q, 0, q, p);  iβ = i(r + s√2) -> (s, r, s, 0)
    return {im.b() - re.b(), im.a(), re.b() + im.b(), re.a()};
}

ZOmega& ZOmega::operator+=(const ZOmega& o)
{
    a_ += o.a_;
    b_ += o.b_;
    c_ += o.c_;
    d_ += o.d_;
    return *this;
}

ZOmega& ZOmega::operator-=(const ZOmega& o)
{
    a_ -= o.a_;
    b_ -= o.b_;
    c_ -= o.c_;
    d_ -= o.d_;
    return *this;
}

ZOmega operator*(const ZOmega& x, const ZOmega& y)
{
    // polynomial product in ω modulo ω⁴ = -1; index i holds the ω^i coefficient
    const BigInt* xs[4] = {&x.d_, &x.c_, &x.b_, &x.a_};
    const BigInt* ys[4] = {&y.d_, &y.c_, &y.b_, &y.a_};
    BigInt z[4];
    for (int i = 0; i < 4; ++i)
    {
        if (xs[i]->is_zero())
            continue;
        for (int j = 0; j < 4; ++j)
        {
            if (ys[j]->is_zero())
                continue;
            const int e = i + j;
            if (e < 4)
                z[e] += *xs[i] * *ys[j];
            else
                z[e - 4] -= *xs[i] * *ys[j];
        }
    }
    return {std::move(z[3]), std::move(z[2]), std::move(z[1]), std::move(z[0])};
}

ZOmega ZOmega::mul_omega(int n) const
{
    n = ((n % 8) + 8) % 8;
    ZOmega r = *this;
    for (int i = 0; i < n; ++i)
        r = ZOmega(r.b_, r.c_, r.d_, -r.a_);
    return r;
}

ZRootTwo ZOmega::norm_cc() const
{
    const ZOmega p = *this * conj();
    return p.to_zroottwo();
}

ZOmega ZOmega::div_sqrt2() const
{
    if (!divisible_by_sqrt2())
        throw std::domain_error("ZOmega::div_sqrt2: not divisible");
    return {(b_ - d_) / 2, (c_ + a_) / 2, (d_ + b_) / 2, (c_ - a_) / 2};
}

bool ZOmega::divisible_by_int(const BigInt& n) const
{
    return a_ % n == 0 && b_ % n == 0 && c_ % n == 0 && d_ % n == 0;
}

namespace
{

// Product of the three non-trivial Galois conjugates, so that x * cofactor(x) = N(x).
ZOmega norm_cofactor(const ZOmega& x)
{
    const ZOmega s = x.conj_sqrt2();
    return x.conj() * s * s.conj();
}

} // namespace

std::optional<ZOmega> ZOmega::divide_exact(const ZOmega& d) const
{
    const BigInt n = d.norm();
    if (n == 0)
        throw std::domain_error("ZOmega::divide_exact: division by zero");
    const ZOmega p = *this * norm_cofactor(d);
    if (!p.divisible_by_int(n))
        return std::nullopt;
    return ZOmega(p.a_ / n, p.b_ / n, p.c_ / n, p.d_ / n);
}

std::pair<ZOmega, ZOmega> ZOmega::divmod(const ZOmega& d) const
{
    const BigInt n = d.norm();
    if (n == 0)
        throw std::domain_error("ZOmega::divmod: division by zero");
    const ZOmega p = *this * norm_cofactor(d);
    ZOmega q(round_div(p.a_, n), round_div(p.b_, n), round_div(p.c_, n), round_div(p.d_, n));
    ZOmega r = *this - q * d;
    return {std::move(q), std::move(r)};
}

ZOmega ZOmega::gcd(ZOmega x, ZOmega y)
{
    while (!y.is_zero())
    {
        ZOmega r = x.divmod(y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x;
}

std::complex<double> ZOmega::value() const
{
    const double a = to_double(a_), b = to_double(b_), c = to_double(c_), d = to_double(d_);
    return {d + (c - a) / kSqrt2, b + (c + a) / kSqrt2};
}

std::pair<HighFloat, HighFloat> ZOmega::value_high() const
{
    const HighFloat a(a_), b(b_), c(c_), d(d_);
    return {d + (c - a) / high_sqrt2(), b + (c + a) / high_sqrt2()};
}

////////////////////////////////////////////////////////////
// DOmega
////////////////////////////////////////////////////////////

namespace
{

template <class Num>
Num scale_sqrt2(Num x, int times)
{
    for (; times >= 2; times -= 2)
        x = x * Num(2);
    if (times == 1)
        x = x.mul_sqrt2();
    return x;
}

template <class Num>
void canonicalize(Num& num, int& k)
{
    if (k < 0)
    {
        num = scale_sqrt2(num, -k);
        k = 0;
    }
    if (num.is_zero())
    {
        k = 0;
        return;
    }
    while (k > 0 && num.divisible_by_sqrt2())
    {
        num = num.div_sqrt2();
        --k;
    }
}

} // namespace

DOmega::DOmega(ZOmega num, int k) : num_(std::move(num)), k_(k)
{
    canonicalize(num_, k_);
}

ZOmega DOmega::numerator_at(int k) const
{
    if (k < k_)
        throw std::domain_error("DOmega::numerator_at: exponent below lde");
    return scale_sqrt2(num_, k - k_);
}

DOmega operator+(const DOmega& x, const DOmega& y)
{
    const int k = std::max(x.k_, y.k_);
    return DOmega(x.numerator_at(k) + y.numerator_at(k), k);
}

DOmega operator-(const DOmega& x, const DOmega& y)
{
    const int k = std::max(x.k_, y.k_);
    return DOmega(x.numerator_at(k) - y.numerator_at(k), k);
}

DOmega operator*(const DOmega& x, const DOmega& y)
{
    return DOmega(x.num_ * y.num_, x.k_ + y.k_);
}

DOmega DOmega::conj_sqrt2() const
{
    ZOmega n = num_.conj_sqrt2();
    if (k_ % 2 != 0)
        n = -n;
    return DOmega(std::move(n), k_);
}

std::complex<double> DOmega::value() const
{
    return num_.value() / std::pow(kSqrt2, k_);
}

std::pair<HighFloat, HighFloat> DOmega::value_high() const
{
    auto [re, im] = num_.value_high();
    const HighFloat scale = boost::multiprecision::pow(high_sqrt2(), k_);
    return {re / scale, im / scale};
}

std::string DOmega::to_string() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::optional<DOmega> DOmega::parse(std::string_view text)
{
    // (a,b,c,d)/√2^k
    static constexpr std::string_view kDenominator = "/√2^";
    if (text.empty() || text.front() != '(')
        return std::nullopt;
    const auto close = text.find(')');
    if (close == std::string_view::npos)
        return std::nullopt;
    const std::string_view inner = text.substr(1, close - 1);
    const std::string_view rest = text.substr(close + 1);
    if (rest.substr(0, kDenominator.size()) != kDenominator)
        return std::nullopt;
    const std::string_view kpart = rest.substr(kDenominator.size());

    auto parse_int = [](std::string_view s) -> std::optional<BigInt> {
        if (s.empty())
            return std::nullopt;
        std::size_t i = (s.front() == '-') ? 1 : 0;
        if (i == s.size())
            return std::nullopt;
        for (std::size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9')
                return std::nullopt;
        return BigInt(std::string(s));
    };

    BigInt coeffs[4];
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i)
    {
        const auto comma = (i < 3) ? inner.find(',', pos) : inner.size();
        if (comma == std::string_view::npos)
            return std::nullopt;
        auto v = parse_int(inner.substr(pos, comma - pos));
        if (!v)
            return std::nullopt;
        coeffs[i] = *v;
        pos = comma + 1;
    }
    auto kv = parse_int(kpart);
    if (!kv || *kv < 0 || *kv > 1000000)
        return std::nullopt;
    return DOmega(ZOmega(coeffs[0], coeffs[1], coeffs[2], coeffs[3]), kv->convert_to<int>());
}

////////////////////////////////////////////////////////////
// DReal
////////////////////////////////////////////////////////////

DReal::DReal(ZRootTwo num, int k) : num_(std::move(num)), k_(k)
{
    canonicalize(num_, k_);
}

ZRootTwo DReal::numerator_at(int k) const
{
    if (k < k_)
        throw std::domain_error("DReal::numerator_at: exponent below lde");
    return scale_sqrt2(num_, k - k_);
}

DReal operator+(const DReal& x, const DReal& y)
{
    const int k = std::max(x.k_, y.k_);
    return DReal(x.numerator_at(k) + y.numerator_at(k), k);
}

DReal operator-(const DReal& x, const DReal& y)
{
    const int k = std::max(x.k_, y.k_);
    return DReal(x.numerator_at(k) - y.numerator_at(k), k);
}

DReal operator*(const DReal& x, const DReal& y)
{
    return DReal(x.num_ * y.num_, x.k_ + y.k_);
}

DReal DReal::conj_sqrt2() const
{
    ZRootTwo n = num_.conj_sqrt2();
    if (k_ % 2 != 0)
        n = -n;
    return DReal(std::move(n), k_);
}

double DReal::value() const
{
    return num_.value() / std::pow(kSqrt2, k_);
}

std::string DReal::to_string() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

////////////////////////////////////////////////////////////

Embedding embed(const ZRootTwo& x)
{
    return {x.value(), x.conj_sqrt2().value()};
}

Embedding embed(const ZOmega& x)
{
    return {x.value(), x.conj_sqrt2().value()};
}

Embedding embed(const DOmega& x)
{
    return {x.value(), x.conj_sqrt2().value()};
}

Embedding embed(const DReal& x)
{
    return {x.value(), x.conj_sqrt2().value()};
}

DReal norm_cc(const DOmega& u)
{
    return DReal(u.num().norm_cc(), 2 * u.k());
}

DOmega to_domega(const DReal& x)
{
    return DOmega(ZOmega(x.num()), x.k());
}

std::optional<DReal> to_dreal(const DOmega& x)
{
    if (!x.num().is_real())
        return std::nullopt;
    return DReal(x.num().to_zroottwo(), x.k());
}

std::ostream& operator<<(std::ostream& os, const ZRootTwo& x)
{
    return os << x.a() << (x.b() < 0 ? "-" : "+") << abs(x.b()) << "√2";
}

std::ostream& operator<<(std::ostream& os, const ZOmega& x)
{
    return os << '(' << x.a() << ',' << x.b() << ',' << x.c() << ',' << x.d() << ')';
}

std::ostream& operator<<(std::ostream& os, const DOmega& x)
{
    return os << x.num() << "/√2^" << x.k();
}

std::ostream& operator<<(std::ostream& os, const DReal& x)
{
    return os << '(' << x.num() << ")/√2^" << x.k();
}

} // namespace ctb
