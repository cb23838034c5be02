#include "ctb/exact_synthesis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <vector>

namespace ctb
{

namespace
{

bool valid_symbol(char c)
{
    return c == 'H' || c == 'S' || c == 'T' || c == 'X' || c == 'Z' || c == 'W';
}

// Bloch rotation R_ij = ½ tr(σ_i U σ_j U†); entries are real elements of D[√2].
using Mat3 = std::array<DReal, 9>;

Mat3 operator*(const Mat3& a, const Mat3& b)
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
        {
            DReal s(0);
            for (int k = 0; k < 3; ++k)
                if (!a[3 * i + k].is_zero() && !b[3 * k + j].is_zero())
                    s = s + a[3 * i + k] * b[3 * k + j];
            r[3 * i + j] = s;
        }
    return r;
}

Mat3 transpose(const Mat3& a)
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r[3 * i + j] = a[3 * j + i];
    return r;
}

int lde(const Mat3& a)
{
    int k = 0;
    for (const auto& x : a)
        k = std::max(k, x.lde());
    return k;
}

const std::array<Mat2, 3>& paulis()
{
    static const std::array<Mat2, 3> p = [] {
        const DOmega i = DOmega::omega_pow(2);
        return std::array<Mat2, 3>{Mat2{0, 1, 1, 0}, Mat2{0, -i, i, 0}, Mat2{1, 0, 0, -1}};
    }();
    return p;
}

DOmega trace(const Mat2& m)
{
    return m[0] + m[3];
}

Mat3 bloch(const Mat2& U)
{
    const Mat2 Ud = adjoint(U);
    const DOmega half(ZOmega(1), 2);
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
        {
            const auto re = to_dreal(half * trace(paulis()[i] * U * paulis()[j] * Ud));
            if (!re)
                throw MalformedUnitary("Bloch representation has a non-real entry");
            r[3 * i + j] = *re;
        }
    return r;
}

std::string key(const Mat3& m)
{
    std::string s;
    for (const auto& x : m)
        s += x.to_string() + ';';
    return s;
}

// The 24 single-qubit Cliffords modulo phase, as shortest words over {H, S}.
const std::map<std::string, std::string>& clifford_table()
{
    static const std::map<std::string, std::string> table = [] {
        std::map<std::string, std::string> t;
        std::deque<std::pair<std::string, Mat2>> queue{{"", mat_identity()}};
        t[key(bloch(mat_identity()))] = "";
        while (!queue.empty())
        {
            auto [word, m] = queue.front();
            queue.pop_front();
            for (char g : {'H', 'S'})
            {
                Mat2 next = m * gate_matrix(g);
                const std::string k = key(bloch(next));
                if (t.count(k))
                    continue;
                t[k] = word + g;
                queue.emplace_back(word + g, std::move(next));
            }
        }
        return t;
    }();
    return table;
}

// Left syllables of the Matsumoto–Amano normal form.
struct Syllable
{
    const char* word;
    Mat3 rot_transpose;
};

const std::array<Syllable, 3>& syllables()
{
    static const std::array<Syllable, 3> s = [] {
        auto make = [](const char* w) { return Syllable{w, transpose(bloch(gate_string_to_matrix(GateString(w))))}; };
        return std::array<Syllable, 3>{make("T"), make("HT"), make("SHT")};
    }();
    return s;
}

} // namespace

GateString::GateString(std::string symbols) : symbols_(std::move(symbols))
{
    if (!std::all_of(symbols_.begin(), symbols_.end(), valid_symbol))
        throw std::invalid_argument("gate string may only contain H, S, T, X, Z, W");
}

std::optional<GateString> GateString::parse(std::string_view text)
{
    if (!std::all_of(text.begin(), text.end(), valid_symbol))
        return std::nullopt;
    return GateString(std::string(text));
}

Mat2 mat_identity()
{
    return {1, 0, 0, 1};
}

Mat2 operator*(const Mat2& a, const Mat2& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 adjoint(const Mat2& m)
{
    return {m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()};
}

Mat2 gate_matrix(char symbol)
{
    const DOmega r = DOmega::inv_sqrt2_pow(1);
    switch (symbol)
    {
    case 'H':
        return {r, r, r, -r};
    case 'S':
        return {1, 0, 0, DOmega::omega_pow(2)};
    case 'T':
        return {1, 0, 0, DOmega::omega_pow(1)};
    case 'X':
        return {0, 1, 1, 0};
    case 'Z':
        return {1, 0, 0, -1};
    case 'W':
        return {DOmega::omega_pow(1), 0, 0, DOmega::omega_pow(1)};
    default:
        throw std::invalid_argument(std::string("unknown gate symbol ") + symbol);
    }
}

Mat2 gate_string_to_matrix(const GateString& g)
{
    Mat2 m = mat_identity();
    for (char c : g.str())
        m = m * gate_matrix(c);
    return m;
}

int t_count(const GateString& g)
{
    return static_cast<int>(std::count(g.str().begin(), g.str().end(), 'T'));
}

Mat2 ExactUnitary::matrix() const
{
    return {u, -t.conj(), t, u.conj()};
}

bool ExactUnitary::is_unitary() const
{
    return norm_cc(u) + norm_cc(t) == DReal(1);
}

int bloch_lde(const Mat2& U)
{
    return lde(bloch(U));
}

ExactUnitary with_minimal_t_count(const ExactUnitary& U)
{
    ExactUnitary rotated{U.u, U.t * DOmega::omega_pow(1)};
    return bloch_lde(rotated.matrix()) < bloch_lde(U.matrix()) ? rotated : U;
}

GateString exact_decompose(const ExactUnitary& U)
{
    if (!U.is_unitary())
        throw MalformedUnitary("tt† + uu† != 1");
    return exact_decompose(U.matrix());
}

GateString exact_decompose(const Mat2& U)
{
    if (adjoint(U) * U != mat_identity())
        throw MalformedUnitary("matrix is not unitary");

    Mat3 R = bloch(U);
    std::string word;
    for (int k = lde(R); k > 0; --k)
    {
        bool reduced = false;
        for (const auto& syl : syllables())
        {
            Mat3 next = syl.rot_transpose * R;
            if (lde(next) == k - 1)
            {
                word += syl.word;
                R = std::move(next);
                reduced = true;
                break;
            }
        }
        if (!reduced)
            throw std::logic_error("no normal-form syllable reduces the denominator exponent");
    }

    const auto& table = clifford_table();
    const auto it = table.find(key(R));
    if (it == table.end())
        throw std::logic_error("residual rotation is not a Clifford");
    word += it->second;

    // Match the global phase exactly.
    const Mat2 M = gate_string_to_matrix(GateString(word));
    Mat2 phased = M;
    for (int m = 0; m < 8; ++m)
    {
        if (phased == U)
            return GateString(word + std::string(m, 'W'));
        for (auto& e : phased)
            e = e * DOmega::omega_pow(1);
    }
    throw MalformedUnitary("unitary is not a Clifford+T word up to a power of ω");
}

} // namespace ctb
