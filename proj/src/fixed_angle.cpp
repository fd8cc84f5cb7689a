#include "apdyn/fixed_angle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace apdyn {

FixedAngle FixedAngle::from_double(double turns) {
    if (!std::isfinite(turns)) throw std::invalid_argument("FixedAngle: non-finite value");
    double f = turns - std::floor(turns);
    if (f >= 1.0) f = 0.0;  // can happen for tiny negative inputs
    if (f == 0.0) return FixedAngle();
    int exp = 0;
    double mant = std::frexp(f, &exp);  // f = mant * 2^exp, mant in [0.5, 1)
    auto m = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    int shift = 128 - 53 + exp;  // f * 2^128 = m * 2^shift
    if (shift >= 0) return from_raw(uint128(m) << shift);
    if (shift <= -64) return FixedAngle();
    return from_raw(uint128(m >> -shift));
}

FixedAngle FixedAngle::from_rational(int128 num, int128 den) {
    if (den <= 0) throw std::invalid_argument("FixedAngle: denominator must be positive");
    if (den >= (int128(1) << 126)) throw std::invalid_argument("FixedAngle: denominator too large");
    int128 r = num % den;
    if (r < 0) r += den;
    uint128 rem = static_cast<uint128>(r);
    uint128 q = static_cast<uint128>(den);
    uint128 raw = 0;
    for (int i = 0; i < 128; ++i) {
        rem <<= 1;
        raw <<= 1;
        if (rem >= q) {
            rem -= q;
            raw |= 1;
        }
    }
    return from_raw(raw);
}

FixedAngle FixedAngle::from_decimal(std::string_view text) {
    std::string_view s = text;
    if (!s.empty() && (s[0] == '+')) s.remove_prefix(1);
    std::size_t dot = s.find('.');
    std::string_view intpart = dot == std::string_view::npos ? s : s.substr(0, dot);
    std::string_view fracpart = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    for (char c : intpart)
        if (c < '0' || c > '9') throw std::invalid_argument("FixedAngle: bad decimal '" + std::string(text) + "'");
    std::vector<int> digits;
    digits.reserve(fracpart.size());
    for (char c : fracpart) {
        if (c < '0' || c > '9') throw std::invalid_argument("FixedAngle: bad decimal '" + std::string(text) + "'");
        digits.push_back(c - '0');
    }
    // Extract 128 bits by repeated doubling of the decimal fraction.
    uint128 raw = 0;
    for (int i = 0; i < 128; ++i) {
        int carry = 0;
        for (int j = static_cast<int>(digits.size()) - 1; j >= 0; --j) {
            int v = digits[j] * 2 + carry;
            digits[j] = v % 10;
            carry = v / 10;
        }
        raw = (raw << 1) | static_cast<unsigned>(carry);
    }
    return from_raw(raw);
}

FixedAngle FixedAngle::from_hex(std::string_view hex32) {
    std::string_view s = hex32;
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
    if (s.empty() || s.size() > 32) throw std::invalid_argument("FixedAngle: bad hex literal");
    uint128 raw = 0;
    for (char c : s) {
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw std::invalid_argument("FixedAngle: bad hex digit");
        raw = (raw << 4) | static_cast<unsigned>(v);
    }
    // Short literals are left-aligned only if exactly 32 digits were given;
    // require the full width to avoid silent misreads.
    if (s.size() != 32) throw std::invalid_argument("FixedAngle: hex literal must have 32 digits");
    return from_raw(raw);
}

std::string FixedAngle::to_hex() const {
    static const char* kDigits = "0123456789abcdef";
    std::string out(32, '0');
    uint128 v = raw_;
    for (int i = 31; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[static_cast<unsigned>(v & 0xf)];
        v >>= 4;
    }
    return out;
}

double FixedAngle::to_double() const {
    auto hi = static_cast<std::uint64_t>(raw_ >> 64);
    auto lo = static_cast<std::uint64_t>(raw_);
    return static_cast<double>(hi) * 0x1p-64 + static_cast<double>(lo) * 0x1p-128;
}

long double FixedAngle::to_long_double() const {
    auto hi = static_cast<std::uint64_t>(raw_ >> 64);
    auto lo = static_cast<std::uint64_t>(raw_);
    return static_cast<long double>(hi) * 0x1p-64L + static_cast<long double>(lo) * 0x1p-128L;
}

TriangularCoeff TriangularCoeff::of(long long n) {
    constexpr long long kBound = 1LL << 62;
    if (n > kBound || n < -kBound)
        throw std::overflow_error("TriangularCoeff: |n| exceeds 2^62, n(n-1)/2 would overflow 127 bits");
    int128 nn = n;
    return TriangularCoeff{n, nn * (nn - 1) / 2};
}

FixedAngle golden_conjugate() {
    static const FixedAngle value = [] {
        // Consecutive Fibonacci numbers just below 2^126; the convergent
        // F(k)/F(k+1) approximates (sqrt(5)-1)/2 to within 1/F(k+1)^2.
        int128 a = 1, b = 1;
        const int128 limit = int128(1) << 126;
        while (b < limit - a) {
            int128 next = a + b;
            a = b;
            b = next;
        }
        return FixedAngle::from_rational(a, b);
    }();
    return value;
}

FixedAngle sqrt2_minus_one() {
    static const FixedAngle value = [] {
        // Pell convergents p/q -> sqrt(2); (p-q)/q -> sqrt(2)-1.
        int128 p0 = 1, q0 = 1, p1 = 3, q1 = 2;
        const int128 limit = int128(1) << 125;
        while (q1 < limit) {
            int128 p2 = 2 * p1 + p0;
            int128 q2 = 2 * q1 + q0;
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
        }
        return FixedAngle::from_rational(p1 - q1, q1);
    }();
    return value;
}

}  // namespace apdyn
