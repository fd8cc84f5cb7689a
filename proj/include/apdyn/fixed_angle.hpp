#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace apdyn {

using uint128 = unsigned __int128;
using int128 = __int128;

/// Angle on the circle, stored as a 128-bit binary fraction of one turn.
///
/// The value represented is raw/2^128, always in [0,1). Addition,
/// subtraction and multiplication by an integer wrap mod 2^128, i.e. they
/// are computed mod 1 with no rounding at all: frac(n*a) is exact to one
/// unit in the last place for any 128-bit n. This is what makes very long
/// orbit computations trustworthy where doubles would have drifted.
class FixedAngle {
public:
    constexpr FixedAngle() = default;

    static constexpr FixedAngle from_raw(uint128 raw) {
        FixedAngle a;
        a.raw_ = raw;
        return a;
    }

    /// Fractional part of a double, embedded exactly (doubles have at most
    /// 53 significant bits, all of which fit).
    static FixedAngle from_double(double turns);

    /// floor(frac(num/den) * 2^128), exact. Requires 0 < den < 2^127.
    static FixedAngle from_rational(int128 num, int128 den);

    /// Parse a plain decimal fraction such as "0.110001", truncated to
    /// 128 bits. Accepts an optional leading "0" and up to ~45 digits
    /// (anything beyond is below resolution anyway).
    static FixedAngle from_decimal(std::string_view text);

    /// 32 lowercase hex digits, most significant first.
    static FixedAngle from_hex(std::string_view hex32);
    std::string to_hex() const;

    constexpr uint128 raw() const { return raw_; }
    double to_double() const;
    long double to_long_double() const;

    friend constexpr FixedAngle operator+(FixedAngle a, FixedAngle b) {
        return from_raw(a.raw_ + b.raw_);
    }
    friend constexpr FixedAngle operator-(FixedAngle a, FixedAngle b) {
        return from_raw(a.raw_ - b.raw_);
    }
    constexpr FixedAngle operator-() const { return from_raw(uint128(0) - raw_); }

    FixedAngle& operator+=(FixedAngle o) {
        raw_ += o.raw_;
        return *this;
    }
    FixedAngle& operator-=(FixedAngle o) {
        raw_ -= o.raw_;
        return *this;
    }

    /// n*a mod 1, exact for any signed 128-bit n (two's complement
    /// multiplication is multiplication mod 2^128).
    friend constexpr FixedAngle operator*(int128 n, FixedAngle a) {
        return from_raw(static_cast<uint128>(n) * a.raw_);
    }

    friend constexpr bool operator==(FixedAngle a, FixedAngle b) { return a.raw_ == b.raw_; }
    friend constexpr std::strong_ordering operator<=>(FixedAngle a, FixedAngle b) {
        if (a.raw_ < b.raw_) return std::strong_ordering::less;
        if (a.raw_ > b.raw_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    uint128 raw_ = 0;
};

/// Distance to b along the circle: min(|a-b|, 1-|a-b|), exact, <= 1/2.
constexpr FixedAngle circle_gap(FixedAngle a, FixedAngle b) {
    uint128 d = (a - b).raw();
    uint128 nd = uint128(0) - d;
    return FixedAngle::from_raw(d < nd ? d : nd);
}

inline double circle_dist(FixedAngle a, FixedAngle b) { return circle_gap(a, b).to_double(); }

/// n(n-1)/2 as an exact signed 128-bit integer.
struct TriangularCoeff {
    long long n = 0;
    int128 a_of_n = 0;

    /// Throws std::overflow_error for |n| > 2^62 (the product n(n-1) must
    /// stay below 2^126).
    static TriangularCoeff of(long long n);
};

/// (sqrt(5)-1)/2, the default angle for generic experiments. Computed from
/// a ratio of consecutive Fibonacci numbers large enough that the error is
/// below one ulp of the representation.
FixedAngle golden_conjugate();

/// sqrt(2)-1, from Pell-number convergents.
FixedAngle sqrt2_minus_one();

}  // namespace apdyn
