#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "apdyn/cocycle.hpp"
#include "apdyn/fixed_angle.hpp"
#include "apdyn/torus.hpp"

namespace apdyn {

enum class SystemKind {
    Rotation,     // T(x)   = x + alpha                     on the circle
    WeylSkew,     // T(x,y) = (x + alpha, x + y)            on the 2-torus
    CocycleSkew,  // T(x,y) = (x + alpha, y + u(x))         on the 2-torus
    Power,        // T = base^k
};

/// An invertible torus transformation. All variants have closed-form
/// inverses; Rotation and WeylSkew also have closed-form orbits which agree
/// bit for bit with iterated application.
class SystemSpec {
public:
    static SystemSpec rotation(FixedAngle alpha);
    static SystemSpec weyl_skew(FixedAngle alpha);
    static SystemSpec cocycle_skew(CocycleParams params);
    static SystemSpec power_of(SystemSpec base, long long k);

    SystemKind kind() const { return kind_; }
    int dimension() const;
    FixedAngle alpha() const { return alpha_; }
    const CocycleParams& cocycle() const { return cocycle_; }
    long long power() const { return power_; }
    const SystemSpec& base() const { return *base_; }

    TorusPoint apply(const TorusPoint& p) const;
    TorusPoint apply_inverse(const TorusPoint& p) const;

    /// T^n(p). Rotation and WeylSkew use the exact closed form
    /// (x + n alpha) and (x + n alpha, y + n x + a(n) alpha) with
    /// a(n) = n(n-1)/2; CocycleSkew iterates. |n| <= 2^62.
    TorusPoint orbit_point(const TorusPoint& p, long long n) const;

    /// [T^n(p) for n = n0, n0+stride, ..., < n1]. Requires n0 <= n1,
    /// stride >= 1.
    std::vector<TorusPoint> orbit_segment(const TorusPoint& p, long long n0, long long n1,
                                          long long stride) const;

    /// Flat key=value form ("variant", "alpha", ... with an optional key
    /// prefix); angles are serialized as 32-digit hex. Used by the CLI
    /// config format.
    void to_kv(std::map<std::string, std::string>& out, const std::string& prefix = "") const;
    static SystemSpec from_kv(const std::map<std::string, std::string>& kv,
                              const std::string& prefix = "");

    /// One-line human readable description.
    std::string describe() const;

private:
    SystemSpec() = default;
    void check_dim(const TorusPoint& p) const;

    SystemKind kind_ = SystemKind::Rotation;
    FixedAngle alpha_;
    CocycleParams cocycle_;
    std::shared_ptr<const SystemSpec> base_;
    long long power_ = 1;
};

/// Named angle syntax used in configs: "golden", "sqrt2m1", "liouville",
/// "hex:<32 digits>", "p/q", or a decimal fraction.
FixedAngle parse_angle(const std::string& text);

/// Point syntax: comma-separated angles, each in parse_angle form.
TorusPoint parse_point(const std::string& text);

}  // namespace apdyn
