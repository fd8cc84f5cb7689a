#include "apdyn/system.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace apdyn {
namespace {

long long parse_ll(const std::string& s, const char* what) {
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw std::invalid_argument(std::string("bad integer for ") + what);
    return v;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing key '" + key + "'");
    return it->second;
}

}  // namespace

SystemSpec SystemSpec::rotation(FixedAngle alpha) {
    SystemSpec s;
    s.kind_ = SystemKind::Rotation;
    s.alpha_ = alpha;
    return s;
}

SystemSpec SystemSpec::weyl_skew(FixedAngle alpha) {
    SystemSpec s;
    s.kind_ = SystemKind::WeylSkew;
    s.alpha_ = alpha;
    return s;
}

SystemSpec SystemSpec::cocycle_skew(CocycleParams params) {
    params.validate();
    SystemSpec s;
    s.kind_ = SystemKind::CocycleSkew;
    s.alpha_ = params.alpha;
    s.cocycle_ = std::move(params);
    return s;
}

SystemSpec SystemSpec::power_of(SystemSpec base, long long k) {
    if (k == 0) throw std::invalid_argument("power_of: k must be nonzero");
    SystemSpec s;
    s.kind_ = SystemKind::Power;
    s.base_ = std::make_shared<SystemSpec>(std::move(base));
    s.power_ = k;
    return s;
}

int SystemSpec::dimension() const {
    switch (kind_) {
        case SystemKind::Rotation: return 1;
        case SystemKind::WeylSkew:
        case SystemKind::CocycleSkew: return 2;
        case SystemKind::Power: return base_->dimension();
    }
    return 1;
}

void SystemSpec::check_dim(const TorusPoint& p) const {
    if (p.dim() != dimension()) throw std::invalid_argument("SystemSpec: point dimension mismatch");
}

TorusPoint SystemSpec::apply(const TorusPoint& p) const {
    check_dim(p);
    switch (kind_) {
        case SystemKind::Rotation: return TorusPoint(p[0] + alpha_);
        case SystemKind::WeylSkew: return TorusPoint(p[0] + alpha_, p[0] + p[1]);
        case SystemKind::CocycleSkew: {
            // beta is added exactly; only lambda*h goes through a double.
            FixedAngle y = p[1] + cocycle_.beta +
                           FixedAngle::from_double(cocycle_.lambda * eval_h(cocycle_, p[0]));
            return TorusPoint(p[0] + alpha_, y);
        }
        case SystemKind::Power: return base_->orbit_point(p, power_);
    }
    return p;
}

TorusPoint SystemSpec::apply_inverse(const TorusPoint& p) const {
    check_dim(p);
    switch (kind_) {
        case SystemKind::Rotation: return TorusPoint(p[0] - alpha_);
        case SystemKind::WeylSkew: return TorusPoint(p[0] - alpha_, p[1] - p[0] + alpha_);
        case SystemKind::CocycleSkew: {
            FixedAngle x0 = p[0] - alpha_;
            FixedAngle y0 = p[1] - cocycle_.beta -
                            FixedAngle::from_double(cocycle_.lambda * eval_h(cocycle_, x0));
            return TorusPoint(x0, y0);
        }
        case SystemKind::Power: return base_->orbit_point(p, -power_);
    }
    return p;
}

TorusPoint SystemSpec::orbit_point(const TorusPoint& p, long long n) const {
    check_dim(p);
    switch (kind_) {
        case SystemKind::Rotation: return TorusPoint(p[0] + int128(n) * alpha_);
        case SystemKind::WeylSkew: {
            auto a = TriangularCoeff::of(n);
            FixedAngle y = p[1] + int128(n) * p[0] + a.a_of_n * alpha_;
            return TorusPoint(p[0] + int128(n) * alpha_, y);
        }
        case SystemKind::CocycleSkew: {
            TorusPoint q = p;
            if (n >= 0)
                for (long long i = 0; i < n; ++i) q = apply(q);
            else
                for (long long i = 0; i < -n; ++i) q = apply_inverse(q);
            return q;
        }
        case SystemKind::Power: {
            int128 total = int128(power_) * n;
            constexpr int128 kBound = int128(1) << 62;
            if (total > kBound || total < -kBound)
                throw std::overflow_error("orbit_point: k*n exceeds 2^62");
            return base_->orbit_point(p, static_cast<long long>(total));
        }
    }
    return p;
}

std::vector<TorusPoint> SystemSpec::orbit_segment(const TorusPoint& p, long long n0, long long n1,
                                                  long long stride) const {
    if (n0 > n1) throw std::invalid_argument("orbit_segment: n0 > n1");
    if (stride < 1) throw std::invalid_argument("orbit_segment: stride must be >= 1");
    std::vector<TorusPoint> out;
    out.reserve(static_cast<std::size_t>((n1 - n0 + stride - 1) / stride));
    for (long long n = n0; n < n1; n += stride) out.push_back(orbit_point(p, n));
    return out;
}

void SystemSpec::to_kv(std::map<std::string, std::string>& out, const std::string& prefix) const {
    switch (kind_) {
        case SystemKind::Rotation:
            out[prefix + "variant"] = "rotation";
            out[prefix + "alpha"] = "hex:" + alpha_.to_hex();
            break;
        case SystemKind::WeylSkew:
            out[prefix + "variant"] = "weyl";
            out[prefix + "alpha"] = "hex:" + alpha_.to_hex();
            break;
        case SystemKind::CocycleSkew: {
            out[prefix + "variant"] = "cocycle";
            out[prefix + "alpha"] = "hex:" + cocycle_.alpha.to_hex();
            out[prefix + "beta"] = "hex:" + cocycle_.beta.to_hex();
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", cocycle_.lambda);
            out[prefix + "lambda"] = buf;
            std::string freqs;
            for (std::size_t i = 0; i < cocycle_.freqs.size(); ++i) {
                if (i) freqs += ',';
                freqs += std::to_string(cocycle_.freqs[i]);
            }
            out[prefix + "freqs"] = freqs;
            break;
        }
        case SystemKind::Power:
            out[prefix + "variant"] = "power";
            out[prefix + "k"] = std::to_string(power_);
            base_->to_kv(out, prefix + "base.");
            break;
    }
}

SystemSpec SystemSpec::from_kv(const std::map<std::string, std::string>& kv,
                               const std::string& prefix) {
    const std::string& variant = require(kv, prefix + "variant");
    if (variant == "rotation") return rotation(parse_angle(require(kv, prefix + "alpha")));
    if (variant == "weyl") return weyl_skew(parse_angle(require(kv, prefix + "alpha")));
    if (variant == "cocycle") {
        CocycleParams p;
        p.alpha = parse_angle(require(kv, prefix + "alpha"));
        auto beta_it = kv.find(prefix + "beta");
        p.beta = beta_it == kv.end() ? sqrt2_minus_one() : parse_angle(beta_it->second);
        auto lam_it = kv.find(prefix + "lambda");
        p.lambda = lam_it == kv.end() ? 1.0 : std::strtod(lam_it->second.c_str(), nullptr);
        auto freq_it = kv.find(prefix + "freqs");
        if (freq_it == kv.end()) {
            p.freqs = default_frequencies(3);
        } else {
            std::string s = freq_it->second;
            std::size_t pos = 0;
            while (pos < s.size()) {
                std::size_t comma = s.find(',', pos);
                if (comma == std::string::npos) comma = s.size();
                p.freqs.push_back(parse_ll(s.substr(pos, comma - pos), "freqs"));
                pos = comma + 1;
            }
        }
        return cocycle_skew(std::move(p));
    }
    if (variant == "power") {
        long long k = parse_ll(require(kv, prefix + "k"), "power k");
        return power_of(from_kv(kv, prefix + "base."), k);
    }
    throw std::invalid_argument("unknown system variant '" + variant + "'");
}

std::string SystemSpec::describe() const {
    char buf[64];
    switch (kind_) {
        case SystemKind::Rotation:
            std::snprintf(buf, sizeof buf, "rotation(alpha=%.12g)", alpha_.to_double());
            return buf;
        case SystemKind::WeylSkew:
            std::snprintf(buf, sizeof buf, "weyl(alpha=%.12g)", alpha_.to_double());
            return buf;
        case SystemKind::CocycleSkew:
            std::snprintf(buf, sizeof buf, "cocycle(alpha=%.12g, lambda=%.6g, K=%d)",
                          alpha_.to_double(), cocycle_.lambda, cocycle_.order());
            return buf;
        case SystemKind::Power:
            return "power(" + base_->describe() + ", k=" + std::to_string(power_) + ")";
    }
    return "?";
}

FixedAngle parse_angle(const std::string& text) {
    if (text == "golden") return golden_conjugate();
    if (text == "sqrt2m1") return sqrt2_minus_one();
    if (text == "liouville") return liouville_alpha();
    if (text.rfind("hex:", 0) == 0) return FixedAngle::from_hex(text.substr(4));
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        long long p = parse_ll(text.substr(0, slash), "rational numerator");
        long long q = parse_ll(text.substr(slash + 1), "rational denominator");
        return FixedAngle::from_rational(p, q);
    }
    return FixedAngle::from_decimal(text);
}

TorusPoint parse_point(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) return TorusPoint(parse_angle(text));
    return TorusPoint(parse_angle(text.substr(0, comma)), parse_angle(text.substr(comma + 1)));
}

}  // namespace apdyn
