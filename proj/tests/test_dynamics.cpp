#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "apdyn/system.hpp"
#include "apdyn/torus.hpp"

using namespace apdyn;

namespace {

FixedAngle rand_angle(std::mt19937_64& rng) {
    return FixedAngle::from_raw((uint128(rng()) << 64) | rng());
}

TorusPoint rand_point(std::mt19937_64& rng, int dim) {
    if (dim == 1) return TorusPoint(rand_angle(rng));
    return TorusPoint(rand_angle(rng), rand_angle(rng));
}

}  // namespace

TEST_CASE("torus_dist basics") {
    CHECK(torus_dist(TorusPoint::circle(0.1), TorusPoint::circle(0.9)) ==
          doctest::Approx(0.2).epsilon(1e-15));
    CHECK(torus_dist(TorusPoint::torus2(0.25, 0.5), TorusPoint::torus2(0.25, 0.5)) == 0.0);
    CHECK(torus_dist(TorusPoint::torus2(0.0, 0.0), TorusPoint::torus2(0.5, 0.49)) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(torus_dist(TorusPoint::circle(0.1), TorusPoint::torus2(0.1, 0.2)),
                    std::invalid_argument);
}

TEST_CASE("metric axioms on random triples") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10000; ++i) {
        TorusPoint a = rand_point(rng, 2), b = rand_point(rng, 2), c = rand_point(rng, 2);
        double ab = torus_dist(a, b), ba = torus_dist(b, a);
        CHECK(ab == ba);  // symmetry is exact
        CHECK(torus_dist(a, a) == 0.0);
        CHECK(torus_dist(a, c) <= ab + torus_dist(b, c) + 1e-15);
        CHECK(ab <= 0.5);
    }
}

TEST_CASE("apply: rotation, weyl, power") {
    SystemSpec rot = SystemSpec::rotation(FixedAngle::from_double(0.25));
    CHECK(rot.apply(TorusPoint::circle(0.9))[0].to_double() ==
          doctest::Approx(0.15).epsilon(1e-15));

    SystemSpec weyl = SystemSpec::weyl_skew(FixedAngle::from_double(0.3));
    TorusPoint w = weyl.apply(TorusPoint::torus2(0.1, 0.2));
    CHECK(w[0].to_double() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(w[1].to_double() == doctest::Approx(0.3).epsilon(1e-12));

    SystemSpec p4 = SystemSpec::power_of(rot, 4);
    TorusPoint x = TorusPoint::circle(0.6);
    CHECK(p4.apply(x) == x);  // 4 * 0.25 wraps to zero exactly

    CHECK_THROWS_AS(rot.apply(TorusPoint::torus2(0.1, 0.2)), std::invalid_argument);
}

TEST_CASE("orbit_point closed forms") {
    SystemSpec weyl = SystemSpec::weyl_skew(FixedAngle::from_double(0.3));
    TorusPoint p = TorusPoint::torus2(0.1, 0.2);
    TorusPoint q = weyl.orbit_point(p, 2);  // a(2) = 1: y + 2x + alpha
    CHECK(q[0].to_double() == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(q[1].to_double() == doctest::Approx(0.7).epsilon(1e-12));

    CHECK(weyl.orbit_point(p, 0) == p);

    SystemSpec rot = SystemSpec::rotation(golden_conjugate());
    TorusPoint x = TorusPoint::circle(0.37);
    CHECK(rot.orbit_point(rot.orbit_point(x, -3), 3) == x);
}

TEST_CASE("weyl closed form equals iterated apply, bitwise") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        SystemSpec weyl = SystemSpec::weyl_skew(rand_angle(rng));
        TorusPoint p = rand_point(rng, 2);
        TorusPoint fwd = p, bwd = p;
        for (long long n = 1; n <= 2000; ++n) {
            fwd = weyl.apply(fwd);
            bwd = weyl.apply_inverse(bwd);
            CHECK(weyl.orbit_point(p, n) == fwd);
            CHECK(weyl.orbit_point(p, -n) == bwd);
        }
    }
}

TEST_CASE("group law T^{n+m} = T^n T^m, exact for closed forms") {
    std::mt19937_64 rng(29);
    SystemSpec weyl = SystemSpec::weyl_skew(rand_angle(rng));
    SystemSpec rot = SystemSpec::rotation(rand_angle(rng));
    for (int i = 0; i < 200; ++i) {
        long long n = static_cast<long long>(rng() % 100000) - 50000;
        long long m = static_cast<long long>(rng() % 100000) - 50000;
        TorusPoint p2 = rand_point(rng, 2);
        TorusPoint p1 = rand_point(rng, 1);
        CHECK(weyl.orbit_point(p2, n + m) == weyl.orbit_point(weyl.orbit_point(p2, m), n));
        CHECK(rot.orbit_point(p1, n + m) == rot.orbit_point(rot.orbit_point(p1, m), n));
    }
}

TEST_CASE("power systems: orbit at n equals base orbit at k*n") {
    std::mt19937_64 rng(31);
    SystemSpec weyl = SystemSpec::weyl_skew(rand_angle(rng));
    SystemSpec p3 = SystemSpec::power_of(weyl, 3);
    SystemSpec pneg = SystemSpec::power_of(weyl, -2);
    for (int i = 0; i < 100; ++i) {
        TorusPoint p = rand_point(rng, 2);
        long long n = static_cast<long long>(rng() % 2000) - 1000;
        CHECK(p3.orbit_point(p, n) == weyl.orbit_point(p, 3 * n));
        CHECK(pneg.orbit_point(p, n) == weyl.orbit_point(p, -2 * n));
    }
}

TEST_CASE("inverse recovery is exact for every variant") {
    std::mt19937_64 rng(37);
    CocycleParams cp = CocycleParams::defaults();
    std::vector<SystemSpec> systems = {
        SystemSpec::rotation(rand_angle(rng)),
        SystemSpec::weyl_skew(rand_angle(rng)),
        SystemSpec::cocycle_skew(cp),
        SystemSpec::power_of(SystemSpec::weyl_skew(rand_angle(rng)), 5),
    };
    for (const auto& sys : systems) {
        for (int i = 0; i < 50; ++i) {
            TorusPoint p = rand_point(rng, sys.dimension());
            CHECK(sys.apply_inverse(sys.apply(p)) == p);
            CHECK(sys.apply(sys.apply_inverse(p)) == p);
        }
    }
}

TEST_CASE("cocycle skew orbit matches iterated apply") {
    CocycleParams cp = CocycleParams::defaults();
    SystemSpec sys = SystemSpec::cocycle_skew(cp);
    TorusPoint p = TorusPoint::torus2(0.123, 0.456);
    TorusPoint q = p;
    for (int n = 1; n <= 50; ++n) {
        q = sys.apply(q);
        CHECK(sys.orbit_point(p, n) == q);
    }
    CHECK(sys.orbit_point(sys.orbit_point(p, -17), 17) == p);
}

TEST_CASE("orbit_segment") {
    SystemSpec rot = SystemSpec::rotation(FixedAngle::from_double(0.25));
    TorusPoint zero = TorusPoint::circle(0.0);
    auto seg = rot.orbit_segment(zero, 0, 4, 1);
    REQUIRE(seg.size() == 4);
    CHECK(seg[0][0].to_double() == 0.0);
    CHECK(seg[1][0].to_double() == 0.25);
    CHECK(seg[2][0].to_double() == 0.5);
    CHECK(seg[3][0].to_double() == 0.75);

    auto seg2 = rot.orbit_segment(zero, 0, 4, 2);
    REQUIRE(seg2.size() == 2);
    CHECK(seg2[0][0].to_double() == 0.0);
    CHECK(seg2[1][0].to_double() == 0.5);

    SystemSpec weyl = SystemSpec::weyl_skew(golden_conjugate());
    TorusPoint p = TorusPoint::torus2(0.1, 0.2);
    auto seg3 = weyl.orbit_segment(p, 0, 3, 1);
    TorusPoint cur = p;
    for (int i = 0; i < 3; ++i) {
        CHECK(seg3[static_cast<std::size_t>(i)] == cur);
        cur = weyl.apply(cur);
    }

    std::mt19937_64 rng(41);
    auto seg4 = weyl.orbit_segment(p, -7, 20, 3);
    long long n = -7;
    for (const auto& pt : seg4) {
        CHECK(pt == weyl.orbit_point(p, n));
        n += 3;
    }
    CHECK_THROWS_AS(rot.orbit_segment(zero, 3, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(rot.orbit_segment(zero, 0, 4, 0), std::invalid_argument);
}

TEST_CASE("system serialization round trips") {
    std::mt19937_64 rng(43);
    CocycleParams cp = CocycleParams::defaults();
    cp.lambda = 1.75;
    std::vector<SystemSpec> systems = {
        SystemSpec::rotation(rand_angle(rng)),
        SystemSpec::weyl_skew(rand_angle(rng)),
        SystemSpec::cocycle_skew(cp),
        SystemSpec::power_of(SystemSpec::rotation(rand_angle(rng)), 7),
        SystemSpec::power_of(SystemSpec::power_of(SystemSpec::weyl_skew(rand_angle(rng)), 2), -3),
    };
    for (const auto& sys : systems) {
        std::map<std::string, std::string> kv;
        sys.to_kv(kv, "system.");
        SystemSpec back = SystemSpec::from_kv(kv, "system.");
        std::map<std::string, std::string> kv2;
        back.to_kv(kv2, "system.");
        CHECK(kv == kv2);
        TorusPoint p = rand_point(rng, sys.dimension());
        CHECK(back.orbit_point(p, 123) == sys.orbit_point(p, 123));
    }
}

TEST_CASE("named angles parse") {
    CHECK(parse_angle("golden") == golden_conjugate());
    CHECK(parse_angle("1/3") == FixedAngle::from_rational(1, 3));
    CHECK(parse_angle("0.25") == FixedAngle::from_double(0.25));
    CHECK(parse_angle("hex:" + golden_conjugate().to_hex()) == golden_conjugate());
    TorusPoint p = parse_point("0.25,1/3");
    CHECK(p.dim() == 2);
    CHECK(p[1] == FixedAngle::from_rational(1, 3));
}
