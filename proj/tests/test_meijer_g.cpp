#include <doctest.h>

#include <cmath>

#include "thermorate/meijer_g.hpp"

using namespace thermorate;

namespace {

GSpec g_lower(std::vector<double> b) {
    GSpec s;
    s.m = s.q = int(b.size());
    s.b = std::move(b);
    return s;
}

GSpec g313(double a1, std::vector<double> b) {
    GSpec s;
    s.m = s.q = 3;
    s.p = 1;
    s.a = {a1};
    s.b = std::move(b);
    return s;
}

}  // namespace

TEST_CASE("pole enumeration: three separated ladders") {
    auto poles = enumerate_poles(g_lower({0.0, 0.5, 1.3}), 3);
    REQUIRE(poles.size() == 8);
    for (const auto& p : poles) CHECK(p.order == 1);
    CHECK(poles.front().location == doctest::Approx(0.0));
    CHECK(poles.back().location == doctest::Approx(-2.5));
    for (std::size_t i = 1; i < poles.size(); ++i)
        CHECK(poles[i].location < poles[i - 1].location);
}

TEST_CASE("pole enumeration: colliding ladders give order 2") {
    auto poles = enumerate_poles(g_lower({0.0, 0.5, 2.0}), 3);
    REQUIRE(poles.size() == 6);
    int order2 = 0;
    for (const auto& p : poles) {
        if (p.order == 2) {
            ++order2;
            CHECK(p.location == doctest::Approx(-2.0));
            CHECK(p.sources.size() == 2);
        }
    }
    CHECK(order2 == 1);
}

TEST_CASE("pole enumeration: single ladder") {
    auto poles = enumerate_poles(g_lower({0.0}), 2);
    REQUIRE(poles.size() == 2);
    CHECK(poles[0].location == doctest::Approx(0.0));
    CHECK(poles[1].location == doctest::Approx(-1.0));
}

TEST_CASE("order-3 collisions are rejected") {
    CHECK_THROWS_AS(enumerate_poles(g_lower({0.0, 0.0, 0.0}), 2),
                    MultiplicityError);
    CHECK_THROWS_AS(g_series(g_lower({0.0, 1.0, 2.0}), 1.0, 8),
                    MultiplicityError);
}

TEST_CASE("g_series: single ladder is the exponential") {
    auto v = g_series(g_lower({0.0}), 0.7, 40);
    CHECK(std::abs(v.value - std::exp(-0.7)) < 1e-13);
    CHECK(std::abs(v.value - 0.49658530379140951) < 1e-10);
}

TEST_CASE("g_series: G(3,0;0,3) against the defining-integral value") {
    // sqrt(pi) * J1(1, 0.3) computed by independent high-precision quadrature
    auto v = g_series(g_lower({0.0, 0.5, 1.3}), 0.25, 60);
    CHECK(std::abs(v.value - 0.55502620547529242713) < 1e-12);
}

TEST_CASE("g_series: all-double-pole spec matches frozen 2*K0(2)") {
    auto v = g_series(g_lower({0.0, 0.0}), 1.0, 60);
    CHECK(std::abs(v.value - 0.22778774549906687131) < 1e-12);
    auto c = g_contour(g_lower({0.0, 0.0}), 1.0);
    CHECK(std::abs(v.value - c.value) < 1e-9);
}

TEST_CASE("g_contour: exponential reduction") {
    auto v = g_contour(g_lower({0.0}), 1.0);
    CHECK(std::abs(v.value - std::exp(-1.0)) < 1e-10);
}

TEST_CASE("g_contour vs g_series cross-method agreement") {
    auto s = g_series(g_lower({0.0, 0.5, 1.3}), 0.25, 60);
    auto c = g_contour(g_lower({0.0, 0.5, 1.3}), 0.25);
    CHECK(std::abs(s.value - c.value) < 1e-9);
    CHECK(std::abs(s.value - c.value) <= 10.0 * (s.abs_err + c.abs_err) + 1e-13);
}

TEST_CASE("G(3,0;1,3) with an upper parameter: series and contour") {
    // frozen: sqrt(pi) * int_0^1 t^{-1/2} exp(-sqrt(8)/sqrt(t)) dt
    const double expected = 0.046596959929350618509;
    auto spec = g313(1.5, {0.5, 0.0, 0.5});
    auto s = g_series(spec, 2.0, 60);
    CHECK(std::abs(s.value - expected) < 1e-11);
    auto c = g_contour(spec, 2.0);
    CHECK(std::abs(c.value - expected) < 1e-9);
}

TEST_CASE("method agreement across the supported class") {
    std::vector<GSpec> specs = {
        g_lower({0.0}),
        g_lower({0.0, 0.5}),
        g_lower({0.0, 0.5, 1.3}),
        g_lower({0.0, 0.5, 2.0}),
        g313(2.3, {1.3, 0.0, 0.5}),
    };
    for (const auto& spec : specs) {
        for (double z : {0.1, 1.0, 10.0}) {
            auto s = g_series(spec, z, 80);
            auto c = g_contour(spec, z);
            CHECK(std::abs(s.value - c.value) <=
                  10.0 * (s.abs_err + c.abs_err) + 1e-14);
        }
    }
}

TEST_CASE("double-pole branch is the limit of the simple-pole branch") {
    // b3 = 1 + nu with nu -> 1: ladders of 0 and 1+nu merge
    auto exact = g_series(g_lower({0.0, 0.5, 2.0}), 0.5, 60);
    double prev = 1e300;
    for (double nu : {0.9, 0.99, 0.999}) {
        auto v = g_series(g_lower({0.0, 0.5, 1.0 + nu}), 0.5, 60);
        double dev = std::abs(v.value - exact.value);
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 2e-3);
}

TEST_CASE("depth stability") {
    for (double z : {0.1, 1.0, 10.0}) {
        auto lo = g_series(g_lower({0.0, 0.5, 1.3}), z, 24);
        auto hi = g_series(g_lower({0.0, 0.5, 1.3}), z, 26);
        CHECK(std::abs(hi.value - lo.value) <= lo.abs_err + 1e-15);
    }
}

TEST_CASE("argument scaling sanity: exp(z) * G(1,0;0,1)[z] == 1") {
    for (double z = 0.25; z < 5.0; z += 0.5) {
        auto v = g_series(g_lower({0.0}), z, 80);
        CHECK(std::abs(std::exp(z) * v.value - 1.0) < 1e-12);
    }
}

TEST_CASE("h_to_g reproduces the non-resonant reduction") {
    // Gamma(2s) Gamma(1+nu+s): prefactor pi^{-1/2}/2, params {0, 1/2, 1+nu},
    // argument z/4 (as a function of the H argument z)
    double nu = 0.3;
    HSpec h;
    h.lower = {{0.0, Rational(2, 1)}, {1.0 + nu, Rational(1, 1)}};
    auto red = h_to_g(h);
    CHECK(red.arg_power == 1);
    REQUIRE(red.gspec.b.size() == 3);
    CHECK(red.gspec.b[0] == doctest::Approx(0.0));
    CHECK(red.gspec.b[1] == doctest::Approx(0.5));
    CHECK(red.gspec.b[2] == doctest::Approx(1.0 + nu));
    CHECK(red.gspec.p == 0);
    // 2 * prefactor = pi^{-1/2}
    CHECK(2.0 * red.prefactor() ==
          doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(red.map_argument(2.0) == doctest::Approx(0.5));  // z/4
}

TEST_CASE("h_to_g identity when all coefficients are one") {
    HSpec h;
    h.lower = {{0.7, Rational(1, 1)}};
    auto red = h_to_g(h);
    CHECK(red.prefactor() == doctest::Approx(1.0));
    CHECK(red.arg_power == 1);
    CHECK(red.log_arg_scale == doctest::Approx(0.0));
    REQUIRE(red.gspec.b.size() == 1);
    CHECK(red.gspec.b[0] == doctest::Approx(0.7));
}

TEST_CASE("h_to_g ladder layout for m = 3, n = 2") {
    double rho = 0.1;
    HSpec h;
    h.lower = {{0.0, Rational(3, 1)}, {1.0 - 2 * rho, Rational(2, 1)}};
    auto red = h_to_g(h);
    REQUIRE(red.gspec.b.size() == 5);
    CHECK(red.gspec.b[0] == doctest::Approx(0.0));
    CHECK(red.gspec.b[1] == doctest::Approx(1.0 / 3));
    CHECK(red.gspec.b[2] == doctest::Approx(2.0 / 3));
    CHECK(red.gspec.b[3] == doctest::Approx((1.0 - 0.2) / 2));
    CHECK(red.gspec.b[4] == doctest::Approx((2.0 - 0.2) / 2));
    // argument maps z_H -> z_H / (3^3 2^2)
    CHECK(red.map_argument(108.0) == doctest::Approx(1.0));
}

TEST_CASE("rational reconstruction") {
    auto r = Rational::from_double(2.0 / 3.0);
    CHECK(r.num == 2);
    CHECK(r.den == 3);
    auto half = Rational::from_double(0.5);
    CHECK(half.num == 1);
    CHECK(half.den == 2);
    CHECK_THROWS_AS(Rational::from_double(0.448798950512827), std::domain_error);
}
