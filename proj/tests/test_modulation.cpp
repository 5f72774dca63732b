#include <doctest.h>

#include <cmath>

#include "fnlc/channel/modulation.hpp"

using namespace fnlc;

TEST_CASE("constellations have unit average energy") {
    for (Modulation m : {Modulation::Qam16, Modulation::Qam64}) {
        const Constellation c = make_constellation(m);
        double e = 0.0;
        for (int i = 0; i < static_cast<int>(c.levels.size()); ++i)
            for (int q = 0; q < static_cast<int>(c.levels.size()); ++q)
                e += std::norm(c.point(i, q));
        e /= c.order();
        CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("constellation level grids") {
    const Constellation c16 = make_constellation(Modulation::Qam16);
    CHECK(c16.bits_per_axis == 2);
    CHECK(c16.order() == 16);
    CHECK(c16.level_scale == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-15));
    CHECK(c16.levels[0] == doctest::Approx(-3.0 / std::sqrt(10.0)));
    CHECK(c16.levels[3] == doctest::Approx(3.0 / std::sqrt(10.0)));

    const Constellation c64 = make_constellation(Modulation::Qam64);
    CHECK(c64.bits_per_axis == 3);
    CHECK(c64.order() == 64);
    CHECK(c64.level_scale == doctest::Approx(1.0 / std::sqrt(42.0)).epsilon(1e-15));
    CHECK(c64.levels[0] == doctest::Approx(-7.0 / std::sqrt(42.0)));
    CHECK(c64.levels[7] == doctest::Approx(7.0 / std::sqrt(42.0)));
}

TEST_CASE("gray labels differ by one bit between neighbours") {
    for (Modulation m : {Modulation::Qam16, Modulation::Qam64}) {
        const Constellation c = make_constellation(m);
        for (int i = 0; i + 1 < static_cast<int>(c.levels.size()); ++i)
            CHECK(c.bit_diff(i, i + 1) == 1);
        CHECK(c.bit_diff(2, 2) == 0);
    }
}

TEST_CASE("slicer recovers the nearest level") {
    const Constellation c = make_constellation(Modulation::Qam64);
    const double step = 2.0 * c.level_scale;
    for (int i = 0; i < 8; ++i) {
        CHECK(c.slice(c.levels[i]) == i);
        CHECK(c.slice(c.levels[i] + 0.49 * step) == i);
        CHECK(c.slice(c.levels[i] - 0.49 * step) == i);
    }
    CHECK(c.slice(-100.0) == 0);
    CHECK(c.slice(100.0) == 7);
}

TEST_CASE("symbol generation is seeded and on-grid") {
    const int n = 512;
    const DualPolSymbols a = generate_symbols(n, Modulation::Qam16, 77);
    const DualPolSymbols b = generate_symbols(n, Modulation::Qam16, 77);
    const DualPolSymbols c = generate_symbols(n, Modulation::Qam16, 78);
    REQUIRE(a.x.size() == n);
    REQUIRE(a.y.size() == n);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.x != c.x);

    const Constellation cst = make_constellation(Modulation::Qam16);
    bool xy_differ = false;
    for (int k = 0; k < n; ++k) {
        const int ii = cst.slice(a.x[k].real());
        const int qi = cst.slice(a.x[k].imag());
        CHECK(a.x[k] == cst.point(ii, qi));
        if (a.x[k] != a.y[k]) xy_differ = true;
    }
    CHECK(xy_differ);

    // Draw order is x-I, x-Q, y-I, y-Q per symbol.
    Pcg64 rng(77, 0x5d4a);
    const int xi = static_cast<int>(rng.bounded(4));
    const int xq = static_cast<int>(rng.bounded(4));
    const int yi = static_cast<int>(rng.bounded(4));
    const int yq = static_cast<int>(rng.bounded(4));
    CHECK(a.x[0] == cst.point(xi, xq));
    CHECK(a.y[0] == cst.point(yi, yq));
}

TEST_CASE("modulation names round-trip") {
    CHECK(modulation_from_string("16qam") == Modulation::Qam16);
    CHECK(modulation_from_string("64qam") == Modulation::Qam64);
    CHECK(std::string(to_string(Modulation::Qam64)) == "64qam");
    CHECK_THROWS_AS(modulation_from_string("8qam"), ConfigError);
}
