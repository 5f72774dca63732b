#include <doctest.h>

#include <cmath>

#include "fnlc/channel/metrics.hpp"
#include "fnlc/channel/modulation.hpp"

using namespace fnlc;

namespace {

SymbolFrame make_clean_frame(int n, Modulation m, std::uint64_t seed) {
    const DualPolSymbols s = generate_symbols(n, m, seed);
    SymbolFrame f;
    f.rx.resize(n, 4);
    f.modulation = m;
    f.baud_gbaud = 32.0;
    SymbolFrame::from_complex(f.rx, 0, s.x);
    SymbolFrame::from_complex(f.rx, 2, s.y);
    f.tx = f.rx;
    return f;
}

}  // namespace

TEST_CASE("erfc_inv matches reference points") {
    CHECK(erfc_inv(1.0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(erfc_inv(0.5) == doctest::Approx(0.476936276204).epsilon(1e-9));
    CHECK(erfc_inv(1.5) == doctest::Approx(-0.476936276204).epsilon(1e-9));
    CHECK(erfc_inv(1e-6) == doctest::Approx(3.458910737280).epsilon(1e-9));
    CHECK(erfc_inv(2e-3) == doctest::Approx(2.185124219133).epsilon(1e-9));
    CHECK_THROWS_AS(erfc_inv(0.0), ConfigError);
    CHECK_THROWS_AS(erfc_inv(2.0), ConfigError);
}

TEST_CASE("ber to q mapping") {
    CHECK(q_from_ber_db(1e-3) == doctest::Approx(9.7998225690).epsilon(1e-8));
    CHECK(q_from_ber_db(1e-2) == doctest::Approx(7.3334931630).epsilon(1e-8));
    CHECK(q_from_ber_db(1e-4) == doctest::Approx(11.4085620696).epsilon(1e-8));
    CHECK(q_from_ber_db(0.5) == kQSentinelDb);
    CHECK(q_from_ber_db(0.7) == kQSentinelDb);
}

TEST_CASE("clean frame falls back to evm") {
    SymbolFrame f = make_clean_frame(256, Modulation::Qam16, 5);
    // Tiny perturbation keeps decisions intact but gives a finite EVM.
    f.rx.array() += 1e-6;
    const QResult r = q_factor(f);
    CHECK(r.bit_errors == 0);
    CHECK(r.evm_fallback);
    CHECK(r.q_db == doctest::Approx(-r.evm_db).epsilon(1e-12));
    CHECK(r.q_db > 100.0);
    CHECK(r.bits == 256 * 2 * 4);
}

TEST_CASE("known error count maps through gray bits") {
    SymbolFrame f = make_clean_frame(1000, Modulation::Qam16, 6);
    const Constellation c = make_constellation(Modulation::Qam16);
    const double step = 2.0 * c.level_scale;
    // Push 10 X-pol I components one level up: one gray bit each.
    int moved = 0;
    for (int k = 0; k < 1000 && moved < 10; ++k) {
        const int idx = c.slice(f.rx(k, 0));
        if (idx < 3) {
            f.rx(k, 0) += step;
            ++moved;
        }
    }
    REQUIRE(moved == 10);
    const QResult r = q_factor(f);
    CHECK(r.bit_errors == 10);
    CHECK(r.bits == 1000 * 2 * 4);
    CHECK(r.ber == doctest::Approx(10.0 / 8000.0).epsilon(1e-12));
    CHECK(!r.evm_fallback);
    CHECK(r.q_db == doctest::Approx(q_from_ber_db(r.ber)).epsilon(1e-12));
}

TEST_CASE("garbage frame hits the sentinel") {
    SymbolFrame f = make_clean_frame(400, Modulation::Qam16, 7);
    // Decorrelate rx from tx entirely: shift the reference by one symbol.
    MatX shifted(400, 4);
    shifted.topRows(399) = f.tx.bottomRows(399);
    shifted.row(399) = f.tx.row(0);
    f.rx = shifted;
    const QResult r = q_factor(f);
    CHECK(r.ber > 0.3);
    if (r.ber >= 0.5) CHECK(r.q_db == kQSentinelDb);
    CHECK(r.q_db < 3.0);
}

TEST_CASE("single polarization metric") {
    SymbolFrame f = make_clean_frame(300, Modulation::Qam64, 8);
    f.rx.array() += 1e-7;
    const QResult rx_pol = q_factor_pair(f.rx.leftCols(2), f.tx.leftCols(2),
                                         Modulation::Qam64);
    CHECK(rx_pol.bits == 300 * 6);
    CHECK(rx_pol.bit_errors == 0);
    CHECK(rx_pol.evm_fallback);
    MatX bad(10, 3);
    CHECK_THROWS_AS(q_factor_pair(bad, bad, Modulation::Qam16), ShapeError);
}

TEST_CASE("frame evm definition") {
    SymbolFrame f = make_clean_frame(100, Modulation::Qam16, 9);
    f.rx = f.tx * 1.1;
    // rx - tx = 0.1 tx, so EVM is exactly 0.1.
    CHECK(frame_evm(f) == doctest::Approx(0.1).epsilon(1e-12));
}
