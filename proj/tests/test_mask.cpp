#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "fnlc/model/mask.hpp"

using namespace fnlc;

TEST_CASE("pair selection on a short span") {
    // l = 8, rho = 0.4: reach is 0.4*ceil(8/(2|m|)), capped at ceil(l/2).
    // |m| = 1 keeps |n| <= 1, larger |m| keeps only n = 0; m = 0 never.
    for (int n = -4; n <= 4; ++n) CHECK(!pair_selected(8, 0.4, 0, n));
    CHECK(pair_selected(8, 0.4, 1, 1));
    CHECK(pair_selected(8, 0.4, -1, -1));
    CHECK(!pair_selected(8, 0.4, 1, 2));
    CHECK(pair_selected(8, 0.4, 4, 0));
    CHECK(!pair_selected(8, 0.4, 4, 1));
    CHECK(!pair_selected(8, 0.4, 5, 0));  // out of span
}

TEST_CASE("tiny individual mask worked by hand") {
    // l = 2: the bound saturates at 1 for any rho >= 1, so both non-zero
    // query rows keep all three columns.
    const AttentionMask m = individual_mask(2, 2.6);
    REQUIRE(m.size() == 3);
    CHECK(m.unmasked == 6);
    CHECK(m.bias(1, 0) == -std::numeric_limits<double>::infinity());
    CHECK(m.bias(1, 1) == -std::numeric_limits<double>::infinity());
    CHECK(m.bias(0, 0) == 0.0);
    CHECK(m.bias(2, 2) == 0.0);
    CHECK(m.allowed[0].size() == 3);
    CHECK(m.allowed[1].empty());
    CHECK(m.allowed[2].size() == 3);
}

TEST_CASE("tiny block mask worked by hand") {
    const AttentionMask m = block_mask(2, 2.6, 2);
    REQUIRE(m.size() == 4);
    CHECK(m.unmasked == 12);
    // The two middle rows belong to both shifted copies' blanked centre, yet
    // each is the other copy's live query row, so they stay populated.
    for (int r = 0; r < 4; ++r) CHECK(!m.allowed[r].empty());
}

TEST_CASE("block of one equals the individual mask") {
    const AttentionMask a = individual_mask(16, 1.3);
    const AttentionMask b = block_mask(16, 1.3, 1);
    REQUIRE(a.size() == b.size());
    CHECK(a.unmasked == b.unmasked);
    CHECK((a.bias.array() == b.bias.array()).all());
}

TEST_CASE("single-target mask densities") {
    struct Case {
        int l;
        double rho;
        std::int64_t kept;
    };
    // Counts pinned from an independent enumeration of the selection rule.
    const Case cases[] = {
        {64, 2.6, 1284},
        {128, 2.6, 3056},
        {128, 1.3, 1656},
        {128, 0.4, 520},
    };
    for (const auto& c : cases) {
        const AttentionMask m = individual_mask(c.l, c.rho);
        CHECK(m.unmasked == c.kept);
        CHECK(m.total() == static_cast<std::int64_t>(c.l + 1) * (c.l + 1));
    }
    CHECK(individual_mask(64, 2.6).unmasked_ratio() ==
          doctest::Approx(0.303905).epsilon(1e-4));
    CHECK(individual_mask(128, 2.6).unmasked_ratio() ==
          doctest::Approx(0.183643).epsilon(1e-4));
}

TEST_CASE("block mask densities") {
    const AttentionMask a = block_mask(128, 2.6, 128);
    CHECK(a.size() == 256);
    CHECK(a.unmasked == 23410);
    const AttentionMask b = block_mask(128, 0.4, 128);
    CHECK(b.unmasked == 17418);
}

TEST_CASE("block mask equals the union of shifted singles") {
    const int l = 12, b = 7;
    const double rho = 1.3;
    const AttentionMask blk = block_mask(l, rho, b);
    const int half = l / 2;
    for (int r = 0; r < l + b; ++r) {
        for (int c = 0; c < l + b; ++c) {
            bool want = false;
            for (int i = 0; i < b && !want; ++i)
                want = pair_selected(l, rho, r - i - half, c - i - half);
            CHECK((blk.bias(r, c) == 0.0) == want);
        }
    }
}

TEST_CASE("mask exports") {
    const AttentionMask m = individual_mask(8, 0.4);
    CHECK(m.unmasked == 12);
    const std::string pgm = "/tmp/fnlc_mask.pgm";
    const std::string rows = "/tmp/fnlc_mask_rows.txt";
    mask_to_pgm(m, pgm);
    mask_to_rowlist(m, rows);

    std::ifstream p(pgm, std::ios::binary);
    std::string magic, dims;
    std::getline(p, magic);
    std::getline(p, dims);
    CHECK(magic == "P5");
    CHECK(dims == "9 9");
    std::getline(p, dims);  // maxval
    std::vector<unsigned char> px(81);
    p.read(reinterpret_cast<char*>(px.data()), 81);
    REQUIRE(p.gcount() == 81);
    int white = 0;
    for (unsigned char v : px) white += v == 255;
    CHECK(white == 12);

    std::ifstream r(rows);
    std::string line;
    int nonempty = 0, lines = 0;
    while (std::getline(r, line)) {
        ++lines;
        if (!line.empty()) ++nonempty;
    }
    CHECK(lines == 9);
    // Row m = -1 keeps n in {-1, 0, 1}: columns 3 4 5 of row 3.
    std::ifstream r2(rows);
    for (int k = 0; k <= 3; ++k) std::getline(r2, line);
    CHECK(line == "3 4 5");
    std::remove(pgm.c_str());
    std::remove(rows.c_str());
}

TEST_CASE("mask argument validation") {
    CHECK_THROWS_AS(individual_mask(3, 1.0), ConfigError);
    CHECK_THROWS_AS(individual_mask(0, 1.0), ConfigError);
    CHECK_THROWS_AS(block_mask(8, 1.0, 0), ConfigError);
}
