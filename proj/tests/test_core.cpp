#include <catch2/catch_amalgamated.hpp>

#include "tcm/core.hpp"

using namespace tcm;

TEST_CASE("block_for clamps the photon range and sizes the block") {
    // r2 = 1, c2 = 1: n in [0, 1]
    auto b = block_for(1, 1);
    CHECK(b.n_min == 0);
    CHECK(b.n_max == 1);
    CHECK(b.dim() == 2);

    // c - r < 0 clamps at n = 0
    b = block_for(50, 0);
    CHECK(b.n_min == 0);
    CHECK(b.n_max == 25);
    CHECK(b.dim() == 26);

    // interior block: n in [c - r, c + r]
    b = block_for(4, 20);
    CHECK(b.n_min == 8);
    CHECK(b.n_max == 12);
    CHECK(b.dim() == 5);

    CHECK(b.r() == Catch::Approx(2.0));
    CHECK(b.c() == Catch::Approx(10.0));
}

TEST_CASE("block_for rejects invalid labels") {
    CHECK_THROWS_AS(block_for(-1, 1), std::invalid_argument);
    // r2 and c2 must share parity (c = n + m and m has r's parity)
    CHECK_THROWS_AS(block_for(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(block_for(2, 1), std::invalid_argument);
    // c + r < 0 leaves no photon index at all
    CHECK_THROWS_AS(block_for(2, -4), std::invalid_argument);
}

TEST_CASE("degeneracy weights match the multiplicity formula") {
    // N = 4: P(r=2) = 1, P(r=1) = 3, P(r=0) = 2
    CHECK(degeneracy_weight(4, 4) == Catch::Approx(1.0));
    CHECK(degeneracy_weight(4, 2) == Catch::Approx(3.0));
    CHECK(degeneracy_weight(4, 0) == Catch::Approx(2.0));
    // N = 3: P(r=3/2) = 1, P(r=1/2) = 2
    CHECK(degeneracy_weight(3, 3) == Catch::Approx(1.0));
    CHECK(degeneracy_weight(3, 1) == Catch::Approx(2.0));
}

TEST_CASE("degeneracy weights resolve the identity sum_r (2r+1) P(r) = 2^N") {
    for (int N = 1; N <= 30; ++N) {
        KahanSum acc;
        for (int r2 = N % 2; r2 <= N; r2 += 2) acc.add((r2 + 1.0) * degeneracy_weight(N, r2));
        CHECK(acc.value() == Catch::Approx(std::pow(2.0, N)).epsilon(1e-12));
    }
}

TEST_CASE("degeneracy weight rejects mismatched labels") {
    CHECK_THROWS_AS(degeneracy_weight(4, 1), std::invalid_argument);  // parity
    CHECK_THROWS_AS(degeneracy_weight(4, 6), std::invalid_argument);  // r > N/2
    CHECK_THROWS_AS(degeneracy_weight(0, 0), std::invalid_argument);
}

TEST_CASE("model parameter validation") {
    ModelParams mp;
    mp.tlm_count = 3;
    mp.beta = 1.5;
    CHECK_NOTHROW(validate(mp));
    CHECK(mp.delta() == Catch::Approx(0.5625));
    mp.tlm_count = 0;
    CHECK_THROWS_AS(validate(mp), std::invalid_argument);
}

TEST_CASE("error hierarchy: truncation_error is a numerical_error") {
    truncation_error e("tail");
    numerical_error* base = &e;
    CHECK(std::string(base->what()) == "tail");
    CHECK_THROWS_AS(throw truncation_error("x"), numerical_error);
    CHECK_THROWS_AS(throw numerical_error("x"), std::runtime_error);
}

TEST_CASE("compensated summation holds small terms against a large one") {
    KahanSum acc;
    acc.add(1.0);
    for (int i = 0; i < 1000; ++i) acc.add(1e-17);
    // naive double summation would stay at exactly 1.0
    CHECK(acc.value() == Catch::Approx(1.0 + 1e-14).epsilon(1e-12));
}
