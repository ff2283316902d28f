#include <catch2/catch_amalgamated.hpp>

#include "tcm/distributions.hpp"

using namespace tcm;

TEST_CASE("fock density is a delta with no coherence") {
    auto d = fock(3);
    REQUIRE(d.diag.size() == 4);
    CHECK(d.diag[3] == 1.0);
    CHECK(d.diag[0] == 0.0);
    CHECK(d.superdiag.size() == 3);
    for (double s : d.superdiag) CHECK(s == 0.0);
    CHECK(d.mean() == Catch::Approx(3.0));
    CHECK(d.tail_mass == 0.0);
    CHECK_THROWS_AS(fock(-1), std::invalid_argument);
}

TEST_CASE("coherent density: Poisson weights, geometric-mean superdiagonal") {
    auto d = coherent(10.0);
    CHECK(d.n_trunc() == 67);  // floor ceil(nbar + 10 sqrt(nbar) + 25), tail already below tol
    CHECK(std::abs(d.mean() - 10.0) < 1e-8);
    CHECK(d.tail_mass >= 0.0);
    CHECK(d.tail_mass <= 1e-12);

    double sum = 0.0;
    for (double p : d.diag) sum += p;
    CHECK(sum >= 1.0 - 1e-12);

    // recurrence p_{n+1} = p_n * nbar/(n+1) and superdiag = sqrt(p_n p_{n+1})
    CHECK(d.diag[0] == Catch::Approx(std::exp(-10.0)).epsilon(1e-14));
    for (int n = 0; n < 20; ++n) {
        CHECK(d.diag[n + 1] == Catch::Approx(d.diag[n] * 10.0 / (n + 1)).epsilon(1e-12));
        CHECK(d.superdiag[n] ==
              Catch::Approx(std::sqrt(d.diag[n] * d.diag[n + 1])).epsilon(1e-12));
    }
}

TEST_CASE("coherent superdiagonal saturates the Cauchy-Schwarz bound") {
    auto d = coherent(4.0);
    // sqrt-then-square can overshoot the product by one ulp; allow that much
    for (std::size_t n = 0; n + 1 < d.diag.size(); ++n) {
        const double prod = d.diag[n] * d.diag[n + 1];
        CHECK(d.superdiag[n] * d.superdiag[n] <= prod * (1.0 + 1e-15));
    }
}

TEST_CASE("coherent mean is exact to tolerance across nbar") {
    for (double nbar : {0.5, 1.0, 30.0, 200.0}) {
        auto d = coherent(nbar);
        CHECK(std::abs(d.mean() - nbar) < 1e-8);
    }
}

TEST_CASE("coherent truncation never falls below the floor") {
    auto d = coherent(0.0);
    CHECK(d.n_trunc() >= 25);
    CHECK(d.diag[0] == Catch::Approx(1.0));
    auto d2 = coherent(100.0);
    CHECK(d2.n_trunc() >= 225);
}

TEST_CASE("tighter tail tolerance extends the grid") {
    auto loose = coherent(50.0, 1e-8);
    auto tight = coherent(50.0, 1e-14);
    CHECK(tight.n_trunc() >= loose.n_trunc());
    CHECK(tight.tail_mass <= 1e-14);
}

TEST_CASE("thermal density is geometric and strictly diagonal") {
    auto d = thermal(30.0);
    CHECK(std::abs(d.mean() - 30.0) < 1e-6);
    const double ratio = 30.0 / 31.0;
    CHECK(d.diag[0] == Catch::Approx(1.0 / 31.0).epsilon(1e-14));
    for (int n = 0; n < 10; ++n)
        CHECK(d.diag[n + 1] == Catch::Approx(d.diag[n] * ratio).epsilon(1e-12));
    for (double s : d.superdiag) CHECK(s == 0.0);

    auto v = thermal(0.0);
    CHECK(v.diag[0] == Catch::Approx(1.0));
    CHECK(v.mean() == Catch::Approx(0.0));
}

TEST_CASE("distribution parameter validation") {
    CHECK_THROWS_AS(coherent(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(thermal(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(coherent(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(thermal(1.0, -1e-9), std::invalid_argument);
}
