#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <bit>
#include <complex>

#include "tcm/dynamics.hpp"

using namespace tcm;

namespace {

std::vector<double> grid(double tau_max, int steps) { return uniform_grid(tau_max, steps); }

// Full product-basis oracle: n_ph photon levels x 2^N spins, evolved by dense
// diagonalization. Independent of the block decomposition used by the engine.
// H = (a+a + R3) + beta a+a - (a R+ + a+ R-), with the molecule operators
// realized as sums of single-spin flips.
struct BruteForce {
    int N, n_ph, dim_s, dim;
    Eigen::VectorXd w;
    Eigen::MatrixXd V;

    BruteForce(int N_, int n_ph_, double beta)
        : N(N_), n_ph(n_ph_), dim_s(1 << N_), dim(n_ph_ * (1 << N_)) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
        auto idx = [&](int n, int s) { return n * dim_s + s; };
        for (int n = 0; n < n_ph; ++n) {
            for (int s = 0; s < dim_s; ++s) {
                const int ups = std::popcount(static_cast<unsigned>(s));
                H(idx(n, s), idx(n, s)) = (n + ups - 0.5 * N) + beta * n;
                for (int i = 0; i < N; ++i) {
                    if ((s & (1 << i)) && n + 1 < n_ph)
                        H(idx(n + 1, s & ~(1 << i)), idx(n, s)) -= std::sqrt(n + 1.0);
                    if (!(s & (1 << i)) && n >= 1)
                        H(idx(n - 1, s | (1 << i)), idx(n, s)) -= std::sqrt(double(n));
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        w = es.eigenvalues();
        V = es.eigenvectors();
    }

    // photon number expectation and the slow amplitude sum
    // F(t) = sum_n sqrt(n+1) <n|rho_field|n+1>
    void evolve(const Eigen::VectorXd& psi0, const std::vector<double>& taus,
                std::vector<double>& ee, std::vector<std::complex<double>>& F) const {
        const Eigen::VectorXd c0 = V.transpose() * psi0;
        ee.assign(taus.size(), 0.0);
        F.assign(taus.size(), std::complex<double>(0.0, 0.0));
        for (std::size_t t = 0; t < taus.size(); ++t) {
            Eigen::VectorXcd coef(dim);
            for (int k = 0; k < dim; ++k)
                coef[k] = std::polar(1.0, -w[k] * taus[t]) * c0[k];
            const Eigen::VectorXcd psi = V * coef;
            double e = 0.0;
            for (int n = 0; n < n_ph; ++n)
                for (int s = 0; s < dim_s; ++s) e += n * std::norm(psi[n * dim_s + s]);
            ee[t] = e;
            for (int n = 0; n + 1 < n_ph; ++n) {
                std::complex<double> a(0.0, 0.0);
                for (int s = 0; s < dim_s; ++s)
                    a += psi[n * dim_s + s] * std::conj(psi[(n + 1) * dim_s + s]);
                F[t] += std::sqrt(n + 1.0) * a;
            }
        }
    }
};

// |n0> x symmetric spin state with k_up molecules excited
Eigen::VectorXd sym_state(int N, int k_up, int n0, int n_ph) {
    const int dim_s = 1 << N;
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(n_ph * dim_s);
    std::vector<int> combos;
    for (int s = 0; s < dim_s; ++s)
        if (std::popcount(static_cast<unsigned>(s)) == k_up) combos.push_back(s);
    const double amp = 1.0 / std::sqrt(double(combos.size()));
    for (int s : combos) psi[n0 * dim_s + s] = amp;
    return psi;
}

// |n0> x product state with the listed molecules excited
Eigen::VectorXd product_state(int N, std::vector<int> ups, int n0, int n_ph) {
    const int dim_s = 1 << N;
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(n_ph * dim_s);
    int s = 0;
    for (int i : ups) s |= (1 << i);
    psi[n0 * dim_s + s] = 1.0;
    return psi;
}

PhotonDensity superdiag_delta(int n) {
    PhotonDensity d;
    d.diag.assign(n + 2, 0.0);
    d.superdiag.assign(n + 1, 0.0);
    d.superdiag[n] = 1.0;
    return d;
}

}  // namespace

TEST_CASE("stimulated gain matches the product-basis oracle") {
    auto taus = grid(6.0, 25);
    for (int N : {2, 3}) {
        for (int k : {0, 2}) {
            for (double beta : {0.0, 1.5}) {
                const int n_ph = k + N + 8;
                BruteForce bf(N, n_ph, beta);
                std::vector<double> ee;
                std::vector<std::complex<double>> F;
                bf.evolve(sym_state(N, N, k, n_ph), taus, ee, F);
                auto s1 = s1_all_up(N, beta, fock(k), taus);
                for (std::size_t t = 0; t < taus.size(); ++t)
                    CHECK(ee[t] == Catch::Approx(k + s1.re[t]).margin(1e-10));
            }
        }
    }
}

TEST_CASE("absorption matches the product-basis oracle") {
    auto taus = grid(6.0, 25);
    const int N = 2, k = 3, n_ph = k + 3;
    for (double beta : {0.0, 1.5}) {
        BruteForce bf(N, n_ph, beta);
        std::vector<double> ee;
        std::vector<std::complex<double>> F;
        bf.evolve(sym_state(N, 0, k, n_ph), taus, ee, F);
        auto s4 = s4_all_down(N, beta, fock(k), taus);
        for (std::size_t t = 0; t < taus.size(); ++t)
            CHECK(ee[t] == Catch::Approx(k - s4.re[t]).margin(1e-10));
    }
}

TEST_CASE("slow amplitude matches the product-basis oracle in phase and magnitude") {
    auto taus = grid(6.0, 25);
    for (int N : {1, 2}) {
        for (double beta : {0.0, 1.2}) {
            const int n_ph = 10;
            const int dim_s = 1 << N;
            Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(n_ph * dim_s);
            for (int n0 = 0; n0 < 3; ++n0)  // field (|0>+|1>+|2>)/sqrt(3), molecules all up
                psi0[n0 * dim_s + (dim_s - 1)] = 1.0 / std::sqrt(3.0);
            BruteForce bf(N, n_ph, beta);
            std::vector<double> ee;
            std::vector<std::complex<double>> F;
            bf.evolve(psi0, taus, ee, F);

            PhotonDensity d;
            d.diag.assign(4, 0.0);
            d.superdiag = {1.0 / 3.0, 1.0 / 3.0, 0.0};
            auto s2 = s2_all_up(N, beta, d, taus);
            REQUIRE(s2.is_complex());
            const double omega = 1.0 + beta;  // rotating-frame factor
            for (std::size_t t = 0; t < taus.size(); ++t) {
                const auto ref = std::polar(1.0, -omega * taus[t]) * F[t];
                CHECK(s2.re[t] == Catch::Approx(ref.real()).margin(1e-10));
                CHECK(s2.im[t] == Catch::Approx(ref.imag()).margin(1e-10));
            }
        }
    }
}

TEST_CASE("general diagonal-state field expectation matches the oracle for two excited molecules") {
    auto taus = grid(6.0, 25);
    for (int N : {3, 4}) {
        for (double beta : {0.0, 1.0}) {
            const int n_ph = N + 6;
            BruteForce bf(N, n_ph, beta);
            std::vector<double> ee;
            std::vector<std::complex<double>> F;
            bf.evolve(product_state(N, {0, 1}, 0, n_ph), taus, ee, F);
            auto st = make_tlm_state({ScenarioKind::two_up_specified, 0}, N);
            auto series = ee_general(N, beta, fock(0), st, taus);
            for (std::size_t t = 0; t < taus.size(); ++t)
                CHECK(series.re[t] == Catch::Approx(ee[t]).margin(1e-10));
        }
    }
}

TEST_CASE("general engine reduces to the gain and absorption engines") {
    auto taus = grid(9.0, 31);
    const int N = 3, k = 2;
    const double beta = 0.6;
    auto up = ee_general(N, beta, fock(k), make_tlm_state({ScenarioKind::all_up, 0}, N), taus);
    auto s1 = s1_all_up(N, beta, fock(k), taus);
    auto down = ee_general(N, beta, fock(k), make_tlm_state({ScenarioKind::all_down, 0}, N), taus);
    auto s4 = s4_all_down(N, beta, fock(k), taus);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        CHECK(up.re[t] == Catch::Approx(k + s1.re[t]).margin(1e-11));
        CHECK(down.re[t] == Catch::Approx(k - s4.re[t]).margin(1e-11));
    }
}

TEST_CASE("frozen engine values") {
    CHECK(s1_all_up(2, 0.0, fock(5), {1.234}).re[0] ==
          Catch::Approx(3.7424080614501686e-05).margin(1e-13));
    CHECK(s1_all_up(3, 0.8, fock(2), {2.5}).re[0] ==
          Catch::Approx(2.48382013141412).margin(1e-12));
    CHECK(s1_all_up(4, 0.0, fock(0), {3.7}).re[0] ==
          Catch::Approx(2.441572115242983).margin(1e-12));
    CHECK(s1_all_up(4, 0.0, fock(1), {1.234}).re[0] ==
          Catch::Approx(2.0692955218959694).margin(1e-12));
    CHECK(s1_all_up(1, 2.0, fock(0), {1.0}).re[0] ==
          Catch::Approx(0.4878407820314619).margin(1e-12));

    CHECK(s2_all_up(1, 0.0, superdiag_delta(0), {1.234}).re[0] ==
          Catch::Approx(1.2572035285160275).margin(1e-12));
    CHECK(s2_all_up(2, 0.0, superdiag_delta(3), {2.5}).re[0] ==
          Catch::Approx(1.6277986743722646).margin(1e-12));
    auto s2c = s2_all_up(3, 1.1, superdiag_delta(1), {4.0});
    CHECK(s2c.re[0] == Catch::Approx(0.4650776026203216).margin(1e-12));
    CHECK(s2c.im[0] == Catch::Approx(-0.1294182765440609).margin(1e-12));

    CHECK(s4_all_down(2, 0.0, fock(4), {1.234}).re[0] ==
          Catch::Approx(1.1535876425285094).margin(1e-12));
    CHECK(s4_all_down(1, 2.0, fock(3), {2.0}).re[0] ==
          Catch::Approx(0.4295625126782301).margin(1e-12));
    CHECK(s4_all_down(5, 0.0, fock(3), {5.0}).re[0] ==
          Catch::Approx(1.0617558095242317).margin(1e-12));

    CHECK(ee_general(3, 0.0, fock(2), make_tlm_state({ScenarioKind::two_up_specified, 0}, 3),
                     {2.2})
              .re[0] == Catch::Approx(2.5832606184782154).margin(1e-12));
    CHECK(ee_general(4, 0.5, fock(1), make_tlm_state({ScenarioKind::dicke, 0}, 4), {1.7}).re[0] ==
          Catch::Approx(1.0522183165033503).margin(1e-12));
    CHECK(ee_general(2, 0.0, fock(0), make_tlm_state({ScenarioKind::one_up_specified, 0}, 2),
                     {3.3})
              .re[0] == Catch::Approx(0.4989663057940119).margin(1e-12));
}

TEST_CASE("single excited molecule in vacuum: damped and undamped sin^2 laws") {
    auto taus = grid(5.0, 41);
    const int N = 16;
    auto spec = ee_general(N, 0.0, fock(0),
                           make_tlm_state({ScenarioKind::one_up_specified, 0}, N), taus);
    auto dicke = ee_general(N, 0.0, fock(0),
                            make_tlm_state({ScenarioKind::one_up_dicke, 0}, N), taus);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const double s = std::sin(std::sqrt(double(N)) * taus[t]);
        CHECK(spec.re[t] == Catch::Approx(s * s / N).margin(1e-12));
        CHECK(dicke.re[t] == Catch::Approx(s * s).margin(1e-12));
    }
}

TEST_CASE("engine invariants: start at zero, gain nonnegative, thermal coherence silent") {
    auto taus = grid(12.0, 101);
    auto s1 = s1_all_up(3, 0.5, coherent(4.0), taus);
    CHECK(s1.re[0] == 0.0);
    for (double v : s1.re) CHECK(v >= -1e-12);

    auto s4 = s4_all_down(2, 0.0, fock(6), taus);
    CHECK(s4.re[0] == 0.0);
    for (double v : s4.re) CHECK(v >= -1e-12);

    auto s2 = s2_all_up(2, 0.0, thermal(5.0), taus);
    for (double v : s2.re) CHECK(v == 0.0);
    for (double v : s2.im) CHECK(v == 0.0);

    // on resonance the slow amplitude of a real-superdiagonal state is real
    auto s2r = s2_all_up(3, 0.0, coherent(3.0), taus);
    for (double v : s2r.im) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("results are bitwise identical across thread counts") {
    auto taus = grid(10.0, 101);
    auto base = s1_all_up(3, 0.7, coherent(6.0), taus, 1);
    for (int threads : {2, 3, 8}) {
        auto run = s1_all_up(3, 0.7, coherent(6.0), taus, threads);
        for (std::size_t t = 0; t < taus.size(); ++t)
            CHECK(std::bit_cast<std::uint64_t>(run.re[t]) ==
                  std::bit_cast<std::uint64_t>(base.re[t]));
    }
    auto base2 = s2_all_up(2, 0.4, coherent(6.0), taus, 1);
    auto run2 = s2_all_up(2, 0.4, coherent(6.0), taus, 5);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        CHECK(std::bit_cast<std::uint64_t>(run2.re[t]) ==
              std::bit_cast<std::uint64_t>(base2.re[t]));
        CHECK(std::bit_cast<std::uint64_t>(run2.im[t]) ==
              std::bit_cast<std::uint64_t>(base2.im[t]));
    }
}

TEST_CASE("stationary means: frozen values and long-time averages") {
    CHECK(stationary_mean_s1(4, 0.0, coherent(10.0)) ==
          Catch::Approx(1.927259542318265).margin(1e-12));
    CHECK(stationary_mean_s1(2, 1.0, fock(5)) ==
          Catch::Approx(0.9450549450549453).margin(1e-12));
    CHECK(stationary_mean_ee(3, 0.0, fock(2),
                             make_tlm_state({ScenarioKind::two_up_specified, 0}, 3)) ==
          Catch::Approx(2.519607843137255).margin(1e-12));

    // the analytic stationary value is the long-time average of the series
    auto taus = grid(4000.0, 40001);
    auto s1 = s1_all_up(2, 0.0, fock(3), taus);
    double avg = 0.0;
    for (double v : s1.re) avg += v;
    avg /= double(s1.re.size());
    CHECK(avg == Catch::Approx(stationary_mean_s1(2, 0.0, fock(3))).margin(2e-3));
}

TEST_CASE("short-time rate: quadratic coefficient via two-point elimination") {
    const std::vector<double> taus{0.0, 5e-4, 1e-3};
    auto s1 = s1_all_up(50, 0.0, fock(0), taus);
    CHECK(short_time_rate(s1) == Catch::Approx(50.0).margin(1e-6));

    // needs a sample at tau <= 1e-3
    auto late = s1_all_up(2, 0.0, fock(0), std::vector<double>{0.0, 0.01, 0.02});
    CHECK_THROWS_AS(short_time_rate(late), std::invalid_argument);

    // complex series are rejected
    auto s2 = s2_all_up(1, 0.5, superdiag_delta(0), std::vector<double>{0.0, 5e-4, 1e-3});
    CHECK_THROWS_AS(short_time_rate(s2), std::invalid_argument);
}

TEST_CASE("grid construction and validation") {
    auto g = uniform_grid(20.0, 201);
    REQUIRE(g.size() == 201);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == Catch::Approx(20.0).margin(0.0));
    CHECK(g[100] == Catch::Approx(10.0).margin(1e-12));
    CHECK_THROWS_AS(uniform_grid(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(uniform_grid(5.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_grid({}), std::invalid_argument);
    CHECK_THROWS_AS(check_grid({0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(check_grid({0.5, 1.0, 2.0}));
}

TEST_CASE("molecule initial states carry the multiplicity weights") {
    auto one = make_tlm_state({ScenarioKind::one_up_specified, 0}, 5);
    REQUIRE(one.entries.size() == 2);
    CHECK(one.entries[0].r2 == 5);
    CHECK(one.entries[0].m2 == -3);
    CHECK(one.entries[0].weight == Catch::Approx(0.2));
    CHECK(one.entries[1].r2 == 3);
    CHECK(one.entries[1].weight == Catch::Approx(0.8));

    auto two = make_tlm_state({ScenarioKind::two_up_specified, 0}, 3);
    REQUIRE(two.entries.size() == 2);  // the r = N/2 - 2 weight vanishes at N = 3
    CHECK(two.entries[0].weight == Catch::Approx(1.0 / 3.0));
    CHECK(two.entries[1].weight == Catch::Approx(2.0 / 3.0));

    auto half = make_tlm_state({ScenarioKind::dicke, 0}, 4);
    REQUIRE(half.entries.size() == 1);
    CHECK(half.entries[0].r2 == 4);
    CHECK(half.entries[0].m2 == 0);

    CHECK_THROWS_AS(make_tlm_state({ScenarioKind::two_up_specified, 0}, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_tlm_state({ScenarioKind::dicke, 6}, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_tlm_state({ScenarioKind::dicke, 1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_tlm_state({ScenarioKind::all_up, 0}, 0), std::invalid_argument);
}
