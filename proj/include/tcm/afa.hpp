#ifndef TCM_AFA_HPP
#define TCM_AFA_HPP

// Average Field Approximation: every molecule is dressed by a mean field of
// n0 = n + N/2 quanta. The block eigenvectors become products of single-
// molecule dressed states (binomial/hypergeometric components below) and the
// eigenvalue ladder becomes exactly linear with spacing sqrt(4 + beta_bar^2),
// beta_bar = beta / sqrt(n0). Also houses the exact-eigenvector diagnostic
// sums used to judge where the approximation holds.

#include "tcm/dynamics.hpp"

namespace tcm {

struct AfaCoefficients {
    double a1, a2, b1, b2;  // dressed-state amplitudes; a1^2+a2^2 = b1^2+b2^2 = 1
};

inline AfaCoefficients afa_coefficients(double beta_bar) {
    const double s = std::sqrt(4.0 + beta_bar * beta_bar);
    const double x = 0.5 * (s - beta_bar);  // a2/a1
    const double y = 0.5 * (s + beta_bar);  // b2/b1
    const double a1 = 1.0 / std::sqrt(1.0 + x * x);
    const double b1 = 1.0 / std::sqrt(1.0 + y * y);
    return {a1, x * a1, b1, y * b1};
}

struct AfaParams {
    double n0;
    double beta_bar;
    AfaCoefficients coeffs;
    static AfaParams for_block(int N, int n, double beta) {
        if (N < 1 || n < 0) throw std::invalid_argument("AfaParams: need N >= 1, n >= 0");
        AfaParams p;
        p.n0 = n + 0.5 * N;
        p.beta_bar = beta / std::sqrt(p.n0);
        p.coeffs = afa_coefficients(p.beta_bar);
        return p;
    }
};

// ladder eigenvalue, unscaled; multiply by sqrt(n0) to compare with exact q
inline double afa_q(int N, int n, int j, double beta_bar) {
    if (j < 0 || j > N) throw std::invalid_argument("afa_q: j out of range");
    return -(0.5 * N + n) * beta_bar + (0.5 * N - j) * std::sqrt(4.0 + beta_bar * beta_bar);
}

namespace detail {

inline double binom_d(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c *= double(n - k + i) / double(i);
    return c;
}

inline double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

// terminating Gauss series; a and b are non-positive integers so the sum has
// min(-a, -b) + 1 terms and no convergence questions arise
inline double hyp2f1_terminating(int a, int b, int c, double x) {
    const int kmax = std::min(-a, -b);
    double s = 1.0, term = 1.0;
    for (int k = 0; k < kmax; ++k) {
        term *= double(a + k) * double(b + k) / (double(c + k) * double(k + 1)) * x;
        s += term;
    }
    return s;
}

}  // namespace detail

// component p of dressed eigenvector j (both 0..N). The two branches are the
// same polynomial written around different ends of the k-sum
//   sum_k C(j,k) C(N-j,p-k) (-b2)^k b1^(j-k) a2^(p-k) a1^(N-j-p+k)
// scaled by sqrt(C(N,j)/C(N,p)).
inline double afa_component(int N, int j, int p, double beta_bar) {
    if (N < 0 || j < 0 || j > N || p < 0 || p > N)
        throw std::invalid_argument("afa_component: indices out of range");
    const auto [a1, a2, b1, b2] = afa_coefficients(beta_bar);
    const double x = -(b2 * a1) / (b1 * a2);
    const double shared = detail::ipow(b1, j) * detail::ipow(a1, N - j) *
                          detail::ipow(a2 / a1, p) *
                          std::sqrt(detail::binom_d(N, j) / detail::binom_d(N, p));
    if (N >= j + p)
        return shared * detail::binom_d(N - j, p) *
               detail::hyp2f1_terminating(-j, -p, N + 1 - p - j, x);
    return shared * detail::binom_d(j, j + p - N) * detail::ipow(x, j + p - N) *
           detail::hyp2f1_terminating(j - N, p - N, 1 + p + j - N, x);
}

// full (p, j) matrix; columns are the dressed eigenvectors
inline Eigen::MatrixXd afa_matrix(int N, double beta_bar) {
    Eigen::MatrixXd A(N + 1, N + 1);
    for (int p = 0; p <= N; ++p)
        for (int j = 0; j <= N; ++j) A(p, j) = afa_component(N, j, p, beta_bar);
    return A;
}

// sum_p p A^j_p A^{j+1}_p; its closed value is
// -sqrt((j+1)(N-j)) / (2 sqrt(1 + beta_bar^2/4))
inline double afa_p_weighted_overlap(int N, int j, double beta_bar) {
    if (j < 0 || j >= N) throw std::invalid_argument("afa_p_weighted_overlap: need 0 <= j < N");
    double s = 0.0;
    for (int p = 0; p <= N; ++p)
        s += double(p) * afa_component(N, j, p, beta_bar) * afa_component(N, j + 1, p, beta_bar);
    return s;
}

// approximate S1: N sum_n diag[n] n0/(n0+Delta) sin^2(sqrt(n0+Delta) tau)
inline ObservableSeries s1_afa(int N, double beta, const PhotonDensity& density,
                               const std::vector<double>& taus) {
    if (N < 1) throw std::invalid_argument("s1_afa: N must be >= 1");
    check_grid(taus);
    const double D = 0.25 * beta * beta;
    ObservableSeries out;
    out.kind = ObservableKind::s1;
    out.tau = taus;
    out.re.assign(taus.size(), 0.0);
    for (std::size_t n = 0; n < density.diag.size(); ++n) {
        const double w = density.diag[n];
        if (w == 0.0) continue;
        const double n0 = n + 0.5 * N;
        const double amp = w * N * n0 / (n0 + D);
        const double f = std::sqrt(n0 + D);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double s = std::sin(f * taus[t]);
            out.re[t] += amp * s * s;
        }
    }
    return out;
}

// approximate S2 (real): the slow inter-block drift is dropped, leaving
// sum_n superdiag[n] { sqrt(n+1) + (N/(2 sqrt(n+1))) n0/(n0+Delta)
//                      sin^2(sqrt(n0+Delta) tau) };
// the detuned and resonant cases are the same formula (Delta = 0).
inline ObservableSeries s2_afa(int N, double beta, const PhotonDensity& density,
                               const std::vector<double>& taus) {
    if (N < 1) throw std::invalid_argument("s2_afa: N must be >= 1");
    check_grid(taus);
    const double D = 0.25 * beta * beta;
    ObservableSeries out;
    out.kind = ObservableKind::s2;
    out.tau = taus;
    out.re.assign(taus.size(), 0.0);
    for (std::size_t n = 0; n < density.superdiag.size(); ++n) {
        const double w = density.superdiag[n];
        if (w == 0.0) continue;
        const double n0 = n + 0.5 * N;
        const double base = std::sqrt(n + 1.0);
        const double amp = 0.5 * N / base * n0 / (n0 + D);
        const double f = std::sqrt(n0 + D);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double s = std::sin(f * taus[t]);
            out.re[t] += w * (base + amp * s * s);
        }
    }
    return out;
}

// ------------------------------------------------- exact-spectrum diagnostics

// Exact eigenvalue gaps, for judging how linear the ladder really is.
// same_block[i]  = q_j - q_{j+k}               (block c = n + N/2, j = i)
// adjacent[i]    = q^c_j - q^{c+1}_{j+k} - beta (blocks c and c+1)
// AFA predicts both -> k sqrt(4 + beta_bar^2) sqrt(n0) with a residual
// sub-unit spread in the adjacent table that never vanishes.
struct QDifferenceRow {
    int n;
    std::vector<double> same_block;
    std::vector<double> adjacent;
};

inline std::vector<QDifferenceRow> q_difference_table(int N, double beta,
                                                      const std::vector<int>& ns, int k) {
    if (N < 1) throw std::invalid_argument("q_difference_table: N must be >= 1");
    if (k < 0 || k > N) throw std::invalid_argument("q_difference_table: need 0 <= k <= N");
    auto& cache = global_block_cache();
    std::vector<QDifferenceRow> rows;
    rows.reserve(ns.size());
    for (int n : ns) {
        if (n < 0) throw std::invalid_argument("q_difference_table: n must be >= 0");
        auto es1 = cache.get(N, 2 * n + N, beta);
        auto es2 = cache.get(N, 2 * (n + 1) + N, beta);
        QDifferenceRow row;
        row.n = n;
        for (int j = 0; j + k <= N; ++j) {
            row.same_block.push_back(es1->q[j] - es1->q[j + k]);
            row.adjacent.push_back(es1->q[j] - es2->q[j + k] - beta);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Exact-eigenvector sums grouped by j-gap k. s1_sum collects the S1
// trigonometric coefficients (expected -N/4 at k = 1, -> 0 for k >= 2 as n
// grows); s2_sum collects the S2 amplitude coefficients against the
// adjacent block (k may be negative).
struct CoefficientSums {
    double s1_sum;
    double s2_sum;
};

inline CoefficientSums coefficient_sums(int N, double beta, int n, int k) {
    if (N < 1 || n < 0) throw std::invalid_argument("coefficient_sums: need N >= 1, n >= 0");
    if (std::abs(k) > N) throw std::invalid_argument("coefficient_sums: need |k| <= N");
    auto& cache = global_block_cache();
    auto es1 = cache.get(N, 2 * n + N, beta);
    auto es2 = cache.get(N, 2 * (n + 1) + N, beta);
    const int d = N + 1;
    CoefficientSums out{0.0, 0.0};
    for (int j = 0; j < d; ++j) {
        const int jp = j + k;
        if (jp < 0 || jp >= d) continue;
        double pdot = 0.0, sdot = 0.0;
        for (int p = 0; p < d; ++p) {
            pdot += double(p) * es1->A(p, j) * es1->A(p, jp);
            sdot += std::sqrt(n + 1.0 + p) * es1->A(p, j) * es1->A(p, jp);
        }
        out.s1_sum += es1->A(0, j) * es1->A(0, jp) * pdot;
        out.s2_sum += es2->A(0, j) * es2->A(0, jp) * sdot;
    }
    return out;
}

}  // namespace tcm

#endif  // TCM_AFA_HPP
