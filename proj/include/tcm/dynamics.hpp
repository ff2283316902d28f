#ifndef TCM_DYNAMICS_HPP
#define TCM_DYNAMICS_HPP

// Exact time evolution of the field observables.
//
//   S1 = <E-E+> - nbar   all TLMs up (stimulated + spontaneous gain)
//   S2 = slowly varying amplitude of <E-> after factoring the e^{i omega t}
//        carrier (complex off resonance)
//   S4 = nbar - <E-E+>   all TLMs down (absorption)
//   ee_general           <E-E+> for any diagonal TLM state (list of (r, m, w))
//
// All series are assembled per initial photon number n from cached block
// eigensystems. Contributions are computed in parallel into per-n slots and
// reduced in ascending n order with compensated sums, so output is
// bit-identical for any thread count.

#include <atomic>
#include <complex>
#include <mutex>
#include <thread>

#include "tcm/distributions.hpp"
#include "tcm/spectral.hpp"

namespace tcm {

enum class ObservableKind { s1, s2, s4, ee };

struct ObservableSeries {
    std::vector<double> tau;
    std::vector<double> re;
    std::vector<double> im;  // only populated for s2
    ObservableKind kind = ObservableKind::s1;
    bool is_complex() const { return !im.empty(); }
};

inline std::vector<double> uniform_grid(double tau_max, int steps) {
    if (steps < 2) throw std::invalid_argument("grid needs steps >= 2");
    if (!(tau_max > 0.0)) throw std::invalid_argument("grid needs tau_max > 0");
    std::vector<double> taus(steps);
    for (int i = 0; i < steps; ++i) taus[i] = tau_max * double(i) / double(steps - 1);
    return taus;
}

inline void check_grid(const std::vector<double>& taus) {
    if (taus.empty()) throw std::invalid_argument("empty tau grid");
    for (std::size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] > taus[i - 1]))
            throw std::invalid_argument("tau grid must be strictly increasing");
}

// ---------------------------------------------------------------- TLM states

enum class ScenarioKind {
    all_up,
    all_down,
    dicke,  // single |r=N/2, m> component
    one_up_specified,
    one_up_dicke,
    two_up_specified
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::all_up;
    int m2 = 0;  // doubled m, used by dicke
};

struct TlmEntry {
    int r2, m2;     // doubled half-integers
    double weight;  // includes all multiplicity factors; weights sum to 1
};

struct TLMInitialState {
    std::vector<TlmEntry> entries;
};

// "one up"/"two up" come in two flavors: the specified-molecule states mix
// cooperation numbers (the lower-r components are dynamically inert or
// nearly so), while the Dicke states keep r = N/2 and radiate strongly.
inline TLMInitialState make_tlm_state(Scenario sc, int N) {
    if (N < 1) throw std::invalid_argument("make_tlm_state: N must be >= 1");
    TLMInitialState st;
    auto push = [&st](int r2, int m2, double w) {
        if (w > 0.0) st.entries.push_back({r2, m2, w});
    };
    switch (sc.kind) {
        case ScenarioKind::all_up:
            push(N, N, 1.0);
            break;
        case ScenarioKind::all_down:
            push(N, -N, 1.0);
            break;
        case ScenarioKind::dicke:
            if (std::abs(sc.m2) > N || ((sc.m2 ^ N) & 1))
                throw std::invalid_argument("dicke: m out of range for N");
            push(N, sc.m2, 1.0);
            break;
        case ScenarioKind::one_up_specified:
            // one chosen molecule up: weight 1/N on |N/2, 1-N/2>, rest on the
            // inert r = N/2-1 component
            push(N, 2 - N, 1.0 / N);
            push(N - 2, 2 - N, (N - 1.0) / N);
            break;
        case ScenarioKind::one_up_dicke:
            push(N, 2 - N, 1.0);
            break;
        case ScenarioKind::two_up_specified:
            // two chosen molecules up; the r = N/2-2 remainder is a bottom
            // state (c = -r) and cannot radiate
            if (N < 3) throw std::invalid_argument("two_up_specified needs N >= 3");
            push(N, 4 - N, 2.0 / (N * (N - 1.0)));
            push(N - 2, 4 - N, 2.0 / N);
            push(N - 4, 4 - N, (N - 3.0) / (N - 1.0));
            break;
    }
    double sum = 0.0;
    for (const auto& e : st.entries) {
        if (e.r2 < 0 || std::abs(e.m2) > e.r2)
            throw std::invalid_argument("make_tlm_state: invalid (r, m) entry");
        sum += e.weight;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("make_tlm_state: weights must sum to 1");
    return st;
}

// ------------------------------------------------------------------ internals

namespace detail {

template <class Fn>
inline void run_slots(int count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    const int nw = std::min(threads, count);
    std::vector<std::thread> workers;
    workers.reserve(nw);
    for (int w = 0; w < nw; ++w)
        workers.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lk(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// sum_{j<j'} -4 A(anchor,j)A(anchor,j') [sum_p pweight(p) A(p,j)A(p,j')]
//            * sin^2((q_j - q_j') tau/2)
// with pweight(p) = (p - anchor) photons gained (all-up) or (anchor - p)
// photons lost (all-down); either way only the p-linear part survives since
// off-diagonal eigenvector pairs are orthogonal.
inline void gain_pairs(const BlockEigensystem& es, int anchor, int pw_sign, double scale,
                       const std::vector<double>& taus, std::vector<double>& out) {
    const int d = es.dim();
    for (int j = 0; j < d; ++j) {
        for (int jp = j + 1; jp < d; ++jp) {
            double dot = 0.0;
            for (int p = 0; p < d; ++p)
                dot += double(pw_sign * (p - anchor)) * es.A(p, j) * es.A(p, jp);
            const double coef = -4.0 * scale * es.A(anchor, j) * es.A(anchor, jp) * dot;
            if (coef == 0.0) continue;
            const double f = 0.5 * (es.q[j] - es.q[jp]);
            for (std::size_t t = 0; t < taus.size(); ++t) {
                const double s = std::sin(f * taus[t]);
                out[t] += coef * s * s;
            }
        }
    }
}

inline double gain_pairs_stationary(const BlockEigensystem& es, int anchor, int pw_sign) {
    // infinite-time average: sin^2 -> 1/2 (all eigenvalues are simple)
    const int d = es.dim();
    double acc = 0.0;
    for (int j = 0; j < d; ++j)
        for (int jp = j + 1; jp < d; ++jp) {
            double dot = 0.0;
            for (int p = 0; p < d; ++p)
                dot += double(pw_sign * (p - anchor)) * es.A(p, j) * es.A(p, jp);
            acc += -4.0 * 0.5 * es.A(anchor, j) * es.A(anchor, jp) * dot;
        }
    return acc;
}

struct SeriesSlots {
    std::vector<std::vector<double>> re, im;
    bool complex_out = false;  // keeps im allocated even when count == 0
    void init(int count, std::size_t T, bool complex_valued) {
        complex_out = complex_valued;
        re.assign(count, std::vector<double>(T, 0.0));
        if (complex_valued) im.assign(count, std::vector<double>(T, 0.0));
    }
    // ordered compensated reduction (slot index ascends with n)
    ObservableSeries reduce(const std::vector<double>& taus, ObservableKind kind) const {
        const std::size_t T = taus.size();
        ObservableSeries out;
        out.kind = kind;
        out.tau = taus;
        out.re.assign(T, 0.0);
        std::vector<double> cr(T, 0.0);
        for (const auto& slot : re)
            for (std::size_t t = 0; t < T; ++t) {
                const double y = slot[t] - cr[t];
                const double s = out.re[t] + y;
                cr[t] = (s - out.re[t]) - y;
                out.re[t] = s;
            }
        if (complex_out) {
            out.im.assign(T, 0.0);
            std::vector<double> ci(T, 0.0);
            for (const auto& slot : im)
                for (std::size_t t = 0; t < T; ++t) {
                    const double y = slot[t] - ci[t];
                    const double s = out.im[t] + y;
                    ci[t] = (s - out.im[t]) - y;
                    out.im[t] = s;
                }
        }
        return out;
    }
};

// Diagnostic variant of S2 that groups amplitudes the way some published
// N = 2, 3 expressions do: both row-0 factors from the upper block, both
// row-p factors from the lower block. Not equal to s2_all_up (it violates
// the tau = 0 normalization sum rule); kept to characterize that family.
inline ObservableSeries s2_all_up_alt_grouping(int N, double beta, const PhotonDensity& density,
                                               const std::vector<double>& taus) {
    if (N < 1) throw std::invalid_argument("s2_all_up_alt_grouping: N must be >= 1");
    check_grid(taus);
    ObservableSeries out;
    out.kind = ObservableKind::s2;
    out.tau = taus;
    out.re.assign(taus.size(), 0.0);
    out.im.assign(taus.size(), 0.0);
    auto& cache = global_block_cache();
    for (std::size_t n = 0; n < density.superdiag.size(); ++n) {
        const double w = density.superdiag[n];
        if (w == 0.0) continue;
        auto es1 = cache.get(N, 2 * int(n) + N, beta);
        auto es2 = cache.get(N, 2 * (int(n) + 1) + N, beta);
        const int d = es1->dim();
        for (int j = 0; j < d; ++j)
            for (int jp = 0; jp < d; ++jp) {
                double dot = 0.0;
                for (int p = 0; p < d; ++p)
                    dot += std::sqrt(n + p + 1.0) * es1->A(p, j) * es1->A(p, jp);
                const double coef = w * es2->A(0, j) * es2->A(0, jp) * dot;
                for (std::size_t t = 0; t < taus.size(); ++t) {
                    const double ph = (es1->q[j] - es2->q[jp] - beta) * taus[t];
                    out.re[t] += coef * std::cos(ph);
                    out.im[t] += coef * std::sin(ph);
                }
            }
    }
    return out;
}

}  // namespace detail

// ------------------------------------------------------------------- engines

// S1(tau), all TLMs up. Blocks (r = N/2, c = n + N/2); the initial photon
// number n sits in row 0.
inline ObservableSeries s1_all_up(int N, double beta, const PhotonDensity& density,
                                  const std::vector<double>& taus, int threads = 1) {
    if (N < 1) throw std::invalid_argument("s1_all_up: N must be >= 1");
    check_grid(taus);
    std::vector<int> ns;
    for (int n = 0; n <= density.n_trunc(); ++n)
        if (density.diag[n] != 0.0) ns.push_back(n);
    detail::SeriesSlots slots;
    slots.init(static_cast<int>(ns.size()), taus.size(), false);
    auto& cache = global_block_cache();
    detail::run_slots(static_cast<int>(ns.size()), threads, [&](int i) {
        const int n = ns[i];
        auto es = cache.get(N, 2 * n + N, beta);
        detail::gain_pairs(*es, 0, +1, density.diag[n], taus, slots.re[i]);
    });
    return slots.reduce(taus, ObservableKind::s1);
}

// S4(tau), all TLMs down. Blocks (r = N/2, c = n - N/2); the initial photon
// number n is the top row and at most min(N, n) photons can be absorbed.
inline ObservableSeries s4_all_down(int N, double beta, const PhotonDensity& density,
                                    const std::vector<double>& taus, int threads = 1) {
    if (N < 1) throw std::invalid_argument("s4_all_down: N must be >= 1");
    check_grid(taus);
    std::vector<int> ns;
    for (int n = 1; n <= density.n_trunc(); ++n)
        if (density.diag[n] != 0.0) ns.push_back(n);
    detail::SeriesSlots slots;
    slots.init(static_cast<int>(ns.size()), taus.size(), false);
    auto& cache = global_block_cache();
    detail::run_slots(static_cast<int>(ns.size()), threads, [&](int i) {
        const int n = ns[i];
        auto es = cache.get(N, 2 * n - N, beta);
        detail::gain_pairs(*es, es->dim() - 1, -1, density.diag[n], taus, slots.re[i]);
    });
    return slots.reduce(taus, ObservableKind::s4);
}

// S2(tau), all TLMs up, complex. Couples adjacent blocks c = n + N/2 and
// c + 1. Each unitary factor contributes its own (block, j) pair to both the
// amplitude and the phase:
//   S2 = sum_n <n|rho|n+1> sum_{j,j'} e^{+i(q^c_j - q^{c+1}_{j'} - beta) tau}
//        * A^c(0,j) A^{c+1}(0,j') sum_p sqrt(n+p+1) A^c(p,j) A^{c+1}(p,j')
// where row p of block c is photon n+p and row p of block c+1 is photon
// n+1+p. At tau = 0 orthonormality collapses this to sum <n|rho|n+1> sqrt(n+1).
inline ObservableSeries s2_all_up(int N, double beta, const PhotonDensity& density,
                                  const std::vector<double>& taus, int threads = 1) {
    if (N < 1) throw std::invalid_argument("s2_all_up: N must be >= 1");
    check_grid(taus);
    std::vector<int> ns;
    for (std::size_t n = 0; n < density.superdiag.size(); ++n)
        if (density.superdiag[n] != 0.0) ns.push_back(static_cast<int>(n));
    detail::SeriesSlots slots;
    slots.init(static_cast<int>(ns.size()), taus.size(), true);
    auto& cache = global_block_cache();
    detail::run_slots(static_cast<int>(ns.size()), threads, [&](int i) {
        const int n = ns[i];
        const double w = density.superdiag[n];
        auto es1 = cache.get(N, 2 * n + N, beta);
        auto es2 = cache.get(N, 2 * (n + 1) + N, beta);
        const int d = es1->dim();  // both blocks have N+1 rows here
        Eigen::MatrixXd coef(d, d);
        for (int j = 0; j < d; ++j)
            for (int jp = 0; jp < d; ++jp) {
                double dot = 0.0;
                for (int p = 0; p < d; ++p)
                    dot += std::sqrt(n + p + 1.0) * es1->A(p, j) * es2->A(p, jp);
                coef(j, jp) = w * es1->A(0, j) * es2->A(0, jp) * dot;
            }
        std::vector<std::complex<double>> u(d), v(d);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double tau = taus[t];
            for (int j = 0; j < d; ++j) {
                u[j] = std::complex<double>(std::cos(es1->q[j] * tau), std::sin(es1->q[j] * tau));
                const double ph = (es2->q[j] + beta) * tau;
                v[j] = std::complex<double>(std::cos(ph), -std::sin(ph));
            }
            std::complex<double> acc(0.0, 0.0);
            for (int j = 0; j < d; ++j) {
                std::complex<double> row(0.0, 0.0);
                for (int jp = 0; jp < d; ++jp) row += coef(j, jp) * v[jp];
                acc += u[j] * row;
            }
            slots.re[i][t] = acc.real();
            slots.im[i][t] = acc.imag();
        }
    });
    return slots.reduce(taus, ObservableKind::s2);
}

// <E-E+>(tau) for a general diagonal TLM state. For each (r, m, w) entry and
// initial photon k, block c = k + m evolves row k and the photon number is
// read out:  sum_nu photon(nu) |G_nu|^2,  G_nu = sum_j A(nu,j) A(k,j) e^{-i q_j tau}.
inline ObservableSeries ee_general(int N, double beta, const PhotonDensity& density,
                                   const TLMInitialState& state, const std::vector<double>& taus,
                                   int threads = 1) {
    if (N < 1) throw std::invalid_argument("ee_general: N must be >= 1");
    check_grid(taus);
    struct Job {
        int r2, c2, k;
        double w;
    };
    std::vector<Job> jobs;  // entry-major, then ascending k: fixed reduction order
    for (const auto& e : state.entries) {
        if (e.weight == 0.0) continue;
        for (int k = 0; k <= density.n_trunc(); ++k) {
            if (density.diag[k] == 0.0) continue;
            jobs.push_back({e.r2, 2 * k + e.m2, k, e.weight * density.diag[k]});
        }
    }
    detail::SeriesSlots slots;
    slots.init(static_cast<int>(jobs.size()), taus.size(), false);
    auto& cache = global_block_cache();
    detail::run_slots(static_cast<int>(jobs.size()), threads, [&](int i) {
        const Job& job = jobs[i];
        auto es = cache.get(job.r2, job.c2, beta);
        const int d = es->dim();
        const int kloc = job.k - es->block.n_min;
        std::vector<std::complex<double>> phase(d);
        std::vector<std::complex<double>> G(d);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double tau = taus[t];
            for (int j = 0; j < d; ++j)
                phase[j] = std::complex<double>(std::cos(es->q[j] * tau), -std::sin(es->q[j] * tau));
            double acc = 0.0;
            for (int nu = 0; nu < d; ++nu) {
                std::complex<double> g(0.0, 0.0);
                for (int j = 0; j < d; ++j) g += es->A(nu, j) * es->A(kloc, j) * phase[j];
                acc += double(es->block.n_min + nu) * std::norm(g);
            }
            slots.re[i][t] = job.w * acc;
        }
    });
    return slots.reduce(taus, ObservableKind::ee);
}

// ---------------------------------------------------------- time averages

// Infinite-time means, computed analytically: sin^2 -> 1/2 and oscillatory
// cross terms -> 0 (block eigenvalues are simple).

inline double stationary_mean_s1(int N, double beta, const PhotonDensity& density) {
    if (N < 1) throw std::invalid_argument("stationary_mean_s1: N must be >= 1");
    auto& cache = global_block_cache();
    KahanSum acc;
    for (int n = 0; n <= density.n_trunc(); ++n) {
        if (density.diag[n] == 0.0) continue;
        auto es = cache.get(N, 2 * n + N, beta);
        acc.add(density.diag[n] * detail::gain_pairs_stationary(*es, 0, +1));
    }
    return acc.value();
}

inline double stationary_mean_s4(int N, double beta, const PhotonDensity& density) {
    if (N < 1) throw std::invalid_argument("stationary_mean_s4: N must be >= 1");
    auto& cache = global_block_cache();
    KahanSum acc;
    for (int n = 1; n <= density.n_trunc(); ++n) {
        if (density.diag[n] == 0.0) continue;
        auto es = cache.get(N, 2 * n - N, beta);
        acc.add(density.diag[n] * detail::gain_pairs_stationary(*es, es->dim() - 1, -1));
    }
    return acc.value();
}

inline double stationary_mean_ee(int N, double beta, const PhotonDensity& density,
                                 const TLMInitialState& state) {
    if (N < 1) throw std::invalid_argument("stationary_mean_ee: N must be >= 1");
    auto& cache = global_block_cache();
    KahanSum acc;
    for (const auto& e : state.entries) {
        if (e.weight == 0.0) continue;
        for (int k = 0; k <= density.n_trunc(); ++k) {
            if (density.diag[k] == 0.0) continue;
            auto es = cache.get(e.r2, 2 * k + e.m2, beta);
            const int d = es->dim();
            const int kloc = k - es->block.n_min;
            double s = 0.0;  // only diagonal j = j' terms survive the average
            for (int j = 0; j < d; ++j) {
                double nsum = 0.0;
                for (int nu = 0; nu < d; ++nu)
                    nsum += double(es->block.n_min + nu) * es->A(nu, j) * es->A(nu, j);
                s += es->A(kloc, j) * es->A(kloc, j) * nsum;
            }
            acc.add(e.weight * density.diag[k] * s);
        }
    }
    return acc.value();
}

// Quadratic short-time coefficient lim_{tau->0} S/tau^2, eliminating the
// tau^4 correction from the first two samples (Richardson step).
inline double short_time_rate(const ObservableSeries& series) {
    if (series.is_complex())
        throw std::invalid_argument("short_time_rate: real-valued series only");
    double t1 = 0.0, v1 = 0.0, t2 = 0.0, v2 = 0.0;
    int have = 0;
    for (std::size_t i = 0; i < series.tau.size() && have < 2; ++i) {
        if (series.tau[i] <= 0.0) continue;
        if (have == 0) {
            t1 = series.tau[i];
            v1 = series.re[i];
        } else {
            t2 = series.tau[i];
            v2 = series.re[i];
        }
        ++have;
    }
    if (have < 2 || t1 > 1e-3 + 1e-15)
        throw std::invalid_argument("short_time_rate: series not sampled near zero (need two samples at tau <= 1e-3)");
    const double r1 = v1 / (t1 * t1), r2 = v2 / (t2 * t2);
    return (r1 * t2 * t2 - r2 * t1 * t1) / (t2 * t2 - t1 * t1);
}

}  // namespace tcm

#endif  // TCM_DYNAMICS_HPP
