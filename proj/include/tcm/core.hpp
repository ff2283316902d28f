#ifndef TCM_CORE_HPP
#define TCM_CORE_HPP

// Block geometry and shared numeric plumbing for N two-level molecules (TLMs)
// coupled to a single field mode. The Hamiltonian conserves the cooperation
// number r and the total excitation c = n + m, so everything reduces to small
// symmetric tridiagonal blocks indexed by (r, c).
//
// Half-integer quantum numbers are carried as doubled integers (r2 = 2r,
// c2 = 2c) so lookups and cache keys stay exact.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcm {

// eigensolver failure, unreachable tolerance, ... (CLI exit code 2 family)
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

class truncation_error : public numerical_error {
public:
    explicit truncation_error(const std::string& what) : numerical_error(what) {}
};

// Dimensionless model parameters. Units: Omega = |kappa| = 1, tau = gamma*t.
// beta = (omega - Omega)/(Omega|kappa|); the detuning parameter is
// delta = beta^2/4.
struct ModelParams {
    int tlm_count = 1;  // N
    double beta = 0.0;
    double delta() const { return 0.25 * beta * beta; }
};

inline void validate(const ModelParams& mp) {
    if (mp.tlm_count < 1) throw std::invalid_argument("tlm_count must be >= 1");
    if (!std::isfinite(mp.beta)) throw std::invalid_argument("beta must be finite");
}

// Invariant subspace of fixed (r, c): photon numbers n in [max(0, c-r), c+r],
// with m = c - n running down from min(r, c + r) to -r or c - n_max.
struct DickeBlock {
    int r2 = 0, c2 = 0;  // doubled half-integers
    int n_min = 0, n_max = 0;
    int dim() const { return n_max - n_min + 1; }
    double r() const { return 0.5 * r2; }
    double c() const { return 0.5 * c2; }
};

inline DickeBlock block_for(int r2, int c2) {
    if (r2 < 0) throw std::invalid_argument("block_for: r must be >= 0");
    if (((r2 ^ c2) & 1) != 0)
        throw std::invalid_argument("block_for: c - r must be an integer");
    if (c2 < -r2) throw std::invalid_argument("block_for: c < -r has no states");
    DickeBlock b;
    b.r2 = r2;
    b.c2 = c2;
    b.n_min = std::max(0, (c2 - r2) / 2);
    b.n_max = (c2 + r2) / 2;
    return b;
}

// Multiplicity of cooperation number r among N TLMs:
//   P(r) = N!(2r+1) / [(N/2+r+1)!(N/2-r)!]
// Exact integer arithmetic for N <= 20, log-factorials above.
// Sum rule: sum_r (2r+1) P(r) = 2^N.
inline double degeneracy_weight(int N, int r2) {
    if (N < 1) throw std::invalid_argument("degeneracy_weight: N must be >= 1");
    if (r2 < 0 || r2 > N || ((N - r2) & 1))
        throw std::invalid_argument("degeneracy_weight: invalid (N, r)");
    const int kd = (N - r2) / 2;      // N/2 - r
    const int ku = (N + r2) / 2 + 1;  // N/2 + r + 1
    if (N <= 20) {
        unsigned long long binom = 1;  // C(N, kd); each partial quotient is integral
        for (int i = 1; i <= kd; ++i) binom = binom * (unsigned long long)(N - kd + i) / i;
        return double(binom) * double(r2 + 1) / double(ku);
    }
    const double lg = std::lgamma(N + 1.0) - std::lgamma(ku + 1.0) - std::lgamma(kd + 1.0);
    return double(r2 + 1) * std::exp(lg);
}

// Compensated accumulator; reductions over n use this in ascending order so
// results are bit-identical regardless of how the work was parallelized.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

}  // namespace tcm

#endif  // TCM_CORE_HPP
