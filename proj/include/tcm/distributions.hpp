#ifndef TCM_DISTRIBUTIONS_HPP
#define TCM_DISTRIBUTIONS_HPP

// Initial photon densities. Only the diagonal <n|rho|n> and first
// superdiagonal <n|rho|n+1> ever enter the observables, so that is all we
// keep. Everything is truncated to finite n with a controlled tail mass.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tcm/core.hpp"

namespace tcm {

struct PhotonDensity {
    std::vector<double> diag;       // <n|rho|n>, n = 0..n_trunc
    std::vector<double> superdiag;  // <n|rho|n+1>, n = 0..n_trunc-1
    double nbar = 0.0;              // target mean of the untruncated state
    double tail_mass = 0.0;         // probability beyond n_trunc

    int n_trunc() const { return static_cast<int>(diag.size()) - 1; }
    double mean() const {
        KahanSum s;
        for (std::size_t n = 0; n < diag.size(); ++n) s.add(double(n) * diag[n]);
        return s.value();
    }
};

inline PhotonDensity fock(int n0) {
    if (n0 < 0) throw std::invalid_argument("fock: n0 must be >= 0");
    PhotonDensity d;
    d.diag.assign(n0 + 1, 0.0);
    d.diag[n0] = 1.0;
    d.superdiag.assign(n0 > 0 ? n0 : 0, 0.0);
    d.nbar = n0;
    d.tail_mass = 0.0;
    return d;
}

namespace detail {
// Truncation: never below nbar + 10*sqrt(nbar) + 25, then extend until the
// remaining tail is below tail_tol.
inline int truncation_floor(double nbar) {
    return static_cast<int>(std::ceil(nbar + 10.0 * std::sqrt(nbar) + 25.0));
}
}  // namespace detail

// diag[n] = e^{-nbar} nbar^n / n!
// superdiag[n] = e^{-nbar} nbar^{n+1/2} / sqrt(n!(n+1)!)  (= sqrt(diag[n] diag[n+1]);
// the coherent amplitude sqrt(nbar) is taken real positive, a global phase
// only rotates the complex phase of <E->)
inline PhotonDensity coherent(double nbar, double tail_tol = 1e-12) {
    if (nbar < 0.0) throw std::invalid_argument("coherent: nbar must be >= 0");
    if (tail_tol <= 0.0) throw std::invalid_argument("coherent: tail_tol must be > 0");
    PhotonDensity d;
    d.nbar = nbar;
    const int floor_n = detail::truncation_floor(nbar);
    double p = std::exp(-nbar);  // p_0
    KahanSum cum;
    for (int n = 0;; ++n) {
        d.diag.push_back(p);
        cum.add(p);
        if (n >= floor_n && 1.0 - cum.value() <= tail_tol) break;
        if (n > 2000000)
            throw truncation_error("coherent: tail tolerance unreachable at nbar=" +
                                   std::to_string(nbar));
        p *= nbar / (n + 1.0);
    }
    d.tail_mass = std::max(0.0, 1.0 - cum.value());
    d.superdiag.resize(d.diag.size() - 1);
    for (std::size_t n = 0; n + 1 < d.diag.size(); ++n)
        d.superdiag[n] = std::sqrt(d.diag[n] * d.diag[n + 1]);
    return d;
}

// diag[n] = (1/(1+nbar)) (nbar/(1+nbar))^n ; a diagonal state, superdiag = 0,
// so S2 vanishes identically downstream.
inline PhotonDensity thermal(double nbar, double tail_tol = 1e-12) {
    if (nbar < 0.0) throw std::invalid_argument("thermal: nbar must be >= 0");
    if (tail_tol <= 0.0) throw std::invalid_argument("thermal: tail_tol must be > 0");
    PhotonDensity d;
    d.nbar = nbar;
    const int floor_n = detail::truncation_floor(nbar);
    const double ratio = nbar / (1.0 + nbar);
    double p = 1.0 / (1.0 + nbar);
    KahanSum cum;
    for (int n = 0;; ++n) {
        d.diag.push_back(p);
        cum.add(p);
        if (n >= floor_n && 1.0 - cum.value() <= tail_tol) break;
        if (n > 2000000)
            throw truncation_error("thermal: tail tolerance unreachable at nbar=" +
                                   std::to_string(nbar));
        p *= ratio;
    }
    d.tail_mass = std::max(0.0, 1.0 - cum.value());
    d.superdiag.assign(d.diag.size() - 1, 0.0);
    return d;
}

}  // namespace tcm

#endif  // TCM_DISTRIBUTIONS_HPP
