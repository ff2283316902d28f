#ifndef TCM_SPECTRAL_HPP
#define TCM_SPECTRAL_HPP

// Per-block symmetric tridiagonal eigenproblems.
//
// Within a block (r, c) the dimensionless interaction matrix over photon rows
// n = n_min..n_max is
//   diag(n)        = -n * beta
//   off(n -> n+1)  = sqrt(n+1) * sqrt((r+m)(r-m+1)),  m = c - n
// Eigenvalues q are returned in descending order; eigenvector columns are
// sign-fixed so their first nonzero component is positive. Every observable
// uses eigenvectors an even number of times, so the fix is cosmetic — see the
// sign-invariance test in dynamics.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "tcm/core.hpp"

namespace tcm {

struct SymTridiag {
    std::vector<double> diag, off;  // off.size() == diag.size() - 1
};

inline SymTridiag build_block_matrix(const DickeBlock& b, double beta) {
    SymTridiag t;
    const int d = b.dim();
    t.diag.resize(d);
    t.off.resize(d > 0 ? d - 1 : 0);
    for (int i = 0; i < d; ++i) {
        const double n = b.n_min + i;
        t.diag[i] = -n * beta;
        if (i + 1 < d) {
            const double m = b.c() - n;
            t.off[i] = std::sqrt(n + 1.0) * std::sqrt((b.r() + m) * (b.r() - m + 1.0));
        }
    }
    return t;
}

struct BlockEigensystem {
    DickeBlock block;
    double beta = 0.0;
    Eigen::VectorXd q;  // descending
    Eigen::MatrixXd A;  // columns are eigenvectors, rows are photon offsets p = n - n_min
    int dim() const { return static_cast<int>(q.size()); }
};

inline BlockEigensystem eigendecompose(const SymTridiag& t, const DickeBlock& b, double beta) {
    const int d = static_cast<int>(t.diag.size());
    Eigen::VectorXd dv = Eigen::Map<const Eigen::VectorXd>(t.diag.data(), d);
    Eigen::VectorXd ov = d > 1 ? Eigen::Map<const Eigen::VectorXd>(t.off.data(), d - 1)
                               : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(dv, ov, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigensolve failed for block r2=" + std::to_string(b.r2) +
                              " c2=" + std::to_string(b.c2));
    BlockEigensystem out;
    out.block = b;
    out.beta = beta;
    out.q.resize(d);
    out.A.resize(d, d);
    for (int j = 0; j < d; ++j) {  // ascending -> descending
        out.q[j] = es.eigenvalues()[d - 1 - j];
        out.A.col(j) = es.eigenvectors().col(d - 1 - j);
        for (int i = 0; i < d; ++i) {
            if (out.A(i, j) != 0.0) {
                if (out.A(i, j) < 0.0) out.A.col(j) = -out.A.col(j);
                break;
            }
        }
    }
    return out;
}

inline BlockEigensystem solve_block(int r2, int c2, double beta) {
    const DickeBlock b = block_for(r2, c2);
    return eigendecompose(build_block_matrix(b, beta), b, beta);
}

// Residual diagnostics. beta0_* entries are only defined on resonance and are
// returned as NaN otherwise.
struct BlockReport {
    double ortho = 0.0;           // max |A^T A - I|
    double resid = 0.0;           // max |T A - A diag(q)|
    double beta0_symmetry = 0.0;  // max |q_j + q_{d-1-j}|
    double beta0_parity = 0.0;    // mirror columns alternate sign row-wise, up to column sign
};

inline BlockReport verify_block(const BlockEigensystem& es) {
    const int d = es.dim();
    BlockReport rep;
    rep.ortho = (es.A.transpose() * es.A - Eigen::MatrixXd::Identity(d, d))
                    .cwiseAbs()
                    .maxCoeff();
    const SymTridiag t = build_block_matrix(es.block, es.beta);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        T(i, i) = t.diag[i];
        if (i + 1 < d) T(i, i + 1) = T(i + 1, i) = t.off[i];
    }
    rep.resid = (T * es.A - es.A * es.q.asDiagonal()).cwiseAbs().maxCoeff();
    if (es.beta == 0.0) {
        rep.beta0_symmetry = 0.0;
        for (int j = 0; j < d; ++j)
            rep.beta0_symmetry = std::max(rep.beta0_symmetry, std::abs(es.q[j] + es.q[d - 1 - j]));
        rep.beta0_parity = 0.0;
        for (int j = 0; j < d; ++j) {
            double e_plus = 0.0, e_minus = 0.0;
            for (int k = 0; k < d; ++k) {
                const double alt = (k % 2 == 0) ? es.A(k, j) : -es.A(k, j);
                e_plus = std::max(e_plus, std::abs(es.A(k, d - 1 - j) - alt));
                e_minus = std::max(e_minus, std::abs(es.A(k, d - 1 - j) + alt));
            }
            rep.beta0_parity = std::max(rep.beta0_parity, std::min(e_plus, e_minus));
        }
    } else {
        rep.beta0_symmetry = std::numeric_limits<double>::quiet_NaN();
        rep.beta0_parity = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

// Shared cache of solved blocks, keyed by (r, c, beta). Blocks are immutable
// once published; concurrent readers share them freely.
class BlockCache {
public:
    std::shared_ptr<const BlockEigensystem> get(int r2, int c2, double beta) {
        const Key key{r2, c2, std::bit_cast<std::uint64_t>(beta)};
        {
            std::shared_lock lk(mu_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        auto fresh = std::make_shared<const BlockEigensystem>(solve_block(r2, c2, beta));
        std::unique_lock lk(mu_);
        auto [it, inserted] = map_.try_emplace(key, std::move(fresh));
        return it->second;  // on a race the first insert wins; both are bit-identical
    }

    std::size_t size() const {
        std::shared_lock lk(mu_);
        return map_.size();
    }

    void clear() {
        std::unique_lock lk(mu_);
        map_.clear();
    }

private:
    struct Key {
        int r2, c2;
        std::uint64_t beta_bits;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = k.beta_bits;
            h ^= (std::uint64_t(std::uint32_t(k.r2)) << 32) | std::uint32_t(k.c2);
            h *= 0x9e3779b97f4a7c15ull;  // splitmix-style scramble
            h ^= h >> 29;
            return static_cast<std::size_t>(h);
        }
    };
    mutable std::shared_mutex mu_;
    std::unordered_map<Key, std::shared_ptr<const BlockEigensystem>, KeyHash> map_;
};

inline BlockCache& global_block_cache() {
    static BlockCache cache;
    return cache;
}

}  // namespace tcm

#endif  // TCM_SPECTRAL_HPP
