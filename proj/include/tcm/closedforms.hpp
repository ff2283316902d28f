#ifndef TCM_CLOSEDFORMS_HPP
#define TCM_CLOSEDFORMS_HPP

// Closed-form special cases of the exact evolution for small molecule
// numbers, kept in their reference groupings (no algebraic simplification) so
// that any transcription inconsistency shows up in the engine comparison
// instead of being masked. Ids are <observable>_n<N> plus a _nr suffix for
// the detuned (non-resonant) forms; spont_* are the vacuum-field emission
// curves and one_up/two_up the few-excited-molecule amplitudes.
//
// Known-inconsistent reference forms (kept verbatim; see the *_corrected,
// *_adjusted and *_derived functions and README for the working versions):
// s2_n2, s2_n3, s2_n1_nr, two_up, and s1_n4 (one frequency token plus the
// signs of three of its six terms).

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "tcm/dynamics.hpp"

namespace tcm {

enum class ClosedFormId {
    s1_n1,
    s2_n1,
    s1_n1_nr,
    s2_n1_nr,
    s1_n2,
    s2_n2,
    s1_n3,
    s2_n3,
    s1_n4,
    spont_n1,
    spont_n2,
    spont_n3,
    one_up_specified,
    one_up_dicke,
    two_up,
    s4_n1_nr,
    s4_n2,
    q_cubic_n2,
    eigvec_n2
};

inline const char* to_string(ClosedFormId id) {
    switch (id) {
        case ClosedFormId::s1_n1: return "s1_n1";
        case ClosedFormId::s2_n1: return "s2_n1";
        case ClosedFormId::s1_n1_nr: return "s1_n1_nr";
        case ClosedFormId::s2_n1_nr: return "s2_n1_nr";
        case ClosedFormId::s1_n2: return "s1_n2";
        case ClosedFormId::s2_n2: return "s2_n2";
        case ClosedFormId::s1_n3: return "s1_n3";
        case ClosedFormId::s2_n3: return "s2_n3";
        case ClosedFormId::s1_n4: return "s1_n4";
        case ClosedFormId::spont_n1: return "spont_n1";
        case ClosedFormId::spont_n2: return "spont_n2";
        case ClosedFormId::spont_n3: return "spont_n3";
        case ClosedFormId::one_up_specified: return "one_up_specified";
        case ClosedFormId::one_up_dicke: return "one_up_dicke";
        case ClosedFormId::two_up: return "two_up";
        case ClosedFormId::s4_n1_nr: return "s4_n1_nr";
        case ClosedFormId::s4_n2: return "s4_n2";
        case ClosedFormId::q_cubic_n2: return "q_cubic_n2";
        case ClosedFormId::eigvec_n2: return "eigvec_n2";
    }
    return "?";
}

inline std::optional<ClosedFormId> parse_closed_form(const std::string& s) {
    using Id = ClosedFormId;
    for (Id id : {Id::s1_n1, Id::s2_n1, Id::s1_n1_nr, Id::s2_n1_nr, Id::s1_n2, Id::s2_n2,
                  Id::s1_n3, Id::s2_n3, Id::s1_n4, Id::spont_n1, Id::spont_n2, Id::spont_n3,
                  Id::one_up_specified, Id::one_up_dicke, Id::two_up, Id::s4_n1_nr, Id::s4_n2,
                  Id::q_cubic_n2, Id::eigvec_n2})
        if (s == to_string(id)) return id;
    return std::nullopt;
}

// --------------------------------------------------------------- D-block aids

// Real-trigonometric roots of the depressed cubic for the two-molecule
// detuned block (y = 6 + 2n + beta^2, arg taken in (-pi, pi]); the shift
// -(n+1) beta is already applied. Returned in formula order, unsorted.
inline std::array<double, 3> q_cubic_n2(int n, double beta) {
    if (n < 0) throw std::invalid_argument("q_cubic_n2: n must be >= 0");
    const double y = 6.0 + 2.0 * n + beta * beta;
    const double disc = 108.0 * y * y * y - 2916.0 * beta * beta;
    const std::complex<double> z3(-54.0 * beta, std::sqrt(std::max(disc, 0.0)));
    const double phi = std::arg(z3) / 3.0;
    const double sy = std::sqrt(y);
    const double base = -(n + 1.0) * beta;
    return {base + 2.0 * sy * std::cos(phi) / std::sqrt(3.0),
            base - (sy / 3.0) * (std::sqrt(3.0) * std::cos(phi) - 3.0 * std::sin(phi)),
            base - (sy / 3.0) * (std::sqrt(3.0) * std::cos(phi) + 3.0 * std::sin(phi))};
}

// Normalized eigenvector of the two-molecule block (r = 1, photons n..n+2)
// for block eigenvalue q. Signed component reading; q must actually be an
// eigenvalue of that block or the residual check throws.
inline std::array<double, 3> eigvec_n2(double q, int n, double beta) {
    if (n < 0) throw std::invalid_argument("eigvec_n2: n must be >= 0");
    const double c1 = 2.0;
    const double c2 = std::sqrt(2.0) * (q + n * beta) / std::sqrt(n + 1.0);
    const double c3 =
        (-2.0 + q * (q + beta) + n * (-2.0 + beta * (2.0 * q + beta * (n + 1.0)))) /
        std::sqrt((n + 1.0) * (n + 2.0));
    const double nrm = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
    std::array<double, 3> v{c1 / nrm, c2 / nrm, c3 / nrm};
    const SymTridiag T = build_block_matrix(block_for(2, 2 * (n + 1)), beta);
    const double r0 = T.diag[0] * v[0] + T.off[0] * v[1] - q * v[0];
    const double r1 = T.off[0] * v[0] + T.diag[1] * v[1] + T.off[1] * v[2] - q * v[1];
    const double r2 = T.off[1] * v[1] + T.diag[2] * v[2] - q * v[2];
    const double resid = std::max({std::abs(r0), std::abs(r1), std::abs(r2)});
    if (resid > 1e-8 * (1.0 + std::abs(q)))
        throw numerical_error("eigvec_n2: q is not an eigenvalue of the (r=1, c=n+1) block");
    return v;
}

// ------------------------------------------------------------------- kernels

namespace detail {

inline ObservableSeries make_series(const std::vector<double>& taus, ObservableKind kind,
                                    bool complex_valued) {
    ObservableSeries out;
    out.kind = kind;
    out.tau = taus;
    out.re.assign(taus.size(), 0.0);
    if (complex_valued) out.im.assign(taus.size(), 0.0);
    return out;
}

inline void require_resonance(double beta, const char* id) {
    if (beta != 0.0)
        throw std::invalid_argument(std::string(id) + " is a resonance-only form (beta must be 0)");
}

inline void require_vacuum(const PhotonDensity& density, const char* id) {
    if (density.diag.size() != 1 || density.diag[0] != 1.0)
        throw std::invalid_argument(std::string(id) + " is defined for an initial vacuum field (fock:0)");
}

inline ObservableSeries cf_s1_n1(const PhotonDensity& density, const std::vector<double>& taus) {
    auto out = make_series(taus, ObservableKind::s1, false);
    for (std::size_t n = 0; n < density.diag.size(); ++n) {
        const double w = density.diag[n];
        if (w == 0.0) continue;
        const double f = std::sqrt(n + 1.0);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double s = std::sin(f * taus[t]);
            out.re[t] += w * s * s;
        }
    }
    return out;
}

inline ObservableSeries cf_s1_n2(const PhotonDensity& density, const std::vector<double>& taus) {
    auto out = make_series(taus, ObservableKind::s1, false);
    for (std::size_t nn = 0; nn < density.diag.size(); ++nn) {
        const double w = density.diag[nn];
        if (w == 0.0) continue;
        const double n = double(nn);
        const double f = std::sqrt(n + 1.5);
        const double den = (2.0 * n + 3.0) * (2.0 * n + 3.0);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double s1 = std::sin(f * taus[t]);
            const double s2 = std::sin(2.0 * f * taus[t]);
            out.re[t] += 8.0 * w * (s1 * s1 * (n + 1.0) * (n + 2.0) / den -
                                    s2 * s2 * (n + 1.0) / (8.0 * den));
        }
    }
    return out;
}

inline ObservableSeries cf_s1_n3(const PhotonDensity& density, const std::vector<double>& taus) {
    auto out = make_series(taus, ObservableKind::s1, false);
    for (std::size_t nn = 0; nn < density.diag.size(); ++nn) {
        const double w = density.diag[nn];
        if (w == 0.0) continue;
        const double n = double(nn);
        const double Q = 73.0 + 16.0 * n * (4.0 + n);
        const double R = std::sqrt(Q);
        const double wm = std::sqrt(10.0 + 5.0 * n - R);
        const double wp = std::sqrt(10.0 + 5.0 * n + R);
        const double root13 = std::sqrt((1.0 + n) * (3.0 + n));
        const double c1 = 3.0 * (2.0 + n) * (1.0 + n + root13) / Q;
        const double c2 = 3.0 * (1.0 + n) * (2.0 + n) * (8.0 + 4.0 * n + R) /
                          (2.0 * Q * (-7.0 - 2.0 * n + R));
        const double c3 = -3.0 * (2.0 + n) * (-1.0 - n + root13) / Q;
        const double c4 = 3.0 * (1.0 + n) * (2.0 + n) * (-8.0 - 4.0 * n + R) /
                          (2.0 * Q * (7.0 + 2.0 * n + R));
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double tau = taus[t];
            const double sA = std::sin(0.5 * (wm - wp) * tau);
            const double sB = std::sin(wm * tau);
            const double sC = std::sin(0.5 * (wm + wp) * tau);
            const double sD = std::sin(wp * tau);
            out.re[t] += 4.0 * w * (c1 * sA * sA + c2 * sB * sB + c3 * sC * sC + c4 * sD * sD);
        }
    }
    return out;
}

// The reference text of this form carries two defects: the third term's
// inner frequency reads "25 + 10 + 3R" where every sibling token is
// 25 + 10n +- 3R (the n factor is plainly dropped), and the third, fourth
// and fifth terms enter with the wrong sign. corrected=false evaluates the
// text verbatim; corrected=true applies both repairs, after which the form
// reproduces the exact engine to ~1e-13 for every density tried. The sign
// pattern was recovered by computing the true per-frequency amplitudes from
// the block eigensystem: the printed prefactors match them to 1e-12 in
// magnitude, term by term, with signs (+,+,-,-,-,+).
inline ObservableSeries cf_s1_n4(const PhotonDensity& density, const std::vector<double>& taus,
                                 bool corrected) {
    auto out = make_series(taus, ObservableKind::s1, false);
    for (std::size_t nn = 0; nn < density.diag.size(); ++nn) {
        const double w = density.diag[nn];
        if (w == 0.0) continue;
        const double n = double(nn);
        const double R = std::sqrt(33.0 + 4.0 * n * (5.0 + n));
        const double wm = std::sqrt(25.0 + 10.0 * n - 3.0 * R);
        const double wp = std::sqrt(corrected ? (25.0 + 10.0 * n + 3.0 * R) : (25.0 + 10.0 + 3.0 * R));
        const double D1 = (33.0 + 4.0 * n * (5.0 + n)) * (41.0 + 8.0 * n * (5.0 + n));
        const double Pm = 561.0 - 87.0 * R + n * (505.0 - 45.0 * R + 2.0 * n * (84.0 + 10.0 * n - 3.0 * R));
        const double Pp = 561.0 + 87.0 * R + n * (505.0 + 20.0 * n * n + 45.0 * R + 6.0 * n * (28.0 + R));
        const double S82 = std::sqrt(82.0 + 16.0 * n * (5.0 + n));
        const double c123 = (1.0 + n) * (2.0 + n) * (3.0 + n);
        const double g4 = (n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0);  // Gamma(5+n)/n!
        const double k41 = 41.0 + 8.0 * n * (5.0 + n);
        const double s = corrected ? -1.0 : 1.0;  // flips terms 3, 4, 5
        const double a1 = c123 * (10.0 + 4.0 * n + S82) / D1;
        const double a2 = 12.0 * c123 * (4.0 + n) * (1.0 + 2.0 * n + R) / (k41 * Pm);
        const double a3 = s * 12.0 * (-1.0 - 2.0 * n + R) * g4 / (k41 * Pp);
        const double a4 = s * 3.0 * c123 * (9.0 + R + n * (7.0 + 2.0 * n + R)) / (Pm * Pm);
        const double a5 = s * c123 * (-10.0 - 4.0 * n + S82) / D1;
        const double a6 = 3.0 * c123 * (-9.0 + R + n * (-7.0 - 2.0 * n + R)) / (Pp * Pp);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double tau = taus[t];
            auto sq = [](double x) { return x * x; };
            out.re[t] += 4.0 * w *
                         (a1 * sq(std::sin(0.5 * (wm - wp) * tau)) + a2 * sq(std::sin(0.5 * wm * tau)) +
                          a3 * sq(std::sin(0.5 * wp * tau)) + a4 * sq(std::sin(wm * tau)) +
                          a5 * sq(std::sin(0.5 * (wm + wp) * tau)) + a6 * sq(std::sin(wp * tau)));
        }
    }
    return out;
}

inline ObservableSeries cf_s1_n1_nr(const PhotonDensity& density, double beta,
                                    const std::vector<double>& taus) {
    const double D = 0.25 * beta * beta;
    auto out = make_series(taus, ObservableKind::s1, false);
    for (std::size_t n = 0; n < density.diag.size(); ++n) {
        const double w = density.diag[n];
        if (w == 0.0) continue;
        const double f = std::sqrt(n + 1.0 + D);
        const double amp = w * (n + 1.0) / (n + 1.0 + D);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double s = std::sin(f * taus[t]);
            out.re[t] += amp * s * s;
        }
    }
    return out;
}

inline ObservableSeries cf_s2_n1(const PhotonDensity& density, const std::vector<double>& taus) {
    auto out = make_series(taus, ObservableKind::s2, true);
    for (std::size_t n = 0; n < density.superdiag.size(); ++n) {
        const double w = density.superdiag[n];
        if (w == 0.0) continue;
        const double a = std::sqrt(n + 1.0), b = std::sqrt(n + 2.0);
        for (std::size_t t = 0; t < taus.size(); ++t)
            out.re[t] += w * (a * std::cos(a * taus[t]) * std::cos(b * taus[t]) +
                              b * std::sin(a * taus[t]) * std::sin(b * taus[t]));
    }
    return out;
}

// two-molecule resonant amplitude, reference grouping kept verbatim.
// Inconsistent with the exact engine (its tau = 0 value is 1.0035039...
// times the sum rule for a single superdiagonal element at n = 0); equals
// instead the alternative amplitude grouping in
// detail::s2_all_up_alt_grouping to machine precision.
inline ObservableSeries cf_s2_n2(const PhotonDensity& density, const std::vector<double>& taus) {
    auto out = make_series(taus, ObservableKind::s2, true);
    for (std::size_t nn = 0; nn < density.superdiag.size(); ++nn) {
        const double w = density.superdiag[nn];
        if (w == 0.0) continue;
        const double n = double(nn);
        const double f1 = std::sqrt(2.0) * std::sqrt(2.0 * n + 3.0);
        const double f2 = std::sqrt(2.0) * std::sqrt(2.0 * n + 5.0);
        const double u = std::sqrt(n + 1.0), v = std::sqrt(n + 3.0);
        const double pref = w * (n + 2.0) / ((2.0 * n + 3.0) * (2.0 * n + 5.0));
        const double g3 = (n + 3.0) * (u + (n + 1.0) * v / (n + 2.0));
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double c1 = std::cos(f1 * taus[t]), c2 = std::cos(f2 * taus[t]);
            const double s1 = std::sin(f1 * taus[t]), s2 = std::sin(f2 * taus[t]);
            const double g1 = ((n + 1.0) * u + (n + 2.0) * v) * c1 * c2;
            const double g2 = ((n + 1.0) * v - (n + 3.0) * u) * (c1 + c2);
            const double g4 = (2.0 * n + 3.0) * std::sqrt(n + 2.0) * s1 * s2;
            out.re[t] += pref * (g1 + g2 + g3 + g4);
        }
    }
    return out;
}

// three-molecule resonant amplitude, reference grouping kept verbatim;
// same alt-grouping family as cf_s2_n2 (tau = 0 value 1.0038591...).
inline ObservableSeries cf_s2_n3(const PhotonDensity& density, const std::vector<double>& taus) {
    auto out = make_series(taus, ObservableKind::s2, true);
    for (std::size_t nn = 0; nn < density.superdiag.size(); ++nn) {
        const double w = density.superdiag[nn];
        if (w == 0.0) continue;
        const double n = double(nn);
        const double R1 = std::sqrt(73.0 + 16.0 * n * (4.0 + n));
        const double R2 = std::sqrt(153.0 + 96.0 * n + 16.0 * n * n);
        const double fam = std::sqrt(10.0 + 5.0 * n - R1);
        const double fap = std::sqrt(10.0 + 5.0 * n + R1);
        const double fbm = std::sqrt(15.0 + 5.0 * n - R2);
        const double fbp = std::sqrt(15.0 + 5.0 * n + R2);
        const double u = std::sqrt(1.0 + n), wq = std::sqrt(3.0 + n);
        const double s = std::sqrt(2.0 + n), tt = std::sqrt(4.0 + n);
        const double pref =
            w / (4.0 * std::sqrt((73.0 + 64.0 * n + 16.0 * n * n) * (153.0 + 96.0 * n + 16.0 * n * n)));
        const double kap = (2.0 + n) * (-(1.0 + n) * wq + u * (3.0 + n));
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double tau = taus[t];
            const double cam = std::cos(fam * tau), cap = std::cos(fap * tau);
            const double cbm = std::cos(fbm * tau), cbp = std::cos(fbp * tau);
            const double sam = std::sin(fam * tau), sap = std::sin(fap * tau);
            const double sbm = std::sin(fbm * tau), sbp = std::sin(fbp * tau);
            const double T1 = ((7.0 + 2.0 * n) * (u - wq) + (u + wq) * R1) * (9.0 + 2.0 * n + R2) * cam * cbm;
            const double T2 = -12.0 * kap * cbp * cam;
            const double T3 =
                (-12.0 * kap * cbm +
                 ((7.0 + 2.0 * n) * (u - wq) - (u + wq) * R1) * (9.0 + 2.0 * n - R2) * cbp) *
                cap;
            const double U1 = ((1.0 + 2.0 * n) * (-s + tt) + (s + tt) * R1) * (9.0 + 2.0 * n + R2) * sbm * sam;
            const double U2 = 12.0 * (2.0 + n) * (3.0 + n) * (s - tt) * sbp * sam;
            const double U3 =
                (12.0 * (2.0 + n) * (3.0 + n) * (s - tt) * sbm +
                 ((1.0 + 2.0 * n) * (-s + tt) - (s + tt) * R1) * (9.0 + 2.0 * n - R2) * sbp) *
                sap;
            out.re[t] += pref * (T1 + T2 + T3 + U1 + U2 + U3);
        }
    }
    return out;
}

// one-molecule detuned amplitude, reference text kept verbatim (complex).
// Inconsistent: at tau = 0 it does not satisfy the sqrt(n+1) sum rule.
// cf_s2_n1_nr_derived below is the corrected form, which does match the
// engine to machine precision.
inline ObservableSeries cf_s2_n1_nr(const PhotonDensity& density, double beta,
                                    const std::vector<double>& taus) {
    const double D = 0.25 * beta * beta;
    const double sD = std::sqrt(D);
    auto out = make_series(taus, ObservableKind::s2, true);
    for (std::size_t nn = 0; nn < density.superdiag.size(); ++nn) {
        const double w = density.superdiag[nn];
        if (w == 0.0) continue;
        const double n = double(nn);
        const double u = std::sqrt(1.0 + n), v = std::sqrt(2.0 + n);
        const double w1 = std::sqrt(n + 1.0 + D), w2 = std::sqrt(n + 2.0 + D);
        const double pref = w / (4.0 * w1 * w2);
        const double k1 = -(((-u + v) * sD + u * w1 + v * w1) * (sD - w2));
        const double k2 = ((u - v) * sD + u * w1 + v * w1) * (sD + w2);
        const double k3 = 8.0 * v * (1.0 + n - std::sqrt(2.0 + 3.0 * n + n * n));
        const double k4 = 2.0 * sD * (u * w1 + v * w1 + u * w2 - v * w2);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double cm = std::cos((w1 - w2) * taus[t]);
            const double cp = std::cos((w1 + w2) * taus[t]);
            const double sm = std::sin((w1 - w2) * taus[t]);
            out.re[t] += pref * ((k1 + k2) * cm + k3 * cp);
            out.im[t] += pref * k4 * sm;
        }
    }
    return out;
}

inline ObservableSeries cf_s2_n1_nr_derived(const PhotonDensity& density, double beta,
                                            const std::vector<double>& taus) {
    const double D = 0.25 * beta * beta;
    auto out = make_series(taus, ObservableKind::s2, true);
    for (std::size_t nn = 0; nn < density.superdiag.size(); ++nn) {
        const double w = density.superdiag[nn];
        if (w == 0.0) continue;
        const double n = double(nn);
        const double u = std::sqrt(n + 1.0);
        const double w1 = std::sqrt(n + 1.0 + D), w2 = std::sqrt(n + 2.0 + D);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double cm = std::cos((w1 - w2) * taus[t]);
            const double cp = std::cos((w1 + w2) * taus[t]);
            const double sm = std::sin((w1 - w2) * taus[t]);
            const double sp = std::sin((w1 + w2) * taus[t]);
            out.re[t] += w * u * ((w1 + w2) * cm + (w1 - w2) * cp) / (2.0 * w1);
            out.im[t] += w * u * beta * ((w1 + w2) * sm - (w1 - w2) * sp) / (4.0 * w1 * w2);
        }
    }
    return out;
}

inline ObservableSeries cf_s4_n1_nr(const PhotonDensity& density, double beta,
                                    const std::vector<double>& taus) {
    const double D = 0.25 * beta * beta;
    auto out = make_series(taus, ObservableKind::s4, false);
    for (std::size_t n = 1; n < density.diag.size(); ++n) {
        const double w = density.diag[n];
        if (w == 0.0) continue;
        const double f = std::sqrt(n + D);
        const double amp = w * double(n) / (n + D);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double s = std::sin(f * taus[t]);
            out.re[t] += amp * s * s;
        }
    }
    return out;
}

inline ObservableSeries cf_s4_n2(const PhotonDensity& density, const std::vector<double>& taus) {
    auto out = make_series(taus, ObservableKind::s4, false);
    if (density.diag.size() > 1 && density.diag[1] != 0.0) {
        const double w = density.diag[1];
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double s = std::sin(std::sqrt(2.0) * taus[t]);
            out.re[t] += w * s * s;
        }
    }
    for (std::size_t nn = 2; nn < density.diag.size(); ++nn) {
        const double w = density.diag[nn];
        if (w == 0.0) continue;
        const double n = double(nn);
        const double f = std::sqrt(n - 0.5);
        const double den = (2.0 * n - 1.0) * (2.0 * n - 1.0);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const double s1 = std::sin(f * taus[t]);
            const double s2 = std::sin(2.0 * f * taus[t]);
            out.re[t] += 8.0 * w * (s1 * s1 * n * (n - 1.0) / den + n / (8.0 * den) * s2 * s2);
        }
    }
    return out;
}

inline ObservableSeries cf_spont(int N, const std::vector<double>& taus) {
    auto out = make_series(taus, ObservableKind::s1, false);
    switch (N) {
        case 1:
            for (std::size_t t = 0; t < taus.size(); ++t) {
                const double s = std::sin(taus[t]);
                out.re[t] = s * s;
            }
            break;
        case 2: {
            const double f = std::sqrt(1.5);
            for (std::size_t t = 0; t < taus.size(); ++t) {
                const double s1 = std::sin(f * taus[t]);
                const double s2 = std::sin(2.0 * f * taus[t]);
                out.re[t] = 8.0 * ((2.0 / 9.0) * s1 * s1 - (1.0 / 72.0) * s2 * s2);
            }
            break;
        }
        case 3: {
            const double r73 = std::sqrt(73.0);
            const double rm = std::sqrt(10.0 - r73), rp = std::sqrt(10.0 + r73);
            const double r3 = std::sqrt(3.0);
            for (std::size_t t = 0; t < taus.size(); ++t) {
                const double tau = taus[t];
                auto sq = [](double x) { return x * x; };
                out.re[t] = (12.0 / 73.0) *
                            (2.0 * (1.0 + r3) * sq(std::sin(0.5 * (rm - rp) * tau)) -
                             2.0 * (-1.0 + r3) * sq(std::sin(0.5 * (rm + rp) * tau)) +
                             (8.0 + r73) * sq(std::sin(rm * tau)) / (-7.0 + r73) +
                             (-8.0 + r73) * sq(std::sin(rp * tau)) / (7.0 + r73));
            }
            break;
        }
        default:
            throw std::invalid_argument("spont closed forms exist for N = 1, 2, 3 only");
    }
    return out;
}

inline ObservableSeries cf_one_up(int N, const std::vector<double>& taus, bool dicke) {
    if (N < 1) throw std::invalid_argument("one_up closed form: N must be >= 1");
    auto out = make_series(taus, ObservableKind::ee, false);
    const double f = std::sqrt(double(N));
    const double amp = dicke ? 1.0 : 1.0 / N;
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const double s = std::sin(f * taus[t]);
        out.re[t] = amp * s * s;
    }
    return out;
}

// freq2 is the frequency of the residual single-photon term. The reference
// expression has sqrt(N-1); the exact engine oscillates at sqrt(N-2) (the
// r = N/2 - 1 block frequency), so the verbatim form fails the engine
// comparison and cf_two_up_adjusted passes it.
inline ObservableSeries cf_two_up(int N, const std::vector<double>& taus, double freq2) {
    if (N < 3) throw std::invalid_argument("two_up closed form: N must be >= 3");
    auto out = make_series(taus, ObservableKind::ee, false);
    const double f1 = std::sqrt(2.0 * N - 1.0) / std::sqrt(2.0);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const double sx = std::sin(f1 * taus[t]);
        const double s2 = std::sin(freq2 * taus[t]);
        out.re[t] = 8.0 / (N * (2.0 * N - 1.0)) * sx * sx * (1.0 + sx * sx / (2.0 * N - 1.0)) +
                    2.0 / N * s2 * s2;
    }
    return out;
}

}  // namespace detail

// ------------------------------------------------------------------ dispatch

// Both repairs of the four-molecule form (frequency token and term signs);
// matches the exact engine to ~1e-13. eval_closed(s1_n4) stays verbatim.
inline ObservableSeries eval_s1_n4_corrected(const PhotonDensity& density,
                                             const std::vector<double>& taus) {
    check_grid(taus);
    return detail::cf_s1_n4(density, taus, true);
}

inline ObservableSeries eval_s2_n1_nr_derived(const PhotonDensity& density, double beta,
                                              const std::vector<double>& taus) {
    check_grid(taus);
    return detail::cf_s2_n1_nr_derived(density, beta, taus);
}

inline ObservableSeries eval_two_up_adjusted(int N, const std::vector<double>& taus) {
    check_grid(taus);
    return detail::cf_two_up(N, taus, std::sqrt(N - 2.0));
}

// N is only consulted by the one_up/two_up forms (their molecule count is not
// implied by the id); pass 0 otherwise.
inline ObservableSeries eval_closed(ClosedFormId id, const PhotonDensity& density, double beta,
                                    const std::vector<double>& taus, int N = 0) {
    check_grid(taus);
    using Id = ClosedFormId;
    switch (id) {
        case Id::s1_n1:
            detail::require_resonance(beta, "s1_n1");
            return detail::cf_s1_n1(density, taus);
        case Id::s1_n2:
            detail::require_resonance(beta, "s1_n2");
            return detail::cf_s1_n2(density, taus);
        case Id::s1_n3:
            detail::require_resonance(beta, "s1_n3");
            return detail::cf_s1_n3(density, taus);
        case Id::s1_n4:
            detail::require_resonance(beta, "s1_n4");
            return detail::cf_s1_n4(density, taus, false);
        case Id::s1_n1_nr:
            return detail::cf_s1_n1_nr(density, beta, taus);
        case Id::s2_n1:
            detail::require_resonance(beta, "s2_n1");
            return detail::cf_s2_n1(density, taus);
        case Id::s2_n2:
            detail::require_resonance(beta, "s2_n2");
            return detail::cf_s2_n2(density, taus);
        case Id::s2_n3:
            detail::require_resonance(beta, "s2_n3");
            return detail::cf_s2_n3(density, taus);
        case Id::s2_n1_nr:
            return detail::cf_s2_n1_nr(density, beta, taus);
        case Id::s4_n1_nr:
            return detail::cf_s4_n1_nr(density, beta, taus);
        case Id::s4_n2:
            detail::require_resonance(beta, "s4_n2");
            return detail::cf_s4_n2(density, taus);
        case Id::spont_n1:
        case Id::spont_n2:
        case Id::spont_n3: {
            detail::require_resonance(beta, "spont");
            detail::require_vacuum(density, "spont");
            const int nmol = id == Id::spont_n1 ? 1 : id == Id::spont_n2 ? 2 : 3;
            return detail::cf_spont(nmol, taus);
        }
        case Id::one_up_specified:
        case Id::one_up_dicke:
            detail::require_resonance(beta, "one_up");
            detail::require_vacuum(density, "one_up");
            return detail::cf_one_up(N, taus, id == Id::one_up_dicke);
        case Id::two_up:
            detail::require_resonance(beta, "two_up");
            detail::require_vacuum(density, "two_up");
            return detail::cf_two_up(N, taus, std::sqrt(N - 1.0));
        case Id::q_cubic_n2:
        case Id::eigvec_n2:
            throw std::invalid_argument(
                "q_cubic_n2/eigvec_n2 are not time series; call the dedicated functions");
    }
    throw std::invalid_argument("unknown closed-form id");
}

}  // namespace tcm

#endif  // TCM_CLOSEDFORMS_HPP
