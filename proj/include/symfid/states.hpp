#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "binomial.hpp"
#include "errors.hpp"

namespace symfid {

using cplx = std::complex<double>;

inline constexpr int dense_qubit_cap = 24;

// Single-qubit pure state, normalized on construction.
struct Qubit {
    cplx a0, a1;

    Qubit(cplx amp0, cplx amp1) : a0(amp0), a1(amp1) {
        double nrm = std::sqrt(std::norm(a0) + std::norm(a1));
        if (nrm < 1e-300) throw domain_error("Qubit: zero norm");
        a0 /= nrm;
        a1 /= nrm;
    }

    // sqrt(1-x^2)|0> + x e^{i phi}|1>, x in [0,1]
    static Qubit bloch(double x, double phi) {
        if (!(x >= 0.0 && x <= 1.0)) throw domain_error("Qubit::bloch: x outside [0,1]");
        return Qubit(std::sqrt(1.0 - x * x), x * std::polar(1.0, phi));
    }

    static Qubit zero() { return Qubit(1.0, 0.0); }
    static Qubit one() { return Qubit(0.0, 1.0); }
};

// |<a|b>|^2 for single qubits; equals the (a + b y) combination of the objective.
inline double qubit_overlap_sq(const Qubit& a, const Qubit& b) {
    return std::norm(std::conj(a.a0) * b.a0 + std::conj(a.a1) * b.a1);
}

// Permutation-symmetric n-qubit state: n+1 amplitudes on the Dicke basis.
struct SymState {
    int n = 0;
    std::vector<cplx> coeffs; // coeffs[k] multiplies |D_n^(k)>

    SymState() = default;
    SymState(int n_, std::vector<cplx> c) : n(n_), coeffs(std::move(c)) {
        if (n < 1) throw domain_error("SymState: n >= 1 required");
        if (static_cast<int>(coeffs.size()) != n + 1)
            throw domain_error("SymState: need n+1 Dicke coefficients");
    }

    double norm() const {
        double s = 0.0;
        for (const cplx& c : coeffs) s += std::norm(c);
        return std::sqrt(s);
    }

    // Normalizes in place; returns the pre-normalization norm.
    double normalize() {
        double nrm = norm();
        if (nrm < 1e-300) throw undefined_state_error("SymState: normalizing a zero state");
        for (cplx& c : coeffs) c /= nrm;
        return nrm;
    }
};

inline SymState dicke(int n, int k) {
    if (n < 1 || k < 0 || k > n) throw domain_error("dicke: need 0 <= k <= n");
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx(0.0));
    c[static_cast<std::size_t>(k)] = 1.0;
    return SymState(n, std::move(c));
}

// Full 2^n statevector; bit i of the index is qubit i with qubit 0 most significant
// (so qubit n-1 is the least significant bit).
struct DenseState {
    int n = 0;
    std::vector<cplx> amps;

    DenseState() = default;
    explicit DenseState(int n_) : n(n_) {
        if (n < 1) throw domain_error("DenseState: n >= 1 required");
        if (n > dense_qubit_cap) throw capacity_error("DenseState: n > 24");
        amps.assign(std::size_t(1) << n, cplx(0.0));
    }
    DenseState(int n_, std::vector<cplx> a) : n(n_), amps(std::move(a)) {
        if (n < 1) throw domain_error("DenseState: n >= 1 required");
        if (n > dense_qubit_cap) throw capacity_error("DenseState: n > 24");
        if (amps.size() != (std::size_t(1) << n))
            throw domain_error("DenseState: need 2^n amplitudes");
    }

    double norm() const {
        double s = 0.0;
        for (const cplx& a : amps) s += std::norm(a);
        return std::sqrt(s);
    }

    double normalize() {
        double nrm = norm();
        if (nrm < 1e-300) throw undefined_state_error("DenseState: normalizing a zero state");
        for (cplx& a : amps) a /= nrm;
        return nrm;
    }
};

inline DenseState sym_to_dense(const SymState& s) {
    if (s.n > dense_qubit_cap) throw capacity_error("sym_to_dense: n > 24");
    DenseState d(s.n);
    std::vector<cplx> w(static_cast<std::size_t>(s.n) + 1);
    for (int k = 0; k <= s.n; ++k)
        w[static_cast<std::size_t>(k)] = s.coeffs[static_cast<std::size_t>(k)] / std::sqrt(binom(s.n, k));
    for (std::size_t idx = 0; idx < d.amps.size(); ++idx)
        d.amps[idx] = w[static_cast<std::size_t>(std::popcount(idx))];
    return d;
}

struct OverlapValue {
    cplx value;
    double fidelity; // |value|^2
};

inline OverlapValue make_overlap(cplx v) { return {v, std::norm(v)}; }

// integer power; std::pow on complex goes through exp(log(.)) and NaNs at 0^0
inline cplx ipow(cplx base, int e) {
    cplx r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

inline OverlapValue overlap(const SymState& a, const SymState& b) {
    if (a.n != b.n) throw domain_error("overlap: qubit count mismatch");
    cplx s = 0.0;
    for (int k = 0; k <= a.n; ++k)
        s += std::conj(a.coeffs[static_cast<std::size_t>(k)]) * b.coeffs[static_cast<std::size_t>(k)];
    return make_overlap(s);
}

inline OverlapValue overlap(const DenseState& a, const DenseState& b) {
    if (a.n != b.n) throw domain_error("overlap: qubit count mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return make_overlap(s);
}

inline OverlapValue overlap(const SymState& a, const DenseState& b) { return overlap(sym_to_dense(a), b); }
inline OverlapValue overlap(const DenseState& a, const SymState& b) { return overlap(a, sym_to_dense(b)); }

inline DenseState product_state(const std::vector<Qubit>& qs) {
    int n = static_cast<int>(qs.size());
    if (n < 1) throw domain_error("product_state: need at least one qubit");
    if (n > dense_qubit_cap) throw capacity_error("product_state: n > 24");
    DenseState d(n);
    d.amps[0] = 1.0;
    std::size_t sz = 1;
    for (int i = 0; i < n; ++i) { // append qubit i as the next less-significant bit
        for (std::size_t j = sz; j-- > 0;) {
            cplx v = d.amps[j];
            d.amps[2 * j + 1] = v * qs[static_cast<std::size_t>(i)].a1;
            d.amps[2 * j] = v * qs[static_cast<std::size_t>(i)].a0;
        }
        sz <<= 1;
    }
    return d;
}

// Dicke coefficients of the *unnormalized* symmetrization sum over the C(n,kp)
// arrangements of kp copies of |eps> and n-kp copies of |epsp>:
//   <D_n^m|Sigma> = C(n,kp) conv[m] / sqrt(C(n,m)),
// conv = coefficient convolution of (e0 z + e1)^kp and (ep0 z + ep1)^(n-kp).
// Independent of the closed-form normalization used elsewhere; the oracle relies on that.
inline std::vector<cplx> family_dicke_unnormalized(int n, int kp, const Qubit& eps, const Qubit& epsp) {
    if (n < 1 || kp < 0 || kp > n) throw domain_error("family_dicke: need 0 <= kp <= n");
    std::vector<cplx> pe(static_cast<std::size_t>(kp) + 1), pp(static_cast<std::size_t>(n - kp) + 1);
    for (int j = 0; j <= kp; ++j)
        pe[static_cast<std::size_t>(j)] =
            binom(kp, j) * ipow(eps.a1, j) * ipow(eps.a0, kp - j);
    for (int j = 0; j <= n - kp; ++j)
        pp[static_cast<std::size_t>(j)] =
            binom(n - kp, j) * ipow(epsp.a1, j) * ipow(epsp.a0, n - kp - j);
    std::vector<cplx> co(static_cast<std::size_t>(n) + 1, cplx(0.0));
    for (int j = 0; j <= kp; ++j)
        for (int l = 0; l <= n - kp; ++l)
            co[static_cast<std::size_t>(j + l)] += pe[static_cast<std::size_t>(j)] * pp[static_cast<std::size_t>(l)];
    for (int m = 0; m <= n; ++m)
        co[static_cast<std::size_t>(m)] *= binom(n, kp) / std::sqrt(binom(n, m));
    return co;
}

// Normalized symmetrized family state with kp copies of |eps| and n-kp of |epsp>;
// normalization via 1/N^2 = C_n^kp sum_j C_kp^j C_{n-kp}^j s^j with s = |<eps|epsp>|^2.
inline DenseState symmetric_family_state(int n, int kp, const Qubit& eps, const Qubit& epsp) {
    if (n < 1 || kp < 0 || kp > n) throw domain_error("symmetric_family_state: need 0 <= kp <= n");
    if (n > dense_qubit_cap) throw capacity_error("symmetric_family_state: n > 24");
    double s = qubit_overlap_sq(eps, epsp);
    if (std::sqrt(s) > 1.0 - 1e-9)
        throw degenerate_family_error("symmetric_family_state: |eps> and |epsp> collinear");
    double denom = 0.0;
    for (int j = kp; j >= 0; --j) denom = denom * s + binom(kp, j) * binom(n - kp, j);
    double norm_const = 1.0 / std::sqrt(binom(n, kp) * denom);
    std::vector<cplx> co = family_dicke_unnormalized(n, kp, eps, epsp);
    for (cplx& c : co) c *= norm_const;
    return sym_to_dense(SymState(n, std::move(co)));
}

} // namespace symfid
