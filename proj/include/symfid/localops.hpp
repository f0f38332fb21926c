#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "states.hpp"

namespace symfid {

struct LocalOperator {
    cplx m00, m01, m10, m11; // row-major 2x2

    cplx det() const { return m00 * m11 - m01 * m10; }
    bool invertible() const { return std::abs(det()) > 1e-12; }

    LocalOperator inverse() const {
        cplx d = det();
        if (std::abs(d) <= 1e-12) throw domain_error("LocalOperator: singular, no inverse");
        return {m11 / d, -m01 / d, -m10 / d, m00 / d};
    }

    // this * other (matrix product)
    LocalOperator compose(const LocalOperator& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }

    static LocalOperator identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

// A(eps) = [[1, 1], [-eps, 0]]; det = eps, singular at eps = 0
inline LocalOperator a_matrix(double eps) {
    return {1.0, 1.0, -eps, 0.0};
}

// B_{n,k}(eps) = [[1, 1-n/k], [eps, ((n-2)/(n-1))(1-n/k) eps]]
inline LocalOperator b_matrix(int n, int k, double eps) {
    if (k == 0) throw domain_error("b_matrix: k = 0 divides by zero");
    if (n < 3 || k < 1 || k > n - 1) throw domain_error("b_matrix: need n >= 3, 1 <= k <= n-1");
    double t = 1.0 - static_cast<double>(n) / k;
    return {1.0, t, eps, (static_cast<double>(n) - 2.0) / (static_cast<double>(n) - 1.0) * t * eps};
}

// Unnormalized image of a local-operator tensor product, with its norm kept explicit:
// SLOCC fidelities divide by this norm and silent normalization would hide that.
struct AppliedDense {
    DenseState state;
    double norm;

    DenseState normalized() const {
        DenseState d = state;
        d.normalize();
        return d;
    }
};

inline AppliedDense apply_local(const std::vector<LocalOperator>& ops, const DenseState& s) {
    if (static_cast<int>(ops.size()) != s.n)
        throw domain_error("apply_local: operator count != qubit count");
    DenseState out = s;
    for (int i = 0; i < s.n; ++i) {
        const LocalOperator& M = ops[static_cast<std::size_t>(i)];
        std::size_t bit = std::size_t(1) << (s.n - 1 - i); // qubit 0 most significant
        for (std::size_t idx = 0; idx < out.amps.size(); ++idx) {
            if (idx & bit) continue;
            cplx v0 = out.amps[idx];
            cplx v1 = out.amps[idx | bit];
            out.amps[idx] = M.m00 * v0 + M.m01 * v1;
            out.amps[idx | bit] = M.m10 * v0 + M.m11 * v1;
        }
    }
    double nrm = out.norm();
    return {std::move(out), nrm};
}

struct AppliedSym {
    SymState state;
    double norm;

    SymState normalized() const {
        SymState s = state;
        s.normalize();
        return s;
    }
};

// A(eps)^(x)n on a symmetric state, by linearity over Dicke components:
// on sqrt(C_n^k)|D_n^(k)> the image is C_n^k sum_j (-eps)^j (C_{n-k}^j / sqrt(C_n^j)) |D_n^(j)>.
inline AppliedSym apply_A_tensor_sym(double eps, const SymState& s) {
    int n = s.n;
    std::vector<cplx> out(static_cast<std::size_t>(n) + 1, cplx(0.0));
    for (int j = 0; j <= n; ++j) {
        double epow = 1.0;
        for (int t = 0; t < j; ++t) epow *= -eps;
        cplx acc = 0.0;
        for (int k = 0; k <= n - j; ++k) { // C_{n-k}^j vanishes for k > n-j
            const cplx& ck = s.coeffs[static_cast<std::size_t>(k)];
            if (ck == cplx(0.0)) continue;
            double w = std::exp(0.5 * log_binom(n, k) + log_binom(n - k, j) - 0.5 * log_binom(n, j));
            acc += ck * w;
        }
        out[static_cast<std::size_t>(j)] = epow * acc;
    }
    SymState st(n, std::move(out));
    double nrm = st.norm();
    return {std::move(st), nrm};
}

} // namespace symfid
