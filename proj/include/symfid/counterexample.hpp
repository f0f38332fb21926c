#pragma once

#include <cmath>
#include <vector>

#include "binomial.hpp"
#include "errors.hpp"
#include "localops.hpp"
#include "states.hpp"

namespace symfid {

struct CoeffTriple {
    int j;
    double a, b, c;
};

// a_j = (C_{n-j-1}^{k-1} / C_{n-2}^{k-1}) sqrt(C_{n-1}^j / n)
// b_j = (n - j - k) sqrt((j+1)/(n-j-1))
// c_j = ((j - k) - n (j - 1)) / (n - 1)
inline CoeffTriple coeff_triple(int n, int k, int j) {
    if (n < 4) throw domain_error("coeff_triple: n >= 4 required");
    if (k < 2 || k > n - 2) throw domain_error("coeff_triple: need 2 <= k <= n-2");
    if (j < 1 || j > n - k) throw domain_error("coeff_triple: need 1 <= j <= n-k");
    double a = (binom(n - j - 1, k - 1) / binom(n - 2, k - 1)) *
               std::sqrt(binom(n - 1, j) / static_cast<double>(n));
    double b = (n - j - k) * std::sqrt(static_cast<double>(j + 1) / (n - j - 1));
    double c = (static_cast<double>(j - k) - static_cast<double>(n) * (j - 1)) / (n - 1);
    return {j, a, b, c};
}

namespace detail {

struct PsiEpsTerm {
    int j;
    double wb, wc; // weights of |D_{n-1}^{j+1}>|0> and |D_{n-1}^{j}>|1>
};

inline std::vector<PsiEpsTerm> psi_eps_terms(int n, int k, double eps) {
    std::vector<PsiEpsTerm> terms;
    terms.reserve(static_cast<std::size_t>(n - k));
    double p = 1.0;
    for (int j = 1; j <= n - k; ++j) {
        p *= -eps;
        CoeffTriple t = coeff_triple(n, k, j);
        terms.push_back({j, p * t.a * t.b, p * t.a * t.c});
    }
    return terms;
}

} // namespace detail

// perturbation psi_eps = sum_j (-eps)^j a_j (b_j |D_{n-1}^{j+1}>|0> + c_j |D_{n-1}^j>|1>)
inline DenseState psi_eps(int n, int k, double eps) {
    if (n > dense_qubit_cap) throw capacity_error("psi_eps: n exceeds dense capacity");
    auto terms = detail::psi_eps_terms(n, k, eps);
    // weights per popcount of the leading n-1 qubits, split by the last qubit
    std::vector<double> w0(static_cast<std::size_t>(n), 0.0), w1(static_cast<std::size_t>(n), 0.0);
    for (const auto& t : terms) {
        w0[static_cast<std::size_t>(t.j + 1)] += t.wb / std::sqrt(binom(n - 1, t.j + 1));
        w1[static_cast<std::size_t>(t.j)] += t.wc / std::sqrt(binom(n - 1, t.j));
    }
    DenseState out;
    out.n = n;
    out.amps.assign(std::size_t{1} << n, 0.0);
    const std::size_t subs = std::size_t{1} << (n - 1);
    for (std::size_t s = 0; s < subs; ++s) {
        int pc = std::popcount(s);
        out.amps[2 * s] = w0[static_cast<std::size_t>(pc)];
        out.amps[2 * s + 1] = w1[static_cast<std::size_t>(pc)];
    }
    return out;
}

// normalized |D_n^1> + psi_eps
inline DenseState psi_N_k(int n, int k, double eps) {
    if (std::abs(eps) < 1e-300) throw undefined_state_error("psi_N_k: eps = 0 gives the bare Dicke state");
    DenseState d = sym_to_dense(dicke(n, 1));
    DenseState p = psi_eps(n, k, eps);
    for (std::size_t i = 0; i < d.amps.size(); ++i) d.amps[i] += p.amps[i];
    double nn = 0.0;
    for (const cplx& a : d.amps) nn += std::norm(a);
    nn = std::sqrt(nn);
    if (nn < 1e-300) throw undefined_state_error("psi_N_k: vanishing norm");
    for (cplx& a : d.amps) a /= nn;
    return d;
}

// g = A(eps)^(n-1) x B_{n,k}(eps), B acting on the last qubit
inline std::vector<LocalOperator> g_ops(int n, int k, double eps) {
    std::vector<LocalOperator> ops(static_cast<std::size_t>(n), a_matrix(eps));
    ops.back() = b_matrix(n, k, eps);
    return ops;
}

struct EpsSweepRecord {
    double eps;
    double fidelity;      // |<D_n^1|psi_N_k(eps)>|^2
    double residual_norm; // || g|D_n^k> / prop - (|D_n^1> + psi_eps) ||
};

inline std::vector<EpsSweepRecord> eps_sweep(int n, int k, double eps_min, double eps_max, int points) {
    if (!(eps_min > 0.0 && eps_max > eps_min)) throw domain_error("eps_sweep: need 0 < eps_min < eps_max");
    if (points < 2) throw domain_error("eps_sweep: points >= 2");
    DenseState d1 = sym_to_dense(dicke(n, 1));
    DenseState dk = sym_to_dense(dicke(n, k));
    double alpha_n = binom(n, k) / static_cast<double>(n);
    double alpha_n1 = binom(n - 1, k) / static_cast<double>(n - 1);
    std::vector<EpsSweepRecord> out;
    out.reserve(static_cast<std::size_t>(points));
    double llo = std::log(eps_min), lhi = std::log(eps_max);
    for (int i = 0; i < points; ++i) {
        double eps = std::exp(llo + (lhi - llo) * i / (points - 1));
        DenseState st = psi_N_k(n, k, eps);
        double fid = overlap(d1, st).fidelity;

        AppliedDense g = apply_local(g_ops(n, k, eps), dk);
        double prop = eps * alpha_n1 / std::sqrt(alpha_n);
        DenseState expect = psi_eps(n, k, eps);
        for (std::size_t m = 0; m < expect.amps.size(); ++m) expect.amps[m] += d1.amps[m];
        double r2 = 0.0;
        for (std::size_t m = 0; m < expect.amps.size(); ++m)
            r2 += std::norm(g.state.amps[m] / prop - expect.amps[m]);
        out.push_back({eps, fid, std::sqrt(r2)});
    }
    return out;
}

struct GeneralizedTarget {
    DenseState target; // normalized h|D_n^1>
    DenseState state;  // normalized h|psi_N_k(eps)>
    double fidelity;
};

inline GeneralizedTarget generalized_target_sweep(const std::vector<LocalOperator>& h, int n, int k,
                                                  double eps) {
    if (static_cast<int>(h.size()) != n) throw domain_error("generalized_target_sweep: need n operators");
    for (const LocalOperator& op : h)
        if (!op.invertible()) throw domain_error("generalized_target_sweep: singular local operator");
    DenseState target = apply_local(h, sym_to_dense(dicke(n, 1))).normalized();
    DenseState state = apply_local(h, psi_N_k(n, k, eps)).normalized();
    double fid = overlap(target, state).fidelity;
    return {std::move(target), std::move(state), fid};
}

inline DenseState inverse_image_via_g(int n, int k, double eps) {
    std::vector<LocalOperator> inv;
    inv.reserve(static_cast<std::size_t>(n));
    for (const LocalOperator& op : g_ops(n, k, eps)) inv.push_back(op.inverse());
    return apply_local(inv, sym_to_dense(dicke(n, 1))).normalized();
}

// g^{-1}|D_n^1> up to normalization and modulus-one factors:
//   (n-2) k |1...1> + (n-3)(n-k) |1...10>
//   - |D_{n-1}^{n-2}> ( (n-2)(n-k)/sqrt(n-1) |0> + sqrt(n-1) k |1> )
inline DenseState inverse_image_state(int n, int k) {
    if (n < 4) throw domain_error("inverse_image_state: n >= 4 required");
    if (k < 2 || k > n - 2) throw domain_error("inverse_image_state: need 2 <= k <= n-2");
    if (n > dense_qubit_cap) throw capacity_error("inverse_image_state: n exceeds dense capacity");
    DenseState out;
    out.n = n;
    out.amps.assign(std::size_t{1} << n, 0.0);
    const std::size_t all1 = (std::size_t{1} << n) - 1;
    out.amps[all1] += static_cast<double>(n - 2) * k;
    out.amps[all1 - 1] += static_cast<double>(n - 3) * (n - k);
    double c0 = static_cast<double>(n - 2) * (n - k) / std::sqrt(static_cast<double>(n - 1));
    double c1 = std::sqrt(static_cast<double>(n - 1)) * k;
    double wsub = 1.0 / std::sqrt(static_cast<double>(n - 1)); // |D_{n-1}^{n-2}> amplitude
    const std::size_t subs = std::size_t{1} << (n - 1);
    for (std::size_t s = 0; s < subs; ++s) {
        if (std::popcount(s) != n - 2) continue;
        out.amps[2 * s] -= wsub * c0;
        out.amps[2 * s + 1] -= wsub * c1;
    }
    double nn = 0.0;
    for (const cplx& a : out.amps) nn += std::norm(a);
    nn = std::sqrt(nn);
    for (cplx& a : out.amps) a /= nn;

    // the closed form must agree with the operator construction at any eps
    for (double eps : {0.1, 0.7}) {
        cplx ov = overlap(out, inverse_image_via_g(n, k, eps)).value;
        if (std::abs(std::abs(ov) - 1.0) > 1e-10)
            throw error("inverse_image_state: mismatch against operator construction");
    }
    return out;
}

} // namespace symfid
