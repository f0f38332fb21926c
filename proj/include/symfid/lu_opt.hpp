#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "binomial.hpp"
#include "errors.hpp"
#include "localops.hpp"
#include "optim.hpp"
#include "states.hpp"

namespace symfid {

struct SpinorParam {
    std::array<double, 4> q; // alpha = q0 + i q1, beta = q2 + i q3, |q| = 1
};

inline LocalOperator su2_from_param(const SpinorParam& p) {
    double nn = 0.0;
    for (double v : p.q) nn += v * v;
    if (std::abs(nn - 1.0) > 1e-12) throw domain_error("su2_from_param: parameter not unit-norm");
    cplx alpha(p.q[0], p.q[1]), beta(p.q[2], p.q[3]);
    return {alpha, -std::conj(beta), beta, std::conj(alpha)};
}

// action of M^(x)n restricted to the symmetric subspace, (n+1)^2 row-major
inline std::vector<cplx> sym_tensor_rep(const LocalOperator& m, int n) {
    if (n < 1) throw domain_error("sym_tensor_rep: n >= 1 required");
    std::vector<cplx> p00(n + 1), p01(n + 1), p10(n + 1), p11(n + 1);
    for (int e = 0; e <= n; ++e) {
        p00[e] = ipow(m.m00, e);
        p01[e] = ipow(m.m01, e);
        p10[e] = ipow(m.m10, e);
        p11[e] = ipow(m.m11, e);
    }
    std::vector<cplx> s(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; k <= n; ++k) {
            cplx acc = 0.0;
            int llo = std::max(0, j + k - n), lhi = std::min(j, k);
            for (int l = llo; l <= lhi; ++l)
                acc += binom(k, l) * binom(n - k, j - l) * p00[n - k - j + l] * p11[l] * p10[j - l] *
                       p01[k - l];
            s[static_cast<std::size_t>(j) * (n + 1) + k] = std::sqrt(binom(n, k) / binom(n, j)) * acc;
        }
    }
    return s;
}

namespace detail {

inline cplx sym_rep_overlap(const SymState& psi, const std::vector<cplx>& s, const SymState& phi) {
    const int n = psi.n;
    cplx ov = 0.0;
    for (int j = 0; j <= n; ++j) {
        cplx row = 0.0;
        for (int k = 0; k <= n; ++k)
            row += s[static_cast<std::size_t>(j) * (n + 1) + k] * phi.coeffs[static_cast<std::size_t>(k)];
        ov += std::conj(psi.coeffs[static_cast<std::size_t>(j)]) * row;
    }
    return ov;
}

struct SymBest {
    double value;
    SpinorParam q;
};

// chart of SU(2): q = (cos t cos a, cos t sin a, sin t cos b, sin t sin b)
inline SpinorParam spinor_of_angles(double t, double a, double b) {
    return SpinorParam{{std::cos(t) * std::cos(a), std::cos(t) * std::sin(a),
                        std::sin(t) * std::cos(b), std::sin(t) * std::sin(b)}};
}

inline std::array<double, 3> angles_of_spinor(const SpinorParam& p) {
    double r01 = std::hypot(p.q[0], p.q[1]), r23 = std::hypot(p.q[2], p.q[3]);
    double t = std::atan2(r23, r01);
    double a = r01 > 1e-15 ? std::atan2(p.q[1], p.q[0]) : 0.0;
    double b = r23 > 1e-15 ? std::atan2(p.q[3], p.q[2]) : 0.0;
    return {t, a, b};
}

inline double sym_value_angles(const SymState& psi, const SymState& phi, double t, double a,
                               double b) {
    SpinorParam p = spinor_of_angles(t, a, b);
    return std::norm(sym_rep_overlap(psi, sym_tensor_rep(su2_from_param(p), psi.n), phi));
}

// local refinement of the diagonal objective around a given spinor
inline SymBest polish_sym_from(const SymState& psi, const SymState& phi, const SpinorParam& q0) {
    auto ang = angles_of_spinor(q0);
    auto value3 = [&](const std::vector<double>& v) {
        return sym_value_angles(psi, phi, v[0], v[1], v[2]);
    };
    SymBest best{value3({ang[0], ang[1], ang[2]}), spinor_of_angles(ang[0], ang[1], ang[2])};
    NmResult r = nelder_mead_max(value3, {ang[0], ang[1], ang[2]}, {0.06, 0.1, 0.1}, 1e-12, 2500);
    if (std::isfinite(r.value) && r.value > best.value)
        best = {r.value, spinor_of_angles(r.x[0], r.x[1], r.x[2])};
    return best;
}

// multi-start simplex search over the 3-angle chart. A fine deterministic
// sweep picks basin-diverse polish seeds; the random restarts requested by
// the caller are added on top.
inline SymBest max_overlap_symmetric_impl(const SymState& psi, const SymState& phi, int restarts,
                                          std::uint64_t seed) {
    if (psi.n != phi.n) throw domain_error("max_overlap_symmetric: qubit count mismatch");
    const double pi = 4.0 * std::atan(1.0);
    auto q_of = [](double t, double a, double b) { return spinor_of_angles(t, a, b); };
    auto value3 = [&](const std::vector<double>& v) -> double {
        return sym_value_angles(psi, phi, v[0], v[1], v[2]);
    };

    // the landscape is |degree-n polynomial|^2 on S^3 and grows basins much
    // narrower than any handful of random starts finds; sample finely enough
    // to land inside every basin, then zoom
    struct GridPt {
        double v, t, a, b;
    };
    constexpr int NT = 48, NA = 96;
    const double st = 0.5 * pi / (NT - 1), sa = 2.0 * pi / NA;
    std::vector<GridPt> top;
    top.reserve(4096);
    const std::size_t keep = 200;
    for (int it = 0; it < NT; ++it) {
        double t = st * it;
        for (int ia = 0; ia < NA; ++ia) {
            double a = sa * ia;
            for (int ib = 0; ib < NA; ++ib) {
                double b = sa * ib;
                double v = value3({t, a, b});
                if (top.size() < keep || v > top.back().v) top.push_back({v, t, a, b});
            }
            if (top.size() > 16 * keep) {
                std::nth_element(top.begin(), top.begin() + keep, top.end(),
                                 [](const GridPt& p, const GridPt& q) { return p.v > q.v; });
                top.resize(keep);
            }
        }
    }
    std::stable_sort(top.begin(), top.end(), [](const GridPt& p, const GridPt& q) {
        if (p.v != q.v) return p.v > q.v;
        if (p.t != q.t) return p.t < q.t;
        if (p.a != q.a) return p.a < q.a;
        return p.b < q.b;
    });
    if (top.size() > keep) top.resize(keep);

    auto qdist = [&](const GridPt& p, const GridPt& q) {
        SpinorParam u = q_of(p.t, p.a, p.b), w = q_of(q.t, q.a, q.b);
        double dm = 0.0, dp = 0.0;
        for (int i = 0; i < 4; ++i) {
            dm += (u.q[i] - w.q[i]) * (u.q[i] - w.q[i]);
            dp += (u.q[i] + w.q[i]) * (u.q[i] + w.q[i]);
        }
        return std::sqrt(std::min(dm, dp)); // q and -q give the same unitary
    };
    std::vector<GridPt> seeds;
    for (const GridPt& g : top) {
        bool crowded = false;
        for (const GridPt& s : seeds)
            if (qdist(g, s) < 0.3) {
                crowded = true;
                break;
            }
        if (!crowded) seeds.push_back(g);
        if (seeds.size() >= 12) break;
    }

    SymBest best{-1.0, {{1.0, 0.0, 0.0, 0.0}}};
    auto consider = [&](double v, double t, double a, double b) {
        if (v > best.value) {
            best.value = v;
            best.q = q_of(t, a, b);
        }
    };
    for (const GridPt& s : seeds) {
        GridPt zb = s;
        double w[3] = {1.2 * st, 1.2 * sa, 1.2 * sa};
        for (int round = 0; round < 2; ++round) {
            for (int it = -3; it <= 3; ++it)
                for (int ia = -3; ia <= 3; ++ia)
                    for (int ib = -3; ib <= 3; ++ib) {
                        double t = zb.t + w[0] * it / 3.0, a = zb.a + w[1] * ia / 3.0,
                               b = zb.b + w[2] * ib / 3.0;
                        double v = value3({t, a, b});
                        if (v > zb.v) zb = {v, t, a, b};
                    }
            for (double& x : w) x /= 3.0;
        }
        NmResult r = nelder_mead_max(value3, {zb.t, zb.a, zb.b}, {3 * w[0], 3 * w[1], 3 * w[2]},
                                     1e-12, 2500);
        consider(zb.v, zb.t, zb.a, zb.b);
        if (std::isfinite(r.value)) consider(r.value, r.x[0], r.x[1], r.x[2]);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> s0 = {0.5 * pi * unif(rng), 2.0 * pi * unif(rng), 2.0 * pi * unif(rng)};
        NmResult rr = nelder_mead_max(value3, s0, {0.2, 0.35, 0.35}, 1e-12, 2500);
        if (std::isfinite(rr.value)) consider(rr.value, rr.x[0], rr.x[1], rr.x[2]);
    }
    return best;
}

} // namespace detail

inline double max_overlap_symmetric(const SymState& psi, const SymState& phi, int restarts,
                                    std::uint64_t seed) {
    return detail::max_overlap_symmetric_impl(psi, phi, restarts, seed).value;
}

namespace detail {

struct IndBest {
    double value;
    std::vector<LocalOperator> ops;
};

// sup over independent single-qubit unitaries by alternating exact site
// updates: with the other sites frozen the overlap is linear in U_i, and the
// best unit spinor is the leading eigenvector of a 2x2 Gram matrix.
inline IndBest max_overlap_independent_impl(const DenseState& psi, const DenseState& phi,
                                            int restarts, std::uint64_t seed,
                                            const std::vector<LocalOperator>* warm) {
    if (psi.n != phi.n) throw domain_error("max_overlap_independent: qubit count mismatch");
    const int n = psi.n;
    if (n > 14) throw capacity_error("max_overlap_independent: n > 14");

    auto run_from = [&](std::vector<LocalOperator>& ops) -> double {
        double val = 0.0;
        {
            DenseState cur = apply_local(ops, phi).state;
            cplx ov = 0.0;
            for (std::size_t i = 0; i < cur.amps.size(); ++i)
                ov += std::conj(psi.amps[i]) * cur.amps[i];
            val = std::norm(ov);
        }
        for (int sweep = 0; sweep < 500; ++sweep) {
            double before = val;
            for (int site = 0; site < n; ++site) {
                std::vector<LocalOperator> others = ops;
                others[static_cast<std::size_t>(site)] = LocalOperator::identity();
                DenseState ph = apply_local(others, phi).state;
                const std::size_t bit = std::size_t{1} << (n - 1 - site);
                cplx M00 = 0.0, M01 = 0.0, M10 = 0.0, M11 = 0.0;
                for (std::size_t s = 0; s < ph.amps.size(); ++s) {
                    if (s & bit) continue;
                    cplx ps0 = std::conj(psi.amps[s]), ps1 = std::conj(psi.amps[s | bit]);
                    M00 += ps0 * ph.amps[s];
                    M01 += ps0 * ph.amps[s | bit];
                    M10 += ps1 * ph.amps[s];
                    M11 += ps1 * ph.amps[s | bit];
                }
                cplx w0 = M00 + M11, w1 = cplx(0, 1) * (M00 - M11);
                cplx w2 = M10 - M01, w3 = cplx(0, 1) * (M10 + M01);
                double u[4] = {w0.real(), w1.real(), w2.real(), w3.real()};
                double v[4] = {w0.imag(), w1.imag(), w2.imag(), w3.imag()};
                double uu = 0.0, uv = 0.0, vv = 0.0;
                for (int a = 0; a < 4; ++a) {
                    uu += u[a] * u[a];
                    uv += u[a] * v[a];
                    vv += v[a] * v[a];
                }
                double tr = uu + vv, det = uu * vv - uv * uv;
                double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
                double lam = 0.5 * tr + disc;
                // eigenvector (t0, t1) of [[uu, uv], [uv, vv]] for lam
                double t0, t1;
                if (std::abs(uv) > 1e-300) {
                    t0 = uv;
                    t1 = lam - uu;
                    if (std::abs(lam - vv) > std::abs(t1)) {
                        t0 = lam - vv;
                        t1 = uv;
                    }
                } else {
                    if (uu >= vv) {
                        t0 = 1.0;
                        t1 = 0.0;
                    } else {
                        t0 = 0.0;
                        t1 = 1.0;
                    }
                }
                double qe[4];
                for (int a = 0; a < 4; ++a) qe[a] = t0 * u[a] + t1 * v[a];

                // when det M = 0 the two eigenvalues coincide and the formula
                // above cancels to rounding noise; u and v then lie inside the
                // (degenerate) top eigenspace themselves, so taking the best of
                // the three candidates is exact in every case
                double qbest[4];
                double site_val = -1.0;
                auto consider_q = [&](const double* c) {
                    double nn = 0.0;
                    for (int a = 0; a < 4; ++a) nn += c[a] * c[a];
                    if (nn < 1e-28) return;
                    double inv = 1.0 / std::sqrt(nn);
                    double du = 0.0, dv = 0.0;
                    for (int a = 0; a < 4; ++a) {
                        du += c[a] * u[a];
                        dv += c[a] * v[a];
                    }
                    double value = (du * du + dv * dv) * inv * inv;
                    if (value > site_val) {
                        site_val = value;
                        for (int a = 0; a < 4; ++a) qbest[a] = c[a] * inv;
                    }
                };
                consider_q(qe);
                consider_q(u);
                consider_q(v);
                if (site_val < 0.0) {
                    // overlap insensitive to this site; keep the old unitary
                    const LocalOperator& U = ops[static_cast<std::size_t>(site)];
                    cplx P = U.m00 * M00 + U.m01 * M01 + U.m10 * M10 + U.m11 * M11;
                    val = std::norm(P);
                    continue;
                }
                ops[static_cast<std::size_t>(site)] =
                    su2_from_param(SpinorParam{{qbest[0], qbest[1], qbest[2], qbest[3]}});
                val = site_val;
            }
            if (val - before < 1e-14 || (val - before) < 1e-12 * std::max(1.0, val)) break;
        }
        return val;
    };

    IndBest best{-1.0, std::vector<LocalOperator>(static_cast<std::size_t>(n),
                                                  LocalOperator::identity())};
    auto consider = [&](std::vector<LocalOperator> ops) {
        double v = run_from(ops);
        if (v > best.value) best = {v, std::move(ops)};
    };
    consider(std::vector<LocalOperator>(static_cast<std::size_t>(n), LocalOperator::identity()));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int r = 0; r < restarts; ++r) {
        std::vector<LocalOperator> ops;
        ops.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double q[4], nn = 0.0;
            do {
                nn = 0.0;
                for (double& v : q) {
                    v = gauss(rng);
                    nn += v * v;
                }
            } while (nn < 1e-12);
            nn = std::sqrt(nn);
            ops.push_back(su2_from_param(SpinorParam{{q[0] / nn, q[1] / nn, q[2] / nn, q[3] / nn}}));
        }
        consider(std::move(ops));
    }
    if (warm) {
        if (static_cast<int>(warm->size()) != n)
            throw domain_error("max_overlap_independent: warm start has wrong length");
        consider(*warm);
    }
    return best;
}

} // namespace detail

inline double max_overlap_independent(const DenseState& psi, const DenseState& phi, int restarts,
                                      std::uint64_t seed,
                                      const std::vector<LocalOperator>* warm = nullptr) {
    return detail::max_overlap_independent_impl(psi, phi, restarts, seed, warm).value;
}

struct LuResult {
    double value_independent;
    double value_symmetric;
    double gap; // value_independent - value_symmetric
    int restarts;
    std::uint64_t seed;
};

// for symmetric states the independent-unitary optimum is attained on the
// diagonal U x ... x U; each trial draws a random pair and compares the two
inline std::vector<LuResult> lu_equality_check(int n, int trials, int restarts, std::uint64_t seed) {
    if (n < 2) throw domain_error("lu_equality_check: n >= 2 required");
    if (n > 14) throw capacity_error("lu_equality_check: n > 14");
    if (trials < 1 || restarts < 0) throw domain_error("lu_equality_check: bad trial counts");
    std::vector<LuResult> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(t);
        std::mt19937_64 rng(trial_seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        auto draw = [&]() {
            SymState s;
            s.n = n;
            s.coeffs.resize(static_cast<std::size_t>(n) + 1);
            for (cplx& c : s.coeffs) c = cplx(gauss(rng), gauss(rng));
            s.normalize();
            return s;
        };
        SymState psi = draw(), phi = draw();
        std::uint64_t s_sym = rng(), s_ind = rng();
        DenseState dpsi = sym_to_dense(psi), dphi = sym_to_dense(phi);

        detail::IndBest cold = detail::max_overlap_independent_impl(dpsi, dphi, restarts, s_ind,
                                                                    nullptr);
        detail::SymBest sym = detail::max_overlap_symmetric_impl(psi, phi, restarts, s_sym);
        // diagonal attainability: polish the diagonal objective around each
        // site unitary of the independent argmax (all coincide up to phase
        // when the theorem holds, so one of them sits in the right basin)
        for (const LocalOperator& op : cold.ops) {
            SpinorParam qi{{op.m00.real(), op.m00.imag(), op.m10.real(), op.m10.imag()}};
            detail::SymBest cand = detail::polish_sym_from(psi, phi, qi);
            if (cand.value > sym.value) sym = cand;
        }
        std::vector<LocalOperator> warm(static_cast<std::size_t>(n), su2_from_param(sym.q));
        double ind = std::max(
            cold.value,
            detail::max_overlap_independent_impl(dpsi, dphi, 0, s_ind, &warm).value);
        out.push_back({ind, sym.value, ind - sym.value, restarts, trial_seed});
    }
    return out;
}

} // namespace symfid
