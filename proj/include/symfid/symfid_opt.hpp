#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "binomial.hpp"
#include "errors.hpp"
#include "optim.hpp"
#include "states.hpp"

namespace symfid {

struct ObjectiveParams {
    double x, xp, y; // x, x' in [0,1]; y = cos(dphi) in [-1,1]
};

struct OptResult {
    double value;
    ObjectiveParams argmax;
    int iterations;
    bool converged;
    int restarts_used;
};

// c_j = C_k^j C_{n-k}^{kp-j} x^(k-j) (1-x^2)^((n-kp-k+j)/2) x'^j (1-x'^2)^((kp-j)/2)
inline std::vector<double> c_coeffs(int n, int k, int kp, double x, double xp) {
    if (!(x >= 0.0 && x <= 1.0 && xp >= 0.0 && xp <= 1.0))
        throw domain_error("c_coeffs: x and xp must lie in [0,1]");
    if (n < 1 || k < 0 || k > n || kp < 0 || kp > n)
        throw domain_error("c_coeffs: need 0 <= k, kp <= n");
    std::vector<double> c(static_cast<std::size_t>(kp) + 1, 0.0);
    for (int j = 0; j <= kp; ++j) {
        double bb = binom(k, j) * binom(n - k, kp - j);
        if (bb == 0.0) continue;
        c[static_cast<std::size_t>(j)] = bb * std::pow(x, k - j) *
                                         std::pow(1.0 - x * x, 0.5 * (n - kp - k + j)) *
                                         std::pow(xp, j) * std::pow(1.0 - xp * xp, 0.5 * (kp - j));
    }
    return c;
}

namespace detail {

// Fidelity objective (C_n^k / C_n^kp) * num(y) / den(y), factored so the
// y-independent work per (x, xp) is shared across a y sweep. Direct doubles
// through n = 60, log-domain beyond (C_100^50 overflows naive products).
class SymObjective {
public:
    SymObjective(int n, int k, int kp) : n_(n), k_(k), kp_(kp) {
        if (n < 1) throw domain_error("objective: n >= 1 required");
        if (k < 0 || k > n || kp < 0 || kp > n) throw domain_error("objective: need 0 <= k, kp <= n");
        if (k == kp) throw domain_error("objective: classes must differ (k != kp)");
        log_path_ = n > 60;
        jlo_ = std::max(0, kp - (n - k));
        jhi_ = std::min(k, kp);
        width_ = jhi_ - jlo_;
        if (log_path_) {
            lc_.resize(static_cast<std::size_t>(width_) + 1);
            for (int j = jlo_; j <= jhi_; ++j)
                lc_[static_cast<std::size_t>(j - jlo_)] = log_binom(k, j) + log_binom(n - k, kp - j);
            lden_.resize(static_cast<std::size_t>(kp) + 1);
            for (int j = 0; j <= kp; ++j)
                lden_[static_cast<std::size_t>(j)] = log_binom(kp, j) + log_binom(n - kp, j);
            lpre_ = log_binom(n, k) - log_binom(n, kp);
        } else {
            bc_.resize(static_cast<std::size_t>(width_) + 1);
            for (int j = jlo_; j <= jhi_; ++j)
                bc_[static_cast<std::size_t>(j - jlo_)] = binom(k, j) * binom(n - k, kp - j);
            bden_.resize(static_cast<std::size_t>(kp) + 1);
            for (int j = 0; j <= kp; ++j)
                bden_[static_cast<std::size_t>(j)] = binom(kp, j) * binom(n - kp, j);
            pre_ = binom(n, k) / binom(n, kp);
        }
    }

    struct PairCtx {
        std::vector<double> S; // autocorrelations sum_j c_j c_{j-d} of the (scaled) c
        double two_log_scale = 0.0;
        double a = 0.0, b = 0.0;
        bool zero = false;
    };

    PairCtx pair(double x, double xp) const {
        PairCtx ctx;
        double x2 = x * x, xp2 = xp * xp;
        double omx2 = 1.0 - x2, omxp2 = 1.0 - xp2;
        ctx.a = x2 * xp2 + omx2 * omxp2;
        ctx.b = 2.0 * x * xp * std::sqrt(std::max(0.0, omx2 * omxp2));
        const int W = width_;
        std::vector<double> c(static_cast<std::size_t>(W) + 1, 0.0);
        if (!log_path_) {
            for (int j = jlo_; j <= jhi_; ++j)
                c[static_cast<std::size_t>(j - jlo_)] =
                    bc_[static_cast<std::size_t>(j - jlo_)] * std::pow(x, k_ - j) *
                    std::pow(omx2, 0.5 * (n_ - kp_ - k_ + j)) * std::pow(xp, j) *
                    std::pow(omxp2, 0.5 * (kp_ - j));
        } else {
            // exponent-guarded log products: 0 * log(0) must stay 0, not NaN
            double lx = std::log(x), lxp = std::log(xp);
            double lomx2 = std::log(omx2), lomxp2 = std::log(omxp2);
            auto emul = [](double e, double l) { return e == 0.0 ? 0.0 : e * l; };
            std::vector<double> lc(static_cast<std::size_t>(W) + 1);
            double m = -std::numeric_limits<double>::infinity();
            for (int j = jlo_; j <= jhi_; ++j) {
                double v = lc_[static_cast<std::size_t>(j - jlo_)] + emul(k_ - j, lx) +
                           emul(0.5 * (n_ - kp_ - k_ + j), lomx2) + emul(j, lxp) +
                           emul(0.5 * (kp_ - j), lomxp2);
                lc[static_cast<std::size_t>(j - jlo_)] = v;
                m = std::max(m, v);
            }
            if (!std::isfinite(m)) {
                ctx.zero = true;
                ctx.S.assign(1, 0.0);
                return ctx;
            }
            for (int j = 0; j <= W; ++j)
                c[static_cast<std::size_t>(j)] = std::exp(lc[static_cast<std::size_t>(j)] - m);
            ctx.two_log_scale = 2.0 * m;
        }
        ctx.S.assign(static_cast<std::size_t>(W) + 1, 0.0);
        double tot = 0.0;
        for (int d = 0; d <= W; ++d) {
            double s = 0.0;
            for (int j = d; j <= W; ++j)
                s += c[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(j - d)];
            ctx.S[static_cast<std::size_t>(d)] = s;
            tot += s;
        }
        ctx.zero = (tot == 0.0);
        return ctx;
    }

    double eval_y(const PairCtx& ctx, double y) const {
        if (ctx.zero) return 0.0;
        double yc = std::clamp(y, -1.0, 1.0);
        // numerator sum_d (2 - delta_d0) S_d T_d(y), Chebyshev by recurrence
        double num = ctx.S[0];
        double tprev = 1.0, tcur = yc;
        for (std::size_t d = 1; d < ctx.S.size(); ++d) {
            num += 2.0 * ctx.S[d] * tcur;
            double tnext = 2.0 * yc * tcur - tprev;
            tprev = tcur;
            tcur = tnext;
        }
        if (num <= 0.0) return 0.0; // |sum_j c_j e^{ij dphi}|^2 rounded below zero
        double z = std::clamp(ctx.a + ctx.b * yc, 0.0, 1.0);
        if (!log_path_) {
            double den = 0.0;
            for (int j = kp_; j >= 0; --j) den = den * z + bden_[static_cast<std::size_t>(j)];
            if (den < 1e-300) throw degenerate_point_error("objective: vanishing denominator");
            return pre_ * num / den;
        }
        double lden;
        if (z < 1e-300) {
            lden = lden_[0]; // only j = 0 survives
        } else {
            double lz = std::log(z);
            double peak = -std::numeric_limits<double>::infinity();
            for (int j = 0; j <= kp_; ++j)
                peak = std::max(peak, lden_[static_cast<std::size_t>(j)] + j * lz);
            double s = 0.0;
            for (int j = 0; j <= kp_; ++j) {
                double t = lden_[static_cast<std::size_t>(j)] + j * lz - peak;
                if (t > -45.0) s += std::exp(t);
            }
            lden = peak + std::log(s);
        }
        if (!(lden > -690.0)) throw degenerate_point_error("objective: vanishing denominator");
        return std::exp(lpre_ + std::log(num) + ctx.two_log_scale - lden);
    }

    double operator()(double x, double xp, double y) const { return eval_y(pair(x, xp), y); }

private:
    int n_, k_, kp_;
    bool log_path_;
    int jlo_, jhi_, width_;
    std::vector<double> lc_, lden_; // log path tables
    std::vector<double> bc_, bden_; // direct path tables
    double lpre_ = 0.0, pre_ = 0.0;
};

} // namespace detail

inline double objective_general(int n, int k, int kp, const ObjectiveParams& p) {
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.xp >= 0.0 && p.xp <= 1.0))
        throw domain_error("objective_general: x and xp must lie in [0,1]");
    detail::SymObjective obj(n, k, kp);
    return obj(p.x, p.xp, p.y);
}

// N C_N^k f(x,x',y) with f exactly as printed for the |D_N^(1)> target
inline double objective_f_dn1(int n, int k, const ObjectiveParams& p) {
    if (n < 4 || k < 2 || 2 * k > n) throw domain_error("objective_f_dn1: need n >= 4, 2 <= k <= n/2");
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.xp >= 0.0 && p.xp <= 1.0))
        throw domain_error("objective_f_dn1: x and xp must lie in [0,1]");
    double x = p.x, xp = p.xp, y = std::clamp(p.y, -1.0, 1.0);
    double x2 = x * x, xp2 = xp * xp;
    double omx2 = 1.0 - x2, omxp2 = 1.0 - xp2;
    double kn = static_cast<double>(k) / n, nkn = static_cast<double>(n - k) / n;
    double bracket = nkn * nkn * x2 * omxp2 + kn * kn * xp2 * omx2 +
                     2.0 * kn * nkn * y * x * xp * std::sqrt(omx2) * std::sqrt(omxp2);
    if (bracket <= 0.0) return 0.0;
    double z = std::clamp(x2 * xp2 + omx2 * omxp2 + 2.0 * y * x * xp * std::sqrt(std::max(0.0, omx2 * omxp2)),
                          0.0, 1.0);
    if (n <= 60) {
        double den = 0.0;
        for (int j = k; j >= 0; --j) den = den * z + binom(k, j) * binom(n - k, j);
        if (den < 1e-300) throw degenerate_point_error("objective_f_dn1: vanishing denominator");
        return n * binom(n, k) * std::pow(omx2, n - k - 1) * std::pow(omxp2, k - 1) * bracket / den;
    }
    double lden;
    if (z < 1e-300) {
        lden = 0.0;
    } else {
        double lz = std::log(z);
        double peak = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= k; ++j)
            peak = std::max(peak, log_binom(k, j) + log_binom(n - k, j) + j * lz);
        double s = 0.0;
        for (int j = 0; j <= k; ++j) {
            double t = log_binom(k, j) + log_binom(n - k, j) + j * lz - peak;
            if (t > -45.0) s += std::exp(t);
        }
        lden = peak + std::log(s);
    }
    auto emul = [](double e, double l) { return e == 0.0 ? 0.0 : e * l; };
    double lval = std::log(static_cast<double>(n)) + log_binom(n, k) + emul(n - k - 1, std::log(omx2)) +
                  emul(k - 1, std::log(omxp2)) + std::log(bracket) - lden;
    return std::exp(lval);
}

// Supremum over [0,1]^2 x [-1,1]: deterministic 65x65x33 grid, a handful of
// basin-diverse seeds, 3 rounds of 9x9x9 local zoom per seed, simplex polish.
// The zoom stage matters: the landscape has ridges narrower than the coarse
// grid (x' within one grid step of 1) whose peaks top the broad x'=1 plateau.
inline OptResult max_sym_fidelity(int n, int k, int kp) {
    detail::SymObjective obj(n, k, kp);
    constexpr int NX = 65, NY = 33;
    constexpr double hx = 1.0 / (NX - 1);       // coarse grid step in x, x'
    constexpr double hy = 2.0 / (NY - 1);       // and in y
    struct GP {
        double v, x, xp, y;
    };
    std::vector<GP> top;
    top.reserve(4096);
    double worst_kept = -std::numeric_limits<double>::infinity();
    const std::size_t keep = 200;

    GP best{-1.0, 0.0, 0.0, -1.0};
    for (int ix = 0; ix < NX; ++ix) {
        double x = ix * hx;
        for (int ixp = 0; ixp < NX; ++ixp) {
            double xp = ixp * hx;
            auto ctx = obj.pair(x, xp);
            for (int iy = 0; iy < NY; ++iy) {
                double y = -1.0 + iy * hy;
                double v;
                try {
                    v = obj.eval_y(ctx, y);
                } catch (const degenerate_point_error&) {
                    continue;
                }
                if (v > best.v) best = {v, x, xp, y}; // strict >: lexicographic first wins
                if (top.size() < keep || v > worst_kept) top.push_back({v, x, xp, y});
            }
        }
        // keep the candidate pool bounded
        if (top.size() > 8 * keep) {
            std::nth_element(top.begin(), top.begin() + keep, top.end(),
                             [](const GP& a, const GP& b) { return a.v > b.v; });
            top.resize(keep);
            worst_kept = top.back().v;
            for (const GP& g : top) worst_kept = std::min(worst_kept, g.v);
        }
    }
    std::stable_sort(top.begin(), top.end(), [](const GP& a, const GP& b) {
        if (a.v != b.v) return a.v > b.v;
        if (a.x != b.x) return a.x < b.x;
        if (a.xp != b.xp) return a.xp < b.xp;
        return a.y < b.y;
    });
    if (top.size() > keep) top.resize(keep);

    // basin diversity: suppress candidates within 2.5 grid steps of a chosen seed
    std::vector<GP> seeds;
    for (const GP& g : top) {
        bool crowded = false;
        for (const GP& s : seeds)
            if (std::abs(g.x - s.x) <= 2.5 * hx && std::abs(g.xp - s.xp) <= 2.5 * hx &&
                std::abs(g.y - s.y) <= 2.5 * hy) {
                crowded = true;
                break;
            }
        if (!crowded) seeds.push_back(g);
        if (seeds.size() >= 6) break;
    }
    if (seeds.empty()) seeds.push_back(best);

    std::vector<GP> candidates;
    candidates.push_back(best);
    int total_iters = 0;
    bool all_conv = true;
    for (const GP& s : seeds) {
        double lo[3] = {std::max(0.0, s.x - 2 * hx), std::max(0.0, s.xp - 2 * hx), std::max(-1.0, s.y - 2 * hy)};
        double hi[3] = {std::min(1.0, s.x + 2 * hx), std::min(1.0, s.xp + 2 * hx), std::min(1.0, s.y + 2 * hy)};
        GP zb = s;
        for (int round = 0; round < 3; ++round) {
            for (int ix = 0; ix < 9; ++ix) {
                double x = lo[0] + (hi[0] - lo[0]) * ix / 8.0;
                for (int ixp = 0; ixp < 9; ++ixp) {
                    double xp = lo[1] + (hi[1] - lo[1]) * ixp / 8.0;
                    auto ctx = obj.pair(x, xp);
                    for (int iy = 0; iy < 9; ++iy) {
                        double y = lo[2] + (hi[2] - lo[2]) * iy / 8.0;
                        double v;
                        try {
                            v = obj.eval_y(ctx, y);
                        } catch (const degenerate_point_error&) {
                            continue;
                        }
                        if (v > zb.v) zb = {v, x, xp, y};
                    }
                }
            }
            double zc[3] = {zb.x, zb.xp, zb.y};
            for (int a = 0; a < 3; ++a) {
                double w = (hi[a] - lo[a]) / 4.0;
                double floor_a = (a == 2 ? -1.0 : 0.0);
                lo[a] = std::max(floor_a, zc[a] - w);
                hi[a] = std::min(1.0, zc[a] + w);
            }
        }
        auto clampbox = [](double x, double lo_, double hi_) { return std::clamp(x, lo_, hi_); };
        auto wrapped = [&](const std::vector<double>& q) {
            return obj(clampbox(q[0], 0.0, 1.0), clampbox(q[1], 0.0, 1.0), clampbox(q[2], -1.0, 1.0));
        };
        std::vector<double> steps = {std::max(hi[0] - lo[0], 1e-6), std::max(hi[1] - lo[1], 1e-6),
                                     std::max(hi[2] - lo[2], 1e-6)};
        NmResult r = nelder_mead_max(wrapped, {zb.x, zb.xp, zb.y}, steps, 1e-10, 600);
        total_iters += r.iterations;
        all_conv = all_conv && r.converged;
        candidates.push_back(zb);
        if (std::isfinite(r.value))
            candidates.push_back({r.value, std::clamp(r.x[0], 0.0, 1.0), std::clamp(r.x[1], 0.0, 1.0),
                                  std::clamp(r.x[2], -1.0, 1.0)});
    }

    GP win = candidates.front();
    for (const GP& c : candidates) {
        if (c.v > win.v ||
            (c.v == win.v && (c.x < win.x || (c.x == win.x && (c.xp < win.xp ||
                                                               (c.xp == win.xp && c.y < win.y))))))
            win = c;
    }
    return {win.v, {win.x, win.xp, win.y}, total_iters, all_conv, static_cast<int>(seeds.size())};
}

// C_N^k ktr^(k-1) (1-ktr)^(N-k-1) [kt + (1-2kt) ktr], ktr = kt - sqrt(kt(1-kt)/(N-1))
inline double closed_form_k1(int n, int k) {
    if (n < 2 || k < 1 || k > n - 1) throw domain_error("closed_form_k1: need n >= 2, 1 <= k <= n-1");
    double kt = static_cast<double>(k) / n;
    double ktr = kt - std::sqrt(kt * (1.0 - kt) / (n - 1));
    double tail = kt + (1.0 - 2.0 * kt) * ktr;
    if (n <= 60)
        return binom(n, k) * std::pow(ktr, k - 1) * std::pow(1.0 - ktr, n - k - 1) * tail;
    if (k == 1) // ktr = 0 up to rounding; the k-1 = 0 power is 1
        return n * std::pow(1.0 - ktr, n - 2) * tail;
    return std::exp(log_binom(n, k) + (k - 1) * std::log(ktr) + (n - k - 1) * std::log1p(-ktr) +
                    std::log(tail));
}

// (1/k!) e^(sqrt k - k) (k - sqrt k)^k (2 sqrt k - 1)/(sqrt k - 1)
inline double limit_k1(int k) {
    if (k < 2) throw domain_error("limit_k1: k >= 2 (sqrt(k)-1 vanishes at k = 1)");
    double sk = std::sqrt(static_cast<double>(k));
    return std::exp(-std::lgamma(k + 1.0) + (sk - k) + k * std::log(k - sk)) * (2.0 * sk - 1.0) /
           (sk - 1.0);
}

// Independent oracle: maximize |<target|family(eps, epsp)>|^2 over Bloch parameters.
// Works in the Dicke basis with direct-norm normalization (none of the closed
// forms the optimizer uses), then cross-checks the winner against the dense construction.
inline double brute_force_sym_fidelity(const SymState& target, int n, int kp, int grid_density) {
    if (target.n != n) throw domain_error("brute_force_sym_fidelity: target has wrong qubit count");
    if (n > 12) throw capacity_error("brute_force_sym_fidelity: n > 12");
    if (kp < 0 || kp > n) throw domain_error("brute_force_sym_fidelity: need 0 <= kp <= n");
    if (grid_density < 4) throw domain_error("brute_force_sym_fidelity: grid_density >= 4");

    SymState t = target;
    t.normalize();
    const double twopi = 8.0 * std::atan(1.0);

    auto value_at = [&](double x, double phi, double xp, double phip) -> double {
        Qubit e = Qubit::bloch(std::clamp(x, 0.0, 1.0), phi);
        Qubit ep = Qubit::bloch(std::clamp(xp, 0.0, 1.0), phip);
        std::vector<cplx> co = family_dicke_unnormalized(n, kp, e, ep);
        double nn = 0.0;
        cplx ov = 0.0;
        for (int m = 0; m <= n; ++m) {
            nn += std::norm(co[static_cast<std::size_t>(m)]);
            ov += std::conj(t.coeffs[static_cast<std::size_t>(m)]) * co[static_cast<std::size_t>(m)];
        }
        if (nn < 1e-300) return 0.0;
        return std::norm(ov) / nn;
    };

    const int g = grid_density;
    struct Cand {
        double v, x, phi, xp, phip;
    };
    std::vector<Cand> top;
    top.reserve(static_cast<std::size_t>(g) * g * g * g / 16 + 64);
    Cand best{-1.0, 0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < g; ++i) {
        double x = static_cast<double>(i) / (g - 1);
        for (int a = 0; a < g; ++a) {
            double phi = twopi * a / g;
            for (int j = 0; j < g; ++j) {
                double xp = static_cast<double>(j) / (g - 1);
                for (int b = 0; b < g; ++b) {
                    double phip = twopi * b / g;
                    double v = value_at(x, phi, xp, phip);
                    if (v > best.v) best = {v, x, phi, xp, phip};
                    if (top.size() < 64 || v > top.back().v) {
                        top.push_back({v, x, phi, xp, phip});
                        std::stable_sort(top.begin(), top.end(),
                                         [](const Cand& p, const Cand& q) { return p.v > q.v; });
                        if (top.size() > 64) top.resize(64);
                    }
                }
            }
        }
    }

    double sx = 1.0 / (g - 1), sphi = twopi / g;
    std::vector<Cand> seeds;
    for (const Cand& c : top) {
        bool crowded = false;
        for (const Cand& s : seeds) {
            auto wrap = [&](double d) { return std::abs(std::remainder(d, twopi)); };
            if (std::abs(c.x - s.x) <= 1.6 * sx && std::abs(c.xp - s.xp) <= 1.6 * sx &&
                wrap(c.phi - s.phi) <= 1.6 * sphi && wrap(c.phip - s.phip) <= 1.6 * sphi) {
                crowded = true;
                break;
            }
        }
        if (!crowded) seeds.push_back(c);
        if (seeds.size() >= 10) break;
    }

    auto wrapped = [&](const std::vector<double>& q) { return value_at(q[0], q[1], q[2], q[3]); };
    Cand win = best;
    for (const Cand& s : seeds) {
        // zoom before polishing: ridges near x' = 1 are narrower than the grid
        Cand zb = s;
        double w[4] = {1.6 * sx, 1.6 * sphi, 1.6 * sx, 1.6 * sphi};
        for (int round = 0; round < 3; ++round) {
            const Cand ctr = zb;
            for (int i0 = -2; i0 <= 2; ++i0)
                for (int i1 = -2; i1 <= 2; ++i1)
                    for (int i2 = -2; i2 <= 2; ++i2)
                        for (int i3 = -2; i3 <= 2; ++i3) {
                            double x = std::clamp(ctr.x + w[0] * i0 / 2.0, 0.0, 1.0);
                            double phi = ctr.phi + w[1] * i1 / 2.0;
                            double xp = std::clamp(ctr.xp + w[2] * i2 / 2.0, 0.0, 1.0);
                            double phip = ctr.phip + w[3] * i3 / 2.0;
                            double v = value_at(x, phi, xp, phip);
                            if (v > zb.v) zb = {v, x, phi, xp, phip};
                        }
            for (double& ww : w) ww /= 2.5;
        }
        if (zb.v > win.v) win = zb;
        NmResult r = nelder_mead_max(wrapped, {zb.x, zb.phi, zb.xp, zb.phip},
                                     {2.5 * w[0], 2.5 * w[1], 2.5 * w[2], 2.5 * w[3]}, 1e-10, 800);
        if (std::isfinite(r.value) && r.value > win.v)
            win = {r.value, std::clamp(r.x[0], 0.0, 1.0), r.x[1], std::clamp(r.x[2], 0.0, 1.0), r.x[3]};
    }

    // dense-path verification at the winner (skipped on a collinear boundary,
    // where the family itself is excluded)
    Qubit ew = Qubit::bloch(win.x, win.phi), epw = Qubit::bloch(win.xp, win.phip);
    if (std::sqrt(qubit_overlap_sq(ew, epw)) <= 1.0 - 1e-9) {
        DenseState fam = symmetric_family_state(n, kp, ew, epw);
        double fd = overlap(t, fam).fidelity;
        if (std::abs(fd - win.v) > 1e-9)
            throw error("brute_force_sym_fidelity: dense cross-check failed");
    }
    return win.v;
}

} // namespace symfid
