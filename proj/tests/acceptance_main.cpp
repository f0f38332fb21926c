// Acceptance gate: one self-contained check per release criterion, each with
// pinned tolerances and, where stated, a wall-clock budget. Any failure prints
// a [FAIL] line and exits nonzero; a clean run prints one [PASS] per criterion.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <random>
#include <vector>

#include "symfid/symfid.hpp"

namespace {

#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

void pass(int id, const std::string& what, double secs) {
    std::printf("[PASS] criterion %d: %s (%.1fs)\n", id, what.c_str(), secs);
    std::fflush(stdout);
}

struct Ref {
    int n, k;
    double f;
};

void criterion1() {
    auto t0 = clk::now();
    const Ref refs[] = {{4, 2, 0.5},   {5, 2, 0.477}, {6, 2, 0.465},
                        {6, 3, 0.4},   {7, 2, 0.457}, {7, 3, 0.383},
                        {8, 2, 0.451}, {8, 3, 0.372}, {8, 4, 0.344}};
    for (const Ref& r : refs) {
        double closed = symfid::closed_form_k1(r.n, r.k);
        double numeric = symfid::max_sym_fidelity(r.n, r.k, 1).value;
        REQUIRE(std::abs(closed - r.f) <= 5e-4,
                "closed form off reference at n=" << r.n << " k=" << r.k << ": " << closed);
        REQUIRE(std::abs(numeric - r.f) <= 5e-4,
                "optimizer off reference at n=" << r.n << " k=" << r.k << ": " << numeric);
    }
    double secs = seconds_since(t0);
    REQUIRE(secs < 10.0, "criterion 1 exceeded 10 s: " << secs);
    pass(1, "nine tabulated fidelities match closed form and optimizer within 5e-4", secs);
}

void criterion2() {
    auto t0 = clk::now();
    const double refs[] = {0.422, 0.322, 0.271, 0.238, 0.215, 0.197, 0.183};
    for (int k = 2; k <= 8; ++k) {
        double lim = symfid::limit_k1(k);
        REQUIRE(std::abs(lim - refs[k - 2]) <= 5e-4,
                "limit off reference at k=" << k << ": " << lim);
        double tail = symfid::closed_form_k1(10000, k);
        REQUIRE(std::abs(tail - lim) < 5e-3,
                "n=10^4 closed form not near limit at k=" << k << ": " << tail << " vs " << lim);
    }
    double secs = seconds_since(t0);
    REQUIRE(secs < 5.0, "criterion 2 exceeded 5 s: " << secs);
    pass(2, "large-n limits match references within 5e-4 and the n=10^4 values track them", secs);
}

void criterion3() {
    auto t0 = clk::now();
    double anchor = symfid::max_sym_fidelity(100, 1, 2).value;
    REQUIRE(anchor >= 0.62 && anchor <= 0.64, "anchor value out of [0.62,0.64]: " << anchor);
    for (int n = 4; n <= 100; ++n) {
        double prev = 2.0;
        for (int k = 2; 2 * k <= n; ++k) {
            double v = symfid::max_sym_fidelity(n, 1, k).value;
            REQUIRE(v < prev, "series not decreasing at n=" << n << " k=" << k << ": " << v
                                                            << " after " << prev);
            prev = v;
        }
    }
    double secs = seconds_since(t0);
    REQUIRE(secs < 120.0, "criterion 3 exceeded 2 min: " << secs);
    pass(3, "n=100 anchor in [0.62,0.64]; fidelity decreases in k for every n <= 100", secs);
}

void criterion4() {
    auto t0 = clk::now();
    for (int n = 4; n <= 8; ++n) {
        symfid::DenseState d1 = symfid::sym_to_dense(symfid::dicke(n, 1));
        for (int k = 2; 2 * k <= n; ++k) {
            double f = symfid::overlap(d1, symfid::psi_N_k(n, k, 1e-3)).fidelity;
            REQUIRE(f < 1.0, "fidelity not strictly below 1 at n=" << n << " k=" << k);
            REQUIRE(f > 1.0 - 1e-5,
                    "fidelity not within 1e-5 of 1 at n=" << n << " k=" << k << ": " << f);
        }
    }
    double secs = seconds_since(t0);
    REQUIRE(secs < 5.0, "criterion 4 exceeded 5 s: " << secs);
    pass(4, "deformed states at eps=1e-3 sit strictly below but within 1e-5 of fidelity 1", secs);
}

void criterion5() {
    auto t0 = clk::now();
    for (int n = 4; n <= 8; ++n) {
        symfid::DenseState d1 = symfid::sym_to_dense(symfid::dicke(n, 1));
        for (int k = 2; 2 * k <= n; ++k) {
            symfid::DenseState dk = symfid::sym_to_dense(symfid::dicke(n, k));
            for (double eps : {1.0, 0.1, 0.01}) {
                symfid::AppliedDense g = symfid::apply_local(symfid::g_ops(n, k, eps), dk);

                symfid::DenseState expect = symfid::psi_eps(n, k, eps);
                double en = 0.0;
                for (std::size_t m = 0; m < expect.amps.size(); ++m) {
                    expect.amps[m] += d1.amps[m];
                    en += std::norm(expect.amps[m]);
                }

                symfid::cplx dot = 0.0;
                for (std::size_t m = 0; m < expect.amps.size(); ++m)
                    dot += std::conj(expect.amps[m]) * g.state.amps[m];
                symfid::cplx prop = dot / en;
                double predicted = eps * (symfid::binom(n - 1, k) / (n - 1)) /
                                   std::sqrt(symfid::binom(n, k) / static_cast<double>(n));
                REQUIRE(std::abs(prop - predicted) <= 1e-12,
                        "proportionality constant off at n=" << n << " k=" << k << " eps=" << eps
                                                             << ": " << std::abs(prop - predicted));

                // normalized states must agree up to a global phase
                double gn = 0.0;
                for (const symfid::cplx& a : g.state.amps) gn += std::norm(a);
                gn = std::sqrt(gn);
                en = std::sqrt(en);
                symfid::cplx ov = 0.0;
                for (std::size_t m = 0; m < expect.amps.size(); ++m)
                    ov += std::conj(g.state.amps[m] / gn) * (expect.amps[m] / en);
                symfid::cplx phase = ov / std::abs(ov);
                double worst = 0.0;
                for (std::size_t m = 0; m < expect.amps.size(); ++m)
                    worst = std::max(worst, std::abs(phase * g.state.amps[m] / gn -
                                                     expect.amps[m] / en));
                REQUIRE(worst <= 1e-10, "states differ beyond global phase at n="
                                            << n << " k=" << k << " eps=" << eps << ": " << worst);
            }
        }
    }
    double secs = seconds_since(t0);
    pass(5, "local-operator image equals the deformed state up to phase, with the predicted scale",
         secs);
}

void criterion6() {
    auto t0 = clk::now();
    double f = symfid::overlap(symfid::inverse_image_state(4, 2), symfid::dicke(4, 2)).fidelity;
    REQUIRE(std::abs(f - 1.0 / 14.0) <= 1e-10, "inverse-image fidelity not 1/14: " << f);
    for (auto [n, k] : {std::pair{5, 2}, {6, 2}, {6, 3}}) {
        double z = symfid::overlap(symfid::inverse_image_state(n, k), symfid::dicke(n, k)).fidelity;
        REQUIRE(z < 1e-12, "inverse image not orthogonal at n=" << n << " k=" << k << ": " << z);
    }
    for (auto [n, k] : {std::pair{4, 2}, {5, 2}, {6, 2}, {6, 3}}) {
        symfid::cplx ov = symfid::overlap(symfid::inverse_image_via_g(n, k, 0.1),
                                          symfid::inverse_image_via_g(n, k, 0.7))
                              .value;
        REQUIRE(std::abs(std::abs(ov) - 1.0) <= 1e-10,
                "inverse image depends on eps at n=" << n << " k=" << k);
    }
    double secs = seconds_since(t0);
    pass(6, "inverse image hits fidelity 1/14 at (4,2), is orthogonal elsewhere, eps-independent",
         secs);
}

void criterion7() {
    auto t0 = clk::now();
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
        auto res = symfid::lu_equality_check(n, 20, 20, 42);
        for (const symfid::LuResult& r : res) {
            REQUIRE(std::abs(r.gap) <= 1e-6, "independent/symmetric optima differ at n="
                                                 << n << " seed=" << r.seed << ": gap=" << r.gap);
            worst = std::max(worst, std::abs(r.gap));
        }
    }
    double secs = seconds_since(t0);
    REQUIRE(secs < 120.0, "criterion 7 exceeded 2 min: " << secs);
    pass(7, "independent local unitaries never beat the diagonal on 100 symmetric pairs, max gap " +
                symfid::fmt_sig12(worst),
         secs);
}

void criterion8() {
    auto t0 = clk::now();
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
        for (int k = 1; k <= n - 1; ++k) {
            symfid::SymState target = symfid::dicke(n, k);
            for (int kp = 0; kp <= n; ++kp) {
                if (kp == k) continue;
                double a = symfid::max_sym_fidelity(n, k, kp).value;
                double b = symfid::brute_force_sym_fidelity(target, n, kp, 24);
                REQUIRE(std::abs(a - b) <= 1e-5, "optimizer and oracle disagree at n="
                                                     << n << " k=" << k << " kp=" << kp << ": "
                                                     << a << " vs " << b);
                worst = std::max(worst, std::abs(a - b));
                if (kp == 0) {
                    double kt = static_cast<double>(k) / n;
                    double closed = symfid::binom(n, k) * std::pow(kt, k) *
                                    std::pow(1.0 - kt, n - k);
                    REQUIRE(std::abs(a - closed) <= 1e-5,
                            "kp=0 closed form missed at n=" << n << " k=" << k << ": " << a
                                                            << " vs " << closed);
                }
            }
        }
    }
    double secs = seconds_since(t0);
    REQUIRE(secs < 300.0, "criterion 8 exceeded 5 min: " << secs);
    pass(8, "optimizer matches the brute-force oracle on all 168 class pairs, max gap " +
                symfid::fmt_sig12(worst),
         secs);
}

void criterion9() {
    auto t0 = clk::now();
    for (int n = 4; n <= 12; ++n) {
        for (int k = 2; 2 * k <= n; ++k) {
            std::mt19937 rng(static_cast<std::uint32_t>(999 + 13 * n + k));
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (int pt = 0; pt < 100; ++pt) {
                symfid::ObjectiveParams p{u(rng), u(rng), 2.0 * u(rng) - 1.0};
                double a = symfid::objective_f_dn1(n, k, p);
                double b = symfid::objective_general(n, 1, k, p);
                REQUIRE(std::abs(a - b) <= 1e-10,
                        "objective forms disagree at n=" << n << " k=" << k << " x=" << p.x
                                                         << " xp=" << p.xp << " y=" << p.y);
            }
        }
    }
    pass(9, "specialized and general objective agree at 100 random points per class pair",
         seconds_since(t0));
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("[PASS] all 9 acceptance criteria\n");
    return 0;
}
