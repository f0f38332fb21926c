#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>

#include "symfid/symfid.hpp"

namespace {

struct IoOpts {
    std::string format = "csv";
    std::string out;
};

void add_io(CLI::App* sub, IoOpts& io) {
    sub->add_option("--format", io.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", io.out, "write to a file instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fidelities between Dicke states and symmetric W-type families"};
    app.require_subcommand(1);

    IoOpts io_table1, io_fig1, io_limits, io_ce, io_inverse, io_lu, io_symfid, io_oracle;

    CLI::App* c_table1 = app.add_subcommand("table1", "closed form vs numeric optimum, small N");
    add_io(c_table1, io_table1);

    int fig1_nmax = 20, fig1_kmax = 50;
    CLI::App* c_fig1 = app.add_subcommand("fig1", "fidelity of |D_N^1> against each W family");
    c_fig1->add_option("--n-max", fig1_nmax, "largest N")->capture_default_str();
    c_fig1->add_option("--k-max", fig1_kmax, "largest family class")->capture_default_str();
    add_io(c_fig1, io_fig1);

    int limits_kmax = 8;
    CLI::App* c_limits = app.add_subcommand("limits", "large-N limits of the closed form");
    c_limits->add_option("--k-max", limits_kmax, "largest k")->capture_default_str();
    add_io(c_limits, io_limits);

    int ce_n = 4, ce_k = 2, ce_points = 25;
    double ce_emin = 1e-4, ce_emax = 1.0;
    CLI::App* c_ce = app.add_subcommand("ce-sweep", "counterexample perturbation sweep over eps");
    c_ce->add_option("--n", ce_n, "qubit count")->capture_default_str();
    c_ce->add_option("--k", ce_k, "Dicke class")->capture_default_str();
    c_ce->add_option("--eps-min", ce_emin, "smallest eps")->capture_default_str();
    c_ce->add_option("--eps-max", ce_emax, "largest eps")->capture_default_str();
    c_ce->add_option("--points", ce_points, "sweep points (log-spaced)")->capture_default_str();
    add_io(c_ce, io_ce);

    int inv_n = 4, inv_k = 2;
    CLI::App* c_inverse = app.add_subcommand("inverse", "inverse image of |D_N^1> under g");
    c_inverse->add_option("--n", inv_n, "qubit count")->capture_default_str();
    c_inverse->add_option("--k", inv_k, "Dicke class")->capture_default_str();
    add_io(c_inverse, io_inverse);

    int lu_n = 3, lu_trials = 20, lu_restarts = 20;
    std::uint64_t lu_seed = 42;
    CLI::App* c_lu = app.add_subcommand("lu-check", "independent vs collective unitary optima");
    c_lu->add_option("--n", lu_n, "qubit count")->capture_default_str();
    c_lu->add_option("--trials", lu_trials, "random state pairs")->capture_default_str();
    c_lu->add_option("--restarts", lu_restarts, "optimizer restarts per trial")->capture_default_str();
    c_lu->add_option("--seed", lu_seed, "base RNG seed")->capture_default_str();
    add_io(c_lu, io_lu);

    int sf_n = 0, sf_k = 0, sf_kp = 0;
    CLI::App* c_symfid = app.add_subcommand("symfid", "maximal fidelity for one (n, k, kp)");
    c_symfid->add_option("--n", sf_n, "qubit count")->required();
    c_symfid->add_option("--k", sf_k, "target Dicke class")->required();
    c_symfid->add_option("--kp", sf_kp, "family class")->required();
    add_io(c_symfid, io_symfid);

    int or_n = 0, or_k = 0, or_kp = 0, or_points = 24;
    CLI::App* c_oracle = app.add_subcommand("oracle", "brute-force cross-check of symfid");
    c_oracle->add_option("--n", or_n, "qubit count")->required();
    c_oracle->add_option("--k", or_k, "target Dicke class")->required();
    c_oracle->add_option("--kp", or_kp, "family class")->required();
    c_oracle->add_option("--points", or_points, "grid density per axis")->capture_default_str();
    add_io(c_oracle, io_oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    using symfid::Table;
    try {
        if (app.got_subcommand(c_table1)) {
            static constexpr int NK[][2] = {{4, 2}, {5, 2}, {6, 2}, {6, 3}, {7, 2},
                                            {7, 3}, {8, 2}, {8, 3}, {8, 4}};
            Table t;
            t.columns = {"N", "k", "fs_closed", "fs_numeric", "abs_diff"};
            for (auto [n, k] : NK) {
                double closed = symfid::closed_form_k1(n, k);
                double numeric = symfid::max_sym_fidelity(n, k, 1).value;
                t.rows.push_back({static_cast<long long>(n), static_cast<long long>(k), closed,
                                  numeric, std::abs(closed - numeric)});
            }
            symfid::emit_table(t, io_table1.format, io_table1.out);
        } else if (app.got_subcommand(c_fig1)) {
            Table t;
            t.columns = {"N", "k", "fs_symmetric", "f_full"};
            for (int n = 4; n <= fig1_nmax; ++n) {
                int ktop = std::min(n / 2, fig1_kmax);
                for (int k = 2; k <= ktop; ++k) {
                    double v = symfid::max_sym_fidelity(n, 1, k).value;
                    t.rows.push_back(
                        {static_cast<long long>(n), static_cast<long long>(k), v, 1.0});
                }
            }
            symfid::emit_table(t, io_fig1.format, io_fig1.out);
        } else if (app.got_subcommand(c_limits)) {
            Table t;
            t.columns = {"k", "limit", "fs_at_large_n", "abs_diff"};
            for (int k = 2; k <= limits_kmax; ++k) {
                double lim = symfid::limit_k1(k);
                double fs = symfid::closed_form_k1(10000, k);
                t.rows.push_back({static_cast<long long>(k), lim, fs, std::abs(lim - fs)});
            }
            symfid::emit_table(t, io_limits.format, io_limits.out);
        } else if (app.got_subcommand(c_ce)) {
            Table t;
            t.columns = {"eps", "fidelity", "residual_norm"};
            for (const auto& r : symfid::eps_sweep(ce_n, ce_k, ce_emin, ce_emax, ce_points))
                t.rows.push_back({r.eps, r.fidelity, r.residual_norm});
            symfid::emit_table(t, io_ce.format, io_ce.out);
        } else if (app.got_subcommand(c_inverse)) {
            symfid::DenseState inv = symfid::inverse_image_state(inv_n, inv_k);
            symfid::DenseState dk = symfid::sym_to_dense(symfid::dicke(inv_n, inv_k));
            double fid = symfid::overlap(dk, inv).fidelity;
            symfid::cplx cross = symfid::overlap(symfid::inverse_image_via_g(inv_n, inv_k, 0.1),
                                                 symfid::inverse_image_via_g(inv_n, inv_k, 0.7))
                                     .value;
            Table t;
            t.columns = {"n", "k", "fidelity", "eps_invariance"};
            t.rows.push_back({static_cast<long long>(inv_n), static_cast<long long>(inv_k), fid,
                              std::abs(cross)});
            symfid::emit_table(t, io_inverse.format, io_inverse.out);
        } else if (app.got_subcommand(c_lu)) {
            std::cerr << "# seed=" << lu_seed << "\n";
            Table t;
            t.columns = {"trial", "value_independent", "value_symmetric", "gap"};
            long long idx = 0;
            for (const auto& r : symfid::lu_equality_check(lu_n, lu_trials, lu_restarts, lu_seed))
                t.rows.push_back({idx++, r.value_independent, r.value_symmetric, r.gap});
            symfid::emit_table(t, io_lu.format, io_lu.out);
        } else if (app.got_subcommand(c_symfid)) {
            symfid::OptResult r = symfid::max_sym_fidelity(sf_n, sf_k, sf_kp);
            Table t;
            t.columns = {"n", "k", "kp", "value", "x", "xp", "y", "iterations", "converged"};
            t.rows.push_back({static_cast<long long>(sf_n), static_cast<long long>(sf_k),
                              static_cast<long long>(sf_kp), r.value, r.argmax.x, r.argmax.xp,
                              r.argmax.y, static_cast<long long>(r.iterations),
                              static_cast<long long>(r.converged ? 1 : 0)});
            symfid::emit_table(t, io_symfid.format, io_symfid.out);
        } else if (app.got_subcommand(c_oracle)) {
            double v = symfid::brute_force_sym_fidelity(symfid::dicke(or_n, or_k), or_n, or_kp,
                                                        or_points);
            Table t;
            t.columns = {"n", "k", "kp", "value"};
            t.rows.push_back({static_cast<long long>(or_n), static_cast<long long>(or_k),
                              static_cast<long long>(or_kp), v});
            symfid::emit_table(t, io_oracle.format, io_oracle.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
