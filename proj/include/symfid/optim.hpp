#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace symfid {

struct NmResult {
    std::vector<double> x;
    double value;
    int iterations;
    bool converged;
};

// Deterministic Nelder-Mead ascent. Objective exceptions and NaNs count as -inf
// so degenerate points are skipped rather than fatal. Converged when the simplex
// spread drops below xtol on every axis.
template <class F>
NmResult nelder_mead_max(F&& f, const std::vector<double>& x0, const std::vector<double>& steps,
                         double xtol, int maxiter) {
    const std::size_t d = x0.size();
    const double ninf = -std::numeric_limits<double>::infinity();
    auto eval = [&](const std::vector<double>& x) -> double {
        try {
            double v = f(x);
            return std::isnan(v) ? ninf : v;
        } catch (...) {
            return ninf;
        }
    };

    std::vector<std::vector<double>> pt(d + 1, x0);
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i < d; ++i)
        pt[i + 1][i] += (steps[i] != 0.0 ? steps[i] : 1e-4);
    for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(pt[i]);

    std::vector<double> cen(d), xr(d), xe(d), xc(d);
    int it = 0;
    bool conv = false;
    for (; it < maxiter; ++it) {
        // descending by value, stable for determinism
        std::vector<std::size_t> ord(d + 1);
        std::iota(ord.begin(), ord.end(), std::size_t(0));
        std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] > fv[b]; });
        std::vector<std::vector<double>> pt2(d + 1);
        std::vector<double> fv2(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            pt2[i] = pt[ord[i]];
            fv2[i] = fv[ord[i]];
        }
        pt.swap(pt2);
        fv.swap(fv2);

        double spread = 0.0;
        for (std::size_t i = 1; i <= d; ++i)
            for (std::size_t a = 0; a < d; ++a)
                spread = std::max(spread, std::abs(pt[i][a] - pt[0][a]));
        if (spread < xtol) {
            conv = true;
            break;
        }

        for (std::size_t a = 0; a < d; ++a) {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s += pt[i][a];
            cen[a] = s / static_cast<double>(d);
        }
        for (std::size_t a = 0; a < d; ++a) xr[a] = cen[a] + (cen[a] - pt[d][a]);
        double fr = eval(xr);

        if (fr > fv[0]) {
            for (std::size_t a = 0; a < d; ++a) xe[a] = cen[a] + 2.0 * (cen[a] - pt[d][a]);
            double fe = eval(xe);
            if (fe > fr) {
                pt[d] = xe;
                fv[d] = fe;
            } else {
                pt[d] = xr;
                fv[d] = fr;
            }
            continue;
        }
        if (fr > fv[d - 1]) {
            pt[d] = xr;
            fv[d] = fr;
            continue;
        }
        bool shrink = false;
        if (fr > fv[d]) { // outside contraction
            for (std::size_t a = 0; a < d; ++a) xc[a] = cen[a] + 0.5 * (cen[a] - pt[d][a]);
            double fc = eval(xc);
            if (fc >= fr) {
                pt[d] = xc;
                fv[d] = fc;
            } else {
                shrink = true;
            }
        } else { // inside contraction
            for (std::size_t a = 0; a < d; ++a) xc[a] = cen[a] - 0.5 * (cen[a] - pt[d][a]);
            double fc = eval(xc);
            if (fc > fv[d]) {
                pt[d] = xc;
                fv[d] = fc;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (std::size_t i = 1; i <= d; ++i) {
                for (std::size_t a = 0; a < d; ++a) pt[i][a] = pt[0][a] + 0.5 * (pt[i][a] - pt[0][a]);
                fv[i] = eval(pt[i]);
            }
        }
    }

    std::size_t bi = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (fv[i] > fv[bi]) bi = i;
    return {pt[bi], fv[bi], it, conv};
}

} // namespace symfid
