#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace symfid {

namespace detail {

// Pascal triangle in 128-bit integers; C(60,30) ~ 1.2e17 is nowhere near overflow.
inline const std::array<std::array<unsigned __int128, 61>, 61>& pascal128() {
    static const auto table = [] {
        std::array<std::array<unsigned __int128, 61>, 61> t{};
        for (int m = 0; m <= 60; ++m) {
            t[m][0] = 1;
            for (int j = 1; j <= m; ++j)
                t[m][j] = t[m - 1][j - 1] + (j <= m - 1 ? t[m - 1][j] : 0);
        }
        return t;
    }();
    return table;
}

} // namespace detail

// C_m^n with the usual convention C_m^n = 0 for n < 0 or n > m.
// Exact through m = 60, log-gamma based beyond.
inline double binom(int m, int n) {
    if (n < 0 || m < 0 || n > m) return 0.0;
    if (m <= 60) return static_cast<double>(detail::pascal128()[m][n]);
    return std::exp(std::lgamma(m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m - n + 1.0));
}

// log C_m^n; -inf outside the support so the zero convention survives exponentiation.
inline double log_binom(int m, int n) {
    if (n < 0 || m < 0 || n > m) return -std::numeric_limits<double>::infinity();
    return std::lgamma(m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m - n + 1.0);
}

} // namespace symfid
