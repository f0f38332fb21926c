#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "symfid/lu_opt.hpp"
#include "symfid/states.hpp"

using namespace symfid;
using Catch::Approx;

namespace {

std::mt19937 rng(40490);

SpinorParam random_spinor() {
    std::normal_distribution<double> g(0.0, 1.0);
    SpinorParam p{{g(rng), g(rng), g(rng), g(rng)}};
    double nn = 0.0;
    for (double v : p.q) nn += v * v;
    nn = std::sqrt(nn);
    for (double& v : p.q) v /= nn;
    return p;
}

SymState random_sym(int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> co(static_cast<std::size_t>(n + 1));
    double nn = 0.0;
    for (cplx& c : co) {
        c = {g(rng), g(rng)};
        nn += std::norm(c);
    }
    nn = std::sqrt(nn);
    for (cplx& c : co) c /= nn;
    return SymState(n, co);
}

} // namespace

TEST_CASE("su2_from_param yields a special unitary") {
    for (int t = 0; t < 20; ++t) {
        LocalOperator u = su2_from_param(random_spinor());
        CHECK(std::abs(u.det() - cplx(1.0, 0.0)) < 1e-12);
        cplx g00 = std::conj(u.m00) * u.m00 + std::conj(u.m10) * u.m10;
        cplx g01 = std::conj(u.m00) * u.m01 + std::conj(u.m10) * u.m11;
        CHECK(std::abs(g00 - cplx(1.0, 0.0)) < 1e-12);
        CHECK(std::abs(g01) < 1e-12);
    }
    CHECK_THROWS_AS(su2_from_param(SpinorParam{{0.5, 0.0, 0.0, 0.0}}), domain_error);
}

TEST_CASE("sym_tensor_rep matches the dense diagonal action") {
    for (int n = 2; n <= 6; ++n) {
        LocalOperator u = su2_from_param(random_spinor());
        auto S = sym_tensor_rep(u, n);
        REQUIRE(S.size() == static_cast<std::size_t>((n + 1) * (n + 1)));

        SymState in = random_sym(n);
        std::vector<cplx> out(static_cast<std::size_t>(n + 1), 0.0);
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k)
                out[static_cast<std::size_t>(j)] +=
                    S[static_cast<std::size_t>(j * (n + 1) + k)] * in.coeffs[static_cast<std::size_t>(k)];

        DenseState lhs = sym_to_dense(SymState(n, out));
        std::vector<LocalOperator> ops(static_cast<std::size_t>(n), u);
        DenseState rhs = apply_local(ops, sym_to_dense(in)).state;
        for (std::size_t m = 0; m < lhs.amps.size(); ++m)
            CHECK(std::abs(lhs.amps[m] - rhs.amps[m]) < 1e-10);
    }
}

TEST_CASE("sym_tensor_rep of the identity is the identity") {
    auto S = sym_tensor_rep({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, 5);
    for (int j = 0; j <= 5; ++j)
        for (int k = 0; k <= 5; ++k)
            CHECK(std::abs(S[static_cast<std::size_t>(j * 6 + k)] -
                           (j == k ? cplx(1.0, 0.0) : cplx(0.0, 0.0))) < 1e-14);
}

TEST_CASE("max_overlap_symmetric finds exact matches and respects phases") {
    SymState psi = random_sym(4);
    CHECK(max_overlap_symmetric(psi, psi, 6, 7) == Approx(1.0).margin(1e-9));

    SymState rot = psi;
    for (cplx& c : rot.coeffs) c *= std::polar(1.0, 1.234);
    CHECK(max_overlap_symmetric(psi, rot, 6, 7) == Approx(1.0).margin(1e-9));
}

TEST_CASE("distinct Dicke states cannot be rotated onto each other") {
    double v = max_overlap_symmetric(dicke(4, 1), dicke(4, 2), 8, 11);
    CHECK(v > 0.0);
    CHECK(v < 1.0 - 1e-3);
    double vi = max_overlap_independent(sym_to_dense(dicke(4, 1)), sym_to_dense(dicke(4, 2)), 8, 11);
    CHECK(vi == Approx(v).margin(1e-6));
}

TEST_CASE("max_overlap_independent aligns any product pair perfectly") {
    std::normal_distribution<double> g(0.0, 1.0);
    for (int n : {2, 4}) {
        std::vector<Qubit> a, b;
        for (int i = 0; i < n; ++i) {
            a.push_back(Qubit(cplx(g(rng), g(rng)), cplx(g(rng), g(rng))));
            b.push_back(Qubit(cplx(g(rng), g(rng)), cplx(g(rng), g(rng))));
        }
        CHECK(max_overlap_independent(product_state(a), product_state(b), 4, 3) ==
              Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("max_overlap_independent validates its inputs") {
    CHECK_THROWS_AS(
        max_overlap_independent(sym_to_dense(dicke(3, 1)), sym_to_dense(dicke(4, 1)), 2, 1),
        domain_error);
    DenseState big;
    big.n = 15;
    big.amps.assign(std::size_t{1} << 15, 0.0);
    big.amps[0] = 1.0;
    CHECK_THROWS_AS(max_overlap_independent(big, big, 2, 1), capacity_error);
}

TEST_CASE("lu_equality_check closes the gap on symmetric pairs") {
    auto res = lu_equality_check(3, 5, 10, 42);
    REQUIRE(res.size() == 5);
    for (std::size_t t = 0; t < res.size(); ++t) {
        CHECK(std::abs(res[t].gap) <= 1e-6);
        CHECK(res[t].value_independent <= 1.0 + 1e-9);
        CHECK(res[t].value_symmetric <= 1.0 + 1e-9);
        CHECK(res[t].value_symmetric > 0.0);
        CHECK(res[t].restarts == 10);
        CHECK(res[t].seed == 42 + t);
    }
}

TEST_CASE("lu_equality_check is deterministic for a fixed seed") {
    auto a = lu_equality_check(2, 3, 5, 1234);
    auto b = lu_equality_check(2, 3, 5, 1234);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].value_independent == b[i].value_independent);
        CHECK(a[i].value_symmetric == b[i].value_symmetric);
    }
    CHECK_THROWS_AS(lu_equality_check(1, 3, 5, 1), domain_error);
    CHECK_THROWS_AS(lu_equality_check(15, 3, 5, 1), capacity_error);
    CHECK_THROWS_AS(lu_equality_check(3, 0, 5, 1), domain_error);
}
