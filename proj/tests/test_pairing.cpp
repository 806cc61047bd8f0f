#include <doctest.h>

#include <random>

#include "lambda_lab/error.hpp"
#include "lambda_lab/pairing.hpp"

using namespace lambda_lab;

namespace {

const BivarIntPoly &modpoly(unsigned p) {
    static std::map<unsigned, BivarIntPoly> memo;
    auto it = memo.find(p);
    if (it == memo.end()) {
        it = memo.emplace(p, compute_modpoly(p)).first;
    }
    return it->second;
}

} // namespace

TEST_CASE("leading unit group laws") {
    const std::uint64_t p = 11;
    const Fp2Elem u(p, 3, 5), v(p, 7, 1), w(p, 2, 9);
    const LeadingUnit one{0, Fp2Elem(p, 1)};
    CHECK(lu_mul(one, one) == one);
    CHECK(lu_pow(LeadingUnit{1, u}, -1) == LeadingUnit{-1, u.inverse()});
    CHECK(lu_mul(LeadingUnit{1, u}, LeadingUnit{1, v}) == LeadingUnit{2, u * v});

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> d(1, p - 1);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int t = 0; t < 30; ++t) {
        const LeadingUnit a{val(rng), Fp2Elem(p, d(rng), d(rng))}, b{val(rng), Fp2Elem(p, d(rng), 0)},
            c{val(rng), Fp2Elem(p, 0, d(rng))};
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * one == a);
        CHECK(a * lu_pow(a, -1) == one);
        CHECK(lu_pow(a, 3) == a * a * a);
    }
    CHECK(to_string(LeadingUnit{2, Fp2Elem(7, 6)}) == "(1, 6)");
    CHECK(to_string(LeadingUnit{1, Fp2Elem(7, 3, 1)}) == "(1/2, 3+s)");
    (void)w;
}

TEST_CASE("unramified ring modulo p^2") {
    const std::uint64_t p = 7;
    const UnramifiedMod2 x(p, 10, 20), y(p, 33, 4);
    CHECK(x * y == y * x);
    CHECK((x * y).reduce() == x.reduce() * y.reduce());
    CHECK((x + y).reduce() == x.reduce() + y.reduce());
    CHECK(UnramifiedMod2(p, 7, 14).divisible_by_p());
    CHECK_FALSE(UnramifiedMod2(p, 7, 15).divisible_by_p());
    CHECK(x.pow(3) == x * x * x);
    CHECK_THROWS_AS(UnramifiedMod2(65537, 1, 0), InvalidArgument);
}

TEST_CASE("off-diagonal entries") {
    CHECK(phi_offdiag(Fp2Elem(7, 6), Fp2Elem(7, 2)) == LeadingUnit{0, Fp2Elem(7, 2)});
    CHECK_THROWS_AS(phi_offdiag(Fp2Elem(7, 2), Fp2Elem(7, 2)), InvalidArgument);
}

TEST_CASE("diagonal entries") {
    const SupersingularSet s = supersingular_lambdas(7);
    const auto [plus, minus] = phi_diag_theorem(s, 2);
    CHECK(plus == LeadingUnit{2, Fp2Elem(7, 1)});
    CHECK(minus == LeadingUnit{2, Fp2Elem(7, 6)});
    CHECK(phi_diag_via_modpoly(modpoly(7), Fp2Elem(7, 6)) == LeadingUnit{2, Fp2Elem(7, 6)});
}

TEST_CASE("diagonal is lift-independent and equals R-bar") {
    std::mt19937_64 rng(11);
    for (unsigned p : {5U, 7U, 11U, 13U}) {
        const BivarIntPoly &f = modpoly(p);
        const FpPoly rb = FpPoly::reduce(r_polynomial(f), p);
        for (const Fp2Elem &l : supersingular_lambdas(p).lambdas) {
            const LeadingUnit want{2, evaluate_rbar(rb, l)};
            CHECK(phi_diag_via_modpoly(f, l) == want);
            for (int k = 0; k < 3; ++k) {
                CHECK(phi_diag_via_modpoly(f, UnramifiedMod2::random_lift(l, rng)) == want);
            }
        }
    }
}

TEST_CASE("pairing matrix") {
    for (unsigned p : {5U, 7U, 11U, 13U}) {
        const PairingMatrix m = build_pairing_matrix(modpoly(p), supersingular_lambdas(p));
        CHECK(m.is_symmetric());
        const int parity = ((p - 1) / 2) % 2 == 0 ? 1 : -1;
        for (std::size_t i = 0; i < m.entries.size(); ++i) {
            CHECK(m.corollary_signs[i] == m.signs[i] * parity);
            for (std::size_t j = 0; j < m.entries.size(); ++j) {
                CHECK(m.entries[i][j].twice_val == (i == j ? 2 : 0));
                if (i != j) {
                    CHECK(m.entries[i][j].unit.in_prime_field());
                }
            }
        }
    }
    CHECK_THROWS_AS(build_pairing_matrix(modpoly(5), supersingular_lambdas(7)), InvalidArgument);
}
