#include <doctest.h>

#include <random>

#include "lambda_lab/error.hpp"
#include "lambda_lab/finite_field.hpp"
#include "oracles.hpp"

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

FpPoly rbar(unsigned p) { return FpPoly::reduce(r_polynomial(modpoly(p)), p); }

} // namespace

TEST_CASE("field axioms on random elements") {
    std::mt19937_64 rng(99);
    for (std::uint64_t p : {5ULL, 7ULL, 13ULL, 31ULL, 101ULL}) {
        std::uniform_int_distribution<std::uint64_t> d(0, p - 1);
        const Fp2Elem zero(p, 0), one(p, 1);
        for (int t = 0; t < 50; ++t) {
            const Fp2Elem x(p, d(rng), d(rng)), y(p, d(rng), d(rng)), z(p, d(rng), d(rng));
            CHECK(x + y == y + x);
            CHECK(x * y == y * x);
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
            CHECK(x + zero == x);
            CHECK(x * one == x);
            CHECK(x - x == zero);
            if (!x.is_zero()) {
                CHECK(x * x.inverse() == one);
                CHECK(x.pow(p * p - 1) == one);
            }
            // Frobenius: ring automorphism of order two.
            CHECK((x * y).frobenius() == x.frobenius() * y.frobenius());
            CHECK((x + y).frobenius() == x.frobenius() + y.frobenius());
            CHECK(x.frobenius().frobenius() == x);
            CHECK(x.frobenius() == x.pow(p));
            CHECK(Fp2Elem(p, x.norm()) == x.pow(p + 1));
        }
        for (const Fp2Elem &x : all_elements(p <= 31 ? p : 5)) {
            CHECK((x.frobenius() == x) == x.in_prime_field());
        }
        CHECK_THROWS_AS(zero.inverse(), InvalidArgument);
    }
    CHECK_THROWS_AS(Fp2Elem(5, 1) + Fp2Elem(7, 1), InvalidArgument);
}

TEST_CASE("non-residues and printing") {
    CHECK(smallest_nonresidue(5) == 2);
    CHECK(smallest_nonresidue(7) == 3);
    CHECK(smallest_nonresidue(17) == 3);
    CHECK(legendre_symbol(2, 7) == 1);
    CHECK(legendre_symbol(3, 7) == -1);
    CHECK(legendre_symbol(14, 7) == 0);
    CHECK(to_string(Fp2Elem(5, 3, 2)) == "3+2*s");
    CHECK(to_string(Fp2Elem(7, 6)) == "6");
}

TEST_CASE("Hasse polynomial") {
    CHECK(hasse_polynomial(5).coeffs() == std::vector<std::uint64_t>{1, 4, 1});
    CHECK(hasse_polynomial(7).coeffs() == std::vector<std::uint64_t>{1, 2, 2, 1});
    CHECK(hasse_polynomial(13).degree() == 6);
    CHECK_THROWS_AS(hasse_polynomial(3), InvalidArgument);
}

TEST_CASE("supersingular sets") {
    const SupersingularSet s7 = supersingular_lambdas(7);
    CHECK(s7.lambdas == std::vector<Fp2Elem>{Fp2Elem(7, 2), Fp2Elem(7, 4), Fp2Elem(7, 6)});

    const SupersingularSet s5 = supersingular_lambdas(5);
    REQUIRE(s5.size() == 2);
    CHECK(s5.count_in_prime_field() == 0);
    for (const Fp2Elem &l : s5.lambdas) {
        CHECK((l * l - l + Fp2Elem(5, 1)).is_zero());
    }
    CHECK(s5.lambdas[0].frobenius() == s5.lambdas[1]);

    CHECK(supersingular_lambdas(13).size() == 6);
    for (unsigned p : {5U, 7U, 11U, 13U, 17U, 19U, 23U, 29U, 31U}) {
        const SupersingularSet s = supersingular_lambdas(p);
        CHECK(s.size() == (p - 1) / 2);
        CHECK(s.frobenius_closed());
        CHECK((s.count_in_prime_field() > 0) == (p % 4 == 3));
    }
}

TEST_CASE("point-count criterion") {
    CHECK(is_supersingular_pointcount(7, Fp2Elem(7, 2)));
    CHECK_FALSE(is_supersingular_pointcount(7, Fp2Elem(7, 3)));
    CHECK_FALSE(is_supersingular_pointcount(5, Fp2Elem(5, 2)));
    CHECK_THROWS_AS(is_supersingular_pointcount(7, Fp2Elem(7, 0)), InvalidArgument);
    CHECK_THROWS_AS(is_supersingular_pointcount(7, Fp2Elem(7, 1)), InvalidArgument);

    // Trace against a brute-force count of points.
    for (std::uint64_t p : {5ULL, 7ULL, 11ULL}) {
        const oracle::Gf gf(p);
        for (const Fp2Elem &l : all_elements(p)) {
            if (l == Fp2Elem(p, 0) || l == Fp2Elem(p, 1)) {
                continue;
            }
            const auto n = static_cast<std::int64_t>(gf.count_points({l.a(), l.b()}));
            CHECK(legendre_curve_trace(l) == static_cast<std::int64_t>(p * p + 1) - n);
        }
    }
}

TEST_CASE("Hasse roots agree with brute-force point counts") {
    for (std::uint64_t p : {5ULL, 7ULL, 13ULL}) {
        const SupersingularSet s = supersingular_lambdas(p, OracleCheck::none);
        const oracle::Gf gf(p);
        for (const Fp2Elem &l : all_elements(p)) {
            if (l == Fp2Elem(p, 0) || l == Fp2Elem(p, 1)) {
                continue;
            }
            CHECK(s.contains(l) == gf.supersingular({l.a(), l.b()}));
        }
    }
}

TEST_CASE("R-bar evaluation") {
    CHECK(evaluate_rbar(FpPoly(7, {}), Fp2Elem(7, 3, 4)).is_zero());
    CHECK(evaluate_rbar(rbar(7), Fp2Elem(7, 3)).is_zero());
    CHECK(evaluate_rbar(rbar(7), Fp2Elem(7, 6)) == Fp2Elem(7, 6));
}

TEST_CASE("corollary signs") {
    const auto r5 = corollary_check(5, rbar(5), supersingular_lambdas(5));
    CHECK(r5.signs() == std::vector<int>{1, 1});
    const auto r7 = corollary_check(7, rbar(7), supersingular_lambdas(7));
    CHECK(r7.signs() == std::vector<int>{1, 1, 1});
    for (const auto &e : r7.entries) {
        CHECK(e.rbar_value == e.prediction);
    }
    // A polynomial that is +-1 times the wrong thing must be rejected.
    CHECK_THROWS_AS(corollary_check(7, FpPoly(7, {2}), supersingular_lambdas(7)), TheoremViolation);
    CHECK_THROWS_AS(corollary_check(7, FpPoly(7, {6}), supersingular_lambdas(7)), TheoremViolation);
}

TEST_CASE("ordinary vanishing") {
    for (unsigned p : {5U, 7U, 11U}) {
        const VanishingReport v = ordinary_vanishing_check(p, rbar(p), supersingular_lambdas(p));
        CHECK(v.passed);
        CHECK(v.nonvanishing.empty());
        CHECK(v.scanned == p * p - 2 - (p - 1) / 2);
    }
    const VanishingReport bad = ordinary_vanishing_check(7, FpPoly(7, {1}), supersingular_lambdas(7));
    CHECK_FALSE(bad.passed);
}
