#include <doctest.h>

#include <random>

#include "lambda_lab/error.hpp"
#include "lambda_lab/series.hpp"
#include "oracles.hpp"

using namespace lambda_lab;

namespace {

IntSeries ser(std::int64_t v, std::vector<long> cs, std::int64_t prec) {
    std::vector<mpz_class> m(cs.begin(), cs.end());
    return IntSeries(v, m, prec);
}

IntSeries random_series(std::mt19937_64 &rng, std::int64_t prec) {
    std::uniform_int_distribution<long> coeff(-50, 50);
    std::uniform_int_distribution<int> val(0, 3);
    const int v = val(rng);
    std::vector<mpz_class> cs;
    for (std::int64_t k = v; k < prec; ++k) {
        cs.emplace_back(coeff(rng));
    }
    return IntSeries(v, cs, prec);
}

} // namespace

TEST_CASE("addition keeps the smaller precision") {
    CHECK(ser(1, {16}, 2) + IntSeries() == ser(1, {16}, 2));
    const IntSeries z = ser(1, {1, -1}, IntSeries::kExact) + ser(1, {-1, 1}, 3);
    CHECK(z.is_zero());
    CHECK(z.precision() == 3);
    CHECK(to_string(ser(1, {16}, 5) + ser(2, {-128}, 3)) == "16q - 128q^2 + O(q^3)");
}

TEST_CASE("multiplication") {
    CHECK(ser(1, {16}, IntSeries::kExact) * IntSeries::one() == ser(1, {16}, IntSeries::kExact));
    CHECK(IntSeries::exact(1, {1}) * IntSeries::exact(1, {1}) == IntSeries::exact(2, {1}));
    const IntSeries c = ser(0, {1, -8}, 2) * ser(0, {1, 8}, 2);
    CHECK(c == ser(0, {1}, 2));
    CHECK(c.coeff(1) == 0);
    CHECK_THROWS_AS(c.coeff(2), PrecisionError);
}

TEST_CASE("inverse") {
    CHECK(series_inv(IntSeries::one()) == IntSeries::one());
    CHECK(series_inv(ser(0, {1, 1}, 3)) == ser(0, {1, -1, 1}, 3));
    CHECK_THROWS_AS(series_inv(IntSeries::exact(0, {2, 1})), InvalidArgument);
    CHECK_THROWS_AS(series_inv(IntSeries::zero(5)), InvalidArgument);
    // A negative-valuation inverse of a monomial.
    CHECK(series_inv(IntSeries::exact(2, {-1})) == IntSeries::exact(-2, {-1}));
}

TEST_CASE("powers") {
    const IntSeries a = ser(1, {16}, 2);
    CHECK(series_pow(a, 0) == IntSeries::one());
    CHECK(series_pow(a, 2) == ser(2, {256}, 3));
    CHECK(series_pow(ser(0, {1, -8}, 2), 2) == ser(0, {1, -16}, 2));
}

TEST_CASE("lambda expansion") {
    CHECK(to_string(lambda_qexp(3)) == "16q - 128q^2 + O(q^3)");
    CHECK(lambda_qexp(5) == ser(1, {16, -128, 704, -3072}, 5));
    CHECK(lambda_qexp(8).coeff(1) == 16);
    CHECK(lambda_qexp(8).valuation() == 1);
}

TEST_CASE("substitution") {
    const IntSeries a = ser(1, {16, -128}, 3);
    CHECK(substitute_qpow(a, 3) == IntSeries(3, {16, 0, 0, -128}, 9));
    CHECK(substitute_qpow(a, 1) == a);
    CHECK(substitute_qpow(lambda_qexp(3), 5) == IntSeries(5, {16, 0, 0, 0, 0, -128}, 15));
}

TEST_CASE("ring laws hold on random truncations") {
    std::mt19937_64 rng(20241);
    for (int trial = 0; trial < 40; ++trial) {
        const std::int64_t prec = 12;
        const IntSeries a = random_series(rng, prec), b = random_series(rng, prec), c = random_series(rng, prec);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("a * inv(a) is one up to the known precision") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> coeff(-30, 30);
    for (int trial = 0; trial < 30; ++trial) {
        const std::int64_t prec = 15;
        std::vector<mpz_class> cs{trial % 2 ? 1 : -1};
        for (int k = 1; k < prec; ++k) {
            cs.emplace_back(coeff(rng));
        }
        const IntSeries a(0, cs, prec);
        const IntSeries prod = a * series_inv(a);
        CHECK(prod == IntSeries(0, {mpz_class(1)}, prec));
    }
}

TEST_CASE("lambda expansion is prefix-stable") {
    const IntSeries big = lambda_qexp(60);
    for (std::int64_t m : {2, 7, 20, 41}) {
        CHECK(big.truncated(m) == lambda_qexp(m));
    }
}

TEST_CASE("lambda expansion matches the theta quotient") {
    const std::size_t n = 40;
    const oracle::Dense want = oracle::theta_lambda(n);
    const IntSeries got = lambda_qexp(static_cast<std::int64_t>(n));
    for (std::size_t k = 0; k < n; ++k) {
        CHECK(got.coeff(static_cast<std::int64_t>(k)) == want[k]);
    }
}

TEST_CASE("substitution round-trips through the multiples of m") {
    std::mt19937_64 rng(3);
    for (unsigned m : {1U, 2U, 5U, 7U}) {
        const IntSeries a = random_series(rng, 10);
        const IntSeries s = substitute_qpow(a, m);
        CHECK(s.precision() == a.precision() * m);
        std::vector<mpz_class> back;
        for (std::int64_t k = a.valuation(); k < a.precision(); ++k) {
            back.push_back(s.coeff(k * m));
            for (unsigned r = 1; r < m && (k * m + r) < s.precision(); ++r) {
                CHECK(s.coeff(k * m + r) == 0);
            }
        }
        CHECK(IntSeries(a.valuation(), back, a.precision()) == a);
    }
}
