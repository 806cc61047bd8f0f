#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "golden.hpp"
#include "lambda_lab/error.hpp"
#include "lambda_lab/modpoly.hpp"
#include "oracles.hpp"

using namespace lambda_lab;

namespace {

BivarIntPoly from_table(unsigned p, const golden::Table &t) {
    BivarIntPoly f(p);
    for (const auto &[e, c] : t) {
        f.set(e.first, e.second, c);
    }
    return f;
}

const BivarIntPoly &computed(unsigned p) {
    static std::map<unsigned, BivarIntPoly> memo;
    auto it = memo.find(p);
    if (it == memo.end()) {
        it = memo.emplace(p, compute_modpoly(p)).first;
    }
    return it->second;
}

// (X^p - Y)(X - Y^p) expanded by hand as a sparse product.
std::map<std::pair<unsigned, unsigned>, long> kronecker_product(unsigned p) {
    const std::vector<std::tuple<unsigned, unsigned, long>> a{{p, 0, 1}, {0, 1, -1}}, b{{1, 0, 1}, {0, p, -1}};
    std::map<std::pair<unsigned, unsigned>, long> r;
    for (const auto &[i1, j1, c1] : a) {
        for (const auto &[i2, j2, c2] : b) {
            r[{i1 + i2, j1 + j2}] += c1 * c2;
        }
    }
    return r;
}

std::filesystem::path scratch_dir(const std::string &name) {
    auto d = std::filesystem::temp_directory_path() / ("lambda_lab_test_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("level 3 matches the reference table") {
    const BivarIntPoly &f = computed(3);
    CHECK(f == from_table(3, golden::f3()));
    CHECK(f.coeff(3, 3) == -256);
    CHECK(f.coeff(2, 2) == -762);
}

TEST_CASE("level 5 matches the reference table") {
    const BivarIntPoly &f = computed(5);
    CHECK(f == from_table(5, golden::f5()));
    CHECK(f.coeff(5, 5) == -65536);
    CHECK(f.coeff(3, 3) == 691180);
    CHECK(f.coeff(5, 1) == -3590);
}

TEST_CASE("the relation holds well past the fitted precision") {
    for (unsigned p : {3U, 5U, 7U}) {
        const auto n = static_cast<std::size_t>(2 * default_modpoly_precision(p));
        CHECK(oracle::relation_defect(computed(p).terms(), p, n) == -1);
    }
}

TEST_CASE("recomputing at higher precision gives the same polynomial") {
    ModpolyOptions opts;
    opts.precision = default_modpoly_precision(7) + 40;
    CHECK(compute_modpoly(7, opts) == computed(7));
    opts.jobs = 3;
    CHECK(compute_modpoly(7, opts) == computed(7));
}

TEST_CASE("invalid levels") {
    CHECK_THROWS_AS(compute_modpoly(4), InvalidArgument);
    CHECK_THROWS_AS(compute_modpoly(2), InvalidArgument);
    ModpolyOptions opts;
    opts.precision = 10;
    CHECK_THROWS_AS(compute_modpoly(5, opts), InvalidArgument);
}

TEST_CASE("a tiny prime budget is reported") {
    ModpolyOptions opts;
    opts.prime_budget = 2;
    CHECK_THROWS_AS(compute_modpoly(13, opts), BudgetExhausted);
}

TEST_CASE("symmetry") {
    CHECK(verify_symmetry(from_table(3, golden::f3())));
    CHECK(verify_symmetry(from_table(5, golden::f5())));
    BivarIntPoly fake(3);
    fake.set(1, 0, 1);
    fake.set(0, 1, 2);
    CHECK_FALSE(verify_symmetry(fake));
}

TEST_CASE("Kronecker congruence against an explicit expansion") {
    CHECK(verify_kronecker(from_table(3, golden::f3())));
    CHECK(verify_kronecker(from_table(5, golden::f5())));
    BivarIntPoly fake(3);
    fake.set(4, 0, 1);
    fake.set(0, 4, 1);
    CHECK_FALSE(verify_kronecker(fake));

    for (unsigned p : {3U, 5U, 7U, 11U}) {
        const BivarIntPoly &f = computed(p);
        const auto want = kronecker_product(p);
        for (unsigned i = 0; i <= p + 1; ++i) {
            for (unsigned j = 0; j <= p + 1; ++j) {
                const auto it = want.find({i, j});
                const mpz_class w = it == want.end() ? 0 : it->second;
                const mpz_class diff = f.coeff(i, j) - w;
                CHECK(mpz_divisible_ui_p(diff.get_mpz_t(), p) != 0);
            }
        }
        CHECK(verify_kronecker(f));
        CHECK(verify_symmetry(f));
        CHECK(verify_monic_degree(f));
    }
}

TEST_CASE("R polynomial") {
    const UnivarIntPoly r3 = r_polynomial(from_table(3, golden::f3()));
    CHECK(r3.degree() == 12);
    CHECK(r3.leading() == -85);
    CHECK(r3.coeff(0) == 0);
    CHECK(r_polynomial(from_table(5, golden::f5())).degree() == 30);

    // p * R(X) == F(X, X^p), recomputed term by term.
    for (unsigned p : {3U, 5U, 7U}) {
        const BivarIntPoly &f = computed(p);
        const UnivarIntPoly r = r_polynomial(f);
        std::map<unsigned, mpz_class> direct;
        for (const auto &[e, c] : f.terms()) {
            direct[e.first + p * e.second] += c;
        }
        for (int k = 0; k <= r.degree(); ++k) {
            CHECK(p * r.coeff(k) == direct[k]);
        }
    }

    BivarIntPoly bad(3);
    bad.set(1, 0, 1);
    CHECK_THROWS_AS(r_polynomial(bad), TheoremViolation);
}

TEST_CASE("diagonal congruence") {
    const UnivarIntPoly f3 = diag_polynomial(from_table(3, golden::f3()));
    CHECK(f3.coeff(0) == 0);
    // -(X^5 - X)^2 = -X^10 + 2 X^6 - X^2
    const auto d5 = reduce_mod(diag_polynomial(from_table(5, golden::f5())), 5);
    std::vector<std::uint64_t> want(11, 0);
    want[10] = 4;
    want[6] = 2;
    want[2] = 4;
    CHECK(d5 == want);

    BivarIntPoly bad(3);
    bad.set(4, 0, 1);
    CHECK_THROWS_AS(diag_polynomial(bad), TheoremViolation);
}

TEST_CASE("cache round-trip and corruption") {
    const auto dir = scratch_dir("modpoly");
    const BivarIntPoly &f5 = computed(5);
    const auto file = cache_path(dir, 5);
    CHECK(file.filename() == "Fp_5.txt");
    cache_store(f5, file);
    CHECK(cache_load(5, file) == f5);
    CHECK(parse_modpoly(serialize_modpoly(f5), 5) == f5);
    CHECK_THROWS_AS(cache_load(7, file), CacheError);

    std::string text;
    {
        std::ifstream in(file);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    CHECK_THROWS_AS(parse_modpoly(text.substr(0, text.size() / 2), 5), CacheError);

    // Flip one coefficient and re-sign the record so that only the math checks can catch it.
    std::string flipped = text.substr(0, text.find("CHECKSUM"));
    const auto pos = flipped.find("5 5 -65536");
    REQUIRE(pos != std::string::npos);
    flipped.replace(pos, 10, "5 5 -65535");
    CHECK_THROWS_AS(parse_modpoly(flipped + "CHECKSUM " + sha256_hex(flipped) + "\n", 5), CacheError);
    // Without re-signing the checksum trips first.
    std::string unsigned_flip = text;
    unsigned_flip.replace(unsigned_flip.find("5 5 -65536"), 10, "5 5 -65535");
    CHECK_THROWS_AS(parse_modpoly(unsigned_flip, 5), CacheError);

    CHECK_THROWS_AS(cache_load(5, dir / "missing.txt"), CacheError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sha256 known answer") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
