#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lambda_lab/series.hpp"

namespace lambda_lab {

/// Sparse bivariate integer polynomial; houses the level-p lambda modular polynomial.
class BivarIntPoly {
  public:
    using Exponent = std::pair<unsigned, unsigned>;
    using TermMap = std::map<Exponent, mpz_class>;

    BivarIntPoly() = default;
    explicit BivarIntPoly(unsigned p_level) : p_level_(p_level) {}

    unsigned p_level() const { return p_level_; }

    /// Coefficient of X^i Y^j (zero when absent).
    mpz_class coeff(unsigned i, unsigned j) const;
    /// Setting a zero coefficient erases the term.
    void set(unsigned i, unsigned j, const mpz_class &c);

    const TermMap &terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    unsigned degree_x() const;
    unsigned degree_y() const;

    friend bool operator==(const BivarIntPoly &, const BivarIntPoly &) = default;

  private:
    unsigned p_level_ = 0;
    TermMap terms_;
};

/// Dense univariate integer polynomial, lowest degree first, no trailing zeros.
class UnivarIntPoly {
  public:
    UnivarIntPoly() = default;
    explicit UnivarIntPoly(std::vector<mpz_class> coeffs);

    const std::vector<mpz_class> &coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    mpz_class coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : mpz_class(0); }
    const mpz_class &leading() const { return coeffs_.back(); }

    UnivarIntPoly derivative() const;

    friend bool operator==(const UnivarIntPoly &, const UnivarIntPoly &) = default;

  private:
    std::vector<mpz_class> coeffs_;
};

struct ModpolyOptions {
    /// Series terms used for the linear system; 0 selects (p+2)^2 + 16.
    std::int64_t precision = 0;
    /// Maximum number of word-size primes before giving up on CRT stabilisation.
    unsigned prime_budget = 64;
    /// Extra primes that must leave every lifted coefficient unchanged.
    unsigned stabilization_primes = 2;
    /// Times the precision is raised when the kernel is not one-dimensional.
    unsigned precision_retries = 2;
    unsigned jobs = 1;
};

struct ModpolyComputation {
    BivarIntPoly poly;
    std::int64_t precision = 0;
    unsigned primes_used = 0;
    unsigned precision_retries = 0;
};

ModpolyComputation compute_modpoly_detailed(unsigned p, const ModpolyOptions &opts = {});
BivarIntPoly compute_modpoly(unsigned p, const ModpolyOptions &opts = {});

/// Default series precision for level p: (p+2)^2 + 16.
std::int64_t default_modpoly_precision(unsigned p);

/// F(lambda(q), lambda(q^p)) over the integers, known modulo q^prec.
IntSeries evaluate_on_lambda(const BivarIntPoly &f, std::int64_t prec);

bool verify_symmetry(const BivarIntPoly &f);
/// F mod p == X^{p+1} - X^p Y^p - X Y + Y^{p+1}.
bool verify_kronecker(const BivarIntPoly &f);
/// Coefficient of X^{p+1} and of Y^{p+1} is 1 and both partial degrees are p+1.
bool verify_monic_degree(const BivarIntPoly &f);

/// R(X) = F(X, X^p) / p. Throws TheoremViolation when p does not divide F(X, X^p).
UnivarIntPoly r_polynomial(const BivarIntPoly &f);
/// f(X) = F(X, X). Throws TheoremViolation unless f == -(X^p - X)^2 mod p.
UnivarIntPoly diag_polynomial(const BivarIntPoly &f);

/// Reduce every coefficient into [0, m).
std::vector<std::uint64_t> reduce_mod(const UnivarIntPoly &f, std::uint64_t m);

// Cache records: "LAMBDA-MODPOLY v1 p=<p>", then "<i> <j> <coeff>" lines in
// (i,j) order, then "CHECKSUM <sha256 hex>" over all preceding bytes.

std::string serialize_modpoly(const BivarIntPoly &f);
/// Parses and checks a record. Throws CacheError on malformed input, checksum
/// mismatch, wrong level, or failed symmetry/Kronecker verification.
BivarIntPoly parse_modpoly(const std::string &text, unsigned expected_p);

std::filesystem::path cache_path(const std::filesystem::path &dir, unsigned p);
/// Writes through a temporary file and an atomic rename.
void cache_store(const BivarIntPoly &f, const std::filesystem::path &file);
BivarIntPoly cache_load(unsigned p, const std::filesystem::path &file);

std::string sha256_hex(const std::string &bytes);

extern const char *const kProducerVersion;

} // namespace lambda_lab
