#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lambda_lab/modpoly.hpp"

namespace lambda_lab {

/// Smallest quadratic non-residue modulo the odd prime p.
std::uint64_t smallest_nonresidue(std::uint64_t p);

/// Legendre symbol (a / p) in {-1, 0, 1}.
int legendre_symbol(std::uint64_t a, std::uint64_t p);

/// Element a + b s of F_{p^2} = F_p(s), s^2 = smallest_nonresidue(p).
///
/// Elements carry their field parameters so they can be combined with plain
/// operators; mixing elements of different fields throws InvalidArgument.
class Fp2Elem {
  public:
    Fp2Elem() = default;
    /// Reduces a and b modulo p.
    Fp2Elem(std::uint64_t p, std::uint64_t a, std::uint64_t b = 0);
    static Fp2Elem from_int(std::uint64_t p, std::int64_t v);

    std::uint64_t p() const { return p_; }
    std::uint64_t sigma() const { return sigma_; }
    std::uint64_t a() const { return a_; }
    std::uint64_t b() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool in_prime_field() const { return b_ == 0; }

    Fp2Elem operator+(const Fp2Elem &o) const;
    Fp2Elem operator-(const Fp2Elem &o) const;
    Fp2Elem operator-() const;
    Fp2Elem operator*(const Fp2Elem &o) const;
    Fp2Elem operator/(const Fp2Elem &o) const { return *this * o.inverse(); }

    Fp2Elem pow(std::uint64_t e) const;
    /// Throws InvalidArgument for zero.
    Fp2Elem inverse() const;
    /// x -> x^p, i.e. a + b s -> a - b s.
    Fp2Elem frobenius() const;
    /// x^{p+1} = a^2 - sigma b^2, an element of F_p.
    std::uint64_t norm() const;

    bool operator==(const Fp2Elem &o) const { return p_ == o.p_ && a_ == o.a_ && b_ == o.b_; }
    bool operator<(const Fp2Elem &o) const { return a_ != o.a_ ? a_ < o.a_ : b_ < o.b_; }

  private:
    void check_same(const Fp2Elem &o) const;

    std::uint64_t p_ = 0;
    std::uint64_t sigma_ = 0;
    std::uint64_t a_ = 0;
    std::uint64_t b_ = 0;
};

std::string to_string(const Fp2Elem &x);
std::ostream &operator<<(std::ostream &os, const Fp2Elem &x);

/// Every element of F_{p^2}, lexicographic in (a, b).
std::vector<Fp2Elem> all_elements(std::uint64_t p);

/// Dense polynomial over F_p, lowest degree first, no trailing zeros.
class FpPoly {
  public:
    FpPoly() = default;
    FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs);
    /// Coefficientwise reduction of an integer polynomial.
    static FpPoly reduce(const UnivarIntPoly &f, std::uint64_t p);

    std::uint64_t p() const { return p_; }
    const std::vector<std::uint64_t> &coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    Fp2Elem evaluate(const Fp2Elem &x) const;
    FpPoly derivative() const;

    friend bool operator==(const FpPoly &, const FpPoly &) = default;

  private:
    std::uint64_t p_ = 0;
    std::vector<std::uint64_t> coeffs_;
};

/// Deuring polynomial sum_{i=0}^{m} C(m,i)^2 X^i mod p, m = (p-1)/2.
FpPoly hasse_polynomial(std::uint64_t p);

struct SupersingularSet {
    std::uint64_t p = 0;
    std::vector<Fp2Elem> lambdas; // lexicographic in (a, b)

    std::size_t size() const { return lambdas.size(); }
    std::size_t count_in_prime_field() const;
    bool contains(const Fp2Elem &x) const;
    bool frobenius_closed() const;
};

enum class OracleCheck { full, none };

/// Roots of the Hasse polynomial in F_{p^2} by exhaustive scan. With
/// OracleCheck::full the result is compared against the point-count criterion
/// on every element of F_{p^2} other than 0 and 1. Throws InternalError on any
/// inconsistency (wrong root count, repeated root, oracle disagreement).
SupersingularSet supersingular_lambdas(std::uint64_t p, OracleCheck check = OracleCheck::full);

/// Trace of Frobenius over F_{p^2} of y^2 = x(x-1)(x-lam): p^2 + 1 - #E(F_{p^2}).
std::int64_t legendre_curve_trace(const Fp2Elem &lam);

/// Supersingular iff the F_{p^2}-trace vanishes mod p. lam must not be 0 or 1.
bool is_supersingular_pointcount(std::uint64_t p, const Fp2Elem &lam);

Fp2Elem evaluate_rbar(const FpPoly &rbar, const Fp2Elem &lam);

/// (-1)^{(p-1)/2} * prod_{k != i} (lambda_i - lambda_k)^{-(p+1)}.
Fp2Elem corollary_prediction(const SupersingularSet &s, std::size_t i);

struct CorollaryEntry {
    Fp2Elem lambda;
    Fp2Elem rbar_value;
    Fp2Elem prediction;
    int sign = 0;
};

struct CorollaryReport {
    std::uint64_t p = 0;
    std::vector<CorollaryEntry> entries;
    std::vector<int> signs() const;
};

/// Computes sign_i = Rbar(lambda_i) / corollary_prediction(i). Throws
/// TheoremViolation unless every sign is +-1, and +1 when p = 1 mod 4 or
/// lambda_i lies in F_p.
CorollaryReport corollary_check(std::uint64_t p, const FpPoly &rbar, const SupersingularSet &s);

struct VanishingReport {
    bool passed = true;
    std::size_t scanned = 0;
    std::vector<Fp2Elem> nonvanishing; // ordinary points where Rbar != 0
    Fp2Elem at_zero;
    Fp2Elem at_one;
};

/// Rbar(lam) == 0 for every lam in F_{p^2} \ (S u {0, 1}). Values at 0 and 1
/// are recorded, not asserted.
VanishingReport ordinary_vanishing_check(std::uint64_t p, const FpPoly &rbar, const SupersingularSet &s);

} // namespace lambda_lab
