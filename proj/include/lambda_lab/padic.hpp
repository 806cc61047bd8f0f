#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lambda_lab/finite_field.hpp"
#include "lambda_lab/modpoly.hpp"

namespace lambda_lab {

/// Element of Z_p known modulo p^precision.
///
/// Arithmetic keeps the largest precision that is sound for the inputs:
/// sums take the minimum, products min(Na + v(b), Nb + v(a)).
class PadicInt {
  public:
    PadicInt() = default;
    PadicInt(std::uint64_t p, const mpz_class &value, int precision);

    std::uint64_t p() const { return p_; }
    int precision() const { return precision_; }
    /// Representative in [0, p^precision).
    const mpz_class &value() const { return value_; }
    /// Capped at precision() for values indistinguishable from zero.
    int valuation() const;
    bool is_zero() const { return value_ == 0; }

    PadicInt operator+(const PadicInt &o) const;
    PadicInt operator-(const PadicInt &o) const;
    PadicInt operator-() const;
    PadicInt operator*(const PadicInt &o) const;

    /// Multiply by the exact integer p^k; precision grows by k.
    PadicInt shifted_up(int k) const;
    /// Exact division by p^k. Throws PrecisionError if p^k does not divide the value.
    PadicInt shifted_down(int k) const;
    /// Inverse of a unit. Throws InvalidArgument otherwise.
    PadicInt inverse() const;
    /// Same residue, precision lowered (or raised, padding with zero digits).
    PadicInt with_precision(int n) const;

    /// True when both agree modulo p^min(precisions).
    bool agrees_with(const PadicInt &o) const;

  private:
    mpz_class modulus() const;

    std::uint64_t p_ = 0;
    mpz_class value_;
    int precision_ = 0;
};

/// a + b pi in Z_p[pi], pi^2 = -p. Valuations are doubled so v(pi) = 1 unit.
class QuadPadic {
  public:
    QuadPadic() = default;
    QuadPadic(PadicInt a, PadicInt b);
    static QuadPadic from_int(std::uint64_t p, const mpz_class &v, int precision);

    std::uint64_t p() const { return a_.p(); }
    const PadicInt &a() const { return a_; }
    const PadicInt &b() const { return b_; }

    /// min(2 v(a), 2 v(b) + 1), capped at twice_precision().
    int twice_valuation() const;
    /// The element is known modulo pi^twice_precision().
    int twice_precision() const;

    QuadPadic operator+(const QuadPadic &o) const;
    QuadPadic operator-(const QuadPadic &o) const;
    QuadPadic operator-() const;
    QuadPadic operator*(const QuadPadic &o) const;
    QuadPadic pow(std::uint64_t e) const;
    QuadPadic conjugate() const;

    bool agrees_with(const QuadPadic &o) const;

  private:
    PadicInt a_;
    PadicInt b_;
};

/// "a + b*sqrt(-p) + O(p^N)" with half-integral N written as "k/2".
std::string to_string(const QuadPadic &x);

/// f(z) for an integer polynomial, coefficients taken at z's precision.
QuadPadic evaluate(const UnivarIntPoly &f, const QuadPadic &z);
/// F(x, y) for an integer bivariate polynomial.
QuadPadic evaluate(const BivarIntPoly &f, const QuadPadic &x, const QuadPadic &y);

/// Reduced primitive forms (a, b, c), b^2 - 4ac = -p. Requires p = 3 mod 4, p >= 7.
unsigned class_number(std::uint64_t p);

struct ClassNumberCheck {
    unsigned h = 0;
    std::size_t in_prime_field = 0;
    bool passed = false;
};

/// |S n F_p| == 3 h(-p).
ClassNumberCheck count_check_3h(std::uint64_t p, const SupersingularSet &s);

struct CmLift {
    QuadPadic lambda;
    /// Twice the residual valuation v(f(lambda_k)) before each Newton step and after the last.
    std::vector<int> residual_history;
    unsigned newton_steps = 0;
    int residual_twice_val = 0;
};

/// Root of f = F(X, X) in Z_p[sqrt(-p)] above the supersingular lambda0 in F_p,
/// with v(f(root)) >= target_precision. `root_choice` (0 or 1) picks which
/// square root starts b; the two choices give conjugate lifts.
CmLift cm_lift(const UnivarIntPoly &f, std::uint64_t p, std::uint64_t lambda0, int target_precision,
               int root_choice = 0);

/// Multiplicity of lambda0 as a root of f mod p.
unsigned root_multiplicity_mod_p(const UnivarIntPoly &f, std::uint64_t p, std::uint64_t lambda0);

struct Thm3Report {
    bool passed = false;
    int twice_val_value = 0; // v(F(l, l^p)), expected 2
    int twice_val_diff = 0;  // v(l - l^p), expected 1
    int twice_val_gap = 0;   // v(F(l, l^p) - (l - l^p)^2), expected >= 3
    /// Residues mod pi of F(l, l^p)/p and (l - l^p)^2/p.
    std::uint64_t value_residue = 0;
    std::uint64_t square_residue = 0;
};

/// F(l, l^p) == (l - l^p)^2 modulo p sqrt(-p), together with v(F(l, l^p)) = 1
/// and v(l - l^p) = 1/2. Throws PrecisionError if l is too coarse to decide.
Thm3Report verify_thm3(const BivarIntPoly &f, const QuadPadic &lambda1, std::uint64_t p);

} // namespace lambda_lab
