#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lambda_lab/finite_field.hpp"
#include "lambda_lab/modpoly.hpp"

namespace lambda_lab {

/// Class in K^x / U_1(K): a valuation (stored doubled, v(p) = 1) and the
/// leading unit's residue in F_{p^2}^x.
struct LeadingUnit {
    int twice_val = 0;
    Fp2Elem unit;

    bool operator==(const LeadingUnit &) const = default;
};

LeadingUnit lu_mul(const LeadingUnit &x, const LeadingUnit &y);
LeadingUnit lu_pow(const LeadingUnit &x, std::int64_t n);
inline LeadingUnit operator*(const LeadingUnit &x, const LeadingUnit &y) { return lu_mul(x, y); }

/// "(1, 6)" or "(1/2, 3+s)".
std::string to_string(const LeadingUnit &x);

/// Element c0 + c1 t of (Z/p^2)[t] / (t^2 - sigma), i.e. W(F_{p^2}) / p^2,
/// with sigma the same non-residue that defines Fp2Elem.
class UnramifiedMod2 {
  public:
    UnramifiedMod2() = default;
    UnramifiedMod2(std::uint64_t p, std::uint64_t c0, std::uint64_t c1);

    /// Lift of x with the given offsets: (a + p*t0) + (b + p*t1) t.
    static UnramifiedMod2 lift(const Fp2Elem &x, std::uint64_t t0 = 0, std::uint64_t t1 = 0);
    static UnramifiedMod2 random_lift(const Fp2Elem &x, std::mt19937_64 &rng);

    std::uint64_t p() const { return p_; }
    std::uint64_t c0() const { return c0_; }
    std::uint64_t c1() const { return c1_; }

    UnramifiedMod2 operator+(const UnramifiedMod2 &o) const;
    UnramifiedMod2 operator-(const UnramifiedMod2 &o) const;
    UnramifiedMod2 operator*(const UnramifiedMod2 &o) const;
    UnramifiedMod2 pow(std::uint64_t e) const;

    Fp2Elem reduce() const;
    bool is_unit() const { return !reduce().is_zero(); }
    bool divisible_by_p() const { return c0_ % p_ == 0 && c1_ % p_ == 0; }
    bool is_zero() const { return c0_ == 0 && c1_ == 0; }

    bool operator==(const UnramifiedMod2 &) const = default;

  private:
    std::uint64_t p_ = 0;
    std::uint64_t modulus_ = 0;
    std::uint64_t sigma_ = 0;
    std::uint64_t c0_ = 0;
    std::uint64_t c1_ = 0;
};

/// F(beta, beta^p) in W(F_{p^2}) / p^2.
UnramifiedMod2 evaluate_frobenius_diagonal(const BivarIntPoly &f, const UnramifiedMod2 &beta);

/// (0, (li - lj)^{p+1}). Throws InvalidArgument when li == lj.
LeadingUnit phi_offdiag(const Fp2Elem &li, const Fp2Elem &lj);

/// (2, +u) and (2, -u) with u = prod_{k != i} (lambda_i - lambda_k)^{-(p+1)}.
std::pair<LeadingUnit, LeadingUnit> phi_diag_theorem(const SupersingularSet &s, std::size_t i);

/// Class of F(beta, beta^p) for a lift beta of a supersingular lambda: the value
/// is p times a unit. Throws TheoremViolation if it vanishes modulo p^2.
LeadingUnit phi_diag_via_modpoly(const BivarIntPoly &f, const UnramifiedMod2 &beta);
LeadingUnit phi_diag_via_modpoly(const BivarIntPoly &f, const Fp2Elem &lambda);

struct PairingMatrix {
    std::uint64_t p = 0;
    std::vector<Fp2Elem> lambdas;
    std::vector<std::vector<LeadingUnit>> entries;
    /// Diagonal divided by the "+" candidate of phi_diag_theorem.
    std::vector<int> signs;
    /// signs[i] * (-1)^{(p-1)/2}; equals the corollary_check sign.
    std::vector<int> corollary_signs;

    std::size_t size() const { return lambdas.size(); }
    bool is_symmetric() const;
};

/// Off-diagonal entries from phi_offdiag, diagonal from phi_diag_via_modpoly.
/// Throws TheoremViolation if a sign is not +-1, or if a corollary sign is -1
/// where p = 1 mod 4 or lambda_i lies in F_p.
PairingMatrix build_pairing_matrix(const BivarIntPoly &f, const SupersingularSet &s);

} // namespace lambda_lab
