#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace lambda_lab {

/// Truncated Laurent series in the nome q with integer coefficients.
///
/// The series is known modulo q^precision: terms at or beyond `precision`
/// are unknown, not zero. Exact series (finite polynomials) carry
/// `kExact` as their precision. Trailing zero coefficients are trimmed, so
/// `coeffs().size()` may be smaller than `precision() - valuation()`.
class IntSeries {
  public:
    static constexpr std::int64_t kExact = INT64_C(1) << 60;

    /// Exact zero.
    IntSeries() = default;

    /// coeffs[k] is the coefficient of q^(valuation + k); known below `precision`.
    IntSeries(std::int64_t valuation, std::vector<mpz_class> coeffs, std::int64_t precision);

    static IntSeries exact(std::int64_t valuation, std::vector<mpz_class> coeffs);
    static IntSeries one() { return exact(0, {mpz_class(1)}); }
    static IntSeries zero(std::int64_t precision) { return IntSeries(precision, {}, precision); }

    std::int64_t valuation() const { return valuation_; }
    std::int64_t precision() const { return precision_; }
    bool is_exact() const { return precision_ >= kExact; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<mpz_class> &coeffs() const { return coeffs_; }

    /// Coefficient of q^n. Throws PrecisionError when n >= precision.
    mpz_class coeff(std::int64_t n) const;

    /// Drop everything at or beyond q^new_precision.
    IntSeries truncated(std::int64_t new_precision) const;

    IntSeries operator-() const;

    friend bool operator==(const IntSeries &, const IntSeries &) = default;

  private:
    void normalize();

    std::int64_t valuation_ = kExact;
    std::vector<mpz_class> coeffs_;
    std::int64_t precision_ = kExact;
};

IntSeries series_add(const IntSeries &a, const IntSeries &b);
IntSeries series_sub(const IntSeries &a, const IntSeries &b);
IntSeries series_mul(const IntSeries &a, const IntSeries &b);
IntSeries series_scale(const IntSeries &a, const mpz_class &c);

/// Multiplicative inverse over Z[[q]][q^-1]. The leading coefficient must be
/// +1 or -1; anything else throws InvalidArgument.
IntSeries series_inv(const IntSeries &a);

IntSeries series_pow(const IntSeries &a, unsigned n);

/// q -> q^m. Precision scales by m.
IntSeries substitute_qpow(const IntSeries &a, unsigned m);

/// Legendre lambda in the nome q = exp(pi i tau), known modulo q^prec:
///   16 q prod_{n>=1} ((1 + q^{2n}) / (1 + q^{2n-1}))^8.
IntSeries lambda_qexp(std::int64_t prec);

inline IntSeries operator+(const IntSeries &a, const IntSeries &b) { return series_add(a, b); }
inline IntSeries operator-(const IntSeries &a, const IntSeries &b) { return series_sub(a, b); }
inline IntSeries operator*(const IntSeries &a, const IntSeries &b) { return series_mul(a, b); }

std::string to_string(const IntSeries &s);
std::ostream &operator<<(std::ostream &os, const IntSeries &s);

} // namespace lambda_lab
