#include "lambda_lab/series.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "lambda_lab/error.hpp"

namespace lambda_lab {

namespace {

std::int64_t clamp_prec(std::int64_t v) { return std::min(v, IntSeries::kExact); }

// a + b for precisions/valuations that may carry the kExact sentinel.
std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (a >= IntSeries::kExact || b >= IntSeries::kExact) {
        return IntSeries::kExact;
    }
    return clamp_prec(a + b);
}

// Multiply a dense buffer in place by (1 + q^m), truncating at buf.size().
void mul_binomial(std::vector<mpz_class> &buf, std::size_t m) {
    for (std::size_t k = buf.size(); k-- > m;) {
        buf[k] += buf[k - m];
    }
}

} // namespace

IntSeries::IntSeries(std::int64_t valuation, std::vector<mpz_class> coeffs, std::int64_t precision)
    : valuation_(valuation), coeffs_(std::move(coeffs)), precision_(clamp_prec(precision)) {
    normalize();
}

IntSeries IntSeries::exact(std::int64_t valuation, std::vector<mpz_class> coeffs) {
    return IntSeries(valuation, std::move(coeffs), kExact);
}

void IntSeries::normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) {
        ++lead;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        valuation_ += static_cast<std::int64_t>(lead);
    }
    if (!is_exact()) {
        const std::int64_t room = std::max<std::int64_t>(0, precision_ - valuation_);
        if (static_cast<std::int64_t>(coeffs_.size()) > room) {
            coeffs_.resize(static_cast<std::size_t>(room));
        }
    }
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
    if (coeffs_.empty()) {
        valuation_ = precision_;
    }
}

mpz_class IntSeries::coeff(std::int64_t n) const {
    if (n >= precision_) {
        throw PrecisionError("coefficient of q^" + std::to_string(n) + " requested beyond precision " +
                             std::to_string(precision_));
    }
    const std::int64_t k = n - valuation_;
    if (k < 0 || k >= static_cast<std::int64_t>(coeffs_.size())) {
        return 0;
    }
    return coeffs_[static_cast<std::size_t>(k)];
}

IntSeries IntSeries::truncated(std::int64_t new_precision) const {
    return IntSeries(valuation_, coeffs_, std::min(precision_, new_precision));
}

IntSeries IntSeries::operator-() const {
    IntSeries r = *this;
    for (auto &c : r.coeffs_) {
        c = -c;
    }
    return r;
}

IntSeries series_add(const IntSeries &a, const IntSeries &b) {
    const std::int64_t prec = std::min(a.precision(), b.precision());
    if (a.is_zero() && b.is_zero()) {
        return IntSeries::zero(prec);
    }
    const std::int64_t lo = std::min(a.valuation(), b.valuation());
    std::int64_t hi = std::max(a.valuation() + static_cast<std::int64_t>(a.coeffs().size()),
                               b.valuation() + static_cast<std::int64_t>(b.coeffs().size()));
    hi = std::min(hi, prec);
    if (hi <= lo) {
        return IntSeries::zero(prec);
    }
    std::vector<mpz_class> out(static_cast<std::size_t>(hi - lo));
    for (const IntSeries *s : {&a, &b}) {
        for (std::size_t k = 0; k < s->coeffs().size(); ++k) {
            const std::int64_t e = s->valuation() + static_cast<std::int64_t>(k);
            if (e >= hi) {
                break;
            }
            out[static_cast<std::size_t>(e - lo)] += s->coeffs()[k];
        }
    }
    return IntSeries(lo, std::move(out), prec);
}

IntSeries series_sub(const IntSeries &a, const IntSeries &b) { return series_add(a, -b); }

IntSeries series_scale(const IntSeries &a, const mpz_class &c) {
    std::vector<mpz_class> out = a.coeffs();
    for (auto &x : out) {
        x *= c;
    }
    return IntSeries(a.valuation(), std::move(out), a.precision());
}

IntSeries series_mul(const IntSeries &a, const IntSeries &b) {
    // (A + O(q^Pa)) (B + O(q^Pb)) = AB + O(q^min(va + Pb, vb + Pa))
    const std::int64_t prec = std::min(sat_add(a.valuation(), b.precision()), sat_add(b.valuation(), a.precision()));
    if (a.is_zero() || b.is_zero()) {
        return IntSeries::zero(prec);
    }
    const std::int64_t val = a.valuation() + b.valuation();
    const std::size_t na = a.coeffs().size();
    const std::size_t nb = b.coeffs().size();
    std::size_t len = na + nb - 1;
    if (prec < IntSeries::kExact) {
        len = std::min<std::size_t>(len, static_cast<std::size_t>(std::max<std::int64_t>(0, prec - val)));
    }
    std::vector<mpz_class> out(len);
    for (std::size_t i = 0; i < na && i < len; ++i) {
        const mpz_class &ai = a.coeffs()[i];
        if (ai == 0) {
            continue;
        }
        const std::size_t jmax = std::min(nb, len - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            mpz_addmul(out[i + j].get_mpz_t(), ai.get_mpz_t(), b.coeffs()[j].get_mpz_t());
        }
    }
    return IntSeries(val, std::move(out), prec);
}

IntSeries series_inv(const IntSeries &a) {
    if (a.is_zero()) {
        throw InvalidArgument("series_inv: zero series is not invertible");
    }
    const mpz_class &lead = a.coeffs().front();
    if (lead != 1 && lead != -1) {
        throw InvalidArgument("series_inv: leading coefficient " + lead.get_str() + " is not a unit over Z");
    }
    if (a.is_exact()) {
        if (a.coeffs().size() == 1) {
            return IntSeries::exact(-a.valuation(), {lead});
        }
        throw PrecisionError("series_inv: inverse of an exact non-monomial needs a finite precision");
    }
    const std::int64_t rel = a.precision() - a.valuation();
    const auto n = static_cast<std::size_t>(rel);
    const auto &c = a.coeffs();
    std::vector<mpz_class> out(n);
    out[0] = lead;
    mpz_class acc;
    for (std::size_t k = 1; k < n; ++k) {
        acc = 0;
        const std::size_t jmax = std::min(k, c.size() - 1);
        for (std::size_t j = 1; j <= jmax; ++j) {
            mpz_addmul(acc.get_mpz_t(), c[j].get_mpz_t(), out[k - j].get_mpz_t());
        }
        out[k] = -lead * acc;
    }
    return IntSeries(-a.valuation(), std::move(out), -a.valuation() + rel);
}

IntSeries series_pow(const IntSeries &a, unsigned n) {
    IntSeries result = IntSeries::one();
    IntSeries base = a;
    while (n > 0) {
        if (n & 1U) {
            result = series_mul(result, base);
        }
        n >>= 1U;
        if (n > 0) {
            base = series_mul(base, base);
        }
    }
    return result;
}

IntSeries substitute_qpow(const IntSeries &a, unsigned m) {
    if (m == 0) {
        throw InvalidArgument("substitute_qpow: exponent must be positive");
    }
    if (m == 1 || a.coeffs().empty()) {
        const std::int64_t prec = a.is_exact() ? IntSeries::kExact : a.precision() * m;
        return IntSeries(a.is_zero() ? prec : a.valuation() * m, a.coeffs(), prec);
    }
    std::vector<mpz_class> out((a.coeffs().size() - 1) * m + 1);
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) {
        out[k * m] = a.coeffs()[k];
    }
    const std::int64_t prec = a.is_exact() ? IntSeries::kExact : a.precision() * m;
    return IntSeries(a.valuation() * m, std::move(out), prec);
}

IntSeries lambda_qexp(std::int64_t prec) {
    if (prec < 2) {
        throw InvalidArgument("lambda_qexp: precision must be at least 2");
    }
    // lambda = 16 q X with X known modulo q^(prec-1).
    const auto rel = static_cast<std::size_t>(prec - 1);
    std::vector<mpz_class> num(rel), den(rel);
    num[0] = 1;
    den[0] = 1;
    for (std::size_t n = 1; 2 * n - 1 < rel; ++n) {
        mul_binomial(den, 2 * n - 1);
        if (2 * n < rel) {
            mul_binomial(num, 2 * n);
        }
    }
    const auto rel64 = static_cast<std::int64_t>(rel);
    const IntSeries quotient = series_mul(IntSeries(0, std::move(num), rel64), series_inv(IntSeries(0, std::move(den), rel64)));
    const IntSeries x = series_pow(quotient, 8);
    std::vector<mpz_class> out = x.coeffs();
    for (auto &c : out) {
        c *= 16;
    }
    return IntSeries(1, std::move(out), prec);
}

std::string to_string(const IntSeries &s) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < s.coeffs().size(); ++k) {
        const mpz_class &c = s.coeffs()[k];
        if (c == 0) {
            continue;
        }
        const std::int64_t e = s.valuation() + static_cast<std::int64_t>(k);
        mpz_class mag = abs(c);
        if (first) {
            if (c < 0) {
                os << '-';
            }
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (mag != 1 || e == 0) {
            os << mag.get_str();
        }
        if (e != 0) {
            os << 'q';
            if (e != 1) {
                os << '^' << e;
            }
        }
    }
    if (!s.is_exact()) {
        os << (first ? "O(q^" : " + O(q^") << s.precision() << ')';
    } else if (first) {
        os << '0';
    }
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const IntSeries &s) { return os << to_string(s); }

} // namespace lambda_lab
