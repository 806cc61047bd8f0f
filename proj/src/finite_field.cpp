#include "lambda_lab/finite_field.hpp"

#include <algorithm>
#include <ostream>

#include "lambda_lab/error.hpp"
#include "lambda_lab/primes.hpp"

namespace lambda_lab {

namespace {

using u64 = std::uint64_t;

u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1U) {
            r = r * a % m;
        }
        a = a * a % m;
        e >>= 1U;
    }
    return r;
}

u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

void require_field_prime(u64 p) {
    if (p < 3 || p >= (u64{1} << 31) || !is_prime(p)) {
        throw InvalidArgument("F_{p^2}: p must be an odd prime below 2^31, got " + std::to_string(p));
    }
}

} // namespace

int legendre_symbol(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) {
        return 0;
    }
    return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::uint64_t smallest_nonresidue(std::uint64_t p) {
    thread_local u64 cached_p = 0;
    thread_local u64 cached_sigma = 0;
    if (p == cached_p) {
        return cached_sigma;
    }
    require_field_prime(p);
    u64 s = 2;
    while (legendre_symbol(s, p) != -1) {
        ++s;
    }
    cached_p = p;
    cached_sigma = s;
    return s;
}

Fp2Elem::Fp2Elem(std::uint64_t p, std::uint64_t a, std::uint64_t b)
    : p_(p), sigma_(smallest_nonresidue(p)), a_(a % p), b_(b % p) {}

Fp2Elem Fp2Elem::from_int(std::uint64_t p, std::int64_t v) {
    const auto sp = static_cast<std::int64_t>(p);
    return Fp2Elem(p, static_cast<u64>(((v % sp) + sp) % sp), 0);
}

void Fp2Elem::check_same(const Fp2Elem &o) const {
    if (p_ != o.p_ || p_ == 0) {
        throw InvalidArgument("Fp2Elem: operands belong to different fields");
    }
}

Fp2Elem Fp2Elem::operator+(const Fp2Elem &o) const {
    check_same(o);
    Fp2Elem r = *this;
    r.a_ = (a_ + o.a_) % p_;
    r.b_ = (b_ + o.b_) % p_;
    return r;
}

Fp2Elem Fp2Elem::operator-() const {
    Fp2Elem r = *this;
    r.a_ = (p_ - a_) % p_;
    r.b_ = (p_ - b_) % p_;
    return r;
}

Fp2Elem Fp2Elem::operator-(const Fp2Elem &o) const { return *this + (-o); }

Fp2Elem Fp2Elem::operator*(const Fp2Elem &o) const {
    check_same(o);
    Fp2Elem r = *this;
    r.a_ = (a_ * o.a_ + sigma_ * (b_ * o.b_ % p_)) % p_;
    r.b_ = (a_ * o.b_ + b_ * o.a_) % p_;
    return r;
}

Fp2Elem Fp2Elem::pow(std::uint64_t e) const {
    Fp2Elem r(p_, 1, 0);
    Fp2Elem base = *this;
    while (e > 0) {
        if (e & 1U) {
            r = r * base;
        }
        base = base * base;
        e >>= 1U;
    }
    return r;
}

std::uint64_t Fp2Elem::norm() const { return (a_ * a_ % p_ + p_ - sigma_ * (b_ * b_ % p_) % p_) % p_; }

Fp2Elem Fp2Elem::inverse() const {
    if (is_zero()) {
        throw InvalidArgument("Fp2Elem: zero has no inverse");
    }
    // (a + b s)^{-1} = (a - b s) / N
    const u64 n_inv = inv_mod(norm(), p_);
    Fp2Elem r = frobenius();
    r.a_ = r.a_ * n_inv % p_;
    r.b_ = r.b_ * n_inv % p_;
    return r;
}

Fp2Elem Fp2Elem::frobenius() const {
    Fp2Elem r = *this;
    r.b_ = (p_ - b_) % p_;
    return r;
}

std::string to_string(const Fp2Elem &x) {
    if (x.b() == 0) {
        return std::to_string(x.a());
    }
    std::string s = x.a() == 0 ? "" : std::to_string(x.a()) + "+";
    return s + (x.b() == 1 ? "" : std::to_string(x.b()) + "*") + "s";
}

std::ostream &operator<<(std::ostream &os, const Fp2Elem &x) { return os << to_string(x); }

std::vector<Fp2Elem> all_elements(std::uint64_t p) {
    std::vector<Fp2Elem> out;
    out.reserve(p * p);
    for (u64 a = 0; a < p; ++a) {
        for (u64 b = 0; b < p; ++b) {
            out.emplace_back(p, a, b);
        }
    }
    return out;
}

FpPoly::FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
    for (auto &c : coeffs_) {
        c %= p_;
    }
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

FpPoly FpPoly::reduce(const UnivarIntPoly &f, std::uint64_t p) { return FpPoly(p, reduce_mod(f, p)); }

Fp2Elem FpPoly::evaluate(const Fp2Elem &x) const {
    if (x.p() != p_) {
        throw InvalidArgument("FpPoly::evaluate: point lies in a different field");
    }
    Fp2Elem acc(p_, 0, 0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + Fp2Elem(p_, *it, 0);
    }
    return acc;
}

FpPoly FpPoly::derivative() const {
    std::vector<u64> d;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        d.push_back(coeffs_[k] * (k % p_) % p_);
    }
    return FpPoly(p_, std::move(d));
}

FpPoly hasse_polynomial(std::uint64_t p) {
    require_field_prime(p);
    if (p < 5) {
        throw InvalidArgument("hasse_polynomial: p must be at least 5");
    }
    const u64 m = (p - 1) / 2;
    std::vector<u64> c(m + 1);
    u64 binom = 1;
    for (u64 i = 0; i <= m; ++i) {
        if (i > 0) {
            binom = binom * ((m - i + 1) % p) % p * inv_mod(i, p) % p;
        }
        c[i] = binom * binom % p;
    }
    return FpPoly(p, std::move(c));
}

std::size_t SupersingularSet::count_in_prime_field() const {
    return static_cast<std::size_t>(
        std::count_if(lambdas.begin(), lambdas.end(), [](const Fp2Elem &x) { return x.in_prime_field(); }));
}

bool SupersingularSet::contains(const Fp2Elem &x) const { return std::binary_search(lambdas.begin(), lambdas.end(), x); }

bool SupersingularSet::frobenius_closed() const {
    return std::all_of(lambdas.begin(), lambdas.end(), [&](const Fp2Elem &x) { return contains(x.frobenius()); });
}

std::int64_t legendre_curve_trace(const Fp2Elem &lam) {
    const u64 p = lam.p();
    std::vector<int> chi(p);
    for (u64 n = 0; n < p; ++n) {
        chi[n] = legendre_symbol(n, p);
    }
    const Fp2Elem one(p, 1, 0);
    std::int64_t sum = 0;
    for (u64 a = 0; a < p; ++a) {
        for (u64 b = 0; b < p; ++b) {
            const Fp2Elem x(p, a, b);
            // The quadratic character of F_{p^2} is the Legendre symbol of the norm.
            sum += chi[(x * (x - one) * (x - lam)).norm()];
        }
    }
    return -sum;
}

bool is_supersingular_pointcount(std::uint64_t p, const Fp2Elem &lam) {
    if (lam.p() != p) {
        throw InvalidArgument("is_supersingular_pointcount: lambda lies in a different field");
    }
    if (lam.b() == 0 && (lam.a() == 0 || lam.a() == 1)) {
        throw InvalidArgument("is_supersingular_pointcount: lambda in {0, 1} gives a singular curve");
    }
    const auto sp = static_cast<std::int64_t>(p);
    return legendre_curve_trace(lam) % sp == 0;
}

SupersingularSet supersingular_lambdas(std::uint64_t p, OracleCheck check) {
    const FpPoly h = hasse_polynomial(p);
    const FpPoly dh = h.derivative();
    SupersingularSet s{p, {}};
    for (const Fp2Elem &x : all_elements(p)) {
        if (h.evaluate(x).is_zero()) {
            if (dh.evaluate(x).is_zero()) {
                throw InternalError("supersingular_lambdas: repeated Hasse root " + to_string(x));
            }
            s.lambdas.push_back(x);
        }
    }
    if (s.lambdas.size() != static_cast<std::size_t>(h.degree())) {
        throw InternalError("supersingular_lambdas: found " + std::to_string(s.lambdas.size()) + " roots, expected " +
                            std::to_string(h.degree()));
    }
    if (check == OracleCheck::full) {
        for (const Fp2Elem &x : all_elements(p)) {
            if (x.b() == 0 && x.a() <= 1) {
                continue;
            }
            if (is_supersingular_pointcount(p, x) != s.contains(x)) {
                throw InternalError("supersingular_lambdas: Hasse roots and point counts disagree at " + to_string(x));
            }
        }
    }
    return s;
}

Fp2Elem evaluate_rbar(const FpPoly &rbar, const Fp2Elem &lam) { return rbar.evaluate(lam); }

Fp2Elem corollary_prediction(const SupersingularSet &s, std::size_t i) {
    const u64 p = s.p;
    const Fp2Elem &li = s.lambdas.at(i);
    Fp2Elem prod(p, 1, 0);
    for (std::size_t k = 0; k < s.lambdas.size(); ++k) {
        if (k != i) {
            const Fp2Elem d = li - s.lambdas[k];
            if (d.is_zero()) {
                throw InternalError("corollary_prediction: repeated supersingular lambda");
            }
            prod = prod * d;
        }
    }
    Fp2Elem pred = prod.pow(p + 1).inverse();
    return ((p - 1) / 2) % 2 == 0 ? pred : -pred;
}

std::vector<int> CorollaryReport::signs() const {
    std::vector<int> out;
    for (const auto &e : entries) {
        out.push_back(e.sign);
    }
    return out;
}

CorollaryReport corollary_check(std::uint64_t p, const FpPoly &rbar, const SupersingularSet &s) {
    if (rbar.p() != p || s.p != p) {
        throw InvalidArgument("corollary_check: inputs belong to different primes");
    }
    CorollaryReport report{p, {}};
    const Fp2Elem one(p, 1, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CorollaryEntry e;
        e.lambda = s.lambdas[i];
        e.rbar_value = evaluate_rbar(rbar, e.lambda);
        e.prediction = corollary_prediction(s, i);
        const Fp2Elem ratio = e.rbar_value / e.prediction;
        if (ratio == one) {
            e.sign = 1;
        } else if (ratio == -one) {
            e.sign = -1;
        } else {
            throw TheoremViolation("corollary_check p=" + std::to_string(p) + " lambda=" + to_string(e.lambda) +
                                   ": Rbar=" + to_string(e.rbar_value) + ", expected +-" + to_string(e.prediction));
        }
        if (e.sign == -1 && (p % 4 == 1 || e.lambda.in_prime_field())) {
            throw TheoremViolation("corollary_check p=" + std::to_string(p) + " lambda=" + to_string(e.lambda) +
                                   ": sign -1 where +1 is required (Rbar=" + to_string(e.rbar_value) +
                                   ", expected " + to_string(e.prediction) + ")");
        }
        report.entries.push_back(e);
    }
    return report;
}

VanishingReport ordinary_vanishing_check(std::uint64_t p, const FpPoly &rbar, const SupersingularSet &s) {
    VanishingReport r;
    r.at_zero = evaluate_rbar(rbar, Fp2Elem(p, 0, 0));
    r.at_one = evaluate_rbar(rbar, Fp2Elem(p, 1, 0));
    for (const Fp2Elem &x : all_elements(p)) {
        if ((x.b() == 0 && x.a() <= 1) || s.contains(x)) {
            continue;
        }
        ++r.scanned;
        if (!evaluate_rbar(rbar, x).is_zero()) {
            r.nonvanishing.push_back(x);
        }
    }
    r.passed = r.nonvanishing.empty();
    return r;
}

} // namespace lambda_lab
