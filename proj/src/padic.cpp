#include "lambda_lab/padic.hpp"

#include <algorithm>
#include <numeric>

#include "lambda_lab/error.hpp"

namespace lambda_lab {

namespace {

using u64 = std::uint64_t;

mpz_class pow_p(u64 p, int k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(std::max(k, 0)));
    return r;
}

mpz_class eval_int(const UnivarIntPoly &f, const mpz_class &x) {
    mpz_class acc = 0;
    for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

u64 residue_mod_pi_over_p(const QuadPadic &x) {
    // x = A + B pi with v(x) >= 1 (doubled: >= 2); (x / p) mod pi = (A / p) mod p.
    const PadicInt a = x.a().shifted_down(1);
    return mpz_fdiv_ui(a.value().get_mpz_t(), x.p());
}

constexpr unsigned kMaxNewtonSteps = 16;

} // namespace

PadicInt::PadicInt(std::uint64_t p, const mpz_class &value, int precision) : p_(p), precision_(precision) {
    if (precision < 0) {
        throw InvalidArgument("PadicInt: negative precision");
    }
    mpz_fdiv_r(value_.get_mpz_t(), value.get_mpz_t(), modulus().get_mpz_t());
}

mpz_class PadicInt::modulus() const { return pow_p(p_, precision_); }

int PadicInt::valuation() const {
    if (value_ == 0) {
        return precision_;
    }
    mpz_class rest;
    const auto v = static_cast<int>(mpz_remove(rest.get_mpz_t(), value_.get_mpz_t(), mpz_class(p_).get_mpz_t()));
    return std::min(v, precision_);
}

PadicInt PadicInt::operator+(const PadicInt &o) const {
    return PadicInt(p_, value_ + o.value_, std::min(precision_, o.precision_));
}

PadicInt PadicInt::operator-(const PadicInt &o) const {
    return PadicInt(p_, value_ - o.value_, std::min(precision_, o.precision_));
}

PadicInt PadicInt::operator-() const { return PadicInt(p_, -value_, precision_); }

PadicInt PadicInt::operator*(const PadicInt &o) const {
    const int prec = std::min(precision_ + o.valuation(), o.precision_ + valuation());
    return PadicInt(p_, value_ * o.value_, prec);
}

PadicInt PadicInt::shifted_up(int k) const { return PadicInt(p_, value_ * pow_p(p_, k), precision_ + k); }

PadicInt PadicInt::shifted_down(int k) const {
    if (k == 0) {
        return *this;
    }
    if (precision_ < k || valuation() < k) {
        throw PrecisionError("PadicInt: cannot divide by p^" + std::to_string(k) + " (valuation " +
                             std::to_string(valuation()) + ", precision " + std::to_string(precision_) + ")");
    }
    return PadicInt(p_, value_ / pow_p(p_, k), precision_ - k);
}

PadicInt PadicInt::inverse() const {
    if (precision_ == 0 || valuation() != 0) {
        throw InvalidArgument("PadicInt: only units are invertible");
    }
    mpz_class inv;
    const mpz_class m = modulus();
    mpz_invert(inv.get_mpz_t(), value_.get_mpz_t(), m.get_mpz_t());
    return PadicInt(p_, inv, precision_);
}

PadicInt PadicInt::with_precision(int n) const { return PadicInt(p_, value_, n); }

bool PadicInt::agrees_with(const PadicInt &o) const {
    const mpz_class m = pow_p(p_, std::min(precision_, o.precision_));
    mpz_class d = value_ - o.value_;
    return mpz_divisible_p(d.get_mpz_t(), m.get_mpz_t()) != 0;
}

QuadPadic::QuadPadic(PadicInt a, PadicInt b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.p() != b_.p()) {
        throw InvalidArgument("QuadPadic: components over different primes");
    }
}

QuadPadic QuadPadic::from_int(std::uint64_t p, const mpz_class &v, int precision) {
    return {PadicInt(p, v, precision), PadicInt(p, 0, precision)};
}

int QuadPadic::twice_valuation() const { return std::min(2 * a_.valuation(), 2 * b_.valuation() + 1); }

int QuadPadic::twice_precision() const { return std::min(2 * a_.precision(), 2 * b_.precision() + 1); }

QuadPadic QuadPadic::operator+(const QuadPadic &o) const { return {a_ + o.a_, b_ + o.b_}; }
QuadPadic QuadPadic::operator-(const QuadPadic &o) const { return {a_ - o.a_, b_ - o.b_}; }
QuadPadic QuadPadic::operator-() const { return {-a_, -b_}; }

QuadPadic QuadPadic::operator*(const QuadPadic &o) const {
    // (a + b pi)(c + d pi) = (ac - p bd) + (ad + bc) pi
    return {a_ * o.a_ - (b_ * o.b_).shifted_up(1), a_ * o.b_ + b_ * o.a_};
}

QuadPadic QuadPadic::pow(std::uint64_t e) const {
    QuadPadic r = from_int(p(), 1, std::max(a_.precision(), b_.precision()));
    QuadPadic base = *this;
    while (e > 0) {
        if (e & 1U) {
            r = r * base;
        }
        base = base * base;
        e >>= 1U;
    }
    return r;
}

QuadPadic QuadPadic::conjugate() const { return {a_, -b_}; }

bool QuadPadic::agrees_with(const QuadPadic &o) const { return a_.agrees_with(o.a_) && b_.agrees_with(o.b_); }

std::string to_string(const QuadPadic &x) {
    const int tp = x.twice_precision();
    const std::string prec = tp % 2 == 0 ? std::to_string(tp / 2) : std::to_string(tp) + "/2";
    return x.a().value().get_str() + " + " + x.b().value().get_str() + "*sqrt(-" + std::to_string(x.p()) +
           ") + O(p^" + prec + ")";
}

QuadPadic evaluate(const UnivarIntPoly &f, const QuadPadic &z) {
    const u64 p = z.p();
    const int w = std::max(z.a().precision(), z.b().precision());
    QuadPadic acc = QuadPadic::from_int(p, 0, w);
    for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it) {
        acc = acc * z + QuadPadic::from_int(p, *it, w);
    }
    return acc;
}

QuadPadic evaluate(const BivarIntPoly &f, const QuadPadic &x, const QuadPadic &y) {
    const u64 p = x.p();
    const int w = std::max({x.a().precision(), x.b().precision(), y.a().precision(), y.b().precision()});
    std::vector<QuadPadic> xs{QuadPadic::from_int(p, 1, w)}, ys{QuadPadic::from_int(p, 1, w)};
    for (unsigned k = 1; k <= f.degree_x(); ++k) {
        xs.push_back(xs.back() * x);
    }
    for (unsigned k = 1; k <= f.degree_y(); ++k) {
        ys.push_back(ys.back() * y);
    }
    QuadPadic acc = QuadPadic::from_int(p, 0, w);
    for (const auto &[e, c] : f.terms()) {
        acc = acc + QuadPadic::from_int(p, c, w) * xs[e.first] * ys[e.second];
    }
    return acc;
}

unsigned class_number(std::uint64_t p) {
    if (p < 7 || p % 4 != 3) {
        throw InvalidArgument("class_number: need p = 3 mod 4 and p >= 7, got " + std::to_string(p));
    }
    const auto d = static_cast<std::int64_t>(p);
    unsigned h = 0;
    for (std::int64_t a = 1; 3 * a * a <= d; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            const std::int64_t num = b * b + d;
            if (num % (4 * a) != 0) {
                continue;
            }
            const std::int64_t c = num / (4 * a);
            if (c < a || (b < 0 && a == c)) {
                continue;
            }
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) {
                continue;
            }
            ++h;
        }
    }
    return h;
}

ClassNumberCheck count_check_3h(std::uint64_t p, const SupersingularSet &s) {
    ClassNumberCheck r;
    r.h = class_number(p);
    r.in_prime_field = s.count_in_prime_field();
    r.passed = r.in_prime_field == 3 * static_cast<std::size_t>(r.h);
    return r;
}

unsigned root_multiplicity_mod_p(const UnivarIntPoly &f, std::uint64_t p, std::uint64_t lambda0) {
    std::vector<u64> c = reduce_mod(f, p);
    while (!c.empty() && c.back() == 0) {
        c.pop_back();
    }
    if (c.empty()) {
        throw InvalidArgument("root_multiplicity_mod_p: f vanishes mod p");
    }
    unsigned mult = 0;
    const u64 x = lambda0 % p;
    while (c.size() > 1) {
        // Synthetic division by (X - x).
        std::vector<u64> q(c.size() - 1);
        u64 carry = 0;
        for (std::size_t k = c.size(); k-- > 1;) {
            carry = (carry * x + c[k]) % p;
            q[k - 1] = carry;
        }
        const u64 rem = (carry * x + c[0]) % p;
        if (rem != 0) {
            break;
        }
        ++mult;
        c = std::move(q);
    }
    return mult;
}

CmLift cm_lift(const UnivarIntPoly &f, std::uint64_t p, std::uint64_t lambda0, int target_precision, int root_choice) {
    if (p < 7 || p % 4 != 3) {
        throw InvalidArgument("cm_lift: need p = 3 mod 4 and p >= 7, got " + std::to_string(p));
    }
    if (lambda0 >= p || !hasse_polynomial(p).evaluate(Fp2Elem(p, lambda0)).is_zero()) {
        throw InvalidArgument("cm_lift: " + std::to_string(lambda0) + " is not a supersingular lambda in F_" +
                              std::to_string(p));
    }
    if (target_precision < 4) {
        throw InvalidArgument("cm_lift: target precision must be at least 4");
    }

    // f(a0 + b pi) = f(a0) - p b^2 f''(a0) / 2 mod pi^3, and f'(a0) = 0 mod p.
    const mpz_class a0 = lambda0;
    const mpz_class fa = eval_int(f, a0);
    const mpz_class f2 = eval_int(f.derivative().derivative(), a0);
    if (!mpz_divisible_ui_p(fa.get_mpz_t(), p)) {
        throw InternalError("cm_lift: f(lambda0) is not divisible by p");
    }
    const u64 f2_mod = mpz_fdiv_ui(f2.get_mpz_t(), p);
    if (f2_mod == 0) {
        throw InternalError("cm_lift: f''(lambda0) vanishes mod p");
    }
    const mpz_class fa_over_p = fa / static_cast<unsigned long>(p);
    mpz_class t = 2 * fa_over_p;
    mpz_class f2_inv;
    mpz_invert(f2_inv.get_mpz_t(), mpz_class(f2_mod).get_mpz_t(), mpz_class(p).get_mpz_t());
    t *= f2_inv;
    const u64 target = mpz_fdiv_ui(t.get_mpz_t(), p);
    std::vector<u64> roots;
    for (u64 r = 1; r < p; ++r) {
        if (r * r % p == target) {
            roots.push_back(r);
        }
    }
    if (roots.size() != 2) {
        throw TheoremViolation("cm_lift: b0^2 = " + std::to_string(target) + " has no unit square root mod " +
                               std::to_string(p) + "; no lift in Q_p(sqrt(-p)) exists above " +
                               std::to_string(lambda0));
    }

    const int final_prec = target_precision + 2;
    const UnivarIntPoly df = f.derivative();
    CmLift out;
    QuadPadic z(PadicInt(p, a0, 2), PadicInt(p, roots[root_choice == 0 ? 0 : 1], 2));
    int work = 2;
    for (;;) {
        z = QuadPadic(z.a().with_precision(work), z.b().with_precision(work));
        const QuadPadic r = evaluate(f, z);
        const int tv = r.twice_valuation();
        const bool stalled = !out.residual_history.empty() && tv <= out.residual_history.back();
        out.residual_history.push_back(tv);
        out.residual_twice_val = tv;
        if (tv >= 2 * target_precision) {
            break;
        }
        if (stalled && work == final_prec) {
            throw PrecisionError("cm_lift: Newton iteration stalled at residual valuation " + std::to_string(tv) + "/2");
        }
        if (out.newton_steps >= kMaxNewtonSteps) {
            throw PrecisionError("cm_lift: no convergence after " + std::to_string(kMaxNewtonSteps) + " steps");
        }

        // Jacobian of (A, B) in (a, b) is [[C, -pD], [D, C]] with f'(z) = C + D pi.
        const QuadPadic d = evaluate(df, z);
        const PadicInt &c = d.a();
        const PadicInt &dd = d.b();
        const PadicInt det = c * c + (dd * dd).shifted_up(1);
        const int vdet = det.valuation();
        if (vdet >= det.precision()) {
            throw PrecisionError("cm_lift: Jacobian is not invertible at working precision " + std::to_string(work));
        }
        const PadicInt unit_inv = det.shifted_down(vdet).inverse();
        const PadicInt num_a = r.a() * c + (dd * r.b()).shifted_up(1);
        const PadicInt num_b = c * r.b() - dd * r.a();
        const QuadPadic delta(num_a.shifted_down(vdet) * unit_inv, num_b.shifted_down(vdet) * unit_inv);
        z = z - delta;
        ++out.newton_steps;
        work = std::min(2 * work, final_prec);
    }

    out.lambda = QuadPadic(z.a().with_precision(target_precision + 1), z.b().with_precision(target_precision + 1));
    if (mpz_fdiv_ui(out.lambda.a().value().get_mpz_t(), p) != lambda0) {
        throw InternalError("cm_lift: lift does not reduce to lambda0");
    }
    if (out.lambda.b().valuation() != 0) {
        throw TheoremViolation("cm_lift: lift lies in Z_p (v(b) > 0)");
    }
    return out;
}

Thm3Report verify_thm3(const BivarIntPoly &f, const QuadPadic &lambda1, std::uint64_t p) {
    if (lambda1.p() != p || f.p_level() != p) {
        throw InvalidArgument("verify_thm3: level mismatch");
    }
    const QuadPadic frob = lambda1.pow(p);
    const QuadPadic value = evaluate(f, lambda1, frob);
    const QuadPadic diff = lambda1 - frob;
    const QuadPadic square = diff * diff;
    const QuadPadic gap = value - square;
    if (value.twice_precision() < 3 || gap.twice_precision() < 3 || diff.twice_precision() < 2) {
        throw PrecisionError("verify_thm3: lift precision too low to decide the congruence");
    }
    Thm3Report r;
    r.twice_val_value = value.twice_valuation();
    r.twice_val_diff = diff.twice_valuation();
    r.twice_val_gap = gap.twice_valuation();
    r.passed = r.twice_val_value == 2 && r.twice_val_diff == 1 && r.twice_val_gap >= 3;
    if (r.twice_val_value >= 2) {
        r.value_residue = residue_mod_pi_over_p(value);
    }
    if (square.twice_valuation() >= 2) {
        r.square_residue = residue_mod_pi_over_p(square);
    }
    return r;
}

} // namespace lambda_lab
