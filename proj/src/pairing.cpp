#include "lambda_lab/pairing.hpp"

#include "lambda_lab/error.hpp"

namespace lambda_lab {

namespace {

using u64 = std::uint64_t;

int corollary_parity(u64 p) { return ((p - 1) / 2) % 2 == 0 ? 1 : -1; }

} // namespace

LeadingUnit lu_mul(const LeadingUnit &x, const LeadingUnit &y) { return {x.twice_val + y.twice_val, x.unit * y.unit}; }

LeadingUnit lu_pow(const LeadingUnit &x, std::int64_t n) {
    const Fp2Elem base = n < 0 ? x.unit.inverse() : x.unit;
    const auto mag = static_cast<u64>(n < 0 ? -n : n);
    return {static_cast<int>(x.twice_val * n), base.pow(mag)};
}

std::string to_string(const LeadingUnit &x) {
    std::string v = x.twice_val % 2 == 0 ? std::to_string(x.twice_val / 2) : std::to_string(x.twice_val) + "/2";
    return "(" + v + ", " + to_string(x.unit) + ")";
}

UnramifiedMod2::UnramifiedMod2(std::uint64_t p, std::uint64_t c0, std::uint64_t c1)
    : p_(p), modulus_(p * p), sigma_(smallest_nonresidue(p)), c0_(c0 % (p * p)), c1_(c1 % (p * p)) {
    if (p >= (u64{1} << 15)) {
        throw InvalidArgument("UnramifiedMod2: p must be below 2^15");
    }
}

UnramifiedMod2 UnramifiedMod2::lift(const Fp2Elem &x, std::uint64_t t0, std::uint64_t t1) {
    const u64 p = x.p();
    return UnramifiedMod2(p, x.a() + p * (t0 % p), x.b() + p * (t1 % p));
}

UnramifiedMod2 UnramifiedMod2::random_lift(const Fp2Elem &x, std::mt19937_64 &rng) {
    std::uniform_int_distribution<u64> dist(0, x.p() - 1);
    const u64 t0 = dist(rng);
    const u64 t1 = dist(rng);
    return lift(x, t0, t1);
}

UnramifiedMod2 UnramifiedMod2::operator+(const UnramifiedMod2 &o) const {
    UnramifiedMod2 r = *this;
    r.c0_ = (c0_ + o.c0_) % modulus_;
    r.c1_ = (c1_ + o.c1_) % modulus_;
    return r;
}

UnramifiedMod2 UnramifiedMod2::operator-(const UnramifiedMod2 &o) const {
    UnramifiedMod2 r = *this;
    r.c0_ = (c0_ + modulus_ - o.c0_) % modulus_;
    r.c1_ = (c1_ + modulus_ - o.c1_) % modulus_;
    return r;
}

UnramifiedMod2 UnramifiedMod2::operator*(const UnramifiedMod2 &o) const {
    if (p_ != o.p_) {
        throw InvalidArgument("UnramifiedMod2: operands belong to different rings");
    }
    UnramifiedMod2 r = *this;
    r.c0_ = (c0_ * o.c0_ % modulus_ + sigma_ * (c1_ * o.c1_ % modulus_)) % modulus_;
    r.c1_ = (c0_ * o.c1_ % modulus_ + c1_ * o.c0_ % modulus_) % modulus_;
    return r;
}

UnramifiedMod2 UnramifiedMod2::pow(std::uint64_t e) const {
    UnramifiedMod2 r(p_, 1, 0);
    UnramifiedMod2 base = *this;
    while (e > 0) {
        if (e & 1U) {
            r = r * base;
        }
        base = base * base;
        e >>= 1U;
    }
    return r;
}

Fp2Elem UnramifiedMod2::reduce() const { return Fp2Elem(p_, c0_ % p_, c1_ % p_); }

UnramifiedMod2 evaluate_frobenius_diagonal(const BivarIntPoly &f, const UnramifiedMod2 &beta) {
    const u64 p = beta.p();
    if (f.p_level() != p) {
        throw InvalidArgument("evaluate_frobenius_diagonal: level mismatch");
    }
    const u64 m = p * p;
    const UnramifiedMod2 gamma = beta.pow(p);
    std::vector<UnramifiedMod2> xs(f.degree_x() + 1), ys(f.degree_y() + 1);
    xs[0] = ys[0] = UnramifiedMod2(p, 1, 0);
    for (std::size_t k = 1; k < xs.size(); ++k) {
        xs[k] = xs[k - 1] * beta;
    }
    for (std::size_t k = 1; k < ys.size(); ++k) {
        ys[k] = ys[k - 1] * gamma;
    }
    UnramifiedMod2 acc(p, 0, 0);
    for (const auto &[e, c] : f.terms()) {
        const UnramifiedMod2 coeff(p, mpz_fdiv_ui(c.get_mpz_t(), m), 0);
        acc = acc + coeff * xs[e.first] * ys[e.second];
    }
    return acc;
}

LeadingUnit phi_offdiag(const Fp2Elem &li, const Fp2Elem &lj) {
    const Fp2Elem d = li - lj;
    if (d.is_zero()) {
        throw InvalidArgument("phi_offdiag: lambda_i == lambda_j");
    }
    return {0, d.pow(li.p() + 1)};
}

std::pair<LeadingUnit, LeadingUnit> phi_diag_theorem(const SupersingularSet &s, std::size_t i) {
    // corollary_prediction carries the extra (-1)^{(p-1)/2}; strip it.
    Fp2Elem u = corollary_prediction(s, i);
    if (corollary_parity(s.p) < 0) {
        u = -u;
    }
    return {LeadingUnit{2, u}, LeadingUnit{2, -u}};
}

LeadingUnit phi_diag_via_modpoly(const BivarIntPoly &f, const UnramifiedMod2 &beta) {
    const u64 p = beta.p();
    const UnramifiedMod2 value = evaluate_frobenius_diagonal(f, beta);
    if (!value.divisible_by_p()) {
        throw TheoremViolation("phi_diag_via_modpoly: F(beta, beta^p) is a unit; the Kronecker congruence fails");
    }
    const Fp2Elem unit(p, value.c0() / p, value.c1() / p);
    if (unit.is_zero()) {
        throw TheoremViolation("phi_diag_via_modpoly: F(beta, beta^p) vanishes modulo p^2 at lambda = " +
                               to_string(beta.reduce()));
    }
    return {2, unit};
}

LeadingUnit phi_diag_via_modpoly(const BivarIntPoly &f, const Fp2Elem &lambda) {
    return phi_diag_via_modpoly(f, UnramifiedMod2::lift(lambda));
}

bool PairingMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (!(entries[i][j] == entries[j][i])) {
                return false;
            }
        }
    }
    return true;
}

PairingMatrix build_pairing_matrix(const BivarIntPoly &f, const SupersingularSet &s) {
    const u64 p = s.p;
    if (f.p_level() != p) {
        throw InvalidArgument("build_pairing_matrix: level mismatch");
    }
    PairingMatrix m;
    m.p = p;
    m.lambdas = s.lambdas;
    const std::size_t n = s.size();
    m.entries.assign(n, std::vector<LeadingUnit>(n));
    const Fp2Elem one(p, 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                m.entries[i][j] = phi_offdiag(s.lambdas[i], s.lambdas[j]);
            }
        }
        const LeadingUnit diag = phi_diag_via_modpoly(f, s.lambdas[i]);
        m.entries[i][i] = diag;
        const Fp2Elem ratio = diag.unit / phi_diag_theorem(s, i).first.unit;
        int sign = 0;
        if (ratio == one) {
            sign = 1;
        } else if (ratio == -one) {
            sign = -1;
        } else {
            throw TheoremViolation("build_pairing_matrix p=" + std::to_string(p) + " lambda=" +
                                   to_string(s.lambdas[i]) + ": diagonal " + to_string(diag) +
                                   " is not +- the predicted unit");
        }
        const int corollary_sign = sign * corollary_parity(p);
        if (corollary_sign == -1 && (p % 4 == 1 || s.lambdas[i].in_prime_field())) {
            throw TheoremViolation("build_pairing_matrix p=" + std::to_string(p) + " lambda=" +
                                   to_string(s.lambdas[i]) + ": diagonal sign disagrees with the required +1");
        }
        m.signs.push_back(sign);
        m.corollary_signs.push_back(corollary_sign);
    }
    return m;
}

} // namespace lambda_lab
