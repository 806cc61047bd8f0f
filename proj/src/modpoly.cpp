#include "lambda_lab/modpoly.hpp"

#include <algorithm>
#include <future>
#include <numeric>

#include "lambda_lab/error.hpp"
#include "lambda_lab/primes.hpp"
#include "montgomery.hpp"

namespace lambda_lab {

using detail::Montgomery;
using detail::u64;

mpz_class BivarIntPoly::coeff(unsigned i, unsigned j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? mpz_class(0) : it->second;
}

void BivarIntPoly::set(unsigned i, unsigned j, const mpz_class &c) {
    if (c == 0) {
        terms_.erase({i, j});
    } else {
        terms_[{i, j}] = c;
    }
}

unsigned BivarIntPoly::degree_x() const {
    unsigned d = 0;
    for (const auto &[e, c] : terms_) {
        d = std::max(d, e.first);
    }
    return d;
}

unsigned BivarIntPoly::degree_y() const {
    unsigned d = 0;
    for (const auto &[e, c] : terms_) {
        d = std::max(d, e.second);
    }
    return d;
}

UnivarIntPoly::UnivarIntPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

UnivarIntPoly UnivarIntPoly::derivative() const {
    if (coeffs_.size() <= 1) {
        return {};
    }
    std::vector<mpz_class> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        d[k - 1] = coeffs_[k] * static_cast<unsigned long>(k);
    }
    return UnivarIntPoly(std::move(d));
}

std::vector<std::uint64_t> reduce_mod(const UnivarIntPoly &f, std::uint64_t m) {
    std::vector<std::uint64_t> out(f.coeffs().size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = mpz_fdiv_ui(f.coeffs()[k].get_mpz_t(), m);
    }
    return out;
}

std::int64_t default_modpoly_precision(unsigned p) {
    const std::int64_t n = p + 2;
    return n * n + 16;
}

namespace {

// Monomials lambda^i * lambda(q^p)^j, 0 <= i, j <= p+1, canonical index i*(p+2)+j.
struct MonomialLayout {
    unsigned p;
    unsigned side;
    std::vector<unsigned> order; // column -> canonical index, sorted by q-valuation

    explicit MonomialLayout(unsigned level) : p(level), side(level + 2) {
        order.resize(static_cast<std::size_t>(side) * side);
        std::iota(order.begin(), order.end(), 0U);
        std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
            return valuation(a) < valuation(b);
        });
    }
    unsigned x_exp(unsigned idx) const { return idx / side; }
    unsigned y_exp(unsigned idx) const { return idx % side; }
    unsigned valuation(unsigned idx) const { return x_exp(idx) + p * y_exp(idx); }
    std::size_t size() const { return order.size(); }
};

struct PrimeSolution {
    enum class Status { ok, wrong_nullity, bad_normalization };
    Status status = Status::ok;
    u64 prime = 0;
    std::size_t nullity = 0;
    std::vector<u64> kernel; // canonical index, standard residues
};

std::vector<u64> reduce_series(const IntSeries &s, std::int64_t len, const Montgomery &mg) {
    std::vector<u64> out(static_cast<std::size_t>(len), 0);
    for (std::int64_t n = std::max<std::int64_t>(s.valuation(), 0); n < len; ++n) {
        const std::int64_t k = n - s.valuation();
        if (k >= static_cast<std::int64_t>(s.coeffs().size())) {
            break;
        }
        out[static_cast<std::size_t>(n)] = mg.to_mont(mpz_fdiv_ui(s.coeffs()[static_cast<std::size_t>(k)].get_mpz_t(), mg.modulus()));
    }
    return out;
}

// Truncated product of two dense Montgomery-form series.
std::vector<u64> mul_trunc(const std::vector<u64> &a, const std::vector<u64> &b, const Montgomery &mg) {
    const std::size_t n = a.size();
    std::vector<u64> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; i + j < n; ++j) {
            if (b[j] != 0) {
                out[i + j] = mg.add(out[i + j], mg.mul(a[i], b[j]));
            }
        }
    }
    return out;
}

PrimeSolution solve_mod_prime(u64 ell, const MonomialLayout &layout, std::int64_t prec, const IntSeries &lambda) {
    const Montgomery mg(ell);
    const unsigned p = layout.p;
    const auto rows = static_cast<std::size_t>(prec);
    const std::size_t cols = layout.size();
    const auto short_len = (prec + p - 1) / p;

    const std::vector<u64> lam = reduce_series(lambda, prec, mg);
    const std::vector<u64> lam_short(lam.begin(), lam.begin() + short_len);

    std::vector<std::vector<u64>> x_pow(layout.side), y_pow(layout.side);
    x_pow[0].assign(rows, 0);
    x_pow[0][0] = mg.to_mont(1);
    y_pow[0].assign(static_cast<std::size_t>(short_len), 0);
    y_pow[0][0] = mg.to_mont(1);
    for (unsigned k = 1; k < layout.side; ++k) {
        x_pow[k] = mul_trunc(x_pow[k - 1], lam, mg);
        y_pow[k] = mul_trunc(y_pow[k - 1], lam_short, mg);
    }

    // Row n holds the q^n coefficients of every monomial.
    std::vector<u64> a(rows * cols, 0);
    auto at = [&](std::size_t r, std::size_t c) -> u64 & { return a[r * cols + c]; };
    for (std::size_t c = 0; c < cols; ++c) {
        const unsigned idx = layout.order[c];
        const auto &xs = x_pow[layout.x_exp(idx)];
        const auto &ys = y_pow[layout.y_exp(idx)];
        for (std::size_t t = 0; t < ys.size(); ++t) {
            if (ys[t] == 0) {
                continue;
            }
            for (std::size_t n = t * p; n < rows; ++n) {
                const u64 x = xs[n - t * p];
                if (x != 0) {
                    at(n, c) = mg.add(at(n, c), mg.mul(ys[t], x));
                }
            }
        }
    }

    // Reduced row echelon form. Pivot rows stay sparse because monomials are
    // triangular in their q-valuation, so row updates only visit nonzeros.
    std::vector<std::ptrdiff_t> pivot_row(cols, -1);
    std::vector<char> used(rows, 0);
    std::vector<std::size_t> free_cols;
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t r = 0;
        while (r < rows && (used[r] || at(r, c) == 0)) {
            ++r;
        }
        if (r == rows) {
            free_cols.push_back(c);
            continue;
        }
        used[r] = 1;
        pivot_row[c] = static_cast<std::ptrdiff_t>(r);
        const u64 inv = mg.inv(at(r, c));
        nz.clear();
        for (std::size_t k = 0; k < cols; ++k) {
            if (at(r, k) != 0) {
                at(r, k) = mg.mul(at(r, k), inv);
                if (k != c) {
                    nz.push_back(k);
                }
            }
        }
        for (std::size_t r2 = 0; r2 < rows; ++r2) {
            if (r2 == r || at(r2, c) == 0) {
                continue;
            }
            const u64 f = at(r2, c);
            at(r2, c) = 0;
            for (std::size_t k : nz) {
                at(r2, k) = mg.sub(at(r2, k), mg.mul(f, at(r, k)));
            }
        }
    }

    PrimeSolution sol;
    sol.prime = ell;
    sol.nullity = free_cols.size();
    if (free_cols.size() != 1) {
        sol.status = PrimeSolution::Status::wrong_nullity;
        return sol;
    }
    const std::size_t fc = free_cols.front();
    std::vector<u64> vec(cols, 0);
    vec[fc] = mg.to_mont(1);
    for (std::size_t c = 0; c < cols; ++c) {
        if (pivot_row[c] >= 0) {
            vec[c] = mg.neg(at(static_cast<std::size_t>(pivot_row[c]), fc));
        }
    }
    // Normalise the X^{p+1} coefficient to 1.
    const unsigned lead_idx = (p + 1) * layout.side;
    const auto lead_col = static_cast<std::size_t>(
        std::find(layout.order.begin(), layout.order.end(), lead_idx) - layout.order.begin());
    if (vec[lead_col] == 0) {
        sol.status = PrimeSolution::Status::bad_normalization;
        return sol;
    }
    const u64 scale = mg.inv(vec[lead_col]);
    sol.kernel.assign(cols, 0);
    for (std::size_t c = 0; c < cols; ++c) {
        sol.kernel[layout.order[c]] = mg.from_mont(mg.mul(vec[c], scale));
    }
    return sol;
}

mpz_class mpz_from_u64(u64 v) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return z;
}

class CrtAccumulator {
  public:
    explicit CrtAccumulator(std::size_t n) : residues_(n, 0), lifted_(n, 0) {}

    // Returns true when every symmetric lift was left unchanged.
    bool add(const std::vector<u64> &res, u64 ell) {
        const mpz_class ell_z = mpz_from_u64(ell);
        mpz_class m_inv;
        const mpz_class m_mod = modulus_ % ell_z;
        mpz_invert(m_inv.get_mpz_t(), m_mod.get_mpz_t(), ell_z.get_mpz_t());
        mpz_class t;
        for (std::size_t k = 0; k < residues_.size(); ++k) {
            t = (mpz_from_u64(res[k]) - residues_[k]) * m_inv;
            mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), ell_z.get_mpz_t());
            residues_[k] += modulus_ * t;
        }
        modulus_ *= ell_z;
        const mpz_class half = modulus_ / 2;
        bool unchanged = true;
        for (std::size_t k = 0; k < residues_.size(); ++k) {
            mpz_class lift = residues_[k] > half ? mpz_class(residues_[k] - modulus_) : residues_[k];
            if (lift != lifted_[k]) {
                unchanged = false;
                lifted_[k] = std::move(lift);
            }
        }
        return unchanged;
    }

    const std::vector<mpz_class> &lifted() const { return lifted_; }

  private:
    std::vector<mpz_class> residues_;
    std::vector<mpz_class> lifted_;
    mpz_class modulus_ = 1;
};

constexpr u64 kPrimeCeiling = (u64{1} << 62) - 1;

struct Attempt {
    enum class Outcome { done, need_precision };
    Outcome outcome = Outcome::done;
    BivarIntPoly poly;
    unsigned primes_used = 0;
};

Attempt attempt_at_precision(unsigned p, std::int64_t prec, const ModpolyOptions &opts) {
    const MonomialLayout layout(p);
    const IntSeries lambda = lambda_qexp(prec);
    CrtAccumulator crt(layout.size());

    u64 next = kPrimeCeiling + 1;
    unsigned accepted = 0;
    unsigned tried = 0;
    unsigned leading_wrong_nullity = 0;
    unsigned stable = 0;
    const unsigned jobs = std::max(1U, opts.jobs);

    while (tried < opts.prime_budget) {
        std::vector<u64> batch;
        while (batch.size() < jobs && tried + batch.size() < opts.prime_budget) {
            next = prev_prime(next);
            if (next != p) {
                batch.push_back(next);
            }
        }
        std::vector<PrimeSolution> solutions;
        if (batch.size() == 1) {
            solutions.push_back(solve_mod_prime(batch[0], layout, prec, lambda));
        } else {
            std::vector<std::future<PrimeSolution>> futures;
            futures.reserve(batch.size());
            for (u64 ell : batch) {
                futures.push_back(std::async(std::launch::async, solve_mod_prime, ell, std::cref(layout), prec,
                                             std::cref(lambda)));
            }
            for (auto &f : futures) {
                solutions.push_back(f.get());
            }
        }
        for (const auto &sol : solutions) {
            ++tried;
            if (sol.status != PrimeSolution::Status::ok) {
                // Nullity above one at three primes before any success means
                // the kernel over Q is too big: more series terms are needed.
                if (accepted == 0 && sol.status == PrimeSolution::Status::wrong_nullity && ++leading_wrong_nullity >= 3) {
                    return {Attempt::Outcome::need_precision, {}, tried};
                }
                continue;
            }
            const bool unchanged = crt.add(sol.kernel, sol.prime);
            ++accepted;
            stable = (accepted > 1 && unchanged) ? stable + 1 : 0;
            if (stable >= opts.stabilization_primes) {
                BivarIntPoly poly(p);
                for (unsigned idx = 0; idx < layout.size(); ++idx) {
                    poly.set(layout.x_exp(idx), layout.y_exp(idx), crt.lifted()[idx]);
                }
                return {Attempt::Outcome::done, std::move(poly), tried};
            }
        }
    }
    throw BudgetExhausted("compute_modpoly(" + std::to_string(p) + "): CRT did not stabilise within " +
                          std::to_string(opts.prime_budget) + " primes");
}

} // namespace

IntSeries evaluate_on_lambda(const BivarIntPoly &f, std::int64_t prec) {
    const unsigned p = f.p_level();
    if (p == 0) {
        throw InvalidArgument("evaluate_on_lambda: polynomial has no level");
    }
    const IntSeries lambda = lambda_qexp(std::max<std::int64_t>(prec, 2));
    const std::int64_t short_prec = std::max<std::int64_t>((prec + p - 1) / p, 2);
    const IntSeries lambda_short = lambda_qexp(short_prec);

    const unsigned dx = f.degree_x();
    const unsigned dy = f.degree_y();
    std::vector<IntSeries> y_pow(dy + 1);
    y_pow[0] = IntSeries::one();
    for (unsigned j = 1; j <= dy; ++j) {
        y_pow[j] = y_pow[j - 1] * lambda_short;
    }
    for (auto &s : y_pow) {
        s = substitute_qpow(s, p).truncated(prec);
    }

    // Horner in X over the column polynomials P_i(Y).
    std::vector<IntSeries> cols(dx + 1, IntSeries());
    for (const auto &[e, c] : f.terms()) {
        cols[e.first] = cols[e.first] + series_scale(y_pow[e.second], c);
    }
    IntSeries acc = cols[dx].truncated(prec);
    for (unsigned i = dx; i-- > 0;) {
        acc = (acc * lambda + cols[i]).truncated(prec);
    }
    return acc.truncated(prec);
}

ModpolyComputation compute_modpoly_detailed(unsigned p, const ModpolyOptions &opts) {
    if (p < 3 || !is_prime(p)) {
        throw InvalidArgument("compute_modpoly: level must be an odd prime, got " + std::to_string(p));
    }
    std::int64_t prec = opts.precision > 0 ? opts.precision : default_modpoly_precision(p);
    const std::int64_t minimum = static_cast<std::int64_t>(p + 1) * (p + 1) + 1;
    if (prec < minimum) {
        throw InvalidArgument("compute_modpoly: precision " + std::to_string(prec) + " is below (p+1)^2 + 1 = " +
                              std::to_string(minimum));
    }
    const std::int64_t step = static_cast<std::int64_t>(p + 2) * (p + 2);
    for (unsigned retry = 0;; ++retry) {
        Attempt attempt = attempt_at_precision(p, prec, opts);
        if (attempt.outcome == Attempt::Outcome::need_precision) {
            if (retry >= opts.precision_retries) {
                throw PrecisionError("compute_modpoly(" + std::to_string(p) + "): kernel is not one-dimensional at " +
                                     std::to_string(prec) + " series terms");
            }
            prec += step;
            continue;
        }
        const IntSeries residual = evaluate_on_lambda(attempt.poly, prec);
        if (!residual.is_zero() || residual.precision() < prec) {
            throw InternalError("compute_modpoly(" + std::to_string(p) +
                                "): reconstructed polynomial fails the exact integer check: " + to_string(residual.truncated(residual.valuation() + 1)));
        }
        if (!verify_monic_degree(attempt.poly)) {
            throw InternalError("compute_modpoly(" + std::to_string(p) + "): result is not monic of degree p+1");
        }
        return {std::move(attempt.poly), prec, attempt.primes_used, retry};
    }
}

BivarIntPoly compute_modpoly(unsigned p, const ModpolyOptions &opts) { return compute_modpoly_detailed(p, opts).poly; }

bool verify_symmetry(const BivarIntPoly &f) {
    for (const auto &[e, c] : f.terms()) {
        if (f.coeff(e.second, e.first) != c) {
            return false;
        }
    }
    return true;
}

bool verify_kronecker(const BivarIntPoly &f) {
    const unsigned p = f.p_level();
    if (p == 0) {
        return false;
    }
    // X^{p+1} - X^p Y^p - X Y + Y^{p+1}
    BivarIntPoly::TermMap expected{{{p + 1, 0}, 1}, {{p, p}, p - 1}, {{1, 1}, p - 1}, {{0, p + 1}, 1}};
    std::size_t matched = 0;
    for (const auto &[e, c] : f.terms()) {
        const unsigned long r = mpz_fdiv_ui(c.get_mpz_t(), p);
        auto it = expected.find(e);
        if (it == expected.end()) {
            if (r != 0) {
                return false;
            }
        } else {
            if (r != it->second.get_ui()) {
                return false;
            }
            ++matched;
        }
    }
    return matched == expected.size();
}

bool verify_monic_degree(const BivarIntPoly &f) {
    const unsigned p = f.p_level();
    return f.coeff(p + 1, 0) == 1 && f.coeff(0, p + 1) == 1 && f.degree_x() == p + 1 && f.degree_y() == p + 1;
}

UnivarIntPoly r_polynomial(const BivarIntPoly &f) {
    const unsigned p = f.p_level();
    std::vector<mpz_class> g(static_cast<std::size_t>(f.degree_x()) + static_cast<std::size_t>(p) * f.degree_y() + 1);
    for (const auto &[e, c] : f.terms()) {
        g[e.first + p * e.second] += c;
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!mpz_divisible_ui_p(g[k].get_mpz_t(), p)) {
            throw TheoremViolation("r_polynomial: coefficient of X^" + std::to_string(k) + " in F(X, X^p) is " +
                                   g[k].get_str() + ", not divisible by p = " + std::to_string(p));
        }
        mpz_divexact_ui(g[k].get_mpz_t(), g[k].get_mpz_t(), p);
    }
    return UnivarIntPoly(std::move(g));
}

UnivarIntPoly diag_polynomial(const BivarIntPoly &f) {
    const unsigned p = f.p_level();
    std::vector<mpz_class> g(static_cast<std::size_t>(f.degree_x()) + f.degree_y() + 1);
    for (const auto &[e, c] : f.terms()) {
        g[e.first + e.second] += c;
    }
    UnivarIntPoly diag(std::move(g));

    // -(X^p - X)^2 = -X^{2p} + 2 X^{p+1} - X^2
    std::vector<std::uint64_t> expected(2 * static_cast<std::size_t>(p) + 1, 0);
    expected[2 * p] = p - 1;
    expected[p + 1] = 2 % p;
    expected[2] = p - 1;
    std::vector<std::uint64_t> got = reduce_mod(diag, p);
    got.resize(std::max(got.size(), expected.size()), 0);
    expected.resize(got.size(), 0);
    if (got != expected) {
        throw TheoremViolation("diag_polynomial: F(X, X) is not congruent to -(X^p - X)^2 modulo " + std::to_string(p));
    }
    return diag;
}

} // namespace lambda_lab
