#include "lambda_lab/primes.hpp"

#include <gmpxx.h>

namespace lambda_lab {

namespace {

mpz_class from_u64(std::uint64_t n) {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
    return z;
}

} // namespace

// GMP runs BPSW before its Miller-Rabin rounds, which is exact below 2^64.
bool is_prime(std::uint64_t n) { return n >= 2 && mpz_probab_prime_p(from_u64(n).get_mpz_t(), 25) > 0; }

std::uint64_t prev_prime(std::uint64_t n) {
    while (n > 2) {
        --n;
        if (is_prime(n)) {
            return n;
        }
    }
    return 0;
}

} // namespace lambda_lab
