#pragma once

#include <cstdint>

namespace lambda_lab {

bool is_prime(std::uint64_t n);

/// Largest prime strictly below n, or 0 if none.
std::uint64_t prev_prime(std::uint64_t n);

} // namespace lambda_lab
