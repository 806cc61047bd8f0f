#pragma once

#include <cstdint>

namespace lambda_lab::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Montgomery arithmetic modulo an odd n < 2^62. Values are kept in
// Montgomery form; zero is represented by zero.
class Montgomery {
  public:
    explicit Montgomery(u64 n) : n_(n) {
        u64 inv = n;
        for (int i = 0; i < 6; ++i) {
            inv *= 2 - n * inv;
        }
        neg_inv_ = ~inv + 1;
        // 2^128 mod n
        r2_ = static_cast<u64>(((~static_cast<u128>(0)) % n + 1) % n);
    }

    u64 modulus() const { return n_; }

    u64 to_mont(u64 x) const { return mul(x % n_, r2_); }
    u64 from_mont(u64 x) const { return reduce(x); }

    u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= n_ ? s - n_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + n_ - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : n_ - a; }

    u64 pow(u64 a, u64 e) const {
        u64 r = to_mont(1);
        while (e > 0) {
            if (e & 1U) {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1U;
        }
        return r;
    }
    // n must be prime.
    u64 inv(u64 a) const { return pow(a, n_ - 2); }

  private:
    u64 reduce(u128 t) const {
        const u64 m = static_cast<u64>(t) * neg_inv_;
        const u64 r = static_cast<u64>((t + static_cast<u128>(m) * n_) >> 64);
        return r >= n_ ? r - n_ : r;
    }

    u64 n_;
    u64 neg_inv_ = 0;
    u64 r2_ = 0;
};

} // namespace lambda_lab::detail
