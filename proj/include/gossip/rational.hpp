#pragma once

#include <gmpxx.h>

#include <cstdint>

namespace gossip {

enum class Arithmetic { rational, floating };

/// Exact C(n, k); zero outside 0 <= k <= n.
mpz_class binomial_exact(std::int64_t n, std::int64_t k);

mpz_class power(const mpz_class& base, std::int64_t exponent);

}  // namespace gossip
