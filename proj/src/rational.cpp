#include "gossip/rational.hpp"

namespace gossip {

mpz_class binomial_exact(std::int64_t n, std::int64_t k) {
  mpz_class out;
  if (n < 0 || k < 0 || k > n) return out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return out;
}

mpz_class power(const mpz_class& base, std::int64_t exponent) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(),
             static_cast<unsigned long>(exponent));
  return out;
}

}  // namespace gossip
