#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "powfree/errors.hpp"

namespace powfree {

// Canonical factorization n = prod p^e, primes strictly ascending, e >= 1.
// value == 1 iff factors is empty.
struct Factorization {
  std::uint64_t value = 1;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;
};

// Sieve of Eratosthenes with a pi() cache and the ordered prime list
// p_1 = 2, p_2 = 3, ...  Immutable after build(); safe for shared reads.
class PrimeTable {
 public:
  static PrimeTable build(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::uint64_t prime_count() const { return primes_.size(); }

  bool is_prime(std::uint64_t n) const { return n <= limit_ && n >= 2 && sieve_[n]; }

  // Number of primes <= n.  Requires n <= limit.
  std::uint64_t pi(std::uint64_t n) const;

  // The i-th prime, 1-based: nth_prime(1) == 2.  Requires i <= prime_count().
  std::uint64_t nth_prime(std::uint64_t i) const;

  // 1-based index of a prime p (inverse of nth_prime).  Requires p prime, p <= limit.
  std::uint64_t prime_index(std::uint64_t p) const;

  // Trial division against the sieved prime list.  Every prime factor of n
  // must be <= limit (always true for n <= limit).
  Factorization factorize(std::uint64_t n) const;

  // Number of distinct prime divisors.
  std::uint32_t omega(std::uint64_t n) const;

  // Largest prime factor of n, n >= 2.
  std::uint64_t largest_prime_factor(std::uint64_t n) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<bool> sieve_;            // sieve_[n] == n is prime, n in [0, limit]
  std::vector<std::uint64_t> primes_;  // ascending
  std::vector<std::uint32_t> pi_;      // pi_[n] == pi(n), n in [0, limit]
};

}  // namespace powfree
