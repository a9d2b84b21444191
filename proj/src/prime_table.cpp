#include "powfree/prime_table.hpp"

#include <algorithm>

namespace powfree {

PrimeTable PrimeTable::build(std::uint64_t limit) {
  if (limit == 0) throw InvalidArgument("prime table limit must be >= 1");

  PrimeTable t;
  t.limit_ = limit;
  t.sieve_.assign(limit + 1, true);
  t.sieve_[0] = false;
  if (limit >= 1) t.sieve_[1] = false;
  for (std::uint64_t p = 2; p * p <= limit; ++p) {
    if (!t.sieve_[p]) continue;
    for (std::uint64_t m = p * p; m <= limit; m += p) t.sieve_[m] = false;
  }

  t.pi_.assign(limit + 1, 0);
  std::uint32_t count = 0;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (t.sieve_[n]) {
      t.primes_.push_back(n);
      ++count;
    }
    t.pi_[n] = count;
  }
  return t;
}

std::uint64_t PrimeTable::pi(std::uint64_t n) const {
  if (n > limit_) throw OutOfRange("pi(" + std::to_string(n) + ") beyond table limit " +
                                   std::to_string(limit_));
  return pi_[n];
}

std::uint64_t PrimeTable::nth_prime(std::uint64_t i) const {
  if (i == 0 || i > primes_.size())
    throw OutOfRange("table holds " + std::to_string(primes_.size()) +
                     " primes, cannot give prime #" + std::to_string(i));
  return primes_[i - 1];
}

std::uint64_t PrimeTable::prime_index(std::uint64_t p) const {
  if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not a prime in this table");
  return pi_[p];
}

Factorization PrimeTable::factorize(std::uint64_t n) const {
  if (n == 0) throw InvalidArgument("cannot factorize 0");
  Factorization f;
  f.value = n;
  std::uint64_t rest = n;
  for (std::uint64_t p : primes_) {
    if (p * p > rest) break;
    if (rest % p) continue;
    std::uint32_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
  }
  if (rest > 1) {
    // Remaining cofactor has no prime factor <= sqrt(rest) among the sieved
    // primes, so it is prime itself iff it is within the table.
    if (rest > limit_)
      throw IncompleteTable("factor " + std::to_string(rest) + " of " + std::to_string(n) +
                            " exceeds table limit " + std::to_string(limit_));
    f.factors.emplace_back(rest, 1);
  }
  return f;
}

std::uint32_t PrimeTable::omega(std::uint64_t n) const {
  return static_cast<std::uint32_t>(factorize(n).factors.size());
}

std::uint64_t PrimeTable::largest_prime_factor(std::uint64_t n) const {
  if (n < 2) throw InvalidArgument("largest_prime_factor requires n >= 2");
  return factorize(n).factors.back().first;
}

}  // namespace powfree
