#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "powfree/prime_table.hpp"

namespace powfree {

bool is_prime_power(std::uint64_t n, std::uint64_t* prime_out = nullptr,
                    std::uint32_t* exponent_out = nullptr);

// D(Z_d^r): Olson's exact value 1 + r(d-1) when d is a prime power, the
// star upper bound floor(d(1 + (r-1) ln d)) otherwise.  exact tells which.
struct DavenportValue {
  std::uint64_t value;
  bool exact;
};
DavenportValue davenport_of_power(std::uint32_t d, std::uint64_t rank);

// sum_{k=1}^{d-1} pi(floor(N/k)).  Requires table.limit >= N.
std::uint64_t main_term(std::uint32_t d, std::uint64_t N, const PrimeTable& table);

// Band counting for primes > N/d plus a Davenport cap on the N/d-smooth
// class: main term + D(Z_d^{pi(N/d)}) - (d-1) pi(N/d) - 1.
std::uint64_t band_davenport_upper(std::uint32_t d, std::uint64_t N, const PrimeTable& table);

// Smoothness cutoff at sqrt(N), d elements paid per Davenport unit:
// main term + d * D(Z_d^{pi(isqrt(N))}); plus the tighter d * (D - 1) variant.
std::uint64_t sqrt_davenport_upper(std::uint32_t d, std::uint64_t N, const PrimeTable& table);
std::uint64_t sqrt_davenport_upper_tight(std::uint32_t d, std::uint64_t N,
                                         const PrimeTable& table);

struct RealBound {
  std::uint64_t floored;
  double real;
};

// Compact logarithmic form: main term + d ln(d) pi(isqrt(N)).
RealBound log_form_upper(std::uint32_t d, std::uint64_t N, const PrimeTable& table);

// What the sqrt bound plus the star bound actually give:
// main term + d * [d(1 + (pi(isqrt(N)) - 1) ln d)].  Larger than the compact
// form by roughly a factor of d; both are reported.
RealBound log_form_upper_derived(std::uint32_t d, std::uint64_t N, const PrimeTable& table);

// lhs = sum_{k=1}^{d-1} pi(floor((2d-2)/k)), rhs = sum_{n <= 2d-2} omega(n).
// The two are equal for every d >= 2.
std::pair<std::uint64_t, std::uint64_t> pi_omega_identity(std::uint32_t d,
                                                          const PrimeTable& table);

// Whether sum_{k=1}^{d-1} pi(floor((2d-2)/k)) >= 2d-2.  Requires d >= 4.
bool pi_sum_lower_bound(std::uint32_t d, const PrimeTable& table);

// 2^d * p_d, the smallest N the explicit construction handles; saturated to
// UINT64_MAX on overflow.  Requires table to hold at least d primes.
std::uint64_t construction_threshold(std::uint32_t d, const PrimeTable& table);

// True iff N >= 2^d * p_d.  Never throws for tables too small to hold p_d:
// then N <= limit < p_d < threshold, so the answer is false.
bool threshold_met(std::uint32_t d, std::uint64_t N, const PrimeTable& table);

// main_term(d, N) when d is a prime power and N >= 2^d p_d; absent otherwise.
std::optional<std::uint64_t> exact_value_if_applicable(std::uint32_t d, std::uint64_t N,
                                                       const PrimeTable& table);

struct BoundReport {
  std::uint32_t d = 2;
  std::uint64_t N = 1;
  std::uint64_t main_term = 0;
  std::uint64_t band_davenport_upper = 0;
  std::uint64_t sqrt_davenport_upper = 0;
  std::uint64_t sqrt_davenport_upper_tight = 0;
  RealBound log_form{0, 0.0};
  RealBound log_form_derived{0, 0.0};
  // The compact log form undercuts what the derivation gives; flagged,
  // never treated as an error.
  bool log_form_below_derived = false;
  bool is_prime_power_d = false;
  // False when D(Z_d^r) had to be replaced by the star bound (bound of a bound).
  bool davenport_exact_formula = false;
  std::uint64_t threshold = 0;  // 2^d p_d (saturated)
  std::optional<std::uint64_t> exact_value;
};

// Requires table.limit >= N and table.prime_count() >= d.
BoundReport bound_report(std::uint32_t d, std::uint64_t N, const PrimeTable& table);

}  // namespace powfree
