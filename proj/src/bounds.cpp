#include "powfree/bounds.hpp"

#include <cmath>

namespace powfree {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

bool is_prime_power(std::uint64_t n, std::uint64_t* prime_out, std::uint32_t* exponent_out) {
  if (n < 2) return false;
  std::uint64_t p = 0;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      p = q;
      break;
    }
  if (p == 0) p = n;
  std::uint32_t e = 0;
  std::uint64_t rest = n;
  while (rest % p == 0) {
    rest /= p;
    ++e;
  }
  if (rest != 1) return false;
  if (prime_out) *prime_out = p;
  if (exponent_out) *exponent_out = e;
  return true;
}

DavenportValue davenport_of_power(std::uint32_t d, std::uint64_t rank) {
  if (d < 2) throw InvalidArgument("d must be >= 2");
  if (rank == 0) return {1, true};  // trivial group
  if (is_prime_power(d)) return {1 + rank * (d - 1), true};
  // star bound: d(1 + ln(d^{rank-1})) = d(1 + (rank-1) ln d)
  double real = d * (1.0 + (static_cast<double>(rank) - 1.0) * std::log(static_cast<double>(d)));
  return {static_cast<std::uint64_t>(real + 1e-9), false};
}

std::uint64_t main_term(std::uint32_t d, std::uint64_t N, const PrimeTable& table) {
  if (d < 2) throw InvalidArgument("d must be >= 2");
  if (N < 1) throw InvalidArgument("N must be >= 1");
  std::uint64_t sum = 0;
  for (std::uint32_t k = 1; k <= d - 1; ++k) sum += table.pi(N / k);
  return sum;
}

std::uint64_t band_davenport_upper(std::uint32_t d, std::uint64_t N, const PrimeTable& table) {
  const std::uint64_t r = table.pi(N / d);
  const std::uint64_t dav = davenport_of_power(d, r).value;
  return main_term(d, N, table) + dav - (d - 1) * r - 1;
}

std::uint64_t sqrt_davenport_upper(std::uint32_t d, std::uint64_t N, const PrimeTable& table) {
  const std::uint64_t r = table.pi(isqrt(N));
  return main_term(d, N, table) + d * davenport_of_power(d, r).value;
}

std::uint64_t sqrt_davenport_upper_tight(std::uint32_t d, std::uint64_t N,
                                         const PrimeTable& table) {
  const std::uint64_t r = table.pi(isqrt(N));
  return main_term(d, N, table) + d * (davenport_of_power(d, r).value - 1);
}

RealBound log_form_upper(std::uint32_t d, std::uint64_t N, const PrimeTable& table) {
  const std::uint64_t r = table.pi(isqrt(N));
  double real = static_cast<double>(main_term(d, N, table)) +
                d * std::log(static_cast<double>(d)) * static_cast<double>(r);
  return {static_cast<std::uint64_t>(real + 1e-9), real};
}

RealBound log_form_upper_derived(std::uint32_t d, std::uint64_t N, const PrimeTable& table) {
  const std::uint64_t r = table.pi(isqrt(N));
  double star = (r == 0) ? 1.0
                         : d * (1.0 + (static_cast<double>(r) - 1.0) *
                                          std::log(static_cast<double>(d)));
  double real = static_cast<double>(main_term(d, N, table)) + d * star;
  return {static_cast<std::uint64_t>(real + 1e-9), real};
}

std::pair<std::uint64_t, std::uint64_t> pi_omega_identity(std::uint32_t d,
                                                          const PrimeTable& table) {
  if (d < 2) throw InvalidArgument("d must be >= 2");
  const std::uint64_t m = 2 * static_cast<std::uint64_t>(d) - 2;
  if (m > table.limit()) throw OutOfRange("table too small for 2d-2");
  std::uint64_t lhs = 0;
  for (std::uint32_t k = 1; k <= d - 1; ++k) lhs += table.pi(m / k);
  std::uint64_t rhs = 0;
  for (std::uint64_t n = 1; n <= m; ++n) rhs += table.omega(n);
  return {lhs, rhs};
}

bool pi_sum_lower_bound(std::uint32_t d, const PrimeTable& table) {
  if (d < 4) throw InvalidArgument("the lower bound is asserted for d >= 4 only");
  return pi_omega_identity(d, table).first >= 2 * static_cast<std::uint64_t>(d) - 2;
}

std::uint64_t construction_threshold(std::uint32_t d, const PrimeTable& table) {
  const std::uint64_t pd = table.nth_prime(d);
  if (d >= 64) return UINT64_MAX;
  unsigned __int128 t = static_cast<unsigned __int128>(pd) << d;
  if (t > UINT64_MAX) return UINT64_MAX;
  return static_cast<std::uint64_t>(t);
}

bool threshold_met(std::uint32_t d, std::uint64_t N, const PrimeTable& table) {
  if (table.prime_count() < d) {
    // p_d exceeds the table limit, so N <= limit < p_d < 2^d p_d.
    return false;
  }
  return N >= construction_threshold(d, table);
}

std::optional<std::uint64_t> exact_value_if_applicable(std::uint32_t d, std::uint64_t N,
                                                       const PrimeTable& table) {
  if (!is_prime_power(d)) return std::nullopt;
  if (!threshold_met(d, N, table)) return std::nullopt;
  return main_term(d, N, table);
}

BoundReport bound_report(std::uint32_t d, std::uint64_t N, const PrimeTable& table) {
  if (d < 2) throw InvalidArgument("d must be >= 2");
  BoundReport r;
  r.d = d;
  r.N = N;
  r.main_term = main_term(d, N, table);
  r.band_davenport_upper = band_davenport_upper(d, N, table);
  r.sqrt_davenport_upper = sqrt_davenport_upper(d, N, table);
  r.sqrt_davenport_upper_tight = sqrt_davenport_upper_tight(d, N, table);
  r.log_form = log_form_upper(d, N, table);
  r.log_form_derived = log_form_upper_derived(d, N, table);
  r.log_form_below_derived = r.log_form.floored < r.log_form_derived.floored;
  r.is_prime_power_d = is_prime_power(d);
  r.davenport_exact_formula = r.is_prime_power_d;
  r.threshold = construction_threshold(d, table);
  r.exact_value = exact_value_if_applicable(d, N, table);
  return r;
}

}  // namespace powfree
