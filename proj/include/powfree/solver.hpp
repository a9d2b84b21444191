#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "powfree/expvec.hpp"
#include "powfree/prime_table.hpp"

namespace powfree {

struct SolveOptions {
  std::uint64_t node_budget = 200'000'000;
  unsigned threads = 1;
  // Desk-scale guard: N <= 60 for d <= 3, N <= 40 for d >= 4.  Soft; set
  // override_guard to push further.
  bool override_guard = false;
  std::uint64_t closure_cap = kDefaultClosureCap;
};

struct SolveResult {
  std::uint32_t d = 2;
  std::uint64_t N = 1;
  std::uint64_t value = 0;
  std::vector<std::uint64_t> witness;  // sorted, distinct, in [2, N]
  std::uint64_t nodes_explored = 0;
  std::uint64_t upper_bound_used = 0;
  std::chrono::duration<double> elapsed{0.0};
};

// Exact rho_d(N): maximum subset of [N] whose exponent vectors form a
// zero-sum-free multiset.  Branch and bound over the residual left by the
// elimination preprocessor, with the construction seeding the incumbent when
// N >= 2^d p_d and a Davenport cap on the N/d-smooth part.
SolveResult solve(std::uint32_t d, std::uint64_t N, const PrimeTable& table,
                  const SolveOptions& opts = {});

struct RangeEntry {
  std::uint64_t N = 0;
  std::optional<SolveResult> result;
  std::string error;               // non-empty when this N failed
  std::uint64_t best_value = 0;    // bracket on failure
  std::uint64_t upper_bound = 0;
};

// One independent solve per N; per-entry budget errors are recorded and the
// sweep continues.
std::vector<RangeEntry> solve_range(std::uint32_t d, std::uint64_t n_lo, std::uint64_t n_hi,
                                    const PrimeTable& table, const SolveOptions& opts = {});

}  // namespace powfree
