#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "powfree/errors.hpp"

namespace powfree {

// Finite abelian group as a direct sum of cyclic groups Z_{n_i}, n_i >= 2.
// Components are kept sorted ascending.
struct GroupSpec {
  std::vector<std::uint64_t> components;

  // Accepts "5", "2,4", "3^2", "2,5^3", ... (comma-separated cyclic orders,
  // caret for repetition).
  static GroupSpec parse(std::string_view text);
  static GroupSpec power(std::uint64_t n, std::uint32_t r);  // Z_n^r, r >= 1

  std::uint64_t order() const;
  std::uint64_t exponent() const;  // lcm of components
  bool is_p_group(std::uint64_t* prime_out = nullptr) const;
  std::string to_string() const;
};

// D(G) = 1 + sum (p^{e_i} - 1) for p-groups.  Throws NotApplicable otherwise.
std::uint64_t olson_davenport(const GroupSpec& g);

struct StarBound {
  std::uint64_t floored;  // sound since D(G) is an integer
  double real;
};

// D(G) <= exp(G) * (1 + log(|G| / exp(G))), natural logarithm.
StarBound davenport_upper_bound(const GroupSpec& g);

struct DavenportSearchOptions {
  std::uint64_t node_budget = 500'000'000;
  unsigned threads = 1;
};

struct DavenportSearchResult {
  std::uint64_t value;                  // D(G)
  std::uint64_t longest_zero_sum_free;  // value - 1
  std::uint64_t nodes;
};

// Exact D(G) by exhaustive search over non-decreasing sequences of group
// elements, maintaining the subset-sum closure incrementally and pruning as
// soon as 0 becomes reachable.  Guarded to |G| <= 4096 and expected depth
// <= 32; throws BudgetExceeded with the best lower bound when the node
// budget runs out.
DavenportSearchResult davenport_exact(const GroupSpec& g,
                                      const DavenportSearchOptions& opts = {});

}  // namespace powfree
