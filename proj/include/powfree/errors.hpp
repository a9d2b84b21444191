#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace powfree {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// A query exceeded the capacity of a table or precomputed structure.
struct OutOfRange : Error {
  using Error::Error;
};

// An integer has a prime factor beyond the sieve limit of the table used.
struct IncompleteTable : Error {
  using Error::Error;
};

// A formula was applied outside its proven domain (e.g. Olson on a non-p-group).
struct NotApplicable : Error {
  using Error::Error;
};

struct ThresholdNotMet : Error {
  ThresholdNotMet(const std::string& msg, std::uint64_t minimum)
      : Error(msg), minimum_n(minimum) {}
  std::uint64_t minimum_n;
};

struct ResourceLimit : Error {
  ResourceLimit(const std::string& msg, std::uint64_t lim) : Error(msg), limit(lim) {}
  std::uint64_t limit;
};

// A search ran out of node budget; carries the bracket [best_value, upper_bound].
struct BudgetExceeded : ResourceLimit {
  BudgetExceeded(const std::string& msg, std::uint64_t budget, std::uint64_t best,
                 std::uint64_t ub)
      : ResourceLimit(msg, budget), best_value(best), upper_bound(ub) {}
  std::uint64_t best_value;
  std::uint64_t upper_bound;
};

}  // namespace powfree
