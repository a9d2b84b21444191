#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "powfree/prime_table.hpp"

namespace powfree {

// The reduction at the heart of everything here: an integer n = prod p_i^{a_i}
// maps to the vector (a_i mod d) in Z_d^r.  A product of distinct integers is
// a perfect d-th power iff their vectors sum to zero.
//
// Sparse representation keyed by 1-based prime index; zero residues are never
// stored, so the zero vector has an empty entries list.
struct ExponentVector {
  std::uint32_t modulus = 2;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;  // (prime index, residue in [1, d-1])

  bool is_zero() const { return entries.empty(); }

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
  friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
};

struct VectorHash {
  std::size_t operator()(const ExponentVector& v) const;
};

ExponentVector to_vector(std::uint64_t n, std::uint32_t d, const PrimeTable& table);
ExponentVector add(const ExponentVector& u, const ExponentVector& v);
ExponentVector negate(const ExponentVector& v);

// Labelled multiset of vectors over a common modulus.  Labels are the
// originating integers and must be pairwise distinct; vectors may repeat.
struct VectorMultiset {
  std::uint32_t modulus = 2;
  std::vector<std::pair<std::uint64_t, ExponentVector>> items;  // (label, vector)
};

VectorMultiset make_multiset(std::span<const std::uint64_t> labels, std::uint32_t d,
                             const PrimeTable& table);

inline constexpr std::uint64_t kDefaultClosureCap = 10'000'000;

// All sums of non-empty sub-multisets, sorted.  Throws ResourceLimit when the
// number of distinct sums exceeds cap.
std::vector<ExponentVector> subset_sum_closure(const VectorMultiset& ms,
                                               std::uint64_t cap = kDefaultClosureCap);

struct ZeroSumReport {
  bool has_zero_sum = false;
  std::vector<std::uint64_t> witness;  // ascending labels; non-empty iff has_zero_sum
};

// Detects a non-empty sub-multiset summing to zero, with witness
// reconstruction.  Items are processed by ascending label; the witness is the
// first zero sum reached in that deterministic order.
ZeroSumReport find_zero_sum(const VectorMultiset& ms, std::uint64_t cap = kDefaultClosureCap);

struct EliminationResult {
  VectorMultiset residual;
  std::vector<std::uint64_t> removed;  // labels, in removal order
};

// Per-prime elimination to a fixpoint: at each coordinate, if the residues
// present admit no non-empty sub-multiset summing to 0 mod d (a d-state
// dynamic program), every element touching that coordinate is removed.  Any
// zero-sum sub-multiset avoids all removed elements, so the zero-sum verdict
// of ms and residual coincide.
EliminationResult eliminate(const VectorMultiset& ms);

}  // namespace powfree
