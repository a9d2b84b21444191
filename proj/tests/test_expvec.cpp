#include <doctest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "powfree/bigint.hpp"
#include "powfree/expvec.hpp"

using namespace powfree;

namespace {

ExponentVector vec(std::uint32_t d, std::vector<std::pair<std::uint32_t, std::uint32_t>> entries) {
  return ExponentVector{d, std::move(entries)};
}

// distinct random labels in [1, 100]
VectorMultiset random_multiset(std::mt19937_64& rng, const PrimeTable& table) {
  std::uniform_int_distribution<std::uint32_t> d_dist(2, 6);
  std::uniform_int_distribution<std::size_t> size_dist(0, 18);
  std::uniform_int_distribution<std::uint64_t> label_dist(1, 100);
  const std::uint32_t d = d_dist(rng);
  const std::size_t size = size_dist(rng);
  std::set<std::uint64_t> labels;
  while (labels.size() < size) labels.insert(label_dist(rng));
  std::vector<std::uint64_t> v(labels.begin(), labels.end());
  return make_multiset(v, d, table);
}

}  // namespace

TEST_CASE("to_vector") {
  auto t = PrimeTable::build(100);

  CHECK(to_vector(8, 3, t).is_zero());  // 8 = 2^3 is a perfect cube
  CHECK(to_vector(1, 5, t).is_zero());

  auto v12 = to_vector(12, 2, t);  // 12 = 2^2 * 3: squares vanish mod 2
  REQUIRE(v12.entries.size() == 1);
  CHECK(v12.entries[0].first == t.prime_index(3));
  CHECK(v12.entries[0].second == 1);

  auto v24 = to_vector(24, 3, t);  // 24 = 2^3 * 3
  REQUIRE(v24.entries.size() == 1);
  CHECK(v24.entries[0].first == t.prime_index(3));
  CHECK(v24.entries[0].second == 1);

  CHECK_THROWS_AS(to_vector(10, 1, t), InvalidArgument);
}

TEST_CASE("add") {
  auto u = vec(3, {{1, 1}});
  auto zero = vec(3, {});
  CHECK(add(u, zero) == u);

  CHECK(add(vec(3, {{4, 1}}), vec(3, {{4, 2}})).is_zero());

  auto sum = add(vec(2, {{1, 1}, {2, 1}}), vec(2, {{2, 1}}));
  CHECK(sum == vec(2, {{1, 1}}));

  CHECK_THROWS_AS(add(vec(2, {}), vec(3, {})), InvalidArgument);
}

TEST_CASE("negate") {
  auto v = vec(5, {{1, 2}, {3, 4}});
  CHECK(add(v, negate(v)).is_zero());
  CHECK(negate(vec(2, {})).is_zero());
}

TEST_CASE("subset_sum_closure small cases") {
  VectorMultiset empty{2, {}};
  CHECK(subset_sum_closure(empty).empty());

  VectorMultiset two{2, {{1, vec(2, {{1, 1}})}, {2, vec(2, {{2, 1}})}}};
  auto sums = subset_sum_closure(two);
  CHECK(sums.size() == 3);  // e1, e2, e1+e2

  // three copies of the same unit vector mod 3 reach {1, 2, 0}
  VectorMultiset thrice{3, {{1, vec(3, {{1, 1}})}, {2, vec(3, {{1, 1}})}, {3, vec(3, {{1, 1}})}}};
  auto s3 = subset_sum_closure(thrice);
  CHECK(s3.size() == 3);
  bool has_zero = false;
  for (const auto& s : s3) has_zero |= s.is_zero();
  CHECK(has_zero);
}

TEST_CASE("closure cap") {
  // 24 items with distinct coordinates give 2^24 - 1 sums
  VectorMultiset ms{2, {}};
  for (std::uint32_t i = 1; i <= 24; ++i) ms.items.emplace_back(i, vec(2, {{i, 1}}));
  CHECK_THROWS_AS(subset_sum_closure(ms, 1000), ResourceLimit);
}

TEST_CASE("find_zero_sum examples") {
  auto t = PrimeTable::build(100);

  std::vector<std::uint64_t> primes{2, 3, 5};
  CHECK_FALSE(find_zero_sum(make_multiset(primes, 2, t)).has_zero_sum);

  std::vector<std::uint64_t> pair{2, 8};
  auto zs = find_zero_sum(make_multiset(pair, 2, t));
  REQUIRE(zs.has_zero_sum);
  CHECK(zs.witness == std::vector<std::uint64_t>{2, 8});  // 2 * 8 = 16 = 4^2

  std::vector<std::uint64_t> single{4};
  auto z4 = find_zero_sum(make_multiset(single, 2, t));
  REQUIRE(z4.has_zero_sum);
  CHECK(z4.witness == std::vector<std::uint64_t>{4});  // k = 1 products count

  std::vector<std::uint64_t> gadgets{3, 6, 24, 5, 10, 40};
  CHECK_FALSE(find_zero_sum(make_multiset(gadgets, 3, t)).has_zero_sum);
}

TEST_CASE("multiset labels must be distinct") {
  auto t = PrimeTable::build(100);
  std::vector<std::uint64_t> dupes{2, 3, 2};
  CHECK_THROWS_AS(make_multiset(dupes, 2, t), InvalidArgument);
}

TEST_CASE("eliminate examples") {
  auto t = PrimeTable::build(100);

  auto e = eliminate(make_multiset(std::vector<std::uint64_t>{7, 14}, 3, t));
  CHECK(e.residual.items.empty());
  CHECK(e.removed.size() == 2);

  // The d=3, N=40 construction: the first pass removes every band element
  // (each carries a prime > 5 with under 3 multiples), and the fixpoint then
  // cascades through the gadgets too (coordinate 2 is left with residues
  // {1,1}).  Nothing survives, and the verdict is preserved: no zero sum.
  std::vector<std::uint64_t> full{23, 29, 31, 37, 7,  14, 11, 22, 13, 26,
                                  17, 34, 19, 38, 3,  6,  24, 5,  10, 40};
  auto ms_full = make_multiset(full, 3, t);
  auto e2 = eliminate(ms_full);
  CHECK(e2.residual.items.empty());
  CHECK(e2.removed.size() == 20);
  CHECK_FALSE(find_zero_sum(ms_full).has_zero_sum);

  // a zero vector has no non-zero coordinate, so it survives elimination
  VectorMultiset zed{2, {{9, vec(2, {})}}};
  auto e3 = eliminate(zed);
  CHECK(e3.removed.empty());
  REQUIRE(e3.residual.items.size() == 1);
  CHECK(find_zero_sum(e3.residual).has_zero_sum);
}

TEST_CASE("find_zero_sum agrees with exhaustive enumeration") {
  auto t = PrimeTable::build(100);
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 150; ++i) {
    auto ms = random_multiset(rng, t);
    auto got = find_zero_sum(ms);
    bool expected = oracle::exhaustive_has_zero_sum(ms);
    CHECK(got.has_zero_sum == expected);
    if (got.has_zero_sum) {
      // witness labels are distinct, drawn from the multiset, their vectors
      // sum to zero, and the product re-verifies by integer arithmetic
      ExponentVector sum{ms.modulus, {}};
      std::set<std::uint64_t> used;
      for (std::uint64_t label : got.witness) {
        CHECK(used.insert(label).second);
        bool found = false;
        for (const auto& [l, v] : ms.items)
          if (l == label) {
            sum = add(sum, v);
            found = true;
            break;
          }
        CHECK(found);
      }
      CHECK(sum.is_zero());
      BigInt prod = product_of(got.witness);
      CHECK(is_perfect_dth_power(prod, ms.modulus));
    }
  }
}

TEST_CASE("eliminate preserves the zero-sum verdict") {
  auto t = PrimeTable::build(100);
  std::mt19937_64 rng(777);
  for (int i = 0; i < 150; ++i) {
    auto ms = random_multiset(rng, t);
    auto e = eliminate(ms);
    CHECK(find_zero_sum(ms).has_zero_sum == find_zero_sum(e.residual).has_zero_sum);
  }
}

TEST_CASE("closure is monotone under insertion") {
  auto t = PrimeTable::build(100);
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 40; ++i) {
    auto ms = random_multiset(rng, t);
    if (ms.items.size() > 12 || ms.items.empty()) continue;
    VectorMultiset smaller = ms;
    smaller.items.pop_back();
    auto before = subset_sum_closure(smaller);
    auto after = subset_sum_closure(ms);
    CHECK(after.size() >= before.size());
    CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
  }
}

TEST_CASE("mod 2 zero-sum-freeness is GF(2) linear independence") {
  auto t = PrimeTable::build(100);
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size_dist(1, 18);
  std::uniform_int_distribution<std::uint64_t> label_dist(1, 100);
  for (int rep = 0; rep < 80; ++rep) {
    std::set<std::uint64_t> labels;
    std::size_t size = size_dist(rng);
    while (labels.size() < size) labels.insert(label_dist(rng));
    std::vector<std::uint64_t> v(labels.begin(), labels.end());
    auto ms = make_multiset(v, 2, t);

    // Gaussian elimination over GF(2), rows as bitmasks by prime index
    std::vector<std::uint64_t> rows;
    for (auto& [label, vecv] : ms.items) {
      std::uint64_t row = 0;
      for (auto [idx, res] : vecv.entries) row |= 1ull << idx;
      rows.push_back(row);
    }
    std::size_t rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
      std::size_t pivot = rank;
      while (pivot < rows.size() && !(rows[pivot] >> bit & 1)) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (r != rank && (rows[r] >> bit & 1)) rows[r] ^= rows[rank];
      ++rank;
    }
    bool independent = rank == ms.items.size();
    CHECK(independent == !find_zero_sum(ms).has_zero_sum);
  }
}
