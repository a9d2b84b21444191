#include "powfree/bigint.hpp"

#include "powfree/errors.hpp"

namespace powfree {

BigInt product_of(std::span<const std::uint64_t> values) {
  BigInt p = 1;
  for (std::uint64_t v : values) p *= v;
  return p;
}

BigInt floor_kth_root(const BigInt& x, std::uint32_t k) {
  if (x < 0) throw InvalidArgument("root of negative value");
  if (k == 0) throw InvalidArgument("0-th root");
  if (k == 1 || x < 2) return x;

  // binary search on r with r^k <= x
  BigInt lo = 1, hi = 2;
  while (boost::multiprecision::pow(hi, k) <= x) hi <<= 1;
  while (lo + 1 < hi) {
    BigInt mid = (lo + hi) >> 1;
    if (boost::multiprecision::pow(mid, k) <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

bool is_perfect_dth_power(const BigInt& x, std::uint32_t d, BigInt* root_out) {
  if (x < 0) return false;
  BigInt r = floor_kth_root(x, d);
  if (boost::multiprecision::pow(r, d) == x) {
    if (root_out) *root_out = r;
    return true;
  }
  return false;
}

}  // namespace powfree
