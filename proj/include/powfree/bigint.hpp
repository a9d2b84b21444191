#pragma once

#include <cstdint>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

namespace powfree {

using BigInt = boost::multiprecision::cpp_int;

BigInt product_of(std::span<const std::uint64_t> values);

// floor(x^(1/k)) for x >= 0, k >= 1.
BigInt floor_kth_root(const BigInt& x, std::uint32_t k);

// True iff x = r^d for some integer r; r is written to root_out when given.
bool is_perfect_dth_power(const BigInt& x, std::uint32_t d, BigInt* root_out = nullptr);

}  // namespace powfree
