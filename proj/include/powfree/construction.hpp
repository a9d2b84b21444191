#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "powfree/expvec.hpp"
#include "powfree/prime_table.hpp"

namespace powfree {

struct BandSet {
  std::uint32_t k = 0;                  // uses primes p with N/(k+1) < p <= N/k
  std::vector<std::uint64_t> elements;  // all i*p, 1 <= i <= k, sorted
};

struct GadgetSet {
  std::uint32_t s = 0;        // 2 <= s <= d
  std::uint64_t prime = 0;    // p_s
  std::vector<std::uint64_t> elements;  // 2^{j_t} * p_s, sorted
};

// The lower-bound set A = (union of bands) + (union of gadgets) together with
// everything needed to re-check it: the partition, the chosen exponents j_t,
// and the claimed cardinality sum_{k=1}^{d-1} pi(floor(N/k)).
struct ConstructionCertificate {
  std::uint32_t d = 2;
  std::uint64_t N = 1;
  std::vector<BandSet> bands;          // k = 1 .. d-2 (empty for d = 2)
  BandSet last_band;                   // k = d-1, primes in (p_d, N/(d-1)]
  std::vector<GadgetSet> gadgets;      // s = 2 .. d
  std::vector<std::uint32_t> j_set;    // j_1 < ... < j_d in [0, d], sum == 1 (mod d)
  std::vector<std::uint64_t> full_set; // sorted union of all parts
  std::uint64_t claimed_size = 0;
  bool verified = false;
};

// {0, ..., d} minus the smallest m with m == d(d+1)/2 - 1 (mod d); the result
// has size d and sums to 1 mod d.
std::vector<std::uint32_t> choose_j_set(std::uint32_t d);

// Requires d >= 2, N >= 2^d p_d (else ThresholdNotMet), table.limit >= N.
ConstructionCertificate build_certificate(std::uint32_t d, std::uint64_t N,
                                          const PrimeTable& table);

struct VerifyOutcome {
  bool ok = false;
  std::string failure;                  // empty when ok
  std::vector<std::uint64_t> witness;   // zero-sum labels when that is the failure
};

// Structural invariants plus product-freeness (eliminate, then find_zero_sum
// on the residual).  Sets cert.verified.
VerifyOutcome verify_certificate(ConstructionCertificate& cert, const PrimeTable& table,
                                 std::uint64_t closure_cap = kDefaultClosureCap);

// Canonical JSON: fixed key order, sorted arrays.
nlohmann::ordered_json certificate_to_json(const ConstructionCertificate& cert);
ConstructionCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace powfree
