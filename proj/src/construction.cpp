#include "powfree/construction.hpp"

#include <algorithm>

#include "powfree/bounds.hpp"

namespace powfree {

std::vector<std::uint32_t> choose_j_set(std::uint32_t d) {
  if (d < 2) throw InvalidArgument("d must be >= 2");
  // sum 0..d = d(d+1)/2; drop the smallest m in [0, d] making the rest == 1 (mod d)
  const std::uint64_t total = static_cast<std::uint64_t>(d) * (d + 1) / 2;
  const std::uint32_t m = static_cast<std::uint32_t>((total + d - 1) % d);  // total - 1 mod d
  std::vector<std::uint32_t> j;
  j.reserve(d);
  for (std::uint32_t t = 0; t <= d; ++t)
    if (t != m) j.push_back(t);
  return j;
}

ConstructionCertificate build_certificate(std::uint32_t d, std::uint64_t N,
                                          const PrimeTable& table) {
  if (d < 2) throw InvalidArgument("d must be >= 2");
  if (d >= 64) throw InvalidArgument("2^d p_d overflows 64 bits; no admissible N exists");
  if (table.limit() < N) throw OutOfRange("table too small for N");
  if (table.prime_count() < d) throw OutOfRange("table too small to hold p_d");
  const std::uint64_t threshold = construction_threshold(d, table);
  if (N < threshold)
    throw ThresholdNotMet("construction requires N >= 2^d p_d; minimum N is " +
                              std::to_string(threshold),
                          threshold);

  ConstructionCertificate cert;
  cert.d = d;
  cert.N = N;
  cert.j_set = choose_j_set(d);

  const std::uint64_t pd = table.nth_prime(d);
  auto primes = table.primes();

  // bands k <= d-2: all k multiples of each prime in (N/(k+1), N/k]
  for (std::uint32_t k = 1; k + 1 <= d - 1; ++k) {
    BandSet band;
    band.k = k;
    // p (k+1) > N and p k <= N, evaluated in integers
    const std::uint64_t lo = N / (k + 1);  // primes strictly above this
    const std::uint64_t hi = N / k;
    for (std::uint64_t pi_idx = table.pi(lo); pi_idx < table.pi(hi); ++pi_idx) {
      const std::uint64_t p = primes[pi_idx];
      for (std::uint64_t i = 1; i <= k; ++i) band.elements.push_back(i * p);
    }
    std::sort(band.elements.begin(), band.elements.end());
    cert.bands.push_back(std::move(band));
  }

  // last band: primes in (p_d, N/(d-1)], all d-1 multiples
  {
    BandSet band;
    band.k = d - 1;
    const std::uint64_t hi = N / (d - 1);
    for (std::uint64_t pi_idx = table.pi(pd); pi_idx < table.pi(hi); ++pi_idx) {
      const std::uint64_t p = primes[pi_idx];
      for (std::uint64_t i = 1; i + 1 <= d; ++i) band.elements.push_back(i * p);
    }
    std::sort(band.elements.begin(), band.elements.end());
    cert.last_band = std::move(band);
  }

  // gadget sets { 2^{j_t} p_s : t = 1..d } for s = 2..d
  for (std::uint32_t s = 2; s <= d; ++s) {
    GadgetSet gs;
    gs.s = s;
    gs.prime = table.nth_prime(s);
    for (std::uint32_t jt : cert.j_set) gs.elements.push_back((std::uint64_t{1} << jt) * gs.prime);
    std::sort(gs.elements.begin(), gs.elements.end());
    cert.gadgets.push_back(std::move(gs));
  }

  for (const auto& b : cert.bands)
    cert.full_set.insert(cert.full_set.end(), b.elements.begin(), b.elements.end());
  cert.full_set.insert(cert.full_set.end(), cert.last_band.elements.begin(),
                       cert.last_band.elements.end());
  for (const auto& g : cert.gadgets)
    cert.full_set.insert(cert.full_set.end(), g.elements.begin(), g.elements.end());
  std::sort(cert.full_set.begin(), cert.full_set.end());

  cert.claimed_size = main_term(d, N, table);
  if (cert.full_set.size() != cert.claimed_size ||
      std::adjacent_find(cert.full_set.begin(), cert.full_set.end()) != cert.full_set.end())
    throw Error("internal: construction parts are not disjoint or miscounted");
  return cert;
}

namespace {

bool valid_j_set(const ConstructionCertificate& cert) {
  if (cert.j_set.size() != cert.d) return false;
  std::uint64_t sum = 0;
  for (std::size_t t = 0; t < cert.j_set.size(); ++t) {
    if (cert.j_set[t] > cert.d) return false;
    if (t > 0 && cert.j_set[t] <= cert.j_set[t - 1]) return false;
    sum += cert.j_set[t];
  }
  return sum % cert.d == 1;
}

}  // namespace

VerifyOutcome verify_certificate(ConstructionCertificate& cert, const PrimeTable& table,
                                 std::uint64_t closure_cap) {
  cert.verified = false;
  auto fail = [&](std::string why) {
    VerifyOutcome out;
    out.failure = std::move(why);
    return out;
  };

  if (cert.d < 2) return fail("d must be >= 2");
  if (!valid_j_set(cert)) return fail("invalid j set");

  // parts: sizes, ranges, disjointness (union must equal full_set exactly)
  std::vector<std::uint64_t> merged;
  std::uint64_t gadget_max = 0;
  for (const auto& b : cert.bands) merged.insert(merged.end(), b.elements.begin(), b.elements.end());
  merged.insert(merged.end(), cert.last_band.elements.begin(), cert.last_band.elements.end());
  if (cert.gadgets.size() != cert.d - 1) return fail("expected d-1 gadget sets");
  for (const auto& g : cert.gadgets) {
    if (g.elements.size() != cert.d) return fail("gadget B_" + std::to_string(g.prime) +
                                                 " must have d elements");
    for (std::uint64_t e : g.elements) gadget_max = std::max(gadget_max, e);
    merged.insert(merged.end(), g.elements.begin(), g.elements.end());
  }
  std::sort(merged.begin(), merged.end());
  if (std::adjacent_find(merged.begin(), merged.end()) != merged.end())
    return fail("parts are not pairwise disjoint");
  if (merged != cert.full_set) return fail("full_set does not match the union of parts");
  for (std::uint64_t e : cert.full_set)
    if (e < 2 || e > cert.N) return fail("element out of [2, N]");

  const std::uint64_t threshold = construction_threshold(cert.d, table);
  if (gadget_max > threshold || threshold > cert.N)
    return fail("threshold violated: need max gadget <= 2^d p_d <= N");

  if (cert.claimed_size != cert.full_set.size())
    return fail("claimed_size differs from actual cardinality");
  if (cert.claimed_size != main_term(cert.d, cert.N, table))
    return fail("claimed_size differs from sum of pi(N/k)");

  // product-freeness: eliminate, then search the residual
  VectorMultiset ms = make_multiset(cert.full_set, cert.d, table);
  EliminationResult elim = eliminate(ms);
  ZeroSumReport zs = find_zero_sum(elim.residual, closure_cap);
  if (zs.has_zero_sum) {
    VerifyOutcome out;
    out.failure = "zero-sum sub-multiset found";
    out.witness = std::move(zs.witness);
    return out;
  }

  cert.verified = true;
  VerifyOutcome out;
  out.ok = true;
  return out;
}

nlohmann::ordered_json certificate_to_json(const ConstructionCertificate& cert) {
  nlohmann::ordered_json j;
  j["d"] = cert.d;
  j["N"] = cert.N;
  j["claimed_size"] = cert.claimed_size;
  j["j_set"] = cert.j_set;
  j["bands"] = nlohmann::ordered_json::array();
  for (const auto& b : cert.bands)
    j["bands"].push_back({{"k", b.k}, {"elements", b.elements}});
  j["last_band"] = {{"k", cert.last_band.k}, {"elements", cert.last_band.elements}};
  j["gadgets"] = nlohmann::ordered_json::array();
  for (const auto& g : cert.gadgets)
    j["gadgets"].push_back({{"s", g.s}, {"prime", g.prime}, {"elements", g.elements}});
  j["full_set"] = cert.full_set;
  j["verified"] = cert.verified;
  return j;
}

ConstructionCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    ConstructionCertificate cert;
    cert.d = j.at("d").get<std::uint32_t>();
    cert.N = j.at("N").get<std::uint64_t>();
    cert.claimed_size = j.at("claimed_size").get<std::uint64_t>();
    cert.j_set = j.at("j_set").get<std::vector<std::uint32_t>>();
    for (const auto& b : j.at("bands")) {
      BandSet band;
      band.k = b.at("k").get<std::uint32_t>();
      band.elements = b.at("elements").get<std::vector<std::uint64_t>>();
      cert.bands.push_back(std::move(band));
    }
    cert.last_band.k = j.at("last_band").at("k").get<std::uint32_t>();
    cert.last_band.elements = j.at("last_band").at("elements").get<std::vector<std::uint64_t>>();
    for (const auto& g : j.at("gadgets")) {
      GadgetSet gs;
      gs.s = g.at("s").get<std::uint32_t>();
      gs.prime = g.at("prime").get<std::uint64_t>();
      gs.elements = g.at("elements").get<std::vector<std::uint64_t>>();
      cert.gadgets.push_back(std::move(gs));
    }
    cert.full_set = j.at("full_set").get<std::vector<std::uint64_t>>();
    cert.verified = j.value("verified", false);
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed certificate JSON: ") + e.what());
  }
}

}  // namespace powfree
