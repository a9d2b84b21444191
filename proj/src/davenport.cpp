#include "powfree/davenport.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <future>
#include <numeric>

namespace powfree {

namespace {

constexpr std::uint64_t kMaxOrderForExact = 4096;
constexpr std::uint64_t kMaxDepthForExact = 32;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > (static_cast<unsigned __int128>(1) << 62))
    throw InvalidArgument("group order too large");
  return static_cast<std::uint64_t>(p);
}

}  // namespace

GroupSpec GroupSpec::parse(std::string_view text) {
  GroupSpec g;
  std::size_t pos = 0;
  auto read_int = [&]() -> std::uint64_t {
    std::size_t start = pos;
    std::uint64_t v = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      v = v * 10 + (text[pos] - '0');
      if (v > 1'000'000'000ull) throw InvalidArgument("component too large in group spec");
      ++pos;
    }
    if (pos == start) throw InvalidArgument("malformed group spec: '" + std::string(text) + "'");
    return v;
  };

  while (true) {
    std::uint64_t n = read_int();
    std::uint64_t rep = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      rep = read_int();
      if (rep == 0 || rep > 64) throw InvalidArgument("bad repetition in group spec");
    }
    if (n < 2) throw InvalidArgument("cyclic orders must be >= 2");
    for (std::uint64_t i = 0; i < rep; ++i) g.components.push_back(n);
    if (pos == text.size()) break;
    if (text[pos] != ',') throw InvalidArgument("malformed group spec: '" + std::string(text) + "'");
    ++pos;
  }
  std::sort(g.components.begin(), g.components.end());
  return g;
}

GroupSpec GroupSpec::power(std::uint64_t n, std::uint32_t r) {
  if (n < 2 || r == 0) throw InvalidArgument("Z_n^r requires n >= 2, r >= 1");
  GroupSpec g;
  g.components.assign(r, n);
  return g;
}

std::uint64_t GroupSpec::order() const {
  if (components.empty()) throw InvalidArgument("empty group spec");
  std::uint64_t o = 1;
  for (std::uint64_t c : components) o = checked_mul(o, c);
  return o;
}

std::uint64_t GroupSpec::exponent() const {
  if (components.empty()) throw InvalidArgument("empty group spec");
  std::uint64_t e = 1;
  for (std::uint64_t c : components) e = checked_mul(e / std::gcd(e, c), c);
  return e;
}

bool GroupSpec::is_p_group(std::uint64_t* prime_out) const {
  if (components.empty()) return false;
  // smallest prime factor of the smallest component
  std::uint64_t n = components.front();
  std::uint64_t p = 0;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      p = q;
      break;
    }
  if (p == 0) p = n;
  for (std::uint64_t c : components) {
    while (c % p == 0) c /= p;
    if (c != 1) return false;
  }
  if (prime_out) *prime_out = p;
  return true;
}

std::string GroupSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < components.size();) {
    std::size_t j = i;
    while (j < components.size() && components[j] == components[i]) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(components[i]);
    if (j - i > 1) out += '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::uint64_t olson_davenport(const GroupSpec& g) {
  if (!g.is_p_group())
    throw NotApplicable("Olson's formula applies to p-groups only; " + g.to_string() +
                        " is not one");
  std::uint64_t d = 1;
  for (std::uint64_t c : g.components) d += c - 1;
  return d;
}

StarBound davenport_upper_bound(const GroupSpec& g) {
  const std::uint64_t exp = g.exponent();
  // ln(|G| / exp) computed as a log sum to dodge overflow on the order
  double log_ratio = -std::log(static_cast<double>(exp));
  for (std::uint64_t c : g.components) log_ratio += std::log(static_cast<double>(c));
  double real = static_cast<double>(exp) * (1.0 + log_ratio);
  // nudge before flooring so exact-integer bounds survive rounding noise
  return StarBound{static_cast<std::uint64_t>(real + 1e-9), real};
}

namespace {

// Dense group arithmetic for the exhaustive search: elements are mixed-radix
// indices 0 .. order-1.
struct DenseGroup {
  std::uint64_t order;
  std::vector<std::uint64_t> comps;
  std::vector<std::vector<std::uint32_t>> digits;  // digits[a][j]
  std::vector<std::uint32_t> neg;                  // additive inverse

  explicit DenseGroup(const GroupSpec& g) : order(g.order()), comps(g.components) {
    const std::size_t r = comps.size();
    digits.assign(order, std::vector<std::uint32_t>(r));
    for (std::uint64_t a = 0; a < order; ++a) {
      std::uint64_t rest = a;
      for (std::size_t j = 0; j < r; ++j) {
        digits[a][j] = static_cast<std::uint32_t>(rest % comps[j]);
        rest /= comps[j];
      }
    }
    neg.assign(order, 0);
    for (std::uint64_t a = 0; a < order; ++a) {
      std::uint64_t idx = 0, stride = 1;
      for (std::size_t j = 0; j < r; ++j) {
        std::uint32_t da = digits[a][j];
        idx += stride * ((comps[j] - da) % comps[j]);
        stride *= comps[j];
      }
      neg[a] = static_cast<std::uint32_t>(idx);
    }
  }

  std::uint32_t addl(std::uint32_t a, std::uint32_t b) const {
    std::uint64_t idx = 0, stride = 1;
    for (std::size_t j = 0; j < comps.size(); ++j) {
      idx += stride * ((digits[a][j] + digits[b][j]) % comps[j]);
      stride *= comps[j];
    }
    return static_cast<std::uint32_t>(idx);
  }
};

struct Bitset {
  std::vector<std::uint64_t> words;
  explicit Bitset(std::uint64_t bits) : words((bits + 63) / 64, 0) {}
  bool test(std::uint64_t i) const { return (words[i >> 6] >> (i & 63)) & 1; }
  void set(std::uint64_t i) { words[i >> 6] |= 1ull << (i & 63); }
};

struct ExactSearch {
  const DenseGroup& grp;
  std::uint64_t budget;
  std::atomic<std::uint64_t>* shared_nodes;
  std::uint64_t nodes = 0;
  std::uint64_t best = 0;

  // DFS over non-decreasing sequences of non-zero elements.  R is the set of
  // reachable subset sums; a sequence dies as soon as 0 enters R.  Capacity
  // prune: every zero-sum-free extension adds at least one new sum (if g is
  // already in R and R+g stayed inside R, then kg would lie in R for all k,
  // putting ord(g)*g = 0 into R), so at most order-1-|R| elements can follow.
  void dfs(std::uint32_t start, const Bitset& reach, std::uint64_t reach_size,
           std::uint64_t depth) {
    ++nodes;
    if (shared_nodes && shared_nodes->fetch_add(1) + 1 > budget)
      throw BudgetExceeded("Davenport search budget exhausted", budget, best + 1, 0);
    best = std::max(best, depth);
    if (depth + (grp.order - 1 - reach_size) <= best) return;

    for (std::uint32_t g = start; g < grp.order; ++g) {
      if (reach.test(grp.neg[g])) continue;  // adding g completes a zero sum
      Bitset next = reach;
      std::uint64_t next_size = reach_size;
      if (!next.test(g)) {
        next.set(g);
        ++next_size;
      }
      for (std::uint64_t w = 0; w < reach.words.size(); ++w) {
        std::uint64_t bits = reach.words[w];
        while (bits) {
          std::uint32_t s = static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits));
          bits &= bits - 1;
          std::uint32_t t = grp.addl(s, g);
          if (!next.test(t)) {
            next.set(t);
            ++next_size;
          }
        }
      }
      dfs(g, next, next_size, depth + 1);
    }
  }
};

}  // namespace

DavenportSearchResult davenport_exact(const GroupSpec& g, const DavenportSearchOptions& opts) {
  const std::uint64_t order = g.order();
  if (order > kMaxOrderForExact)
    throw InvalidArgument("exact Davenport search is guarded to |G| <= " +
                          std::to_string(kMaxOrderForExact));
  if (davenport_upper_bound(g).floored > kMaxDepthForExact + 1)
    throw InvalidArgument("exact Davenport search is guarded to expected depth <= " +
                          std::to_string(kMaxDepthForExact));

  DenseGroup grp(g);
  std::atomic<std::uint64_t> shared_nodes{0};
  const std::uint64_t star = davenport_upper_bound(g).floored;

  auto run_from = [&](std::uint32_t first, std::uint64_t seed_best) {
    ExactSearch search{grp, opts.node_budget, &shared_nodes};
    search.best = seed_best;
    Bitset reach(order);
    reach.set(first);
    try {
      search.dfs(first, reach, 1, 1);
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded(e.what(), opts.node_budget, e.best_value, star);
    }
    return std::pair{search.best, search.nodes};
  };

  std::uint64_t best = 0, nodes = 0;

  // First element 1 alone: for the common cyclic cases this finds the true
  // maximum immediately and makes a strong deterministic baseline for the
  // remaining branches.
  if (order > 1) {
    auto [b, n] = run_from(1, 0);
    best = b;
    nodes += n;
  }

  const unsigned threads = std::max(1u, opts.threads);
  if (threads == 1) {
    for (std::uint32_t first = 2; first < order; ++first) {
      auto [b, n] = run_from(first, best);
      best = std::max(best, b);
      nodes += n;
    }
  } else {
    // Branches stay independent (each seeded only with the deterministic
    // baseline), so value and node totals do not depend on scheduling.
    std::atomic<std::uint32_t> next{2};
    std::vector<std::future<std::pair<std::uint64_t, std::uint64_t>>> futs;
    for (unsigned t = 0; t < threads; ++t) {
      futs.push_back(std::async(std::launch::async, [&]() {
        std::uint64_t local_best = 0, local_nodes = 0;
        for (std::uint32_t first; (first = next.fetch_add(1)) < order;) {
          auto [b, n] = run_from(first, best);
          local_best = std::max(local_best, b);
          local_nodes += n;
        }
        return std::pair{local_best, local_nodes};
      }));
    }
    for (auto& f : futs) {
      auto [b, n] = f.get();
      best = std::max(best, b);
      nodes += n;
    }
  }

  return DavenportSearchResult{best + 1, best, nodes};
}

}  // namespace powfree
