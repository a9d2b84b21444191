#include "powfree/expvec.hpp"

#include <algorithm>
#include <unordered_map>

namespace powfree {

std::size_t VectorHash::operator()(const ExponentVector& v) const {
  // FNV-1a over (modulus, entries)
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  mix(v.modulus);
  for (auto [idx, res] : v.entries) {
    mix(idx);
    mix(res);
  }
  return static_cast<std::size_t>(h);
}

ExponentVector to_vector(std::uint64_t n, std::uint32_t d, const PrimeTable& table) {
  if (d < 2) throw InvalidArgument("modulus d must be >= 2");
  ExponentVector v;
  v.modulus = d;
  for (auto [p, e] : table.factorize(n).factors) {
    std::uint32_t r = e % d;
    if (r != 0) v.entries.emplace_back(static_cast<std::uint32_t>(table.prime_index(p)), r);
  }
  return v;
}

ExponentVector add(const ExponentVector& u, const ExponentVector& v) {
  if (u.modulus != v.modulus) throw InvalidArgument("modulus mismatch in vector addition");
  const std::uint32_t d = u.modulus;
  ExponentVector out;
  out.modulus = d;
  out.entries.reserve(u.entries.size() + v.entries.size());
  std::size_t i = 0, j = 0;
  while (i < u.entries.size() && j < v.entries.size()) {
    auto [iu, ru] = u.entries[i];
    auto [iv, rv] = v.entries[j];
    if (iu < iv) {
      out.entries.emplace_back(iu, ru);
      ++i;
    } else if (iv < iu) {
      out.entries.emplace_back(iv, rv);
      ++j;
    } else {
      std::uint32_t r = (ru + rv) % d;
      if (r != 0) out.entries.emplace_back(iu, r);
      ++i;
      ++j;
    }
  }
  for (; i < u.entries.size(); ++i) out.entries.push_back(u.entries[i]);
  for (; j < v.entries.size(); ++j) out.entries.push_back(v.entries[j]);
  return out;
}

ExponentVector negate(const ExponentVector& v) {
  ExponentVector out;
  out.modulus = v.modulus;
  out.entries.reserve(v.entries.size());
  for (auto [idx, res] : v.entries) out.entries.emplace_back(idx, v.modulus - res);
  return out;
}

VectorMultiset make_multiset(std::span<const std::uint64_t> labels, std::uint32_t d,
                             const PrimeTable& table) {
  VectorMultiset ms;
  ms.modulus = d;
  ms.items.reserve(labels.size());
  for (std::uint64_t n : labels) ms.items.emplace_back(n, to_vector(n, d, table));
  std::vector<std::uint64_t> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("multiset labels must be pairwise distinct");
  return ms;
}

namespace {

// Incremental reachable-sum set shared by closure and zero-sum search.
// sums are stored in insertion order; parents allow witness reconstruction.
struct Closure {
  std::vector<ExponentVector> slots;
  std::vector<std::pair<std::uint32_t, std::int64_t>> parent;  // (item pos, prev slot or -1)
  std::unordered_map<ExponentVector, std::uint64_t, VectorHash> index;

  bool insert(ExponentVector s, std::uint32_t item_pos, std::int64_t prev, std::uint64_t cap) {
    if (index.contains(s)) return false;
    if (slots.size() >= cap)
      throw ResourceLimit("subset-sum closure exceeded the cap of " + std::to_string(cap) +
                              " distinct sums",
                          cap);
    index.emplace(s, slots.size());
    slots.push_back(std::move(s));
    parent.emplace_back(item_pos, prev);
    return true;
  }
};

std::vector<std::uint32_t> label_order(const VectorMultiset& ms) {
  std::vector<std::uint32_t> order(ms.items.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return ms.items[a].first < ms.items[b].first;
  });
  return order;
}

}  // namespace

std::vector<ExponentVector> subset_sum_closure(const VectorMultiset& ms, std::uint64_t cap) {
  Closure c;
  auto order = label_order(ms);
  for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
    const ExponentVector& v = ms.items[order[pos]].second;
    std::size_t existing = c.slots.size();
    c.insert(v, pos, -1, cap);
    for (std::size_t j = 0; j < existing; ++j) c.insert(add(c.slots[j], v), pos, j, cap);
  }
  std::vector<ExponentVector> out = c.slots;
  std::sort(out.begin(), out.end());
  return out;
}

ZeroSumReport find_zero_sum(const VectorMultiset& ms, std::uint64_t cap) {
  Closure c;
  auto order = label_order(ms);

  auto reconstruct = [&](std::uint64_t slot) {
    ZeroSumReport report;
    report.has_zero_sum = true;
    std::int64_t cur = static_cast<std::int64_t>(slot);
    while (cur >= 0) {
      auto [pos, prev] = c.parent[cur];
      report.witness.push_back(ms.items[order[pos]].first);
      cur = prev;
    }
    std::sort(report.witness.begin(), report.witness.end());
    return report;
  };

  for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
    const ExponentVector& v = ms.items[order[pos]].second;
    std::size_t existing = c.slots.size();
    if (c.insert(v, pos, -1, cap) && c.slots.back().is_zero())
      return reconstruct(c.slots.size() - 1);
    for (std::size_t j = 0; j < existing; ++j) {
      if (c.insert(add(c.slots[j], v), pos, static_cast<std::int64_t>(j), cap) &&
          c.slots.back().is_zero())
        return reconstruct(c.slots.size() - 1);
    }
  }
  return {};
}

EliminationResult eliminate(const VectorMultiset& ms) {
  const std::uint32_t d = ms.modulus;
  const std::size_t n = ms.items.size();
  std::vector<bool> alive(n, true);
  EliminationResult out;
  out.residual.modulus = d;

  // prime index -> positions of items with a non-zero residue there
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> by_prime;
  for (std::uint32_t i = 0; i < n; ++i)
    for (auto [idx, res] : ms.items[i].second.entries) by_prime[idx].push_back(i);

  std::vector<std::uint32_t> prime_indices;
  prime_indices.reserve(by_prime.size());
  for (auto& [idx, _] : by_prime) prime_indices.push_back(idx);
  std::sort(prime_indices.begin(), prime_indices.end());

  std::vector<char> reach(d);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t idx : prime_indices) {
      auto& touching = by_prime[idx];
      std::erase_if(touching, [&](std::uint32_t i) { return !alive[i]; });
      if (touching.empty()) continue;

      // d-state DP: can some non-empty sub-multiset of the residues at this
      // coordinate sum to 0 mod d?
      std::fill(reach.begin(), reach.end(), 0);
      for (std::uint32_t i : touching) {
        std::uint32_t r = 0;
        for (auto [pidx, res] : ms.items[i].second.entries)
          if (pidx == idx) {
            r = res;
            break;
          }
        // propagate only from states reachable before this residue
        for (std::uint32_t x = 0; x < d; ++x)
          if (reach[x] == 1 && reach[(x + r) % d] == 0) reach[(x + r) % d] = 2;
        for (std::uint32_t x = 0; x < d; ++x)
          if (reach[x] == 2) reach[x] = 1;
        reach[r] = 1;
      }
      if (!reach[0]) {
        for (std::uint32_t i : touching) {
          alive[i] = false;
          out.removed.push_back(ms.items[i].first);
        }
        touching.clear();
        changed = true;
      }
    }
  }

  for (std::uint32_t i = 0; i < n; ++i)
    if (alive[i]) out.residual.items.push_back(ms.items[i]);
  return out;
}

}  // namespace powfree
