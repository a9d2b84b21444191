#include "powfree/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <future>
#include <unordered_set>

#include "powfree/bounds.hpp"
#include "powfree/construction.hpp"

// Search plan.  Candidates are 2..N minus d-th powers (zero vectors are
// singleton witnesses).  The elimination preprocessor splits them into a
// residual pool and a "free" part no zero-sum can touch: every maximum
// solution contains the whole free part, so the branch and bound only runs
// on the pool.  Pool state is the subset-sum closure of the chosen vectors
// with an undo log; adding v is legal iff -v is not already a reachable sum.
// Node bound: chosen + remaining non-smooth + min(remaining smooth, Davenport
// cap on the N/d-smooth class), additionally capped by the global
// band-Davenport bound.

namespace powfree {

namespace {

struct PoolItem {
  std::uint64_t label = 0;
  ExponentVector vec;
  ExponentVector neg;
  bool smooth = false;  // all prime factors <= N/d
};

// Reachable-sum set with stack discipline.
class ClosureState {
 public:
  explicit ClosureState(std::uint64_t cap) : cap_(cap) {}

  bool contains(const ExponentVector& v) const { return sums_.contains(v); }
  std::size_t size() const { return sums_.size(); }

  void push(const ExponentVector& v) {
    // snapshot first: new sums combine v with pre-existing sums only
    std::vector<ExponentVector> batch;
    batch.reserve(sums_.size() + 1);
    for (const auto& s : sums_) batch.push_back(add(s, v));
    batch.push_back(v);
    std::vector<ExponentVector> added;
    for (auto& s : batch) {
      auto [it, inserted] = sums_.insert(std::move(s));
      if (inserted) added.push_back(*it);
    }
    if (sums_.size() > cap_)
      throw ResourceLimit("solver closure exceeded the cap of " + std::to_string(cap_) +
                              " distinct sums",
                          cap_);
    undo_.push_back(std::move(added));
  }

  void pop() {
    for (const auto& s : undo_.back()) sums_.erase(s);
    undo_.pop_back();
  }

 private:
  std::uint64_t cap_;
  std::unordered_set<ExponentVector, VectorHash> sums_;
  std::vector<std::vector<ExponentVector>> undo_;
};

struct PoolSearch {
  const std::vector<PoolItem>& pool;
  const std::vector<std::uint32_t>& suffix_smooth;
  const std::vector<std::uint32_t>& suffix_total;
  std::uint64_t smooth_budget;  // Davenport cap minus smooth count outside the pool search
  std::uint64_t hard_cap;       // global-bound cap on pool picks
  std::uint64_t node_budget;
  std::atomic<std::uint64_t>* shared_nodes;

  ClosureState closure;
  std::vector<std::uint32_t> chosen;
  std::uint64_t smooth_used = 0;
  std::uint64_t nodes = 0;
  std::uint64_t best = 0;
  std::vector<std::uint32_t> best_set;

  PoolSearch(const std::vector<PoolItem>& p, const std::vector<std::uint32_t>& ss,
             const std::vector<std::uint32_t>& st, std::uint64_t sb, std::uint64_t hc,
             std::uint64_t budget, std::atomic<std::uint64_t>* shared, std::uint64_t cap)
      : pool(p),
        suffix_smooth(ss),
        suffix_total(st),
        smooth_budget(sb),
        hard_cap(hc),
        node_budget(budget),
        shared_nodes(shared),
        closure(cap) {}

  void dfs(std::uint32_t idx) {
    ++nodes;
    if (shared_nodes && shared_nodes->fetch_add(1) + 1 > node_budget)
      throw BudgetExceeded("solver node budget exhausted", node_budget, 0, 0);
    if (chosen.size() > best) {
      best = chosen.size();
      best_set = chosen;
    }
    if (idx == pool.size()) return;

    const std::uint64_t rem_smooth = suffix_smooth[idx];
    const std::uint64_t rem_other = suffix_total[idx] - rem_smooth;
    std::uint64_t ub = chosen.size() + rem_other +
                       std::min<std::uint64_t>(rem_smooth, smooth_budget - smooth_used);
    ub = std::min(ub, hard_cap);
    if (ub <= best) return;

    const PoolItem& item = pool[idx];
    if (!closure.contains(item.neg)) {
      closure.push(item.vec);
      chosen.push_back(idx);
      smooth_used += item.smooth;
      dfs(idx + 1);
      smooth_used -= item.smooth;
      chosen.pop_back();
      closure.pop();
    }
    dfs(idx + 1);
  }
};

}  // namespace

SolveResult solve(std::uint32_t d, std::uint64_t N, const PrimeTable& table,
                  const SolveOptions& opts) {
  if (d < 2) throw InvalidArgument("d must be >= 2");
  if (N < 1) throw InvalidArgument("N must be >= 1");
  if (table.limit() < N) throw OutOfRange("table too small for N");
  if (!opts.override_guard) {
    const std::uint64_t cap = d <= 3 ? 60 : 40;
    if (N > cap)
      throw InvalidArgument("desk-scale guard: N <= " + std::to_string(cap) + " for d = " +
                            std::to_string(d) + " (override to push further)");
  }

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult res;
  res.d = d;
  res.N = N;

  // candidates: 2..N with non-zero exponent vector
  VectorMultiset candidates;
  candidates.modulus = d;
  for (std::uint64_t n = 2; n <= N; ++n) {
    ExponentVector v = to_vector(n, d, table);
    if (!v.is_zero()) candidates.items.emplace_back(n, std::move(v));
  }

  // elimination preprocessor: removed elements can join any solution
  EliminationResult elim = eliminate(candidates);
  std::vector<std::uint64_t> free_part = std::move(elim.removed);
  std::sort(free_part.begin(), free_part.end());

  const std::uint64_t smooth_limit = N / d;
  const std::uint64_t rank = table.pi(smooth_limit);
  const std::uint64_t dav_cap = davenport_of_power(d, rank).value - 1;

  std::uint64_t free_smooth = 0;
  for (std::uint64_t n : free_part)
    if (table.largest_prime_factor(n) <= smooth_limit) ++free_smooth;

  std::vector<PoolItem> pool;
  pool.reserve(elim.residual.items.size());
  for (auto& [label, vec] : elim.residual.items) {
    PoolItem item;
    item.label = label;
    item.neg = negate(vec);
    item.vec = std::move(vec);
    item.smooth = table.largest_prime_factor(label) <= smooth_limit;
    pool.push_back(std::move(item));
  }
  // branch order: descending largest prime factor, then ascending value
  std::vector<std::uint64_t> lpf(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) lpf[i] = table.largest_prime_factor(pool[i].label);
  std::vector<std::uint32_t> order(pool.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (lpf[a] != lpf[b]) return lpf[a] > lpf[b];
    return pool[a].label < pool[b].label;
  });
  std::vector<PoolItem> sorted_pool;
  sorted_pool.reserve(pool.size());
  for (std::uint32_t i : order) sorted_pool.push_back(std::move(pool[i]));
  pool = std::move(sorted_pool);

  std::vector<std::uint32_t> suffix_smooth(pool.size() + 1, 0);
  std::vector<std::uint32_t> suffix_total(pool.size() + 1, 0);
  for (std::size_t i = pool.size(); i-- > 0;) {
    suffix_smooth[i] = suffix_smooth[i + 1] + (pool[i].smooth ? 1 : 0);
    suffix_total[i] = suffix_total[i + 1] + 1;
  }

  const std::uint64_t global_upper = band_davenport_upper(d, N, table);
  const std::uint64_t smooth_budget = dav_cap - free_smooth;  // free part is itself zero-sum free
  const std::uint64_t pool_hard_cap =
      global_upper > free_part.size() ? global_upper - free_part.size() : 0;

  // incumbent: the free part alone, improved by the construction when valid
  std::uint64_t best_pool = 0;
  std::vector<std::uint64_t> best_pool_labels;
  if (threshold_met(d, N, table)) {
    ConstructionCertificate cert = build_certificate(d, N, table);
    VectorMultiset cm = make_multiset(cert.full_set, d, table);
    EliminationResult ce = eliminate(cm);
    if (!find_zero_sum(ce.residual, opts.closure_cap).has_zero_sum) {
      // pool part of (construction + free part)
      std::vector<std::uint64_t> seed;
      for (const PoolItem& item : pool)
        if (std::binary_search(cert.full_set.begin(), cert.full_set.end(), item.label))
          seed.push_back(item.label);
      best_pool = seed.size();
      best_pool_labels = std::move(seed);
    }
  }

  const std::uint64_t root_ub =
      free_part.size() +
      std::min<std::uint64_t>(
          suffix_total[0] - suffix_smooth[0] + std::min<std::uint64_t>(suffix_smooth[0], smooth_budget),
          pool_hard_cap);
  res.upper_bound_used = std::min(global_upper, root_ub);

  const unsigned threads = std::max(1u, opts.threads);
  std::atomic<std::uint64_t> shared_nodes{0};

  auto label_set = [&](const std::vector<std::uint32_t>& idxs) {
    std::vector<std::uint64_t> out;
    out.reserve(idxs.size());
    for (std::uint32_t i : idxs) out.push_back(pool[i].label);
    return out;
  };

  if (threads == 1 || pool.size() < 8) {
    PoolSearch search(pool, suffix_smooth, suffix_total, smooth_budget, pool_hard_cap,
                      opts.node_budget, &shared_nodes, opts.closure_cap);
    search.best = best_pool;
    try {
      search.dfs(0);
    } catch (const BudgetExceeded&) {
      std::uint64_t best_val = free_part.size() + std::max(best_pool, search.best);
      throw BudgetExceeded("solver node budget exhausted at d=" + std::to_string(d) +
                               ", N=" + std::to_string(N),
                           opts.node_budget, best_val, res.upper_bound_used);
    }
    res.nodes_explored = search.nodes;
    if (search.best > best_pool || best_pool_labels.empty()) {
      best_pool = search.best;
      best_pool_labels = label_set(search.best_set);
    }
  } else {
    // Tasks are include/exclude assignments of the first few pool items.
    // They share nothing but the node counter, so value, witness and node
    // totals are schedule-independent.
    const std::uint32_t depth = std::min<std::uint32_t>(
        static_cast<std::uint32_t>(pool.size()),
        std::max<std::uint32_t>(3, std::bit_width(static_cast<std::uint32_t>(threads)) + 2));
    std::vector<std::vector<std::uint32_t>> prefixes;  // chosen indices per task
    std::vector<std::uint32_t> cur;
    std::uint64_t prefix_nodes = 0;
    {
      ClosureState c(opts.closure_cap);
      auto enumerate = [&](auto&& self, std::uint32_t idx) -> void {
        ++prefix_nodes;
        if (idx == depth) {
          prefixes.push_back(cur);
          return;
        }
        if (!c.contains(pool[idx].neg)) {
          c.push(pool[idx].vec);
          cur.push_back(idx);
          self(self, idx + 1);
          cur.pop_back();
          c.pop();
        }
        self(self, idx + 1);
      };
      enumerate(enumerate, 0);
    }

    struct TaskOut {
      std::uint64_t best = 0;
      std::vector<std::uint32_t> best_set;
      std::uint64_t nodes = 0;
    };
    std::vector<TaskOut> outs(prefixes.size());

    auto run_task = [&](std::size_t task, std::uint64_t seed_best) {
      PoolSearch search(pool, suffix_smooth, suffix_total, smooth_budget, pool_hard_cap,
                        opts.node_budget, &shared_nodes, opts.closure_cap);
      search.best = seed_best;
      for (std::uint32_t i : prefixes[task]) {
        search.closure.push(pool[i].vec);
        search.chosen.push_back(i);
        search.smooth_used += pool[i].smooth;
      }
      search.dfs(depth);
      outs[task] = TaskOut{search.best, std::move(search.best_set), search.nodes};
    };

    std::atomic<bool> exhausted{false};
    try {
      // The first task holds the greedy all-include descent; its result is a
      // deterministic baseline that the parallel tasks prune against.
      if (!prefixes.empty()) run_task(0, best_pool);
      const std::uint64_t baseline = std::max(best_pool, outs.empty() ? 0 : outs[0].best);

      std::atomic<std::size_t> next{1};
      std::vector<std::future<void>> futs;
      for (unsigned t = 0; t < threads; ++t) {
        futs.push_back(std::async(std::launch::async, [&]() {
          for (std::size_t task; (task = next.fetch_add(1)) < prefixes.size();) {
            try {
              run_task(task, baseline);
            } catch (const BudgetExceeded&) {
              exhausted = true;
              return;
            }
          }
        }));
      }
      for (auto& f : futs) f.get();
    } catch (const BudgetExceeded&) {
      exhausted = true;
    }
    if (exhausted)
      throw BudgetExceeded("solver node budget exhausted at d=" + std::to_string(d) +
                               ", N=" + std::to_string(N),
                           opts.node_budget, free_part.size() + best_pool, res.upper_bound_used);
    res.nodes_explored = prefix_nodes;
    for (std::size_t task = 0; task < outs.size(); ++task) {
      res.nodes_explored += outs[task].nodes;
      if (outs[task].best > best_pool) {
        best_pool = outs[task].best;
        best_pool_labels = label_set(outs[task].best_set);
      }
    }
  }

  res.value = free_part.size() + best_pool;
  res.witness = std::move(free_part);
  res.witness.insert(res.witness.end(), best_pool_labels.begin(), best_pool_labels.end());
  std::sort(res.witness.begin(), res.witness.end());
  res.elapsed = std::chrono::steady_clock::now() - t0;
  return res;
}

std::vector<RangeEntry> solve_range(std::uint32_t d, std::uint64_t n_lo, std::uint64_t n_hi,
                                    const PrimeTable& table, const SolveOptions& opts) {
  if (d < 2) throw InvalidArgument("d must be >= 2");
  if (n_lo > n_hi || n_lo < 1) throw InvalidArgument("bad range");
  std::vector<RangeEntry> out;
  for (std::uint64_t N = n_lo; N <= n_hi; ++N) {
    RangeEntry entry;
    entry.N = N;
    try {
      entry.result = solve(d, N, table, opts);
    } catch (const BudgetExceeded& e) {
      entry.error = e.what();
      entry.best_value = e.best_value;
      entry.upper_bound = e.upper_bound;
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace powfree
