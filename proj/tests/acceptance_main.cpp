// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// criterion fails.  Pass --cli <path> to exercise the command-line binary
// where a criterion calls for it.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "powfree/bounds.hpp"
#include "powfree/construction.hpp"
#include "powfree/davenport.hpp"
#include "powfree/solver.hpp"

using namespace powfree;

namespace {

std::string g_cli;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// criterion 1: rho_2(N) == pi(N) on [2, 30], through the CLI when available
Check criterion1() {
  Check c;
  auto table = PrimeTable::build(30);
  std::vector<std::uint64_t> values;
  if (!g_cli.empty()) {
    std::string cmd = g_cli + " rho -d 2 -N 2..30 --format csv 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    c.expect(pipe != nullptr, "cannot run CLI");
    if (!pipe) return c;
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
    int status = pclose(pipe);
    c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "CLI exited non-zero");
    std::istringstream lines(out);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
      unsigned d = 0, n = 0, v = 0;
      if (std::sscanf(line.c_str(), "%u,%u,%u", &d, &n, &v) == 3) values.push_back(v);
    }
  } else {
    for (auto& e : solve_range(2, 2, 30, PrimeTable::build(30)))
      values.push_back(e.result ? e.result->value : 0);
  }
  c.expect(values.size() == 29, "expected 29 rows");
  for (std::size_t i = 0; i < values.size() && c.ok; ++i) {
    std::uint64_t N = i + 2;
    c.expect(values[i] == table.pi(N),
             "rho_2(" + std::to_string(N) + ") = " + std::to_string(values[i]) +
                 " != pi = " + std::to_string(table.pi(N)));
  }
  return c;
}

// criterion 2: rho_3(14) = 9 and rho_3(N) = pi(N) + pi(N/2) on [15, 21]
Check criterion2() {
  Check c;
  auto table = PrimeTable::build(64);
  c.expect(solve(3, 14, table).value == 9, "rho_3(14) != 9");
  for (std::uint64_t N = 15; N <= 21; ++N) {
    std::uint64_t expected = table.pi(N) + table.pi(N / 2);
    std::uint64_t got = solve(3, N, table).value;
    c.expect(got == expected, "rho_3(" + std::to_string(N) + ") = " + std::to_string(got) +
                                  " != " + std::to_string(expected));
  }
  return c;
}

// criterion 3: at N = 14 the main term overshoots by exactly one
Check criterion3() {
  Check c;
  auto table = PrimeTable::build(64);
  std::uint64_t value = solve(3, 14, table).value;
  std::uint64_t mt = main_term(3, 14, table);
  c.expect(value < mt, "rho_3(14) not below the main term");
  c.expect(mt - value == 1, "gap is " + std::to_string(mt - value) + ", expected 1");
  return c;
}

// criterion 4: construct + verify + solve agree above the threshold
Check criterion4() {
  Check c;
  auto table = PrimeTable::build(64);
  for (auto [d, N] : std::initializer_list<std::pair<std::uint32_t, std::uint64_t>>{
           {2, 12}, {2, 40}, {3, 40}, {3, 60}}) {
    std::string tag = "(" + std::to_string(d) + ", " + std::to_string(N) + ")";
    auto cert = build_certificate(d, N, table);
    c.expect(verify_certificate(cert, table).ok, "verify failed at " + tag);
    c.expect(cert.claimed_size == main_term(d, N, table), "size != main term at " + tag);
    c.expect(solve(d, N, table).value == cert.claimed_size, "solver disagrees at " + tag);
  }
  return c;
}

// criterion 5: construction validity for composite d = 6 at N = 832
Check criterion5() {
  Check c;
  auto table = PrimeTable::build(832);
  auto cert = build_certificate(6, 832, table);
  c.expect(verify_certificate(cert, table).ok, "verify failed");
  std::uint64_t expected = 0;
  for (std::uint32_t k = 1; k <= 5; ++k) expected += table.pi(832 / k);
  c.expect(cert.claimed_size == expected, "claimed size != sum of pi(832/k)");
  return c;
}

// criterion 6: exhaustive Davenport values match Olson's formula
Check criterion6() {
  Check c;
  for (const char* spec : {"2", "4", "8", "2^2", "2^3", "2,4", "3", "3^2", "9", "5", "7"}) {
    auto g = GroupSpec::parse(spec);
    std::uint64_t exact = davenport_exact(g).value;
    std::uint64_t olson = olson_davenport(g);
    c.expect(exact == olson, std::string("D(") + spec + ") = " + std::to_string(exact) +
                                 " != olson " + std::to_string(olson));
  }
  return c;
}

// criterion 7: solved values sit under every upper bound and below N
Check criterion7() {
  Check c;
  auto table = PrimeTable::build(64);
  for (std::uint32_t d = 2; d <= 5 && c.ok; ++d) {
    for (std::uint64_t N = 1; N <= 40 && c.ok; ++N) {
      std::uint64_t v = solve(d, N, table).value;
      std::string tag = "(" + std::to_string(d) + ", " + std::to_string(N) + ")";
      c.expect(v <= band_davenport_upper(d, N, table), "value above the band-Davenport bound at " + tag);
      c.expect(v <= sqrt_davenport_upper(d, N, table), "value above the sqrt-cutoff bound at " + tag);
      c.expect(v <= log_form_upper_derived(d, N, table).floored,
               "value above the derived log-form bound at " + tag);
      c.expect(v < N, "value not below N at " + tag);
    }
  }
  return c;
}

// criterion 8: the pi/omega identity and lower bound across 2 <= d <= 500
Check criterion8() {
  Check c;
  auto table = PrimeTable::build(998);
  for (std::uint32_t d = 2; d <= 500 && c.ok; ++d) {
    auto [lhs, rhs] = pi_omega_identity(d, table);
    c.expect(lhs == rhs, "identity fails at d = " + std::to_string(d));
    if (d >= 4)
      c.expect(pi_sum_lower_bound(d, table), "inequality fails at d = " + std::to_string(d));
  }
  return c;
}

// criterion 9: 200 random (d, N) against naive power-set enumeration
Check criterion9() {
  Check c;
  auto table = PrimeTable::build(16);
  std::mt19937_64 rng(1723);
  std::uniform_int_distribution<std::uint32_t> d_dist(2, 3);
  std::uniform_int_distribution<std::uint64_t> n_dist(2, 14);
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::uint64_t> cache;
  for (int i = 0; i < 200 && c.ok; ++i) {
    std::uint32_t d = d_dist(rng);
    std::uint64_t N = n_dist(rng);
    auto key = std::make_pair(d, N);
    if (!cache.contains(key)) cache[key] = oracle::naive_rho(d, N);
    std::uint64_t got = solve(d, N, table).value;
    c.expect(got == cache[key], "solve(" + std::to_string(d) + ", " + std::to_string(N) +
                                    ") = " + std::to_string(got) + " != naive " +
                                    std::to_string(cache[key]));
  }
  return c;
}

// criterion 10: zero-sum engine vs exhaustive enumeration, 500 multisets
Check criterion10() {
  Check c;
  auto table = PrimeTable::build(100);
  std::mt19937_64 rng(9091);
  std::uniform_int_distribution<std::uint32_t> d_dist(2, 6);
  std::uniform_int_distribution<std::size_t> size_dist(0, 16);
  std::uniform_int_distribution<std::uint64_t> label_dist(1, 100);
  for (int i = 0; i < 500 && c.ok; ++i) {
    std::uint32_t d = d_dist(rng);
    std::size_t size = size_dist(rng);
    std::set<std::uint64_t> labels;
    while (labels.size() < size) labels.insert(label_dist(rng));
    std::vector<std::uint64_t> v(labels.begin(), labels.end());
    auto ms = make_multiset(v, d, table);

    bool expected = oracle::exhaustive_has_zero_sum(ms);
    auto got = find_zero_sum(ms);
    c.expect(got.has_zero_sum == expected, "engine disagrees with enumeration at case " +
                                               std::to_string(i));
    auto elim = eliminate(ms);
    c.expect(find_zero_sum(elim.residual).has_zero_sum == expected,
             "eliminate changed the verdict at case " + std::to_string(i));
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];

  struct Entry {
    const char* name;
    std::function<Check()> fn;
  };
  const Entry entries[] = {
      {"1. rho_2(N) = pi(N) on [2, 30] via the CLI", criterion1},
      {"2. rho_3(14) = 9; rho_3(N) = pi(N) + pi(N/2) on [15, 21]", criterion2},
      {"3. rho_3(14) undershoots the main term by exactly 1", criterion3},
      {"4. threshold closure at (2,12), (2,40), (3,40), (3,60)", criterion4},
      {"5. composite-d construction verifies at d=6, N=832", criterion5},
      {"6. exhaustive Davenport equals Olson on 11 p-groups", criterion6},
      {"7. bound sandwich for d <= 5, N <= 40", criterion7},
      {"8. pi/omega identity and lower bound up to d = 500", criterion8},
      {"9. 200 random solves match naive enumeration", criterion9},
      {"10. 500 random multisets: zero-sum engine vs enumeration", criterion10},
  };

  int failures = 0;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Check c = e.fn();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.ok) {
      std::printf("PASS  %-58s (%.2fs)\n", e.name, secs);
    } else {
      std::printf("FAIL  %-58s (%.2fs): %s\n", e.name, secs, c.detail.c_str());
      ++failures;
    }
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
