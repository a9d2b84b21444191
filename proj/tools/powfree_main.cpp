// Command-line front end: bound tables, exact solves, construction
// emission/verification, Davenport queries, prime utilities.
//
// Exit codes: 0 ok, 1 a requested verification found a violation,
// 2 usage, 3 capacity, 4 budget, 5 threshold, 6 not-applicable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "powfree/bigint.hpp"
#include "powfree/bounds.hpp"
#include "powfree/construction.hpp"
#include "powfree/davenport.hpp"
#include "powfree/errors.hpp"
#include "powfree/expvec.hpp"
#include "powfree/prime_table.hpp"
#include "powfree/solver.hpp"

using json = nlohmann::ordered_json;
using namespace powfree;

namespace {

// pi cache costs 4 bytes per entry, so this keeps tables within ~400 MB
constexpr std::uint64_t kSieveHardCap = 100'000'000;

struct CommonOpts {
  std::string format;  // per-command default applied at parse time
  std::uint64_t sieve_limit = 0;  // 0 = auto
  std::uint64_t budget = 0;       // 0 = library default
  unsigned threads = 1;
};

// Default sieve limit: max(N, 2^d p_d) while that stays desk scale, and
// always enough to hold p_d.
std::uint64_t default_sieve_limit(std::uint32_t d, std::uint64_t n) {
  double dd = d;
  std::uint64_t pd_bound =
      d < 6 ? 16 : static_cast<std::uint64_t>(dd * (std::log(dd) + std::log(std::log(dd)))) + 16;
  PrimeTable boot = PrimeTable::build(pd_bound);
  while (boot.prime_count() < d) {
    pd_bound *= 2;
    boot = PrimeTable::build(pd_bound);
  }
  const std::uint64_t pd = boot.nth_prime(d);
  std::uint64_t limit = std::max<std::uint64_t>(n, pd);
  if (d < 64) {
    unsigned __int128 threshold = static_cast<unsigned __int128>(pd) << d;
    if (threshold <= 10'000'000)
      limit = std::max(limit, static_cast<std::uint64_t>(threshold));
  }
  return limit;
}

PrimeTable make_table(const CommonOpts& opts, std::uint32_t d, std::uint64_t n) {
  std::uint64_t limit = opts.sieve_limit ? opts.sieve_limit : default_sieve_limit(d, n);
  if (limit > kSieveHardCap)
    throw OutOfRange("sieve limit " + std::to_string(limit) + " exceeds the supported cap " +
                     std::to_string(kSieveHardCap));
  return PrimeTable::build(limit);
}

void parse_n_spec(const std::string& text, std::uint64_t& lo, std::uint64_t& hi) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoull(text);
    } else {
      lo = std::stoull(text.substr(0, dots));
      hi = std::stoull(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw InvalidArgument("bad N specification '" + text + "' (expected N or LO..HI)");
  }
  if (lo < 1 || lo > hi) throw InvalidArgument("bad N range '" + text + "'");
}

json bound_report_json(const BoundReport& r) {
  json j;
  j["d"] = r.d;
  j["N"] = r.N;
  j["main_term"] = r.main_term;
  j["band_davenport_upper"] = r.band_davenport_upper;
  j["sqrt_davenport_upper"] = r.sqrt_davenport_upper;
  j["sqrt_davenport_upper_tight"] = r.sqrt_davenport_upper_tight;
  j["log_form_upper"] = r.log_form.floored;
  j["log_form_real"] = r.log_form.real;
  j["log_form_derived_upper"] = r.log_form_derived.floored;
  j["log_form_derived_real"] = r.log_form_derived.real;
  j["log_form_below_derived"] = r.log_form_below_derived;
  j["is_prime_power_d"] = r.is_prime_power_d;
  j["davenport_exact_formula"] = r.davenport_exact_formula;
  j["threshold"] = r.threshold;
  if (r.exact_value) j["exact_value"] = *r.exact_value;
  return j;
}

int cmd_bounds(std::uint32_t d, std::uint64_t n, const CommonOpts& opts) {
  PrimeTable table = make_table(opts, d, n);
  BoundReport r = bound_report(d, n, table);
  if (opts.format == "json") {
    std::cout << bound_report_json(r).dump(2) << "\n";
  } else if (opts.format == "csv") {
    std::cout << "d,N,main_term,band_davenport_upper,sqrt_davenport_upper,"
                 "sqrt_davenport_upper_tight,log_form_upper,log_form_derived_upper,exact_value\n";
    std::cout << r.d << ',' << r.N << ',' << r.main_term << ',' << r.band_davenport_upper << ','
              << r.sqrt_davenport_upper << ',' << r.sqrt_davenport_upper_tight << ','
              << r.log_form.floored << ',' << r.log_form_derived.floored << ',';
    if (r.exact_value) std::cout << *r.exact_value;
    std::cout << "\n";
  } else {
    std::printf("d = %u, N = %llu\n", r.d, static_cast<unsigned long long>(r.N));
    std::printf("main term            %llu\n", static_cast<unsigned long long>(r.main_term));
    std::printf("band+Davenport upper %llu   [Davenport via %s]\n",
                static_cast<unsigned long long>(r.band_davenport_upper),
                r.davenport_exact_formula ? "Olson" : "star bound (bound of a bound)");
    std::printf("sqrt-cutoff upper    %llu   (tight variant %llu)\n",
                static_cast<unsigned long long>(r.sqrt_davenport_upper),
                static_cast<unsigned long long>(r.sqrt_davenport_upper_tight));
    std::printf("d log d form         %llu   (%.3f)\n",
                static_cast<unsigned long long>(r.log_form.floored), r.log_form.real);
    std::printf("derived log form     %llu   (%.3f)%s\n",
                static_cast<unsigned long long>(r.log_form_derived.floored),
                r.log_form_derived.real,
                r.log_form_below_derived
                    ? "   [compact form sits below the derived one]"
                    : "");
    if (r.exact_value)
      std::printf("exact value          %llu   [prime power d, N >= 2^d p_d = %llu]\n",
                  static_cast<unsigned long long>(*r.exact_value),
                  static_cast<unsigned long long>(r.threshold));
    else
      std::printf("exact value          n/a   [needs prime power d and N >= 2^d p_d]\n");
  }
  return 0;
}

json solve_result_json(const SolveResult& r) {
  json j;
  j["d"] = r.d;
  j["N"] = r.N;
  j["value"] = r.value;
  j["witness"] = r.witness;
  j["nodes"] = r.nodes_explored;
  j["upper_bound_used"] = r.upper_bound_used;
  j["elapsed_ms"] = r.elapsed.count() * 1e3;
  return j;
}

int cmd_rho(std::uint32_t d, const std::string& n_spec, bool force, const CommonOpts& opts) {
  std::uint64_t lo = 0, hi = 0;
  parse_n_spec(n_spec, lo, hi);
  PrimeTable table = make_table(opts, d, hi);
  SolveOptions sopts;
  if (opts.budget) sopts.node_budget = opts.budget;
  sopts.threads = opts.threads;
  sopts.override_guard = force;

  if (lo == hi) {
    SolveResult r = solve(d, lo, table, sopts);  // BudgetExceeded propagates: exit 4
    if (opts.format == "json") {
      std::cout << solve_result_json(r).dump(2) << "\n";
    } else if (opts.format == "csv") {
      std::cout << "d,N,value,nodes,elapsed_ms\n"
                << r.d << ',' << r.N << ',' << r.value << ',' << r.nodes_explored << ','
                << r.elapsed.count() * 1e3 << "\n";
    } else {
      std::printf("rho_%u(%llu) = %llu\n", d, static_cast<unsigned long long>(r.N),
                  static_cast<unsigned long long>(r.value));
      std::printf("witness:");
      for (std::uint64_t x : r.witness) std::printf(" %llu", static_cast<unsigned long long>(x));
      std::printf("\nnodes %llu, upper bound used %llu, %.1f ms\n",
                  static_cast<unsigned long long>(r.nodes_explored),
                  static_cast<unsigned long long>(r.upper_bound_used), r.elapsed.count() * 1e3);
    }
    return 0;
  }

  auto entries = solve_range(d, lo, hi, table, sopts);
  bool any_budget = false;
  if (opts.format == "json") {
    json arr = json::array();
    for (const auto& e : entries) {
      if (e.result) {
        arr.push_back(solve_result_json(*e.result));
      } else {
        any_budget = true;
        arr.push_back({{"N", e.N},
                       {"error", e.error},
                       {"best_value", e.best_value},
                       {"upper_bound", e.upper_bound}});
      }
    }
    std::cout << arr.dump(2) << "\n";
  } else if (opts.format == "csv") {
    std::cout << "d,N,value,nodes,elapsed_ms,error\n";
    for (const auto& e : entries) {
      if (e.result) {
        std::cout << d << ',' << e.N << ',' << e.result->value << ',' << e.result->nodes_explored
                  << ',' << e.result->elapsed.count() * 1e3 << ",\n";
      } else {
        any_budget = true;
        std::cout << d << ',' << e.N << ",,,," << '"' << e.error << '"' << "\n";
      }
    }
  } else {
    std::printf("%8s %8s %10s\n", "N", "value", "nodes");
    for (const auto& e : entries) {
      if (e.result) {
        std::printf("%8llu %8llu %10llu\n", static_cast<unsigned long long>(e.N),
                    static_cast<unsigned long long>(e.result->value),
                    static_cast<unsigned long long>(e.result->nodes_explored));
      } else {
        any_budget = true;
        std::printf("%8llu   budget exhausted, bracket [%llu, %llu]\n",
                    static_cast<unsigned long long>(e.N),
                    static_cast<unsigned long long>(e.best_value),
                    static_cast<unsigned long long>(e.upper_bound));
      }
    }
  }
  return any_budget ? 4 : 0;
}

int cmd_construct(std::uint32_t d, std::uint64_t n, bool do_verify, const CommonOpts& opts) {
  PrimeTable table = make_table(opts, d, n);
  ConstructionCertificate cert = build_certificate(d, n, table);  // ThresholdNotMet: exit 5
  VerifyOutcome outcome;
  if (do_verify) outcome = verify_certificate(cert, table);

  if (opts.format == "text") {
    std::printf("d = %u, N = %llu, size = %llu%s\n", d, static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(cert.claimed_size),
                do_verify ? (outcome.ok ? ", verified" : ", VERIFICATION FAILED") : "");
    std::printf("set:");
    for (std::uint64_t x : cert.full_set) std::printf(" %llu", static_cast<unsigned long long>(x));
    std::printf("\n");
    if (do_verify && !outcome.ok) std::printf("failure: %s\n", outcome.failure.c_str());
  } else if (opts.format == "csv") {
    std::cout << "part,index,prime,element\n";
    for (const auto& b : cert.bands)
      for (std::uint64_t e : b.elements) std::cout << "band," << b.k << ",," << e << "\n";
    for (std::uint64_t e : cert.last_band.elements)
      std::cout << "band," << cert.last_band.k << ",," << e << "\n";
    for (const auto& g : cert.gadgets)
      for (std::uint64_t e : g.elements)
        std::cout << "gadget," << g.s << ',' << g.prime << ',' << e << "\n";
  } else {
    std::cout << certificate_to_json(cert).dump(2) << "\n";
  }
  return (do_verify && !outcome.ok) ? 1 : 0;
}

int cmd_verify(std::uint32_t d, const std::string& path, const CommonOpts& opts) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::vector<std::uint64_t> elements;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      std::uint64_t v = 0;
      try {
        std::size_t used = 0;
        v = std::stoull(tok, &used);
        if (used != tok.size() || tok[0] == '-') throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw InvalidArgument("line " + std::to_string(lineno) + ": '" + tok +
                              "' is not a positive integer");
      }
      if (v == 0) throw InvalidArgument("line " + std::to_string(lineno) + ": 0 is not allowed");
      elements.push_back(v);
    }
  }
  std::vector<std::uint64_t> sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("duplicate entries: elements of A are distinct");

  std::uint64_t maxval = sorted.empty() ? 1 : sorted.back();
  PrimeTable table = make_table(opts, d, maxval);

  VectorMultiset ms = make_multiset(elements, d, table);
  EliminationResult elim = eliminate(ms);
  ZeroSumReport zs = find_zero_sum(elim.residual);

  if (!zs.has_zero_sum) {
    if (opts.format == "json")
      std::cout << json{{"d", d}, {"free", true}}.dump(2) << "\n";
    else if (opts.format == "csv")
      std::cout << "free,witness,product,root\ntrue,,,\n";
    else
      std::printf("FREE\n");
    return 0;
  }

  BigInt product = product_of(zs.witness);
  BigInt root;
  bool power = is_perfect_dth_power(product, d, &root);
  if (opts.format == "json") {
    json j{{"d", d}, {"free", false}, {"witness", zs.witness},
           {"product", product.str()}, {"root", root.str()}};
    std::cout << j.dump(2) << "\n";
  } else if (opts.format == "csv") {
    std::cout << "free,witness,product,root\nfalse,\"";
    for (std::size_t i = 0; i < zs.witness.size(); ++i)
      std::cout << (i ? " " : "") << zs.witness[i];
    std::cout << "\"," << product.str() << ',' << root.str() << "\n";
  } else {
    std::printf("ZERO-SUM witness:");
    for (std::uint64_t x : zs.witness) std::printf(" %llu", static_cast<unsigned long long>(x));
    std::printf("\nproduct %s = %s^%u%s\n", product.str().c_str(), root.str().c_str(), d,
                power ? "" : "  [WARNING: product is not a d-th power]");
  }
  return 1;
}

int cmd_davenport(const std::string& spec_text, int which, const CommonOpts& opts) {
  GroupSpec g = GroupSpec::parse(spec_text);
  if (which == 0) {  // olson
    std::uint64_t v = olson_davenport(g);  // NotApplicable: exit 6
    if (opts.format == "json")
      std::cout << json{{"group", g.to_string()}, {"olson", v}}.dump(2) << "\n";
    else if (opts.format == "csv")
      std::cout << "group,quantity,value\n" << g.to_string() << ",olson," << v << "\n";
    else
      std::printf("D(%s) = %llu   [Olson]\n", g.to_string().c_str(),
                  static_cast<unsigned long long>(v));
  } else if (which == 1) {  // exact
    DavenportSearchOptions dopts;
    if (opts.budget) dopts.node_budget = opts.budget;
    dopts.threads = opts.threads;
    DavenportSearchResult r = davenport_exact(g, dopts);
    if (opts.format == "json")
      std::cout << json{{"group", g.to_string()},
                        {"exact", r.value},
                        {"longest_zero_sum_free", r.longest_zero_sum_free},
                        {"nodes", r.nodes}}
                       .dump(2)
                << "\n";
    else if (opts.format == "csv")
      std::cout << "group,quantity,value,nodes\n"
                << g.to_string() << ",exact," << r.value << ',' << r.nodes << "\n";
    else
      std::printf("D(%s) = %llu   [exhaustive search, %llu nodes, longest zero-sum-free %llu]\n",
                  g.to_string().c_str(), static_cast<unsigned long long>(r.value),
                  static_cast<unsigned long long>(r.nodes),
                  static_cast<unsigned long long>(r.longest_zero_sum_free));
  } else {  // bound
    StarBound b = davenport_upper_bound(g);
    if (opts.format == "json")
      std::cout << json{{"group", g.to_string()}, {"bound", b.floored}, {"bound_real", b.real}}
                       .dump(2)
                << "\n";
    else if (opts.format == "csv")
      std::cout << "group,quantity,value\n" << g.to_string() << ",bound," << b.floored << "\n";
    else
      std::printf("D(%s) <= %llu   (%.4f)\n", g.to_string().c_str(),
                  static_cast<unsigned long long>(b.floored), b.real);
  }
  return 0;
}

int cmd_primes(std::uint64_t n, std::uint64_t nth, bool list, const CommonOpts& opts) {
  if (nth) {
    PrimeTable table = make_table(opts, static_cast<std::uint32_t>(std::min<std::uint64_t>(
                                            nth, 0xffffffffull)),
                                  2);
    std::uint64_t p = table.nth_prime(nth);
    if (opts.format == "json")
      std::cout << json{{"nth", nth}, {"prime", p}}.dump(2) << "\n";
    else if (opts.format == "csv")
      std::cout << "nth,prime\n" << nth << ',' << p << "\n";
    else
      std::printf("p_%llu = %llu\n", static_cast<unsigned long long>(nth),
                  static_cast<unsigned long long>(p));
    return 0;
  }
  PrimeTable table = make_table(opts, 2, n);
  std::uint64_t count = table.pi(n);
  if (opts.format == "json") {
    json j{{"N", n}, {"pi", count}};
    if (list) {
      json arr = json::array();
      for (std::uint64_t p : table.primes())
        if (p <= n) arr.push_back(p);
      j["primes"] = arr;
    }
    std::cout << j.dump(2) << "\n";
  } else if (opts.format == "csv") {
    std::cout << "N,pi\n" << n << ',' << count << "\n";
  } else {
    std::printf("pi(%llu) = %llu\n", static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(count));
    if (list) {
      for (std::uint64_t p : table.primes())
        if (p <= n) std::printf("%llu\n", static_cast<unsigned long long>(p));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power-free product sets: exact values, bounds, constructions"};
  app.require_subcommand(1);

  std::uint32_t d = 2;
  std::string n_spec;
  std::uint64_t n_single = 0;
  bool flag_verify = false, flag_force = false, flag_list = false;
  std::uint64_t nth = 0;
  std::string file_path, group_spec;

  // one option bundle per subcommand, since the format defaults differ
  CommonOpts bounds_opts, rho_opts, construct_opts, verify_opts, dav_opts, primes_opts;
  auto add_common = [](CLI::App* cmd, CommonOpts& opts, const std::string& default_format) {
    opts.format = default_format;
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--sieve-limit", opts.sieve_limit, "sieve limit override");
    cmd->add_option("--budget", opts.budget, "search node budget")->envname("POWFREE_BUDGET");
    cmd->add_option("--threads", opts.threads, "worker threads")->envname("POWFREE_THREADS");
  };

  auto* bounds_cmd = app.add_subcommand("bounds", "main term and every upper bound for (d, N)");
  bounds_cmd->add_option("-d", d, "power")->required()->check(CLI::Range(2u, 1000000u));
  bounds_cmd->add_option("-N", n_single, "range end")->required()->check(CLI::PositiveNumber);
  add_common(bounds_cmd, bounds_opts, "text");

  auto* rho_cmd = app.add_subcommand("rho", "exact rho_d(N) for N or a range LO..HI");
  rho_cmd->add_option("-d", d, "power")->required()->check(CLI::Range(2u, 1000000u));
  rho_cmd->add_option("-N", n_spec, "N or LO..HI")->required();
  rho_cmd->add_flag("--force", flag_force, "override the desk-scale guard");
  add_common(rho_cmd, rho_opts, "text");

  auto* construct_cmd = app.add_subcommand("construct", "emit the lower-bound certificate");
  construct_cmd->add_option("-d", d, "power")->required()->check(CLI::Range(2u, 1000000u));
  construct_cmd->add_option("-N", n_single, "range end")->required()->check(CLI::PositiveNumber);
  construct_cmd->add_flag("--verify", flag_verify, "verify before emitting");
  add_common(construct_cmd, construct_opts, "json");

  auto* verify_cmd = app.add_subcommand("verify", "check a set file for power-free products");
  verify_cmd->add_option("-d", d, "power")->required()->check(CLI::Range(2u, 1000000u));
  verify_cmd->add_option("file", file_path, "newline-separated positive integers")->required();
  add_common(verify_cmd, verify_opts, "text");

  auto* dav_cmd = app.add_subcommand("davenport", "Davenport constant of a finite abelian group");
  dav_cmd->add_option("group", group_spec, "group spec, e.g. 3^2 or 2,4")->required();
  bool w_olson = false, w_exact = false, w_bound = false;
  auto* quantity = dav_cmd->add_option_group("quantity");
  quantity->add_flag("--olson", w_olson, "Olson's p-group formula");
  quantity->add_flag("--exact", w_exact, "exhaustive search");
  quantity->add_flag("--bound", w_bound, "exp(G)(1 + log(|G|/exp(G))) upper bound");
  quantity->require_option(1);
  add_common(dav_cmd, dav_opts, "text");

  auto* primes_cmd = app.add_subcommand("primes", "prime counting and the n-th prime");
  primes_cmd->add_option("-N", n_single, "count primes up to N")->check(CLI::PositiveNumber);
  primes_cmd->add_option("--nth", nth, "print the k-th prime")->check(CLI::PositiveNumber);
  primes_cmd->add_flag("--list", flag_list, "list the primes as well");
  add_common(primes_cmd, primes_opts, "text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(d, n_single, bounds_opts);
    if (rho_cmd->parsed()) return cmd_rho(d, n_spec, flag_force, rho_opts);
    if (construct_cmd->parsed()) return cmd_construct(d, n_single, flag_verify, construct_opts);
    if (verify_cmd->parsed()) return cmd_verify(d, file_path, verify_opts);
    if (dav_cmd->parsed()) return cmd_davenport(group_spec, w_olson ? 0 : (w_exact ? 1 : 2), dav_opts);
    if (primes_cmd->parsed()) {
      if (!nth && n_single == 0)
        throw InvalidArgument("primes needs -N or --nth");
      return cmd_primes(n_single, nth, flag_list, primes_opts);
    }
  } catch (const ThresholdNotMet& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "; bracket [" << e.best_value << ", " << e.upper_bound
              << "]\n";
    return 4;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const NotApplicable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  } catch (const OutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IncompleteTable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
