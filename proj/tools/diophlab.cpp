// diophlab: command-line drivers for the counting, congruence-root and
// discrepancy experiments.
//
// Exit codes: 0 success, 1 failed check, 2 usage, 3 resource.

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diophlab/arith.hpp"
#include "diophlab/cache.hpp"
#include "diophlab/equidist.hpp"
#include "diophlab/erdos_turan.hpp"
#include "diophlab/errors.hpp"
#include "diophlab/io.hpp"
#include "diophlab/mult_sum.hpp"
#include "diophlab/poly_roots.hpp"
#include "diophlab/quadruples.hpp"

namespace {

using namespace diophlab;
using io::Json;

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct RunConfig {
  std::string command;
  std::string x_text;
  std::string y_text;
  std::string poly_text;
  std::string m_text;
  std::string file;
  std::string random_text;
  std::string psi_text;
  int h_max = 5;
  int H = 50;
  std::string format = "csv";
  std::string out;
  std::string cache_dir;
  unsigned workers = 1;
  std::uint64_t seed = 0;

  /// Everything that can change the output; paths, cache and worker count
  /// do not.
  [[nodiscard]] Json canonical() const {
    Json c = {{"command", command}, {"format", format}, {"seed", seed}};
    if (!x_text.empty()) c["x"] = x_text;
    if (!y_text.empty()) c["y"] = y_text;
    if (!poly_text.empty()) c["poly"] = poly_text;
    if (!m_text.empty()) c["m"] = m_text;
    if (!file.empty()) c["file"] = file;
    if (!random_text.empty()) c["random"] = random_text;
    if (!psi_text.empty()) c["psi"] = psi_text;
    if (command == "weyl") c["h_max"] = h_max;
    if (command == "et-check") c["H"] = H;
    return c;
  }

  [[nodiscard]] Json header() const {
    const Json c = canonical();
    return {{"tool", "diophlab"}, {"version", io::kVersion}, {"command", command}, {"seed", seed},
            {"config_hash", cache::sha256_hex(c.dump())}};
  }
};

/// Output is buffered and written only after the command succeeds.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {}

  std::ostream& stream() { return buffer_; }

  void commit() {
    if (path_.empty()) {
      std::cout << buffer_.str();
      std::cout.flush();
      return;
    }
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    out << buffer_.str();
    out.flush();
    if (!out) throw std::filesystem::filesystem_error("cannot write output", std::filesystem::path(path_),
                                                      std::make_error_code(std::errc::io_error));
  }

 private:
  std::string path_;
  std::ostringstream buffer_;
};

std::optional<cache::Cache> open_cache(const RunConfig& cfg) {
  const auto dir = cache::Cache::resolve_dir(cfg.cache_dir.empty() ? std::nullopt : std::optional(cfg.cache_dir));
  if (!dir) return std::nullopt;
  return cache::Cache(*dir);
}

std::vector<u64> require_list(const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string("missing ") + flag);
  return io::parse_count_list(text);
}

// Q(x) by a-ranges spread over a worker pool. Each range result is a
// checkpoint in the cache when one is configured.
u64 count_quadruples(u64 x, const RunConfig& cfg, const std::optional<cache::Cache>& store) {
  const u64 top = max_first_element(x);
  if (top == 0) return 0;
  constexpr u64 kRanges = 64;
  const u64 width = (top + kRanges - 1) / kRanges;
  std::vector<std::pair<u64, u64>> ranges;
  for (u64 lo = 1; lo <= top; lo += width) ranges.emplace_back(lo, std::min(top, lo + width - 1));
  const SpfSieve sieve(std::max<u64>(top, 2));
  std::vector<u64> counts(ranges.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < ranges.size(); i = next++) {
        const auto [lo, hi] = ranges[i];
        const Json args = {{"x", x}, {"a_lo", lo}, {"a_hi", hi}};
        if (store) {
          if (auto hit = store->get("drq_count_by_a", args); hit && hit->contains("count")) {
            counts[i] = (*hit)["count"].get<u64>();
            continue;
          }
        }
        counts[i] = count_drq_by_a(x, lo, hi, sieve);
        if (store) store->put("drq_count_by_a", args, {{"count", counts[i]}});
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < cfg.workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  u64 total = 0;
  for (u64 c : counts) total += c;
  if (x <= kByBCrossCheckCap) {
    const u64 other = count_drq_by_b(x);
    if (other != total) {
      throw ConsistencyError("count: by-a " + std::to_string(total) + " != by-b " + std::to_string(other));
    }
  }
  return total;
}

int cmd_count(const RunConfig& cfg, std::ostream& out) {
  const auto xs = require_list(cfg.x_text, "--x");
  for (u64 x : xs) {
    if (x < 16) throw DomainError("count: every x must be at least 16");
  }
  const auto store = open_cache(cfg);
  const SpfSieve sieve(kExactPairCountLimit);
  io::TableWriter table(out, io::parse_format(cfg.format), cfg.header());
  for (u64 x : xs) {
    const u64 q = count_quadruples(x, cfg, store);
    CountReport r = count_report(x, sieve, q);
    if (!cfg.psi_text.empty()) {
      WeightedSumOptions opts;
      opts.psi_override = std::stod(cfg.psi_text);
      const auto ws = weighted_sum(static_cast<double>(x), opts);
      r.weighted_sum = ws.value;
      r.psi = ws.psi;
      r.B = ws.B;
    }
    table.row({{"x", r.x},
               {"Q_exact", r.Q_exact},
               {"weighted_sum", r.weighted_sum},
               {"main_term", r.main_term_integral},
               {"C_term", r.leading_term},
               {"dujella_low", r.dujella_low},
               {"dujella_high", r.dujella_high},
               {"in_bracket", r.in_dujella_bracket},
               {"psi", r.psi},
               {"B", r.B},
               {"H", r.H}});
  }
  return kExitOk;
}

int cmd_pairs(const RunConfig& cfg, std::ostream& out) {
  const auto xs = require_list(cfg.x_text, "--x");
  u64 top = 2;
  for (u64 x : xs) {
    if (x < 1) throw DomainError("pairs: x must be positive");
    top = std::max(top, x);
  }
  const SpfSieve sieve(top);
  io::TableWriter table(out, io::parse_format(cfg.format), cfg.header());
  for (u64 x : xs) {
    const u64 pairs = count_pairs(x, sieve);
    table.row({{"x", x}, {"pairs", pairs}, {"S", pairs + x}});
  }
  return kExitOk;
}

int cmd_rho(const RunConfig& cfg, std::ostream& out) {
  if (cfg.poly_text.empty()) throw DomainError("missing --poly");
  const auto f = io::parse_poly(cfg.poly_text);
  const auto ms = require_list(cfg.m_text, "--m");
  io::TableWriter table(out, io::parse_format(cfg.format), cfg.header());
  for (u64 m : ms) {
    if (m < 1) throw DomainError("rho: m must be positive");
    table.row({{"m", m}, {"rho", rho_fast(f, m)}});
  }
  return kExitOk;
}

int cmd_roots(const RunConfig& cfg, std::ostream& out) {
  if (cfg.poly_text.empty()) throw DomainError("missing --poly");
  const auto f = io::parse_poly(cfg.poly_text);
  const auto ms = require_list(cfg.m_text, "--m");
  io::TableWriter table(out, io::parse_format(cfg.format), cfg.header());
  for (u64 m : ms) {
    if (m < 1) throw DomainError("roots: m must be positive");
    const RootSet rs = roots_mod(f, m);
    std::string joined;
    for (u64 r : rs.roots) joined += (joined.empty() ? "" : " ") + std::to_string(r);
    table.row({{"m", m}, {"count", rs.roots.size()}, {"roots", joined}});
  }
  return kExitOk;
}

int cmd_weyl(const RunConfig& cfg, std::ostream& out) {
  if (cfg.poly_text.empty()) throw DomainError("missing --poly");
  const auto f = io::parse_poly(cfg.poly_text);
  const auto grid = require_list(cfg.y_text, "--y/--grid");
  const WeylReport rep = cancellation_report(f, grid, cfg.h_max);
  io::TableWriter table(out, io::parse_format(cfg.format), cfg.header());
  for (const auto& r : rep.rows) {
    table.row({{"h", r.h},
               {"y", r.y},
               {"re_R", r.R.real()},
               {"im_R", r.R.imag()},
               {"abs_R", r.abs_R},
               {"trivial_count", r.trivial_count},
               {"ratio", r.ratio},
               {"probe_residual", r.probe_residual ? Json(*r.probe_residual) : Json()},
               {"probe_ratio", r.probe_ratio ? Json(*r.probe_ratio) : Json()},
               {"theorem_curve", r.theorem_curve}});
  }
  return kExitOk;
}

et::TargetSequence load_instance(const RunConfig& cfg) {
  if (!cfg.file.empty()) {
    std::ifstream in(cfg.file);
    if (!in) throw ResourceError("et-check: cannot read " + cfg.file);
    const Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("u") || !j.contains("alpha") || !j.contains("beta")) {
      throw DomainError("et-check: instance file needs arrays u, alpha, beta");
    }
    return {j["u"].get<std::vector<double>>(), j["alpha"].get<std::vector<double>>(),
            j["beta"].get<std::vector<double>>()};
  }
  if (cfg.random_text.empty()) throw DomainError("et-check: give --file or --random N");
  std::mt19937_64 rng(cfg.seed);
  return et::random_instance(rng, io::parse_count(cfg.random_text));
}

int cmd_et_check(const RunConfig& cfg, std::ostream& out) {
  const auto inst = load_instance(cfg);
  const auto r = et::et_bound(inst, cfg.H);
  io::TableWriter table(out, io::parse_format(cfg.format), cfg.header());
  table.row({{"N", r.N},
             {"H", r.H},
             {"Z_N", r.Z_N},
             {"D_N", r.D_N},
             {"V_alpha", r.V_alpha},
             {"V_beta", r.V_beta},
             {"bound", r.bound},
             {"corollary_rhs", r.corollary_rhs},
             {"holds", r.holds}});
  return r.holds ? kExitOk : kExitCheck;
}

int cmd_constant(const RunConfig& cfg, std::ostream& out) {
  io::TableWriter table(out, io::parse_format(cfg.format), cfg.header());
  const double c = constant_C();
  const double u = u_integral();
  bool ok = std::abs(c - 0.338285) <= 5e-7;
  table.row({{"quantity", "C"}, {"value", c}});
  table.row({{"quantity", "u_integral"}, {"value", u}});
  for (const auto& step : chain_check()) {
    table.row({{"quantity", "residual:" + step.name}, {"value", step.residual()}});
    ok = ok && step.residual() < 1e-8;
  }
  return ok ? kExitOk : kExitCheck;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  const auto ys = cfg.y_text.empty() ? std::vector<u64>{1000, 10000, 100000, 1000000} : io::parse_count_list(cfg.y_text);
  u64 top = 2;
  for (u64 y : ys) {
    if (y < 2) throw DomainError("report: y must be at least 2");
    top = std::max(top, y);
  }
  const SpfSieve sieve(top);
  io::TableWriter table(out, io::parse_format(cfg.format), cfg.header());
  bool ok = true;
  for (u64 y : ys) {
    const auto s2 = lemma_sum_sqrt2(y, sieve);
    const auto pay = lemma_sum_payoff(y, sieve);
    const bool primes_ok = !payoff_prime_inequality_violation(sieve, y).has_value();
    ok = ok && primes_ok;
    table.row({{"y", y},
               {"sqrt2_sum", s2.value},
               {"sqrt2_ratio", s2.ratio},
               {"payoff_sum", pay.value},
               {"payoff_ratio", pay.ratio},
               {"prime_inequality_ok", primes_ok}});
  }
  return ok ? kExitOk : kExitCheck;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "csv or json")->capture_default_str();
  sub->add_option("--out", cfg.out, "output file (default stdout)");
  sub->add_option("--cache", cfg.cache_dir, "cache directory (DIOPHLAB_CACHE overrides)");
  sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "seed for randomized instances")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Diophantine quadruples, congruence roots and discrepancy experiments"};
  app.require_subcommand(1);

  auto* count = app.add_subcommand("count", "exact and asymptotic counts of doubly regular quadruples");
  count->add_option("--x", cfg.x_text, "bound or comma list of bounds")->required();
  count->add_option("--psi", cfg.psi_text, "override the truncation function value");
  auto* pairs = app.add_subcommand("pairs", "Diophantine pairs in [1, x]");
  pairs->add_option("--x", cfg.x_text, "bound or comma list of bounds")->required();
  auto* rho = app.add_subcommand("rho", "number of roots of f modulo m");
  rho->add_option("--poly", cfg.poly_text, "coefficients c2,c1,c0")->required();
  rho->add_option("--m", cfg.m_text, "modulus or comma list")->required();
  auto* roots = app.add_subcommand("roots", "roots of f modulo m");
  roots->add_option("--poly", cfg.poly_text, "coefficients c2,c1,c0")->required();
  roots->add_option("--m", cfg.m_text, "modulus or comma list")->required();
  auto* weyl = app.add_subcommand("weyl", "exponential sums over normalized roots");
  weyl->add_option("--poly", cfg.poly_text, "coefficients c2,c1,c0")->required();
  weyl->add_option("--y,--grid", cfg.y_text, "ascending y grid")->required();
  weyl->add_option("--h-max", cfg.h_max, "largest frequency")->capture_default_str();
  auto* et_check = app.add_subcommand("et-check", "moving-target discrepancy against its exponential-sum bound");
  auto* file_opt = et_check->add_option("--file", cfg.file, "JSON instance with arrays u, alpha, beta");
  et_check->add_option("--random", cfg.random_text, "seeded random instance of this length")->excludes(file_opt);
  et_check->add_option("--H", cfg.H, "trigonometric degree")->capture_default_str()->check(CLI::PositiveNumber);
  auto* constant = app.add_subcommand("constant", "leading constant and its identity chain");
  auto* report = app.add_subcommand("report", "multiplicative lemma sums over a y grid");
  report->add_option("--y,--grid", cfg.y_text, "y grid");

  for (auto* sub : {count, pairs, rho, roots, weyl, et_check, constant, report}) add_common(sub, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  try {
    Sink sink(cfg.out);
    int code = kExitOk;
    std::ostream& out = sink.stream();
    if (cfg.command == "count") code = cmd_count(cfg, out);
    else if (cfg.command == "pairs") code = cmd_pairs(cfg, out);
    else if (cfg.command == "rho") code = cmd_rho(cfg, out);
    else if (cfg.command == "roots") code = cmd_roots(cfg, out);
    else if (cfg.command == "weyl") code = cmd_weyl(cfg, out);
    else if (cfg.command == "et-check") code = cmd_et_check(cfg, out);
    else if (cfg.command == "constant") code = cmd_constant(cfg, out);
    else if (cfg.command == "report") code = cmd_report(cfg, out);
    sink.commit();
    return code;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const ConsistencyError& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kExitCheck;
  } catch (const NumericError& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kExitCheck;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return kExitUsage;
  }
}
