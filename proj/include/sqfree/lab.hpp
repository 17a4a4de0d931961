#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sqfree/arith.hpp"
#include "sqfree/constants.hpp"
#include "sqfree/localmodel.hpp"
#include "sqfree/poly.hpp"

namespace sqfree {

enum class Mode { MonteCarlo, Exhaustive };

inline std::string to_string(Mode m) { return m == Mode::MonteCarlo ? "monte-carlo" : "exhaustive"; }

// Populations up to this size can be enumerated by exhaustive_moment.
inline constexpr u64 kExhaustiveBudget = 100000;

struct ExperimentConfig {
  int d = 3;
  BigInt H = BigInt(1) << 80;
  u64 x = 4096;
  std::optional<BigInt> z;  // empty: auto, H^lambda with lambda = (d+1)/(4d+3)
  u64 samples = 2000;
  u64 master_seed = 1;
  Mode mode = Mode::MonteCarlo;
  u64 B = 100000;  // small-prime sieve bound for S_P(x)
  u64 L = 100000;  // singular-series prime limit
  u64 factor_budget = u64{1} << 16;  // rho iterations on the unresolved part of D_P
  unsigned threads = 1;

  void validate() const {
    if (d < 3) throw DomainError("config: d must be at least 3");
    if (H < 1) throw DomainError("config: H must be at least 1");
    if (x < 2) throw DomainError("config: x must be at least 2");
    if (mode == Mode::MonteCarlo && samples < 2) throw DomainError("config: samples must be at least 2");
    if (B < 2 || L < 5) throw DomainError("config: B must be at least 2 and L at least 5");
    if (threads < 1) throw DomainError("config: threads must be at least 1");
    if (z && *z < 1) throw DomainError("config: z must be positive");
  }

  // floor(H^((d+1)/(4d+3))) unless z is given.
  BigInt resolved_z() const {
    if (z) return *z;
    BigInt p = 1, r;
    for (int i = 0; i <= d; ++i) p *= H;
    mpz_root(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(4 * d + 3));
    return r;
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {"d", "H", "x", "z_policy", "samples", "master_seed",
                                                   "mode", "B", "L", "factor_budget", "threads"};
    if (!j.is_object()) throw DomainError("config: expected a JSON object");
    for (const auto& [key, _] : j.items())
      if (std::find(known.begin(), known.end(), key) == known.end()) throw DomainError("config: unknown field '" + key + "'");
    ExperimentConfig c;
    try {
      if (j.contains("d")) c.d = j.at("d").get<int>();
      if (j.contains("H")) c.H = j.at("H").is_string() ? parse_big(j.at("H").get<std::string>()) : BigInt(j.at("H").get<unsigned long>());
      if (j.contains("x")) c.x = j.at("x").get<u64>();
      if (j.contains("z_policy")) {
        const auto& zp = j.at("z_policy");
        if (zp.is_string() && zp.get<std::string>() == "auto") {
          c.z.reset();
        } else {
          c.z = zp.is_string() ? parse_big(zp.get<std::string>()) : BigInt(zp.get<unsigned long>());
        }
      }
      if (j.contains("samples")) c.samples = j.at("samples").get<u64>();
      if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<u64>();
      if (j.contains("mode")) {
        const std::string m = j.at("mode").get<std::string>();
        if (m == "monte-carlo") {
          c.mode = Mode::MonteCarlo;
        } else if (m == "exhaustive") {
          c.mode = Mode::Exhaustive;
        } else {
          throw DomainError("config: mode must be monte-carlo or exhaustive");
        }
      }
      if (j.contains("B")) c.B = j.at("B").get<u64>();
      if (j.contains("L")) c.L = j.at("L").get<u64>();
      if (j.contains("factor_budget")) c.factor_budget = j.at("factor_budget").get<u64>();
      if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
  }

  // Thread count is omitted: it never changes results.
  nlohmann::json to_json() const {
    return {{"d", d},
            {"H", H.get_str()},
            {"x", x},
            {"z_policy", z ? nlohmann::json(z->get_str()) : nlohmann::json("auto")},
            {"samples", samples},
            {"master_seed", master_seed},
            {"mode", to_string(mode)},
            {"B", B},
            {"L", L},
            {"factor_budget", factor_budget}};
  }
};

// Counter-based stream: word j of stream (seed, index) is mix64(key + (j+1) * golden).
class CounterRng {
 public:
  CounterRng(u64 seed, u64 index) : key_(hash_combine(mix64(seed), index)) {}
  u64 next() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  // Uniform on [0, m) by rejection on the minimal number of bits.
  BigInt below(const BigInt& m) {
    if (m <= 0) throw DomainError("CounterRng: empty range");
    const std::size_t bits = mpz_sizeinbase(BigInt(m - 1).get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    std::vector<u64> buf(words);
    for (;;) {
      for (auto& w : buf) w = next();
      if (bits % 64) buf.back() &= (~u64{0}) >> (64 - bits % 64);
      BigInt r;
      mpz_import(r.get_mpz_t(), words, -1, sizeof(u64), 0, 0, buf.data());
      if (r < m) return r;
    }
  }

 private:
  u64 key_;
  u64 counter_ = 0;
};

// c_0..c_{d-1} uniform on [-H, H]; c_d uniform on [-H, H] without 0.
inline IntPolynomial sample_polynomial(u64 master_seed, u64 index, int d, const BigInt& H) {
  if (H < 1) throw DomainError("sample_polynomial: H must be at least 1");
  if (d < 0) throw DomainError("sample_polynomial: negative degree");
  CounterRng rng(master_seed, index);
  std::vector<BigInt> c(static_cast<std::size_t>(d + 1));
  for (int i = 0; i < d; ++i) c[i] = rng.below(2 * H + 1) - H;
  const BigInt r = rng.below(2 * H);
  c[d] = r < H ? BigInt(r - H) : BigInt(r - H + 1);
  return IntPolynomial(c);
}

struct SampleResult {
  u64 index = 0;
  std::string poly;
  long double E = 0;
  BigInt S;
  long double singular = 0;
  long double tail_bound = 0;
  u64 uncertified = 0;
  std::vector<std::string> flags;
};

// Upper bound for pi(y) (Rosser-Schoenfeld, y > 1).
inline long double prime_pi_upper(long double y) { return y < 2 ? 0 : 1.25506L * y / std::log(y); }

// Per value n, the probability over the coefficient box that p^2 | P(n) for some p > B is at most
//   sum over p > B of (1/p^2 + 1/(2H+1)) <= tail(B, 2) + pi(sqrt(max |P(n)|)) / (2H+1),
// because c_0 is uniform on 2H+1 consecutive integers. Values not certified by the sieve can
// only be miscounted through such a p.
inline long double missed_square_rate(const ExperimentConfig& c) {
  BigInt vmax = 0, xp = 1;
  for (int i = 0; i <= c.d; ++i) {
    vmax += c.H * xp;
    xp *= static_cast<unsigned long>(c.x);
  }
  const long double root = std::sqrt(vmax.get_d());
  const long double box = BigInt(2 * c.H + 1).get_d();
  return prime_tail_power_sum(static_cast<long double>(c.B), 2) + prime_pi_upper(root) / box;
}

// E_P(x) for one polynomial. `exact` forces unlimited factoring budgets everywhere.
inline SampleResult evaluate_sample(const IntPolynomial& P, const ExperimentConfig& c, bool exact) {
  SampleResult r;
  r.poly = P.to_string();
  const u64 top = std::max(c.B, c.L);
  const auto primes = PrimeCache::get(top);
  const std::vector<PrimeLocal> table = local_table(P, *primes, top);
  SingularSeriesOptions so;
  so.prime_limit = c.L;
  so.trial_limit = std::max<u64>(c.L, 10000000);
  so.factor_budget = exact ? kUnlimitedBudget : c.factor_budget;
  const SingularSeriesValue s = singular_series(P, so, &table);
  SquarefreeCountOptions co;
  co.sieve_bound = c.B;
  co.rho_budget = exact ? kUnlimitedBudget : 0;
  const SquarefreeCount cnt = count_squarefree_detailed(P, c.x, co, &table);
  r.S = cnt.count;
  r.uncertified = cnt.uncertified;
  r.singular = s.value;
  r.tail_bound = s.tail_bound;
  r.E = static_cast<long double>(r.S.get_d()) - s.value * static_cast<long double>(c.x);
  // Unresolved square factors of D_P are already worst-cased in tail_bound; flag only when they dominate it.
  if (s.flagged) r.flags.push_back("ramified-fallback");
  return r;
}

struct MomentReport {
  u64 samples_used = 0;
  long double mean_E2 = 0, stderr_E2 = 0, normalized = 0;
  long double gamma0_reference = 0;
  long double mean_S_over_x = 0, stderr_S_over_x = 0;
  long double singular_tail_worst = 0;
  u64 flagged_samples = 0;
  std::vector<std::string> flags;  // run-level notes
  bool unreliable = false;
  u64 uncertified_values = 0;
  long double expected_missed_per_sample = 0;
  BigInt population;  // exhaustive mode: number of polynomials enumerated
  BigInt z;
  std::vector<std::string> warnings;
  std::optional<double> wall_time;
  std::string per_sample_csv_path;
  std::vector<SampleResult> samples;
};

namespace detail {

// Runs f(i) for i in [0, n) on `threads` workers; results land at their index.
template <class F>
void parallel_for(u64 n, unsigned threads, F&& f) {
  std::atomic<u64> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      const u64 i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

inline void summarize(MomentReport& rep, const ExperimentConfig& c, long double gamma0) {
  const auto& s = rep.samples;
  const long double N = static_cast<long double>(s.size());
  const long double x = static_cast<long double>(c.x);
  long double sumE2 = 0, sumS = 0;
  for (const auto& r : s) {
    sumE2 += r.E * r.E;
    sumS += static_cast<long double>(r.S.get_d()) / x;
    rep.singular_tail_worst = std::max(rep.singular_tail_worst, r.tail_bound);
    rep.uncertified_values += r.uncertified;
    if (!r.flags.empty()) ++rep.flagged_samples;
  }
  rep.samples_used = s.size();
  rep.mean_E2 = sumE2 / N;
  rep.mean_S_over_x = sumS / N;
  long double vE = 0, vS = 0;
  for (const auto& r : s) {
    const long double e = r.E * r.E - rep.mean_E2;
    const long double q = static_cast<long double>(r.S.get_d()) / x - rep.mean_S_over_x;
    vE += e * e;
    vS += q * q;
  }
  rep.stderr_E2 = N > 1 ? std::sqrt(vE / (N - 1) / N) : 0;
  rep.stderr_S_over_x = N > 1 ? std::sqrt(vS / (N - 1) / N) : 0;
  rep.normalized = rep.mean_E2 / std::sqrt(x);
  rep.gamma0_reference = gamma0;
  if (rep.flagged_samples * 100 > rep.samples_used) {
    rep.unreliable = true;
    rep.flags.push_back("more than 1% of samples flagged");
  }
  if (rep.singular_tail_worst * x >= 0.1L * std::sqrt(rep.mean_E2)) {
    rep.unreliable = true;
    rep.flags.push_back("singular-series tail not negligible against sqrt(mean_E2)");
  }
  if (rep.expected_missed_per_sample >= 0.1L * std::sqrt(rep.mean_E2)) {
    rep.unreliable = true;
    rep.flags.push_back("expected missed square divisors not negligible against sqrt(mean_E2)");
  }
}

}  // namespace detail

inline constexpr u64 kGammaReferencePrimeLimit = 1000000;

// Every P with |coefficients| <= H and nonzero leading coefficient, factored without budget.
inline MomentReport exhaustive_moment(int d, const BigInt& H, u64 x, u64 L = 10000, unsigned threads = 1) {
  if (H < 1) throw DomainError("exhaustive_moment: H must be at least 1");
  if (d < 1) throw DomainError("exhaustive_moment: d must be at least 1");
  BigInt pop = 2 * H;
  for (int i = 0; i < d; ++i) pop *= 2 * H + 1;
  if (pop > BigInt(static_cast<unsigned long>(kExhaustiveBudget)))
    throw ResourceError("exhaustive_moment: population " + pop.get_str() + " exceeds the enumeration budget");
  ExperimentConfig c;
  c.d = d;
  c.H = H;
  c.x = x;
  c.L = L;
  c.B = std::min<u64>(L, 10000);
  c.mode = Mode::Exhaustive;
  c.threads = threads;
  const u64 n = pop.get_ui();
  const long h = H.get_si(), side = 2 * h + 1;
  MomentReport rep;
  rep.samples.resize(n);
  detail::parallel_for(n, threads, [&](u64 i) {
    // Mixed radix: c_0..c_{d-1} in [-H, H], then c_d in [-H, H] without 0.
    std::vector<BigInt> coeffs(static_cast<std::size_t>(d + 1));
    u64 k = i;
    for (int j = 0; j < d; ++j) {
      coeffs[j] = static_cast<long>(k % side) - h;
      k /= side;
    }
    const long lead = static_cast<long>(k) - h;
    coeffs[d] = lead >= 0 ? lead + 1 : lead;
    SampleResult r = evaluate_sample(IntPolynomial(coeffs), c, true);
    r.index = i;
    rep.samples[i] = std::move(r);
  });
  rep.population = pop;
  rep.z = c.resolved_z();
  detail::summarize(rep, c, gamma_constants(kGammaReferencePrimeLimit).gamma0);
  return rep;
}

inline void write_samples_csv(const MomentReport& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot open " + path + " for writing");
  out << "index,E_P,S_P,singular_series,tail_bound,flags\n";
  char buf[64];
  for (const auto& r : rep.samples) {
    out << r.index << ',';
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(r.E));
    out << buf << ',' << r.S.get_str() << ',';
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(r.singular));
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(r.tail_bound));
    out << buf << ',';
    for (std::size_t i = 0; i < r.flags.size(); ++i) out << (i ? ";" : "") << r.flags[i];
    out << '\n';
  }
}

// Monte-Carlo: samples drawn by index from the counter-based stream, folded in index order.
// Exhaustive: delegates to exhaustive_moment.
inline MomentReport run_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto t0 = std::chrono::steady_clock::now();
  MomentReport rep;
  if (c.mode == Mode::Exhaustive) {
    rep = exhaustive_moment(c.d, c.H, c.x, c.L, c.threads);
  } else {
    rep.samples.resize(c.samples);
    // Small boxes repeat polynomials; results are pure functions of P, so they are memoized.
    BigInt box = 1;
    for (int i = 0; i <= c.d; ++i) box *= 2 * c.H + 1;
    const bool memo = box <= 1000000;
    std::map<std::string, SampleResult> cache;
    std::mutex cache_mu;
    detail::parallel_for(c.samples, c.threads, [&](u64 i) {
      const IntPolynomial P = sample_polynomial(c.master_seed, i, c.d, c.H);
      SampleResult r;
      bool hit = false;
      if (memo) {
        std::lock_guard<std::mutex> lock(cache_mu);
        auto it = cache.find(P.to_string());
        if (it != cache.end()) {
          r = it->second;
          hit = true;
        }
      }
      if (!hit) {
        try {
          r = evaluate_sample(P, c, false);
        } catch (const std::exception& e) {
          r = SampleResult{};
          r.poly = P.to_string();
          r.flags.push_back(std::string("error: ") + e.what());
        }
        if (memo) {
          std::lock_guard<std::mutex> lock(cache_mu);
          cache.emplace(r.poly, r);
        }
      }
      r.index = i;
      rep.samples[i] = std::move(r);
    });
    rep.expected_missed_per_sample = static_cast<long double>(c.x) * missed_square_rate(c);
    rep.z = c.resolved_z();
    BigInt xp = 1;
    for (int i = 0; i < c.d + 3; ++i) xp *= static_cast<unsigned long>(c.x);
    if (xp > c.H) rep.warnings.push_back("x^(d+3) exceeds H: outside the regime x <= H^(1/(d+3))");
    detail::summarize(rep, c, gamma_constants(kGammaReferencePrimeLimit).gamma0);
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Report as JSON; wall_time only when `timing` is set, so equal configs give equal bytes.
inline nlohmann::json report_to_json(const MomentReport& r, const ExperimentConfig& c, bool timing) {
  nlohmann::json j = {{"config", c.to_json()},
                      {"samples_used", r.samples_used},
                      {"mean_E2", static_cast<double>(r.mean_E2)},
                      {"stderr", static_cast<double>(r.stderr_E2)},
                      {"normalized", static_cast<double>(r.normalized)},
                      {"gamma0_reference", static_cast<double>(r.gamma0_reference)},
                      {"mean_S_over_x", static_cast<double>(r.mean_S_over_x)},
                      {"stderr_S_over_x", static_cast<double>(r.stderr_S_over_x)},
                      {"singular_tail_worst", static_cast<double>(r.singular_tail_worst)},
                      {"flagged_samples", r.flagged_samples},
                      {"flagged_fraction", r.samples_used ? static_cast<double>(r.flagged_samples) / r.samples_used : 0.0},
                      {"flags", r.flags},
                      {"unreliable", r.unreliable},
                      {"uncertified_values", r.uncertified_values},
                      {"expected_missed_per_sample", static_cast<double>(r.expected_missed_per_sample)},
                      {"z", r.z.get_str()},
                      {"warnings", r.warnings},
                      {"per_sample_csv_path", r.per_sample_csv_path}};
  if (c.mode == Mode::Exhaustive) {
    j["population"] = r.population.get_str();
    BigInt box = 1;
    for (int i = 0; i <= c.d; ++i) box *= 2 * c.H;
    j["box_normalization"] = box.get_str();  // (2H)^(d+1)
  }
  if (timing && r.wall_time) j["wall_time"] = *r.wall_time;
  return j;
}

}  // namespace sqfree
