#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqfree/analytic.hpp"
#include "sqfree/lab.hpp"
#include "sqfree/localmodel.hpp"
#include "sqfree/verify.hpp"

namespace sqfree {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;  // domain error or failed verification
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

namespace cli {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double num(long double v) { return static_cast<double>(v); }

inline std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

// text: one "key: value" line per field (or the bare value for `primary`), json: indented object,
// csv: header row and one value row.
inline void emit(std::ostream& out, const Json& obj, const std::string& format, const std::string& primary = "") {
  if (format == "json") {
    out << obj.dump(2) << '\n';
  } else if (format == "csv") {
    std::string head, row;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      head += (head.empty() ? "" : ",") + it.key();
      row += (it == obj.begin() ? "" : ",") + csv_cell(it.value());
    }
    out << head << '\n' << row << '\n';
  } else if (!primary.empty()) {
    const Json& v = obj.at(primary);
    out << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  } else {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      out << it.key() << ": " << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()) << '\n';
  }
}

inline IntPolynomial parse_poly(const std::string& text) {
  const IntPolynomial P = IntPolynomial::parse(text);
  if (P.is_zero()) throw DomainError("polynomial must be nonzero");
  return P;
}

inline Json checks_to_json(const std::string& suite, const std::vector<CheckResult>& checks) {
  Json arr = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    all = all && c.pass;
  }
  return {{"suite", suite}, {"pass", all}, {"checks", arr}};
}

}  // namespace cli

// Parses argv and runs one subcommand; all output goes to `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using cli::Json;
  using cli::num;
  CLI::App app{"Square-free values of polynomials: local densities, constants, contour integrals and moment experiments"};
  app.require_subcommand(1);
  std::string format = "text";
  bool json_flag = false;
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_flag("--json", json_flag, "Same as --format json");
  };
  std::function<Json()> action;
  std::string primary;

  std::string poly;
  std::string prime;
  auto* rho = app.add_subcommand("rho", "rho_P(l^2): roots of P modulo l^2");
  rho->add_option("--poly", poly, "Coefficients, constant term first (1,0,1 is t^2+1)")->required();
  rho->add_option("--prime", prime, "The prime l")->required();
  bool rho_brute_flag = false;
  rho->add_flag("--brute", rho_brute_flag, "Also scan all residues mod l^2");
  add_format(rho);
  rho->callback([&] {
    primary = "rho";
    action = [&] {
      const IntPolynomial P = cli::parse_poly(poly);
      const BigInt ell = parse_big(prime);
      if (ell < 2 || !is_prime(ell)) throw DomainError("--prime must be a prime");
      const LocalCount lc = rho_prime_square(P, ell);
      Json j = {{"poly", P.to_string()}, {"prime", ell.get_str()}, {"rho", lc.count.get_str()}, {"case", to_string(lc.case_tag)}};
      if (rho_brute_flag) {
        if (!ell.fits_ulong_p() || ell.get_ui() > 1000) throw ResourceError("--brute needs l <= 1000");
        j["rho_brute"] = std::to_string(rho_brute(P, ell.get_ui() * ell.get_ui()));
      }
      return j;
    };
  });

  u64 x = 0;
  u64 sieve_bound = SquarefreeCountOptions{}.sieve_bound;
  auto* count = app.add_subcommand("count", "S_P(x): n in [1, x] with P(n) square-free");
  count->add_option("--poly", poly, "Coefficients, constant term first")->required();
  count->add_option("--x", x, "Upper end of the range")->required()->check(CLI::PositiveNumber);
  count->add_option("--sieve-bound", sieve_bound, "Primes up to this bound are sieved")->capture_default_str();
  add_format(count);
  count->callback([&] {
    primary = "count";
    action = [&] {
      const IntPolynomial P = cli::parse_poly(poly);
      SquarefreeCountOptions o;
      o.sieve_bound = sieve_bound;
      const auto c = count_squarefree_detailed(P, x, o);
      return Json{{"poly", P.to_string()}, {"x", x}, {"count", c.count.get_str()}, {"zero_values", c.zero_values}};
    };
  });

  u64 prime_limit = 0;
  auto* eterm = app.add_subcommand("eterm", "E_P(x) = S_P(x) - S x with the singular series S");
  eterm->add_option("--poly", poly, "Coefficients, constant term first")->required();
  eterm->add_option("--x", x, "Upper end of the range")->required()->check(CLI::PositiveNumber);
  eterm->add_option("--prime-limit", prime_limit, "Exact local factors up to this prime (default 100000)");
  add_format(eterm);
  eterm->callback([&] {
    primary = "E";
    action = [&] {
      const IntPolynomial P = cli::parse_poly(poly);
      SingularSeriesOptions o;
      if (prime_limit) o.prime_limit = prime_limit;
      const ErrorTerm e = error_term(P, x, o);
      Json flags = Json::array();
      if (e.singular.flagged) flags.push_back("ramified-fallback");
      return Json{{"poly", P.to_string()},
                  {"x", x},
                  {"E", num(e.value)},
                  {"count", e.count.get_str()},
                  {"singular_series", num(e.singular.value)},
                  {"tail_bound", num(e.singular.tail_bound)},
                  {"uncertainty", num(e.uncertainty)},
                  {"prime_limit", e.singular.prime_limit},
                  {"flags", flags}};
    };
  });

  auto* constants = app.add_subcommand("constants", "gamma0, gamma1, gamma2 and gamma_mid with tail bounds");
  constants->add_option("--prime-limit", prime_limit, "Euler products over primes up to this bound (default 10^7)");
  bool cubic = false;
  constants->add_flag("--cubic-variant", cubic, "Also report gamma_mid with (3 - 2/l)/l^3 in place of /l^4");
  add_format(constants);
  constants->callback([&] {
    action = [&] {
      const ConstantsReport k = gamma_constants(prime_limit ? prime_limit : 10000000);
      Json j{{"prime_limit", k.prime_limit},
                  {"gamma0", num(k.gamma0)},
                  {"gamma0_tail", num(k.gamma0_tail)},
                  {"gamma1", num(k.gamma1)},
                  {"gamma1_tail", num(k.gamma1_tail)},
                  {"gamma2", num(k.gamma2)},
                  {"gamma2_tail", num(k.gamma2_tail)},
                  {"gamma_mid", num(k.gamma_mid)},
                  {"gamma_mid_tail", num(k.gamma_mid_tail)},
                  {"gamma_mid_minus_gamma2", num(k.gamma_mid - k.gamma2)}};
      if (cubic) j["gamma_mid_cubic"] = num(k.gamma_mid_cubic);
      return j;
    };
  });

  std::string method = "direct";
  double T = 0, delta = 0.249;
  auto* cesaro = app.add_subcommand("cesaro", "2 sum over k < x of (x - k) b(k)");
  cesaro->add_option("--x", x, "Cutoff")->required()->check(CLI::Range(u64{2}, u64{1} << 40));
  cesaro->add_option("--method", method, "direct | perron | contour | asymptotic")
      ->check(CLI::IsMember({"direct", "perron", "contour", "asymptotic"}));
  cesaro->add_option("--T", T, "Contour height (default x^((delta + 3/2)/(delta + 2)))");
  cesaro->add_option("--delta", delta, "Left edge at Re s = -1/2 - delta")->capture_default_str();
  cesaro->add_option("--prime-limit", prime_limit, "Primes in G (contour methods, default 1000) or constants (default 10^7)");
  add_format(cesaro);
  cesaro->callback([&] {
    primary = "value";
    action = [&]() -> Json {
      Json j = {{"x", x}, {"method", method}};
      if (method == "direct") {
        j["value"] = num(cesaro_direct(x));
        j["tolerance"] = 0.0;
        return j;
      }
      if (method == "asymptotic") {
        const ConstantsReport k = gamma_constants(prime_limit ? prime_limit : 10000000);
        j["value"] = num(asymptotic_cesaro(static_cast<long double>(x), k));
        j["prime_limit"] = k.prime_limit;
        return j;
      }
      ContourSpec c = ContourSpec::defaults(x, delta);
      if (T > 0) c.T = T;
      const u64 L = prime_limit ? prime_limit : kDefaultContourPrimeLimit;
      const long double xl = static_cast<long double>(x);
      j["T"] = num(c.T);
      j["delta"] = num(c.delta);
      j["theta"] = num(c.theta);
      j["prime_limit"] = L;
      if (method == "perron") {
        const PerronResult p = perron_truncated(c, L);
        j["value"] = num(p.value);
        j["imag"] = num(p.imag);
        j["quadrature_error"] = num(p.error);
        // Distance to the direct sum: truncation x^2 log x / T^2 plus quadrature.
        j["tolerance"] = num(xl * xl * std::log(xl) / (c.T * c.T) + 10 * c.quad_tol);
        j["evaluations"] = p.evaluations;
        return j;
      }
      const ContourDecomposition d = contour_decomposition(c, L);
      j["value"] = num(d.total().real());
      j["residues"] = {num(d.residues[0]), num(d.residues[1]), num(d.residues[2])};
      j["J1"] = {num(d.J1.real()), num(d.J1.imag())};
      j["J2"] = {num(d.J2.real()), num(d.J2.imag())};
      j["J3"] = {num(d.J3.real()), num(d.J3.imag())};
      j["quadrature_error"] = num(d.error);
      j["tolerance"] = num(xl * xl * std::log(xl) / (c.T * c.T) + 10 * c.quad_tol);
      j["evaluations"] = d.evaluations;
      return j;
    };
  });

  double sigma = 0, t = 0;
  auto* zeta_cmd = app.add_subcommand("zeta", "Riemann zeta at sigma + i t");
  zeta_cmd->add_option("--sigma", sigma, "Real part")->required();
  zeta_cmd->add_option("--t", t, "Imaginary part")->capture_default_str();
  add_format(zeta_cmd);
  zeta_cmd->callback([&] {
    action = [&] {
      const Complex z = zeta(Complex(sigma, t));
      return Json{{"sigma", sigma}, {"t", t}, {"re", num(z.real())}, {"im", num(z.imag())}};
    };
  });

  double y = 0, theta = 1.5;
  auto* kernel = app.add_subcommand("kernel", "(1/2 pi i) integral of y^s / (s (s+1)) over theta +- iT");
  kernel->add_option("--y", y, "y > 0")->required();
  kernel->add_option("--theta", theta, "Abscissa in (1, 2]")->capture_default_str();
  kernel->add_option("--T", T, "Height")->required();
  add_format(kernel);
  kernel->callback([&] {
    primary = "value";
    action = [&] {
      const QuadratureResult r = kernel_integral(y, theta, T);
      return Json{{"y", y},
                  {"theta", theta},
                  {"T", T},
                  {"value", num(r.value.real())},
                  {"imag", num(r.value.imag())},
                  {"limit", std::max(0.0, 1 - 1 / y)},
                  {"quadrature_error", num(r.error)}};
    };
  });

  std::string config_path, out_path, csv_path;
  bool timing = false;
  unsigned threads = 0;
  u64 seed = 0, samples = 0;
  auto* experiment = app.add_subcommand("experiment", "Second-moment experiment from a JSON config");
  experiment->add_option("--config", config_path, "Config file (JSON)")->required();
  experiment->add_option("--out", out_path, "Write the report here instead of stdout");
  experiment->add_option("--csv", csv_path, "Per-sample CSV");
  experiment->add_flag("--timing", timing, "Include wall_time in the report");
  experiment->add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  auto* seed_opt = experiment->add_option("--seed", seed, "Override master_seed");
  experiment->add_option("--samples", samples, "Override samples")->check(CLI::PositiveNumber);
  add_format(experiment);
  experiment->callback([&] {
    action = [&] {
      std::ifstream in(config_path);
      if (!in) throw cli::UsageError("cannot read " + config_path);
      nlohmann::json raw;
      try {
        raw = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config is not valid JSON: ") + e.what());
      }
      ExperimentConfig c = ExperimentConfig::from_json(raw);
      if (threads) c.threads = threads;
      if (*seed_opt) c.master_seed = seed;
      if (samples) c.samples = samples;
      c.validate();
      MomentReport r = run_experiment(c);
      if (!csv_path.empty()) {
        write_samples_csv(r, csv_path);
        r.per_sample_csv_path = csv_path;
      }
      const Json j = Json::parse(report_to_json(r, c, timing).dump());
      if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw ResourceError("cannot open " + out_path + " for writing");
        f << j.dump(2) << '\n';
      }
      return j;
    };
  });

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run the built-in oracle checks");
  verify->add_option("--suite", suite, "local | analytic | constants | all")->capture_default_str()
      ->check(CLI::IsMember({"local", "analytic", "constants", "all"}));
  add_format(verify);
  bool verify_failed = false;
  verify->callback([&] {
    action = [&] {
      std::vector<CheckResult> checks;
      auto append = [&](std::vector<CheckResult> v) { checks.insert(checks.end(), v.begin(), v.end()); };
      if (suite == "local" || suite == "all") append(verify_local());
      if (suite == "analytic" || suite == "all") append(verify_analytic());
      if (suite == "constants" || suite == "all") append(verify_constants());
      const Json j = cli::checks_to_json(suite, checks);
      verify_failed = !j.at("pass").get<bool>();
      return j;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (json_flag) format = "json";
  try {
    const Json result = action();
    if (verify->parsed() && format == "text") {
      for (const auto& c : result.at("checks"))
        out << (c.at("pass").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>() << ": "
            << c.at("detail").get<std::string>() << '\n';
    } else if (experiment->parsed() && format == "text") {
      cli::emit(out, Json{{"samples_used", result.at("samples_used")},
                          {"mean_E2", result.at("mean_E2")},
                          {"stderr", result.at("stderr")},
                          {"normalized", result.at("normalized")},
                          {"gamma0_reference", result.at("gamma0_reference")},
                          {"mean_S_over_x", result.at("mean_S_over_x")},
                          {"flagged_fraction", result.at("flagged_fraction")},
                          {"unreliable", result.at("unreliable")}},
                "text");
    } else {
      cli::emit(out, result, format, primary);
    }
    return verify_failed ? kExitDomain : kExitOk;
  } catch (const cli::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  }
}

}  // namespace sqfree
