#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sqfree/cli.hpp"

using namespace sqfree;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "sqfree_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("rho prints the local count", "[cli]") {
  const auto r = run({"rho", "--poly", "1,0,1", "--prime", "5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "2\n");
  const auto j = nlohmann::json::parse(run({"rho", "--poly", "0,0,9", "--prime", "3", "--json", "--brute"}).out);
  CHECK(j.at("rho") == "9");
  CHECK(j.at("rho_brute") == "9");
  CHECK(j.at("case") == "prime-square-divides-P");
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(run({"rho", "--poly", "1,0,1", "--prime", "6"}).code == kExitDomain);
  CHECK(run({"rho", "--poly", "1,0,1", "--prime", "5", "--bogus"}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"zeta", "--sigma", "1"}).code == kExitDomain);
  CHECK(run({"rho", "--poly", "1,0,1", "--prime", "1009", "--brute"}).code == kExitResource);
  CHECK(run({"count", "--poly", "1,x", "--x", "5"}).code == kExitDomain);
  CHECK(run({"experiment", "--config", "/nonexistent/config.json"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("constants JSON round-trips", "[cli]") {
  const auto r = run({"constants", "--prime-limit", "1000000", "--json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j.dump(2) + "\n" == r.out);
  CHECK(j.at("gamma0").get<double>() > 0.192);
  CHECK(j.at("gamma0").get<double>() < 0.193);
  CHECK(j.at("prime_limit") == 1000000);
}

TEST_CASE("count, eterm and csv output", "[cli]") {
  CHECK(run({"count", "--poly", "1,0,1", "--x", "100"}).out == "88\n");
  const auto e = nlohmann::json::parse(run({"eterm", "--poly", "1,0,1", "--x", "1000", "--json"}).out);
  CHECK(e.at("count") == "895");
  CHECK(std::fabs(e.at("E").get<double>() - (895 - 1000 * e.at("singular_series").get<double>())) < 1e-9);
  const auto z = run({"zeta", "--sigma", "2", "--format", "csv"});
  CHECK(z.out.rfind("sigma,t,re,im\n2.0,0.0,1.644934066848226", 0) == 0);
}

TEST_CASE("direct and Perron Cesaro sums agree within the printed tolerance", "[cli]") {
  const auto d = nlohmann::json::parse(run({"cesaro", "--x", "100", "--method", "direct", "--json"}).out);
  const auto p = nlohmann::json::parse(run({"cesaro", "--x", "100", "--method", "perron", "--T", "1000", "--json"}).out);
  CHECK(std::fabs(d.at("value").get<double>() - p.at("value").get<double>()) <= p.at("tolerance").get<double>());
  const auto a = nlohmann::json::parse(run({"cesaro", "--x", "100", "--method", "asymptotic", "--json"}).out);
  CHECK(std::fabs(a.at("value").get<double>() - d.at("value").get<double>()) < 10);
}

TEST_CASE("kernel subcommand", "[cli]") {
  const auto r = nlohmann::json::parse(run({"kernel", "--y", "10", "--T", "500", "--json"}).out);
  CHECK(std::fabs(r.at("value").get<double>() - 0.9) < 1e-4);
  CHECK(r.at("limit").get<double>() == Catch::Approx(0.9));
}

TEST_CASE("verify suites", "[cli]") {
  const auto r = run({"verify", "--suite", "local"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS pair density l=3 d=3") != std::string::npos);
  const auto a = run({"verify", "--suite", "analytic", "--json"});
  CHECK(a.code == kExitOk);
  CHECK(nlohmann::json::parse(a.out).at("pass") == true);
}

TEST_CASE("experiment output is byte-identical across thread counts", "[cli]") {
  const std::string cfg = "test_cli_config.json";
  {
    std::ofstream f(cfg);
    f << R"({"d": 3, "H": "1000000", "x": 10, "samples": 40, "master_seed": 7, "B": 1000, "L": 10000})";
  }
  const auto a = run({"experiment", "--config", cfg, "--out", "test_cli_a.json", "--csv", "test_cli_a.csv", "--threads", "1"});
  const auto b = run({"experiment", "--config", cfg, "--out", "test_cli_b.json", "--csv", "test_cli_a.csv", "--threads", "3"});
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  CHECK(slurp("test_cli_a.json") == slurp("test_cli_b.json"));
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(slurp("test_cli_a.json"));
  CHECK(j.at("samples_used") == 40);
  CHECK(j.at("config").at("H") == "1000000");
  CHECK(j.at("per_sample_csv_path") == "test_cli_a.csv");
  CHECK(!j.contains("wall_time"));
  const auto t = run({"experiment", "--config", cfg, "--samples", "2", "--timing", "--json"});
  CHECK(nlohmann::json::parse(t.out).contains("wall_time"));
  {
    std::ofstream f(cfg);
    f << R"({"d": 3, "seeds": 2})";
  }
  CHECK(run({"experiment", "--config", cfg}).code == kExitDomain);
  for (const char* p : {"test_cli_config.json", "test_cli_a.json", "test_cli_b.json", "test_cli_a.csv"}) std::remove(p);
}
