#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "puw/cli.hpp"

using namespace puw;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"puw"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) {
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("puw_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("compute near the small-scale limit") {
  const Run r = run({"compute", "--n", "3", "--m", "1", "--rho", "0.01"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["meta"]["command"] == "compute");
  CHECK(j["meta"]["version"] == kVersion);
  const json& res = j["result"];
  CHECK(std::abs(res["product"].get<double>() - 1.581) / 1.581 <= 1e-2);
  CHECK(res["bound"].get<double>() == 1.5);
  CHECK(res["limit_radicand"] == "5/2");
  CHECK(res["path_agreement"].get<double>() <= 1e-9);
  for (const char* key : {"n", "m", "rho", "var_space", "var_momentum", "product", "limit_value", "bound",
                          "path_agreement"}) {
    CHECK(res.contains(key));
  }
}

TEST_CASE("compute momentum variance spot value") {
  const Run r = run({"compute", "--n", "2", "--m", "1", "--rho", "0.05"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(json::parse(r.out)["result"]["var_momentum"].get<double>() - 2026.7) <= 5.0);
}

TEST_CASE("compute as csv") {
  const Run r = run({"compute", "--n", "4", "--m", "2", "--rho", "0.3", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].rfind("# puw ", 0) == 0);
  CHECK(ls[1] == "n,m,rho,var_space,var_momentum,product,limit_value,limit_radicand,bound,path_agreement");
  CHECK(split(ls[2]).size() == 10);
}

TEST_CASE("usage errors exit with 64") {
  const Run r = run({"compute", "--n", "1", "--m", "1", "--rho", "0.1"});
  CHECK(r.code == 64);
  CHECK(r.err.find("n must be ≥ 2") != std::string::npos);
  CHECK(run({"compute", "--n", "3", "--m", "1"}).code == 64);
  CHECK(run({"compute", "--n", "3", "--m", "1", "--rho", "abc"}).code == 64);
  CHECK(run({"compute", "--n", "3", "--m", "0", "--rho", "0.1"}).code == 64);
  CHECK(run({"compute", "--n", "3", "--m", "1", "--rho", "-0.1"}).code == 64);
  CHECK(run({"compute", "--n", "3", "--rho", "0.1", "--rel-tol", "0.1"}).code == 64);
  CHECK(run({"compute", "--n", "3", "--rho", "0.1", "--bogus"}).code == 64);
  CHECK(run({"frobnicate"}).code == 64);
  CHECK(run({}).code == 64);
  CHECK(run({"compute", "--n", "3", "--rho", "0.1", "--format", "xml"}).code == 64);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).out == std::string(kVersion) + "\n");
}

TEST_CASE("degenerate and truncation exit codes") {
  // every coefficient underflows to zero at this scale
  const Run degenerate = run({"compute", "--n", "3", "--m", "1", "--rho", "800"});
  CHECK(degenerate.code == 2);
  const Run truncated = run({"compute", "--n", "3", "--m", "1", "--rho", "0.01", "--max-terms", "20"});
  CHECK(truncated.code == 3);
}

TEST_CASE("sweep table") {
  const Run r = run({"sweep", "--n", "3", "--m", "1", "--rho-min", "0.01", "--rho-max", "0.2", "--steps", "8"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 10);
  CHECK(ls[0].rfind("# puw ", 0) == 0);
  CHECK(ls[1] == "rho,var_space,var_momentum,product,asymptotic_product,residual,status");
  std::vector<double> rho;
  std::vector<double> product;
  std::vector<double> residual;
  for (std::size_t i = 2; i < ls.size(); ++i) {
    const auto cells = split(ls[i]);
    REQUIRE(cells.size() == 7);
    CHECK(cells[6] == "ok");
    rho.push_back(std::stod(cells[0]));
    product.push_back(std::stod(cells[3]));
    residual.push_back(std::stod(cells[5]));
  }
  CHECK(rho.front() == doctest::Approx(0.01));
  CHECK(rho.back() == 0.2);
  for (std::size_t i = 1; i < rho.size(); ++i) {
    CHECK(rho[i] > rho[i - 1]);
    CHECK(product[i] > product[i - 1]);
    CHECK(rho[i] / rho[i - 1] == doctest::Approx(rho[1] / rho[0]));
  }
  CHECK(std::abs(product.front() - 1.5811) < 0.01);
  // |residual| ~ rho^2: log-log slope close to 2
  const double slope = std::log(std::abs(residual.back() / residual.front())) / std::log(rho.back() / rho.front());
  CHECK(slope > 1.7);
  CHECK(slope < 2.3);
}

TEST_CASE("sweep real fields carry 17 significant digits") {
  const Run r = run({"sweep", "--n", "5", "--m", "2", "--rho-min", "0.1", "--rho-max", "0.4", "--steps", "3"});
  REQUIRE(r.code == 0);
  const auto cells = split(lines(r.out)[3]);
  const std::string& v = cells[3];
  std::size_t digits = 0;
  for (char c : v.substr(0, v.find('e'))) {
    digits += (c >= '0' && c <= '9') ? 1 : 0;
  }
  CHECK(digits >= 16);
  CHECK(std::stod(v) == std::stod(v));
}

TEST_CASE("sweep rows with degenerate points carry a marker") {
  const Run r = run({"sweep", "--n", "3", "--m", "1", "--rho-min", "1", "--rho-max", "800", "--steps", "3"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(split(ls[2])[6] == "ok");
  CHECK(split(ls[4])[6] == "error:degenerate");
}

TEST_CASE("sweep validation and json output") {
  CHECK(run({"sweep", "--n", "3", "--m", "1", "--rho-min", "0.01", "--rho-max", "0.2", "--steps", "1"}).code == 64);
  CHECK(run({"sweep", "--n", "3", "--m", "1", "--rho-min", "0.2", "--rho-max", "0.01", "--steps", "4"}).code == 64);
  CHECK(run({"sweep", "--n", "3", "--rho-min", "0.01", "--rho-max", "0.2", "--steps", "4", "--expansion", "x"})
            .code == 64);
  const Run r = run({"sweep", "--n", "4", "--m", "2", "--rho-min", "0.01", "--rho-max", "0.2", "--steps", "4",
                     "--format", "json", "--expansion", "theorem"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["rows"].size() == 4);
  CHECK(j["expansion"]["source"] == "theorem");
  CHECK(j["expansion"]["slope"] == "6/175");
}

TEST_CASE("output is deterministic") {
  const auto args = {"sweep", "--n", "5", "--m", "2", "--rho-min", "0.05", "--rho-max", "0.5", "--steps", "5"};
  CHECK(run(args).out == run(args).out);
  const auto args2 = {"expand", "--n", "6", "--m", "2", "--target", "product", "--extra-terms", "1"};
  CHECK(run(args2).out == run(args2).out);
}

TEST_CASE("limits table") {
  const Run r = run({"limits", "--n", "5", "--m-max", "4"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["rows"].size() == 4);
  CHECK(j["minimizers"][0]["m_star"] == 2);
  CHECK(j["minimizers"][0]["radicand"] == "45/7");
  const Run csv = run({"limits", "--n-min", "3", "--n-max", "4", "--m-max", "2", "--format", "csv"});
  REQUIRE(csv.code == 0);
  const auto ls = lines(csv.out);
  REQUIRE(ls.size() == 6);
  CHECK(ls[1] == "n,m,radicand,value,is_minimizer");
  CHECK(ls[2].rfind("3,1,5/2,", 0) == 0);
  CHECK(run({"limits", "--n", "1"}).code == 64);
  CHECK(run({"limits", "--n-min", "6", "--n-max", "5"}).code == 64);
}

TEST_CASE("expand prints exact coefficients") {
  const Run f = run({"expand", "--target", "F", "--terms", "5"});
  REQUIRE(f.code == 0);
  const json jf = json::parse(f.out);
  std::vector<std::string> values;
  for (const auto& c : jf["series"]["coefficients"]) {
    values.push_back(c["value"]);
  }
  CHECK(values == std::vector<std::string>{"1/2", "1/2", "1/6", "0/1", "-1/90"});
  CHECK(jf["series"]["lo"] == -1);

  const Run a = run({"expand", "--n", "5", "--m", "1", "--target", "A"});
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["series"]["coefficients"][0]["value"] == "15/32");

  const Run u = run({"expand", "--n", "3", "--m", "2", "--target", "product"});
  REQUIRE(u.code == 0);
  const json ju = json::parse(u.out);
  CHECK(ju["product"]["radicand"] == "14/5");
  CHECK(ju["product"]["tail"]["coefficients"][1]["value"] == "1/6");

  const Run csv = run({"expand", "--n", "3", "--m", "1", "--target", "var_space", "--format", "csv"});
  REQUIRE(csv.code == 0);
  const auto ls = lines(csv.out);
  CHECK(ls[1] == "part,exponent,value");
  CHECK(ls[2] == "coefficient,2,1/3");
  CHECK(ls[3] == "coefficient,3,0/1");
  CHECK(ls[4] == "order,4,");

  CHECK(run({"expand", "--n", "3", "--target", "nope"}).code == 64);
  CHECK(run({"expand", "--n", "1", "--target", "s0"}).code == 64);
  CHECK(run({"expand", "--n", "4", "--m", "0", "--target", "sm"}).code == 0);
}

TEST_CASE("output files and the output directory variable") {
  const auto env_dir = fresh_dir("env");
  const auto flag_dir = fresh_dir("flag");
  ::setenv(kOutputDirEnv, env_dir.c_str(), 1);
  const Run to_env = run({"limits", "--n", "3", "--m-max", "2", "--output", "limits.json"});
  CHECK(to_env.code == 0);
  CHECK(to_env.out.empty());
  CHECK(std::filesystem::exists(env_dir / "limits.json"));
  const Run to_flag =
      run({"limits", "--n", "3", "--m-max", "2", "--output", "x.json", "--output-dir", flag_dir.c_str()});
  CHECK(to_flag.code == 0);
  CHECK(std::filesystem::exists(flag_dir / "x.json"));
  CHECK_FALSE(std::filesystem::exists(env_dir / "x.json"));
  CHECK(slurp(flag_dir / "x.json") == slurp(env_dir / "limits.json"));
  const Run dir_only = run({"limits", "--n", "3", "--m-max", "2", "--output-dir", flag_dir.c_str()});
  CHECK(dir_only.code == 0);
  CHECK(std::filesystem::exists(flag_dir / "limits.json"));
  ::unsetenv(kOutputDirEnv);
}

TEST_CASE("exit codes of the installed binary") {
  auto status = [](const std::string& args) {
    const int raw = std::system((std::string(PUW_BINARY) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("compute --n 1 --m 1 --rho 0.1") == 64);
  CHECK(status("compute --n 3 --m 1 --rho 0.1") == 0);
  CHECK(status("compute --n 3 --m 1 --rho 800") == 2);
  CHECK(status("compute --n 3 --m 1 --rho 0.01 --max-terms 20") == 3);
  CHECK(status("sweep --n 3 --m 1 --rho-min 0.01 --rho-max 0.2 --steps 1") == 64);
}
