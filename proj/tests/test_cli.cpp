#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>
#include <sys/wait.h>

#include "helpers.hpp"

#ifndef VARFACTOR_CLI
#error "VARFACTOR_CLI must name the command-line binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& input = "") {
  std::string cmd = std::string("'") + VARFACTOR_CLI + "' " + args + " 2>/dev/null";
  if (!input.empty()) cmd = "printf '%s' '" + input + "' | " + cmd;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("cli recover") {
  auto r = run("recover --value 0.6667 --bound 3");
  CHECK(r.code == 0);
  CHECK(r.out == "2/3\n");
  r = run("recover --value 5 --bound 2");
  CHECK(r.code == 0);
  CHECK(r.out == "5\n");
  CHECK(run("recover --value 0.70 --bound 3").code == 2);
  CHECK(run("recover --value 0.5 --bound 1").code == 1);
  CHECK(run("recover --value nope --bound 3").code == 1);
}

TEST_CASE("cli factor json") {
  const auto r = run("factor --vars x --format json -", "x^2 - 1/4");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["input"] == "x^2 - 1/4");
  CHECK(j["unit"] == "1");
  CHECK(j["factors"] == nlohmann::json::array({"x - 1/2", "x + 1/2"}));
  CHECK(j["complete"] == true);
  CHECK(j["diagnostics"]["L"] == 4);
  CHECK(j["diagnostics"]["seed"] == 0xC0FFEE);
  CHECK(j["diagnostics"]["time_ms"] == 0);
  CHECK(j["diagnostics"]["residuals"].size() == 2);
  CHECK(j["diagnostics"]["precision_bits"].get<int>() >= 256);
}

TEST_CASE("cli factor reads files and round-trips") {
  const std::string path = "cli_input.txt";
  std::ofstream(path) << "6*x*y - 3/2*x + 4*y - 1\n";  // (3/2 x + 1)(4 y - 1)
  const auto r = run("factor --vars x,y --format json " + path);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const std::vector<std::string> xy{"x", "y"};
  varfactor::RationalPolynomial prod = varfactor::parse_poly(j["unit"].get<std::string>(), xy);
  for (const auto& s : j["factors"]) prod = prod * varfactor::parse_poly(s.get<std::string>(), xy);
  CHECK(prod == varfactor::parse_poly("6*x*y - 3/2*x + 4*y - 1", xy));
  std::remove(path.c_str());
}

TEST_CASE("cli factor exit codes") {
  CHECK(run("factor --vars x -", "x^^2").code == 1);
  CHECK(run("factor --vars x -", "x^2 + 2*x + 1").code == 1);
  CHECK(run("factor --vars x missing_file.txt").code == 1);
  CHECK(run("factor --vars x,y -", "x^2 + y^2 + 1").code == 0);
  CHECK(run("factor --vars x,y --max-factor-degree 1 -", "x^3 + y^2 + 1").code == 2);
  const auto text = run("factor --vars x,y -", "x^2 + y^2 + 1");
  CHECK(text.out.find("x^2 + y^2 + 1") != std::string::npos);
}

TEST_CASE("cli timing flag") {
  const auto r = run("factor --vars x --format json --timing -", "x^2 - 1/4");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["diagnostics"]["time_ms"].is_number_integer());
}

TEST_CASE("cli bench") {
  auto r = run("bench --nvars 1 --nfactors 2 --factor-degree 1 --denom-max 4 --trials 5 --format json");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["success_rate"] == 1.0);
  CHECK(j["trials"].size() == 5);
  r = run("bench --nvars 2 --nfactors 2 --factor-degree 1 --denom-max 4 --trials 0");
  CHECK(r.code == 0);
  CHECK(run("bench --nvars 0 --nfactors 2 --factor-degree 1 --denom-max 4 --trials 1").code == 1);
}
