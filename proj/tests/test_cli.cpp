#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::path(VARLEX_TEST_WORKDIR) / "cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

Run cli(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  fs::path err = work_dir() / "stderr.txt";
  std::string cmd = std::string("cd '") + work_dir().string() + "' && '" + VARLEX_CLI + "' " +
                    args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    n += c == '\n';
  return n;
}

} // namespace

TEST_CASE("gen and rearrange") {
  Run g = cli("gen --gen const:3 -o c3.json");
  REQUIRE(g.code == 0);
  Run r = cli("rearrange c3.json -o c3s.json");
  CHECK(r.code == 0);
  CHECK(r.err.find("equimeasurable with input: yes") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(work_dir() / "c3s.json")) ==
        nlohmann::json::parse(slurp(work_dir() / "c3.json")));

  write(work_dir() / "two.json", R"({"breakpoints": [0, 0.25, 1], "values": [1, 5]})");
  Run s = cli("rearrange two.json");
  REQUIRE(s.code == 0);
  auto j = nlohmann::json::parse(s.out);
  CHECK(j["breakpoints"] == nlohmann::json::array({0.0, 0.75, 1.0}));
  CHECK(j["values"] == nlohmann::json::array({5.0, 1.0}));

  CHECK(cli("rearrange missing.json").code == 2);
  write(work_dir() / "bad.json", "{\"breakpoints\": [0, 1]");
  CHECK(cli("rearrange bad.json").code == 2);
  write(work_dir() / "unsorted.json", R"({"breakpoints": [0, 0.6, 0.4, 1], "values": [1, 2, 3]})");
  CHECK(cli("rearrange unsorted.json").code == 2);
  CHECK(cli("rearrange --gen bogus").code == 2);
  CHECK(cli("frobnicate").code == 2);
}

TEST_CASE("norm") {
  write(work_dir() / "quarter.json", R"({"breakpoints": [0, 0.25, 1], "values": [1, 0]})");
  Run r = cli("norm quarter.json --exponent-gen const:2 -o norms.json");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(slurp(work_dir() / "norms.json"));
  CHECK(std::abs(j["luxemburg"]["value"].get<double>() - 0.5) <= 1e-9);
  CHECK(j["sup_log_ratio"].get<double>() == doctest::Approx(1.0 / (1.0 + std::log(4.0))));
  CHECK(j.contains("orlicz_exp"));
  CHECK(j.contains("marcinkiewicz_ln"));
  CHECK(cli("norm quarter.json --kind luxemburg").code == 2);
}

TEST_CASE("diagnose verdicts") {
  Run log = cli("diagnose --gen log --depth 40 --base 2.718281828459045 -o log_diag.json");
  REQUIRE(log.code == 0);
  CHECK(log.out.find("finite-depth verdict: limsup condition witnessed") != std::string::npos);
  auto j = nlohmann::json::parse(slurp(work_dir() / "log_diag.json"));
  CHECK(j["deepest_tail"].get<double>() >= 0.9);
  CHECK(j["exp_integral"][2]["verdict"] == "divergent");

  Run one = cli("diagnose --gen const:1");
  REQUIRE(one.code == 0);
  CHECK(one.out.find("finite-depth verdict: not witnessed") != std::string::npos);

  Run sq = cli("diagnose --gen sqrtlog --base 100");
  REQUIRE(sq.code == 0);
  CHECK(sq.out.find("c=100: convergent") != std::string::npos);
  Run strict = cli("diagnose --gen sqrtlog --delta 0.2");
  REQUIRE(strict.code == 0);
  CHECK(strict.out.find("not witnessed") != std::string::npos);

  CHECK(cli("diagnose bad.json").code == 2);
}

TEST_CASE("construct and scan") {
  Run c = cli("construct --gen log --n 2 -o trace.json --phat phat.json");
  REQUIRE(c.code == 0);
  CHECK(c.out.find("[FAIL]") == std::string::npos);
  CHECK(c.out.find("[PASS] equimeasurable_p_hat") != std::string::npos);
  auto trace = nlohmann::json::parse(slurp(work_dir() / "trace.json"));
  CHECK(trace["passed"] == true);
  CHECK(trace["stage_count"].get<int>() >= 8);
  CHECK(fs::exists(work_dir() / "phat.json"));

  REQUIRE(cli("construct --gen log --n 2 -o trace2.json").code == 0);
  CHECK(slurp(work_dir() / "trace.json") == slurp(work_dir() / "trace2.json"));

  Run flat = cli("construct --gen const:1 -o flat.json");
  CHECK(flat.code == 4);
  CHECK(flat.err.find("not witnessed") != std::string::npos);
  CHECK_FALSE(fs::exists(work_dir() / "flat.json"));
  CHECK(cli("construct --gen log --d 0.5 --c 2 -o low.json").code == 2);

  Run s = cli("scan trace.json --max-level 4 -o scan.json --csv scan.csv");
  REQUIRE(s.code == 0);
  std::string csv = slurp(work_dir() / "scan.csv");
  CHECK(count_lines(csv) == 1 + 5);
  auto report = nlohmann::json::parse(slurp(work_dir() / "scan.json"));
  double floor_c = 1.0 / trace["c"].get<double>();
  for (const auto& lv : report["levels"]) {
    if (lv["within_coverage"].get<bool>())
      CHECK(lv["min_norm"].get<double>() >= floor_c);
  }
  CHECK(s.out.find("1/c = ") != std::string::npos);

  REQUIRE(cli("gen --gen const:2 --depth 4 -o c2.json").code == 0);
  Run k = cli("scan --profile c2.json --n 2 --max-level 5 --csv c2.csv");
  REQUIRE(k.code == 0);
  std::istringstream rows(slurp(work_dir() / "c2.csv"));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "level,min_norm,argmin_index");
  for (int m = 0; m <= 5; ++m) {
    REQUIRE(std::getline(rows, line));
    double v = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(v - std::ldexp(1.0, -m)) <= 1e-9);
  }

  Run clamp = cli("scan --profile c2.json --n 2 --bits 3 --max-level 6 --csv clamp.csv");
  CHECK(clamp.code == 0);
  CHECK(clamp.err.find("warning") != std::string::npos);
  CHECK(count_lines(slurp(work_dir() / "clamp.csv")) == 1 + 4);

  CHECK(cli("scan missing_trace.json").code == 2);
}
