#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using Catch::Approx;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const char* cli = std::getenv("GME_CLI");
  REQUIRE(cli != nullptr);
  const std::string cmd = env_prefix + std::string(cli) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gme-cli-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("cli eval") {
  SECTION("W state anchors, JSON route") {
    const auto r = run_cli("eval --coeffs 0.5773502691896258,0.5773502691896258,0.5773502691896258,0 --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["lambda_max_sq"].get<double>() == Approx(4.0 / 9.0).margin(1e-12));
    CHECK(doc["regime"] == "ConvexQuadrangle");
    CHECK(doc["manifest"]["command"] == "eval");
    CHECK(doc["lagrange"]["lambda1"].get<double>() == Approx(2.0 / 3.0).margin(1e-12));
  }
  SECTION("shared diagonal point") {
    const auto r = run_cli("eval --coeffs 0.5,0.5,0.5,0.5 --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["lambda_max_sq"].get<double>() == 0.5);
    CHECK(doc["regime"] == "SharedDiagonal");
  }
  SECTION("product state") {
    const auto r = run_cli("eval --coeffs 1,0,0,0 --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["lambda_max_sq"].get<double>() == Approx(1.0));
    CHECK(doc["geometric_measure"].get<double>() == Approx(0.0).margin(1e-15));
  }
  SECTION("text route mentions the key fields") {
    const auto r = run_cli("eval --coeffs 1,0,0,0");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("lambda_max_sq") != std::string::npos);
    CHECK(r.out.find("regime") != std::string::npos);
    CHECK(r.out.find("overlap_residual") != std::string::npos);
  }
  SECTION("invalid coefficients: exit 2 and error object") {
    const auto r = run_cli("eval --coeffs 1,1,1,1 --json");
    CHECK(r.exit_code == 2);
    const json doc = json::parse(r.out);
    CHECK(doc["error"]["code"] == "invalid_input");
  }
  SECTION("negative coefficients: exit 2") {
    CHECK(run_cli("eval --coeffs 1,0,0,-1").exit_code == 2);
  }
  SECTION("--renormalize accepts directions") {
    const auto r = run_cli("eval --coeffs 2,2,2,2 --renormalize --json");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["lambda_max_sq"].get<double>() == 0.5);
  }
  SECTION("usage errors exit 2") {
    CHECK(run_cli("eval").exit_code == 2);
    CHECK(run_cli("eval --coeffs 1,0,0").exit_code == 2);
    CHECK(run_cli("bogus").exit_code == 2);
  }
}

TEST_CASE("cli sweep") {
  TempDir tmp;
  const fs::path out = tmp.path / "curve.csv";

  SECTION("row count, header, transitions") {
    const auto r = run_cli("sweep --family a=b=c --param d --range 0:1 --steps 101 --out " +
                           out.string());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(out);
    CHECK(count_lines(csv) == 102);  // header + 101 rows
    CHECK(csv.rfind("param_value,a,b,c,d,lambda_max_sq,regime,transition\n", 0) == 0);
    CHECK(csv.find("SharedDiagonal") != std::string::npos);
    CHECK(csv.find(",1\n") != std::string::npos);  // at least one flagged transition
    CHECK(fs::exists(tmp.path / "curve.csv.manifest.json"));
    const json manifest = json::parse(slurp(tmp.path / "curve.csv.manifest.json"));
    CHECK(manifest["command"] == "sweep");
    CHECK(manifest["options"]["steps"] == 101);
    CHECK(!fs::exists(out.string() + ".tmp"));
  }
  SECTION("single row") {
    const auto r = run_cli("sweep --family a=b=c --param d --range 0.3:0.9 --steps 1 --out " +
                           out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(count_lines(slurp(out)) == 2);
  }
  SECTION("deterministic output bytes, seed from flag or environment") {
    const fs::path out2 = tmp.path / "curve2.csv";
    const fs::path out3 = tmp.path / "curve3.csv";
    const std::string tail = " --param d --range 0.4:0.6 --steps 7 --with-oracle";
    REQUIRE(run_cli("sweep --family a=b=c" + tail + " --seed 7 --out " + out.string()).exit_code == 0);
    REQUIRE(run_cli("sweep --family a=b=c" + tail + " --seed 7 --out " + out2.string()).exit_code == 0);
    REQUIRE(run_cli("sweep --family a=b=c" + tail + " --seed 9 --out " + out3.string(),
                    "GME_SEED=7 ")
                .exit_code == 0);
    CHECK(slurp(out) == slurp(out2));
    CHECK(slurp(out) != slurp(out3));  // flag wins over environment
    const fs::path out4 = tmp.path / "curve4.csv";
    REQUIRE(run_cli("sweep --family a=b=c" + tail + " --out " + out4.string(), "GME_SEED=7 ")
                .exit_code == 0);
    CHECK(slurp(out) == slurp(out4));  // environment supplies the default
  }
  SECTION("oracle column stays near the analytic one") {
    REQUIRE(run_cli("sweep --family a=b=c --param d --range 0:0.9 --steps 10 --with-oracle "
                    "--seed 5 --out " + out.string()).exit_code == 0);
    std::istringstream csv(slurp(out));
    std::string line;
    std::getline(csv, line);  // header
    CHECK(line == "param_value,a,b,c,d,lambda_max_sq,regime,transition,oracle_lambda_sq");
    while (std::getline(csv, line)) {
      std::istringstream row(line);
      std::vector<std::string> fields;
      std::string field;
      while (std::getline(row, field, ',')) fields.push_back(field);
      REQUIRE(fields.size() == 9);
      const double analytic = std::stod(fields[5]);
      const double oracle = std::stod(fields[8]);
      CHECK(oracle == Approx(analytic).margin(1e-8));
    }
  }
  SECTION("bad specs exit 2, no partial file") {
    CHECK(run_cli("sweep --family b=c --param d --range 0:1 --steps 5 --out " + out.string())
              .exit_code == 2);
    CHECK(run_cli("sweep --family a=b=c --param d --range 0-1 --steps 5 --out " + out.string())
              .exit_code == 2);
    CHECK(run_cli("sweep --family a=b=c --param d --range 0:2 --steps 5 --out " + out.string())
              .exit_code == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(out.string() + ".tmp"));
  }
}

TEST_CASE("cli validate") {
  SECTION("normal tolerance passes with exit 0") {
    const auto r = run_cli("validate --samples 40 --seed 7 --tol 1e-8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("exceedances        0") != std::string::npos);
    CHECK(r.out.find("max_abs_deviation") != std::string::npos);
    CHECK(r.out.find("worst_case") != std::string::npos);
  }
  SECTION("absurd tolerance reports exceedances with exit 1") {
    const auto r = run_cli("validate --samples 40 --seed 7 --tol 1e-16");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("exceedances        0\n") == std::string::npos);
  }
}

TEST_CASE("cli surface") {
  TempDir tmp;
  SECTION("r0 emits the constant half") {
    const fs::path out = tmp.path / "r0.csv";
    REQUIRE(run_cli("surface --which r0 --samples 60 --seed 3 --out " + out.string()).exit_code == 0);
    std::istringstream csv(slurp(out));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "a,b,c,d,lambda_max_sq,regime");
    int rows = 0;
    while (std::getline(csv, line)) {
      ++rows;
      CHECK(line.find(",0.5,SharedDiagonal") != std::string::npos);
    }
    CHECK(rows == 60);
    const json manifest = json::parse(slurp(tmp.path / "r0.csv.manifest.json"));
    CHECK(manifest["options"]["skipped_rays"] == 0);
  }
  SECTION("shared stays within the narrow interval") {
    const fs::path out = tmp.path / "shared.csv";
    REQUIRE(run_cli("surface --which shared --samples 80 --seed 3 --out " + out.string())
                .exit_code == 0);
    std::istringstream csv(slurp(out));
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
      std::istringstream row(line);
      std::string field;
      for (int i = 0; i < 5; ++i) std::getline(row, field, ',');
      const double v = std::stod(field);
      CHECK(v >= 0.5 - 1e-9);
      CHECK(v <= 4.0 / 7.0 + 1e-9);
    }
  }
  SECTION("unknown surface exits 2") {
    CHECK(run_cli("surface --which nope --samples 5 --seed 1 --out /tmp/x.csv").exit_code == 2);
  }
}
