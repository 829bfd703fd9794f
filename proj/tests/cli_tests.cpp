// End-to-end checks of the ctmlab executable: exit codes, report formats,
// and seed-for-seed reproducibility. Everything runs through std::system so
// the contract under test is exactly what a shell user sees.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(CTMLAB_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "ctm-cli-tests" / name;
  std::error_code ec;
  fs::remove_all(p, ec);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string config(const std::string& name) {
  return (fs::path(CONFIG_DIR) / name).string();
}

int count_of(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (std::size_t at = hay.find(needle); at != std::string::npos;
       at = hay.find(needle, at + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("passing config exits zero and writes a seeded report") {
  const auto dir = fresh_dir("markov-pass");
  const int rc = run_cli("markov-check --config " + config("markov-slabs-cut.json") +
                             " --out " + dir.string(),
                         dir / "log.txt");
  CHECK(rc == 0);
  const std::string csv = slurp(dir / "slabs-cut.csv");
  CHECK(csv.find("# ctmlab markov-check slabs-cut") != std::string::npos);
  CHECK(csv.find("# seed 12345") != std::string::npos);
  CHECK(csv.find("slabs-cut,separated,1,1,pass") != std::string::npos);
  CHECK(csv.find(",markov_residual,") != std::string::npos);
  CHECK(count_of(csv, ",fail") == 0);
}

TEST_CASE("failed tolerance exits one and marks the row") {
  const auto dir = fresh_dir("markov-leaky");
  // the cut stops two columns short of the right edge, so the slabs stay
  // connected around it and the residual is far above tolerance
  spit(dir / "leaky.json", R"({
    "id": "leaky",
    "kind": "markov-check",
    "lattice": {"dim": 2, "shape": [17, 17], "spacing": [0.5, 0.5], "origin": [-4, -4]},
    "metric": {"family": "flat"},
    "mass": 1.0,
    "tolerance": 1e-8,
    "regions": {
      "a":   {"kind": "halfplane", "axis": 0, "side": -1, "value": -1.0},
      "cut": {"kind": "rect", "lo": [-0.2, -9.0], "hi": [0.2, 3.2]},
      "b":   {"kind": "halfplane", "axis": 0, "side": 1, "value": 1.0}
    }
  })");
  const int rc = run_cli("markov-check --config " + (dir / "leaky.json").string() +
                             " --out " + dir.string(),
                         dir / "log.txt");
  CHECK(rc == 1);
  const std::string csv = slurp(dir / "leaky.csv");
  CHECK(csv.find("leaky,separated,0,1,fail") != std::string::npos);
  CHECK(csv.find(",markov_residual,") != std::string::npos);
}

TEST_CASE("configuration problems exit two") {
  const auto dir = fresh_dir("config-errors");

  SUBCASE("referenced curve file missing") {
    spit(dir / "bad-curve.json", R"({
      "id": "bad-curve",
      "kind": "decouple",
      "lattice": {"dim": 2, "shape": [17, 17], "spacing": [0.5, 0.5], "origin": [-4, -4]},
      "metric": {"family": "flat"},
      "mass": 1.0,
      "curve_file": "./nope.curve",
      "rotation": 0.0,
      "l1": {"kind": "original_boxes", "boxes": [{"t": [-9, -1], "x": [-9, 9]}]},
      "l2": {"kind": "original_boxes", "boxes": [{"t": [1, 9], "x": [-9, 9]}]}
    })");
    const int rc = run_cli("decouple --config " + (dir / "bad-curve.json").string() +
                               " --out " + dir.string(),
                           dir / "log.txt");
    CHECK(rc == 2);
    CHECK(slurp(dir / "log.txt").find("referenced file missing") != std::string::npos);
  }

  SUBCASE("config kind does not match the subcommand") {
    const int rc = run_cli("markov-check --config " + config("transfer-flat.json") +
                               " --out " + dir.string(),
                           dir / "log.txt");
    CHECK(rc == 2);
  }

  SUBCASE("malformed JSON") {
    spit(dir / "broken.json", "{ this is not json\n");
    const int rc = run_cli("markov-check --config " + (dir / "broken.json").string() +
                               " --out " + dir.string(),
                           dir / "log.txt");
    CHECK(rc == 2);
  }

  SUBCASE("output directory cannot be created") {
    spit(dir / "plug.txt", "occupied\n");
    const int rc = run_cli("markov-check --config " + config("markov-slabs-cut.json") +
                               " --out " + (dir / "plug.txt" / "sub").string(),
                           dir / "log.txt");
    CHECK(rc == 2);
  }
}

TEST_CASE("numeric breakdown exits three") {
  const auto dir = fresh_dir("numeric-error");
  // sixteen slices of anisotropic shrinkage push the transfer spectrum below
  // the relative floor, which the generator extraction treats as fatal
  spit(dir / "subfloor.json", R"({
    "id": "subfloor",
    "kind": "spectrum",
    "lattice": {"dim": 2, "shape": [33, 33], "spacing": [0.125, 0.125], "origin": [-2, -2]},
    "metric": {"family": "diagonal", "diag": [0.25, 1.0]},
    "mass": 2.0,
    "step": 16
  })");
  const int rc = run_cli("spectrum --config " + (dir / "subfloor.json").string() +
                             " --out " + dir.string(),
                         dir / "log.txt");
  CHECK(rc == 3);
  CHECK(slurp(dir / "log.txt").find("below relative floor") != std::string::npos);
}

TEST_CASE("transfer report format is stable") {
  const auto dir = fresh_dir("transfer-format");
  const int rc = run_cli("transfer --config " + config("transfer-flat.json") +
                             " --out " + dir.string(),
                         dir / "log.txt");
  CHECK(rc == 0);
  const std::string csv = slurp(dir / "transfer-flat.csv");
  CHECK(csv.find("tau,norm,rate,omega_max,min_re_spectrum,symmetry_residual\n") !=
        std::string::npos);
  // 17 significant digits, value pinned by the fixed seed
  CHECK(csv.find("0.53301586688990377") != std::string::npos);
  const std::string svg = slurp(dir / "transfer-flat.svg");
  CHECK(svg.find("<svg") != std::string::npos);
}

TEST_CASE("green report lists every site per source") {
  const auto dir = fresh_dir("green-run");
  const int rc = run_cli("green --config " + config("green-strip.json") + " --out " +
                             dir.string(),
                         dir / "log.txt");
  CHECK(rc == 0);
  const std::string csv = slurp(dir / "green-strip.csv");
  CHECK(csv.find("source,site,t,x,y,value\n") != std::string::npos);
  CHECK(count_of(csv, "\n") == 189 + 3);  // 21x9 sites + two comments + header
}

TEST_CASE("same seed reproduces reports byte for byte") {
  const auto a = fresh_dir("repro-a");
  const auto b = fresh_dir("repro-b");
  const std::string base = "markov-check --config " + config("markov-slabs-cut.json");
  CHECK(run_cli(base + " --out " + a.string(), a / "log.txt") == 0);
  CHECK(run_cli(base + " --out " + b.string(), b / "log.txt") == 0);
  const std::string first = slurp(a / "slabs-cut.csv");
  CHECK(!first.empty());
  CHECK(first == slurp(b / "slabs-cut.csv"));

  const auto c = fresh_dir("repro-c");
  CHECK(run_cli(base + " --seed 999 --out " + c.string(), c / "log.txt") == 0);
  const std::string reseeded = slurp(c / "slabs-cut.csv");
  CHECK(reseeded.find("# seed 999") != std::string::npos);
  CHECK(first != reseeded);
}

TEST_CASE("verify-all isolates a corrupted metric table") {
  const auto dir = fresh_dir("verify-corrupt");
  const fs::path data = dir / "data";
  fs::copy(DATA_DIR, data, fs::copy_options::recursive);
  spit(data / "tab9.metric", "2 9 9\n1.0,0,1.0\n0.5\n");
  spit(dir / "suite.json", "{\"data_dir\": \"" + data.string() + "\"}\n");

  const int rc = run_cli("verify-all --tier small --seed 777 --config " +
                             (dir / "suite.json").string() + " --out " + dir.string(),
                         dir / "log.txt");
  CHECK(rc == 1);
  const std::string csv = slurp(dir / "verify.csv");
  CHECK(count_of(csv, ",fail") == 6);          // exactly the six tab9 rows
  CHECK(count_of(csv, "c7.tab9,") == 6);
  CHECK(csv.find("c7.tab9,kernel,nan,") != std::string::npos);
  CHECK(csv.find("c1.flat24.thin,markov_residual") != std::string::npos);
  CHECK(csv.find("c7.flat10,kernel,") != std::string::npos);
  const std::string log = slurp(dir / "log.txt");
  CHECK(log.find("fewer than 3 entries") != std::string::npos);
  CHECK(log.find("verify-all: 6 row(s) failed") != std::string::npos);
}

TEST_SUITE_END();
