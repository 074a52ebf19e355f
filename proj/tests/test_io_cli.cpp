#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/io.hpp"

using namespace mixlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = lab::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mixlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const json kExample = json::parse(R"({
  "alpha": 0.6180339887498949, "beta": 0.25, "degree_y": 1, "real": true,
  "coeffs": [{"m": 0, "k": 0, "re": 2.0, "im": 0.0},
             {"m": 3, "k": 1, "re": 0.1, "im": -0.5},
             {"m": -3, "k": -1, "re": 0.1, "im": 0.5}]})");

}  // namespace

TEST_CASE("roof files round trip") {
  const io::RoofFile r = io::roof_from_json(kExample);
  CHECK(r.alpha == 0.6180339887498949);
  CHECK(r.beta == 0.25);
  CHECK(r.phi.coefficient(3, 1) == Complex(0.1, -0.5));
  CHECK(r.phi.coefficient(-3, -1) == Complex(0.1, 0.5));
  const io::RoofFile back = io::roof_from_json(io::roof_to_json(r));
  CHECK(back.alpha == r.alpha);
  CHECK(back.beta == r.beta);
  for (int k = -1; k <= 1; ++k)
    for (int m = -3; m <= 3; ++m) CHECK(back.phi.coefficient(m, k) == r.phi.coefficient(m, k));
}

TEST_CASE("roof files are validated") {
  json missing_pair = kExample;
  missing_pair["coeffs"].erase(2);
  CHECK_THROWS_AS(io::roof_from_json(missing_pair), ValidationError);
  json extra = kExample;
  extra["gamma"] = 1.0;
  CHECK_THROWS_AS(io::roof_from_json(extra), ValidationError);
  json bad_alpha = kExample;
  bad_alpha["alpha"] = 1.5;
  CHECK_THROWS_AS(io::roof_from_json(bad_alpha), ValidationError);
  json bad_k = kExample;
  bad_k["coeffs"][1]["k"] = 2;
  CHECK_THROWS_AS(io::roof_from_json(bad_k), ValidationError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 2.0}) {
    const std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
  std::ostringstream csv;
  io::write_csv(csv, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
  CHECK(csv.str() == "a,b\n1,2\n3,4\n");
}

TEST_CASE("cli: classification and exit codes") {
  const Outcome m = cli({"classify", "--roof", "example1.json"});
  CHECK(m.code == 0);
  CHECK(m.out.rfind("mixing", 0) == 0);
  const Outcome t = cli({"classify", "--roof", "coboundary.json"});
  CHECK(t.code == 0);
  CHECK(t.out.rfind("trivial", 0) == 0);
  const Outcome c = cli({"classify", "--roof", "constant.json"});
  CHECK(c.out.rfind("trivial", 0) == 0);

  CHECK(cli({"solve", "--roof", "coboundary.json"}).code == 0);
  CHECK(cli({"solve", "--roof", "example1.json"}).code == 3);
  CHECK(cli({"classify", "--roof", "no-such-roof.json"}).code == 2);
  CHECK(cli({"stretch", "--C", "-1"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"classify", "--bogus", "1"}).code == 2);
}

TEST_CASE("cli: config files") {
  const fs::path dir = scratch("config");
  {
    std::ofstream(dir / "ok.json") << R"({"roof": "coboundary.json"})";
    std::ofstream(dir / "bad.json") << R"({"roof": "coboundary.json", "colour": 3})";
  }
  const Outcome ok = cli({"classify", "--config", (dir / "ok.json").string()});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("trivial", 0) == 0);
  // Command-line flags take precedence over the file.
  const Outcome over =
      cli({"classify", "--config", (dir / "ok.json").string(), "--roof", "example2.json"});
  CHECK(over.out.rfind("mixing", 0) == 0);
  CHECK(cli({"classify", "--config", (dir / "bad.json").string()}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("cli: outputs are identical for every worker count") {
  const std::vector<std::vector<std::string>> runs = {
      {"correlate", "--roof", "example1.json", "--t", "0,50", "--samples", "20000"},
      {"hitting", "--roof", "example1.json", "--t", "100"},
      {"weyl", "--roof", "example1.json", "--levels", "5,8", "--grid", "128"},
      {"stretch", "--roof", "example1.json", "--n", "10,100", "--grid", "256"}};
  for (const auto& base : runs) {
    std::vector<std::string> reference_files;
    std::map<std::string, std::string> reference;
    for (const std::string workers : {"1", "4", "16"}) {
      const fs::path dir = scratch("workers_" + base[0] + "_" + workers);
      std::vector<std::string> args = base;
      args.insert(args.end(), {"--workers", workers, "--out", dir.string()});
      REQUIRE(cli(args).code == 0);
      std::map<std::string, std::string> files;
      for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name == "run.json") continue;
        files[name] = slurp(e.path());
      }
      CHECK(fs::exists(dir / "run.json"));
      const json run = json::parse(slurp(dir / "run.json"));
      CHECK(run.at("config").at("workers") == std::stoi(workers));
      if (reference.empty()) {
        reference = files;
        CHECK(!reference.empty());
      } else {
        CHECK(files == reference);
      }
      fs::remove_all(dir);
    }
  }
}
