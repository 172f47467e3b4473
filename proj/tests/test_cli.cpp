// End-to-end tests driving the built command-line binary.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/sha256.hpp"
#include "testutil.hpp"

using namespace splitreduc;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("splitreduc_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  const fs::path out_file = scratch_dir() / "stdout.txt";
  const std::string cmd = std::string(SPLITREDUC_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2> " +
                          (scratch_dir() / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

fs::path write_poly(const std::string& name, const std::string& text) {
  fs::path p = scratch_dir() / name;
  std::ofstream(p) << text << "\n";
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kDemoText = "1 + x1*x2*x5 + x1*x6*x7*x8 + x3*x4*x8 - x1*x3*x4";

}  // namespace

TEST_CASE("sha256 reference vector") {
  CHECK(tooling::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(tooling::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("cli split writes the leaf stream, summary and manifest") {
  fs::path input = write_poly("demo.poly", kDemoText);
  fs::path out = scratch_dir() / "split_out";
  RunResult r = run_cli("split " + input.string() +
                        " --qubits 8 --target-order 2 --allow-aux --out " +
                        out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("leaves:        3") != std::string::npos);

  auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary["leaf_count"] == 3);
  CHECK(summary["max_leaf_cost"] == 4);

  std::istringstream leaf_stream(slurp(out / "leaves.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(leaf_stream, line)) {
    auto doc = nlohmann::json::parse(line);
    CHECK(doc.contains("prefix"));
    auto [leaf_poly, table] = from_json(doc["polynomial"]);
    CHECK(leaf_poly.degree() <= 3);
    ++lines;
  }
  CHECK(lines == 3);

  auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["subcommand"] == "split");
  CHECK(manifest["inputs"][input.string()] ==
        tooling::sha256_hex(slurp(input)));
}

TEST_CASE("cli estimate emits the full report") {
  fs::path input = write_poly("demo2.poly", kDemoText);
  RunResult r = run_cli("estimate " + input.string() +
                        " --qubits 8 --allow-aux --json");
  REQUIRE(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["shortest_path"] == 1);
  CHECK(doc["longest_path"] == 2);
  CHECK(doc["refined_estimate"] == "3");
}

TEST_CASE("cli quadratize reports one auxiliary for the cubic") {
  fs::path input = write_poly("cubic.poly", "1 + x3*x4*x8");
  fs::path out = scratch_dir() / "quad_out";
  RunResult r =
      run_cli("quadratize " + input.string() + " --json --out " + out.string());
  REQUIRE(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["aux"].size() == 1);
  auto [reduced, table] = from_json(doc["reduced"]);
  CHECK(reduced.degree() <= 2);
  CHECK(fs::exists(out / "quadratized.json"));
}

TEST_CASE("cli ramsey gen emits a parseable objective") {
  fs::path out_file = scratch_dir() / "h42.poly";
  RunResult r = run_cli("ramsey gen 4 2 4 --out " + out_file.string());
  REQUIRE(r.exit_code == 0);
  auto [h, table] = parse(slurp(out_file));
  CHECK(named_equal(h, table, ramsey_hamiltonian({4, 2, 4}),
                    EdgeIndexer(4).make_symbols()));
  CHECK(fs::exists(out_file.string() + ".manifest.json"));
}

TEST_CASE("cli ramsey solve decides the triangle case") {
  RunResult r = run_cli("ramsey solve 3 3 --start 5 --max-N 6 --json");
  REQUIRE(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["ramsey_number"] == 6);
  CHECK(doc["evidence"]["5"]["min_energy"] == 0);
  CHECK(doc["evidence"]["6"]["min_energy"] == 2);
}

TEST_CASE("cli solve with minimizer counting") {
  fs::path input = write_poly("leaf.poly", "2 - a27 - a28 + a27*a28");
  RunResult r = run_cli("solve " + input.string() + " --count-minima --json");
  REQUIRE(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["min_energy"] == 1);
  CHECK(doc["num_minima"] == 3);
  CHECK(doc["witness"]["a27"] == 1);
  CHECK(doc["witness"]["a28"] == 0);
}

TEST_CASE("cli replay reproduces primary outputs byte for byte") {
  fs::path input = write_poly("replay_demo.poly", kDemoText);
  fs::path out1 = scratch_dir() / "replay_a";
  fs::path out2 = scratch_dir() / "replay_b";
  REQUIRE(run_cli("split " + input.string() +
                  " --qubits 8 --allow-aux --out " + out1.string())
              .exit_code == 0);
  REQUIRE(run_cli("replay " + (out1 / "manifest.json").string() + " --out " +
                  out2.string())
              .exit_code == 0);
  CHECK(slurp(out1 / "leaves.jsonl") == slurp(out2 / "leaves.jsonl"));
  CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));
}

TEST_CASE("cli replay refuses a changed input") {
  fs::path input = write_poly("mutating.poly", kDemoText);
  fs::path out = scratch_dir() / "replay_c";
  REQUIRE(run_cli("split " + input.string() + " --qubits 8 --allow-aux --out " +
                  out.string())
              .exit_code == 0);
  std::ofstream(input) << "x1 + x2\n";
  CHECK(run_cli("replay " + (out / "manifest.json").string()).exit_code == 1);
}

TEST_CASE("cli reports errors with a nonzero exit code") {
  CHECK(run_cli("split /nonexistent.poly").exit_code == 1);
  fs::path bad = write_poly("bad.poly", "1 ++ x1");
  CHECK(run_cli("split " + bad.string()).exit_code == 1);
  fs::path cubic = write_poly("cubic2.poly", "x1*x2*x3");
  CHECK(run_cli("quadratize " + cubic.string() + " --target-order 1")
            .exit_code == 1);
}

TEST_CASE("cli split with a seed still covers the space") {
  fs::path input = write_poly("seeded.poly", kDemoText);
  RunResult r = run_cli("split " + input.string() +
                        " --qubits 8 --allow-aux --seed 7 --json");
  REQUIRE(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["leaf_count"].get<int>() >= 2);
}
