#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "smfdfa_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI with stdout/stderr captured to files; returns the exit code.
int run(const std::string& args, std::string* err = nullptr) {
  const auto out = workdir() / "stdout.txt";
  const auto errfile = workdir() / "stderr.txt";
  const std::string cmd = std::string("\"") + SMFDFA_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          errfile.string() + "\"";
  const int status = std::system(cmd.c_str());
  if (err != nullptr) {
    std::ifstream in(errfile);
    *err = {std::istreambuf_iterator<char>(in), {}};
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("synth is deterministic") {
  const auto a = workdir() / "fgn_a.csv";
  const auto b = workdir() / "fgn_b.csv";
  REQUIRE(run("synth fgn --hurst 0.7 --length 4096 --seed 5 --out " + q(a)) == 0);
  REQUIRE(run("synth fgn --hurst 0.7 --length 4096 --seed 5 --out " + q(b)) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(fs::exists(a.string() + ".manifest.json"));
  const auto manifest = nlohmann::json::parse(slurp(a.string() + ".manifest.json"));
  CHECK(manifest["generator"] == "fgn");
  CHECK(manifest["seed"] == 5);
  CHECK(manifest["rows"] == 4096);
}

TEST_CASE("analyze writes the documented outputs") {
  const auto series = workdir() / "gauss.csv";
  REQUIRE(run("synth gaussian --length 8192 --seed 1 --out " + q(series)) == 0);
  const auto out = workdir() / "analyze";
  REQUIRE(run("analyze " + q(series) + " --input-kind returns --overnight off --surfaces --out " + q(out)) == 0);
  for (const char* name : {"spectrum_positive.csv", "spectrum_negative.csv", "surface_positive.csv",
                           "surface_negative.csv", "plot.csv", "metrics.json", "manifest.json"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  CHECK(metrics["channels"][0]["h"].contains("-10"));
  CHECK(metrics["channels"][0]["h"].contains("10"));
  const auto spectrum = slurp(out / "spectrum_positive.csv");
  CHECK(spectrum.find("\n-10,") != std::string::npos);
  CHECK(spectrum.find("\n10,") != std::string::npos);
}

TEST_CASE("exit codes") {
  std::string err;
  CHECK(run("", &err) == 2);
  CHECK(run("analyze", &err) == 2);
  CHECK(run("synth cascade --a 0.4 --out " + q(workdir() / "x.csv"), &err) == 2);
  CHECK(run("analyze " + q(workdir() / "missing.csv") + " --out " + q(workdir()), &err) == 3);
  const auto empty = workdir() / "empty.csv";
  std::ofstream(empty).close();
  CHECK(run("analyze " + q(empty) + " --out " + q(workdir()), &err) == 3);
  CHECK(err.find("EmptyInput") != std::string::npos);
  const auto bad = workdir() / "bad.csv";
  std::ofstream(bad) << "1,100\n2,-5\n";
  CHECK(run("analyze " + q(bad) + " --out " + q(workdir()), &err) == 3);
  CHECK(err.find("NonPositivePrice") != std::string::npos);
}

TEST_CASE("one failed channel warns but succeeds") {
  const auto cascade = workdir() / "cascade.csv";
  REQUIRE(run("synth cascade --levels 12 --out " + q(cascade)) == 0);
  std::string err;
  const auto out = workdir() / "cascade_out";
  CHECK(run("analyze " + q(cascade) + " --input-kind returns --overnight off --out " + q(out), &err) == 0);
  CHECK(err.find("AllSegmentsExcluded") != std::string::npos);
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  CHECK(metrics["channels"][1]["status"] == "AllSegmentsExcluded");
}

TEST_CASE("surrogate runs are reproducible") {
  const auto series = workdir() / "gauss_s.csv";
  REQUIRE(run("synth gaussian --length 4096 --seed 2 --out " + q(series)) == 0);
  const auto a = workdir() / "sur_a";
  const auto b = workdir() / "sur_b";
  const std::string common = " --input-kind returns --overnight off --shuffles 2 --seed 9 --q-min -2 --q-max 2";
  REQUIRE(run("surrogate " + q(series) + common + " --out " + q(a)) == 0);
  REQUIRE(run("surrogate " + q(series) + common + " --out " + q(b)) == 0);
  CHECK(slurp(a / "surrogate.json") == slurp(b / "surrogate.json"));
  CHECK(slurp(a / "metrics.json") == slurp(b / "metrics.json"));
  const auto sur = nlohmann::json::parse(slurp(a / "surrogate.json"));
  CHECK(sur.dump().find("replicas_used") != std::string::npos);
}

TEST_CASE("replay reproduces outputs byte for byte") {
  const auto series = workdir() / "fgn_r.csv";
  REQUIRE(run("synth fgn --hurst 0.6 --length 8192 --seed 4 --out " + q(series)) == 0);
  const auto first = workdir() / "first";
  REQUIRE(run("analyze " + q(series) + " --input-kind returns --overnight auto --q-min -3 --q-max 3 --poly-order 1" +
              " --surfaces --out " + q(first)) == 0);
  const auto second = workdir() / "second";
  REQUIRE(run("replay " + q(first / "manifest.json") + " --out " + q(second)) == 0);
  for (const auto& entry : fs::directory_iterator(first)) {
    const auto name = entry.path().filename();
    CHECK_MESSAGE(slurp(entry.path()) == slurp(second / name), name.string());
  }

  // A changed input is refused.
  const auto manifest = nlohmann::json::parse(slurp(first / "manifest.json"));
  const auto altered = workdir() / "altered.csv";
  std::ofstream(altered) << slurp(series) << "8193,0.5\n";
  std::string err;
  CHECK(run("replay " + q(first / "manifest.json") + " --input " + q(altered) + " --out " + q(workdir() / "third"),
            &err) != 0);
  CHECK(manifest["input"].contains("fnv1a64"));
}
