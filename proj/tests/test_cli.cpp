#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "cher/cli.hpp"
#include "cher/io.hpp"

using namespace cher;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cher-test-cli-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("roots prints the qutrit table") {
  const Run r = run({"roots", "--n", "3"});
  CHECK(r.code == 0);
  REQUIRE(r.out.rfind("# jacobian ", 0) == 0);
  CHECK(std::stod(r.out.substr(11, r.out.find('\n') - 11)) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(r.out.find("index,row,col,positive,simple,lambda3,lambda8\n") != std::string::npos);
  CHECK(r.out.find("\n1,1,2,1,1,1,0\n") != std::string::npos);
  CHECK(r.out.find("\n6,2,3,1,1,-0.5,0.8660254037844386\n") != std::string::npos);
}

TEST_CASE("help and usage errors") {
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("pipeline") != std::string::npos);

  const Run unknown = run({"roots", "--n", "3", "--bogus"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("--bogus") != std::string::npos);
  CHECK(unknown.err.find("--n") != std::string::npos);

  CHECK(run({}).code == 1);
  CHECK(run({"roots"}).code == 1);
  CHECK(run({"roots", "--n", "1"}).code == 1);
}

TEST_CASE("measure on a uniform grid reports zero") {
  const fs::path dir = scratch_dir("measure");
  const auto q = QuasiDistribution::on_grid(CoordinateSpace::simple_root, {"x1"}, {0.0}, {0.25}, {4},
                                            std::vector<double>(4, 1.0));
  io::save_quasi(dir / "uniform.csv", q);
  for (const char* method : {"negativity", "lp"}) {
    const Run r = run({"--out", (dir / "out").string(), "measure", "--input", (dir / "uniform.csv").string(),
                       "--method", method});
    REQUIRE(r.code == 0);
    const auto j = io::Json::parse(r.out);
    CHECK(j["value"].get<double>() < 1e-9);
    CHECK(fs::exists(dir / "out" / "measure.json"));
    CHECK(io::result_from_json(io::Json::parse(io::read_file(dir / "out" / "measure.json"))).value < 1e-9);
  }
  fs::remove_all(dir);
}

TEST_CASE("exit codes for invalid input") {
  const fs::path dir = scratch_dir("codes");
  const Run missing = run({"--out", dir.string(), "measure", "--input", (dir / "none.csv").string()});
  CHECK(missing.code == 1);
  CHECK(missing.err.rfind("error: ", 0) == 0);

  io::write_atomic(dir / "bad.json", R"({"format": "cher-v0", "kind": "quasi_distribution"})");
  const Run old = run({"--out", dir.string(), "measure", "--input", (dir / "bad.json").string()});
  CHECK(old.code == 1);
  CHECK(old.err.find("needs an upgrade") != std::string::npos);

  const Run model = run({"--out", dir.string(), "factors", "--model", "lorentz"});
  CHECK(model.code == 1);
  fs::remove_all(dir);
}

TEST_CASE("factors then retrieve is deterministic") {
  const fs::path dir = scratch_dir("pipe");
  const std::vector<std::string> factors{"--out",   dir.string(), "factors", "--qubits", "1", "--t-max",
                                         "60",      "--samples",  "1201"};
  const Run a = run(factors);
  REQUIRE(a.code == 0);
  const std::string first = io::read_file(dir / "factors.csv");
  const Run b = run(factors);
  CHECK(b.out == a.out);
  CHECK(io::read_file(dir / "factors.csv") == first);
  CHECK(io::Json::parse(a.out)["config_hash"].get<std::string>().size() == 16);

  const Run r = run({"--out", dir.string(), "retrieve", "--input", (dir / "factors.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "quasi_x1.csv"));
  const Run m = run({"--out", dir.string(), "measure", "--input", (dir / "quasi_x1.csv").string()});
  REQUIRE(m.code == 0);
  CHECK(io::Json::parse(m.out)["value"].get<double>() < 1e-3);
  fs::remove_all(dir);
}

TEST_CASE("output directory from the environment") {
  const fs::path dir = scratch_dir("env");
  ::setenv(cli::kOutputDirEnv, dir.string().c_str(), 1);
  const Run r = run({"factors", "--t-max", "10", "--samples", "11"});
  ::unsetenv(cli::kOutputDirEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "factors.csv"));
  fs::remove_all(dir);
}

TEST_CASE("chi conversion round trip") {
  const fs::path dir = scratch_dir("chi");
  REQUIRE(run({"--out", dir.string(), "factors", "--qubits", "2", "--t-max", "5", "--samples", "6"}).code == 0);
  const Run to_chi = run({"--out", dir.string(), "chi", "--from-factors", (dir / "factors.csv").string()});
  REQUIRE(to_chi.code == 0);
  const DephasingFactors original = io::load_factors(dir / "factors.csv");
  const fs::path back = dir / "back";
  const Run from_chi = run({"--out", back.string(), "chi", "--input", (dir / "chi.json").string()});
  REQUIRE(from_chi.code == 0);
  const DephasingFactors recovered = io::load_factors(back / "factors.csv");
  for (const auto& [m, s] : original.factors) {
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(recovered.at(m)[i] - s[i]) < 1e-10);
  }
  CHECK(fs::exists(back / "map.csv"));
  fs::remove_all(dir);
}

TEST_CASE("pair pipeline reports span sensitivity on request") {
  const fs::path dir = scratch_dir("pair");
  const Run plain =
      run({"--out", dir.string(), "pipeline", "pair-ohmic", "--grid", "32", "--t-max", "10", "--samples", "101"});
  REQUIRE(plain.code == 0);
  CHECK(io::Json::parse(plain.out)["measure"]["span_delta"].is_null());
  const Run wide = run({"--out", dir.string(), "pipeline", "pair-ohmic", "--grid", "32", "--t-max", "10", "--samples",
                        "101", "--span-check"});
  REQUIRE(wide.code == 0);
  const auto m = io::Json::parse(wide.out)["measure"];
  CHECK(m["value"].get<double>() > 0.0);
  CHECK(std::isfinite(m["span_delta"].get<double>()));
  fs::remove_all(dir);
}
