#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <functional>

#include <unistd.h>

#include "cher/io.hpp"
#include "cher/retrieval.hpp"

using namespace cher;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("cher-test-io-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

QuasiDistribution sample_quasi() {
  auto q = QuasiDistribution::on_grid(CoordinateSpace::simple_root, {"x1", "x13"}, {-1.0, 0.5}, {0.1, 0.3}, {3, 2},
                                      {0.1, -0.2, 0.3, 1.0 / 3.0, 2.5e-17, 7.0});
  q.deltas.push_back({"x6", 0.25, 1.0});
  return q;
}

void check_same(const QuasiDistribution& a, const QuasiDistribution& b) {
  CHECK(a.space == b.space);
  CHECK(a.labels == b.labels);
  CHECK(a.counts == b.counts);
  CHECK(a.values == b.values);
  CHECK((a.origin - b.origin).norm() == 0.0);
  CHECK((a.basis - b.basis).norm() == 0.0);
  REQUIRE(a.deltas.size() == b.deltas.size());
  for (std::size_t i = 0; i < a.deltas.size(); ++i) {
    CHECK(a.deltas[i].label == b.deltas[i].label);
    CHECK(a.deltas[i].location == b.deltas[i].location);
    CHECK(a.deltas[i].mass == b.deltas[i].mass);
  }
}

}  // namespace

TEST_CASE("hash and number formatting") {
  CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e22, 0.0}) CHECK(std::stod(io::format_double(v)) == v);
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("quasi-distribution JSON and CSV round trips are exact") {
  const auto q = sample_quasi();
  check_same(io::quasi_from_json(io::to_json(q, "abc")), q);
  check_same(io::quasi_from_csv(io::to_csv(q, "abc")), q);
  const auto dir = scratch_dir();
  io::save_quasi(dir / "q.json", q);
  io::save_quasi(dir / "sub" / "q.csv", q);
  check_same(io::load_quasi(dir / "q.json"), q);
  check_same(io::load_quasi(dir / "sub" / "q.csv"), q);
  CHECK_THROWS_AS(io::save_quasi(dir / "q.txt", q), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("skewed grids round trip through CSV") {
  const RootSystem roots = root_system(3);
  const auto l = QuasiDistribution::on_grid(CoordinateSpace::lambda, {"lambda3", "lambda8"}, {-1.0, -1.0},
                                            {0.5, 0.5}, {3, 3}, std::vector<double>(9, 1.0 / 2.25));
  const auto x = change_variables(l, roots);
  CHECK_FALSE(x.axis_aligned());
  check_same(io::quasi_from_csv(io::to_csv(x)), x);
}

TEST_CASE("chi series round trip") {
  ChiSeries c;
  c.n = 2;
  c.times = {0.0, 0.5};
  CMatrix a = CMatrix::Zero(4, 4), b = CMatrix::Zero(4, 4);
  a(0, 0) = 1.0;
  b(0, 0) = 0.7;
  b(3, 3) = 0.3;
  b(0, 3) = Complex(0.0, 0.1);
  b(3, 0) = Complex(0.0, -0.1);
  c.chi = {a, b};
  const ChiSeries back = io::chi_series_from_json(io::to_json(c));
  CHECK(back.n == 2);
  CHECK(back.times == c.times);
  CHECK((back.chi[1] - b).norm() == 0.0);
}

TEST_CASE("factors CSV round trip") {
  const DephasingFactors f(3, {0.0, 0.5, 1.0},
                           {{1, {Complex(1.0), Complex(0.5, 0.1), Complex(0.2, -0.3)}},
                            {4, {Complex(1.0), Complex(0.4, 0.0), Complex(0.1, 0.1)}},
                            {6, {Complex(1.0), Complex(0.9, 0.0), Complex(0.8, 0.0)}}});
  const DephasingFactors g = io::factors_from_csv(io::to_csv(f));
  CHECK(g.n == 3);
  CHECK(g.times == f.times);
  for (const auto& [m, s] : f.factors) CHECK(g.at(m) == s);
}

TEST_CASE("nonclassicality result round trip") {
  NonclassicalityResult r;
  r.value = 0.123;
  r.grid.labels = {"x1"};
  r.grid.steps = {0.1};
  r.grid.spans = {10.0};
  r.grid.counts = {101};
  r.span_delta = 1e-5;
  r.delta_note = "note";
  const auto j = io::to_json(r, "h");
  const auto back = io::result_from_json(j);
  CHECK(back.value == r.value);
  CHECK_FALSE(back.refinement_delta.has_value());
  REQUIRE(back.span_delta.has_value());
  CHECK(*back.span_delta == 1e-5);
  CHECK(back.grid.counts == r.grid.counts);
  CHECK(io::to_json(back, "h") == j);
}

TEST_CASE("mode configuration parsing") {
  const auto j = io::Json::parse(R"({"format": "cher-v1", "kind": "mode_config", "temperature": 0.1,
    "modes": [{"omega": 1.0, "g1": 0.2}, {"omega": 2.0, "g1": [0.1, 0.05], "g2": 0.3}]})");
  const ModeConfig cfg = io::mode_config_from_json(j);
  CHECK(cfg.modes.size() == 2);
  CHECK(cfg.modes[1].g1 == Complex(0.1, 0.05));
  CHECK(cfg.temperature == 0.1);
  const ModeConfig again = io::mode_config_from_json(io::to_json(cfg));
  CHECK(again.modes[1].g2 == Complex(0.3, 0.0));
}

TEST_CASE("schema errors name the offending location") {
  auto j = io::to_json(sample_quasi());
  j.erase("values");
  CHECK(error_of([&] { io::quasi_from_json(j); }) == "schema error at /values: missing required field");

  auto extra = io::to_json(sample_quasi());
  extra["colour"] = "red";
  CHECK(error_of([&] { io::quasi_from_json(extra); }) == "schema error at /colour: unknown field");

  auto old = io::to_json(sample_quasi());
  old["format"] = "cher-v0";
  CHECK(error_of([&] { io::quasi_from_json(old); }) ==
        "schema error at /format: file format 'cher-v0' needs an upgrade to 'cher-v1'");

  const auto mode = io::Json::parse(R"({"format": "cher-v1", "kind": "mode_config",
    "modes": [{"omega": 1.0, "g1": 0.2, "gain": 3}]})");
  CHECK(error_of([&] { io::mode_config_from_json(mode); }) == "schema error at /modes/0/gain: unknown field");

  ModeConfig cfg;
  cfg.modes = {{1.0, 0.1, 0.1}};
  const auto wrong_kind = io::to_json(cfg);
  CHECK(error_of([&] { io::quasi_from_json(wrong_kind); }).find("expected kind 'quasi_distribution'") !=
        std::string::npos);
}

TEST_CASE("truncated files are reported") {
  const auto dir = scratch_dir();
  const std::string json = io::to_json(sample_quasi()).dump();
  io::write_atomic(dir / "cut.json", json.substr(0, json.size() / 2));
  CHECK(error_of([&] { io::load_quasi(dir / "cut.json"); }).find("malformed JSON") != std::string::npos);

  const std::string csv = io::to_csv(sample_quasi());
  const auto header_end = csv.find("# axis");
  io::write_atomic(dir / "cut.csv", csv.substr(0, header_end));
  const std::string msg = error_of([&] { io::load_quasi(dir / "cut.csv"); });
  CHECK(msg.rfind("schema error at /", 0) == 0);
  CHECK_THROWS_AS(io::load_quasi(dir / "missing.csv"), std::exception);
  fs::remove_all(dir);
}

TEST_CASE("spectral tables") {
  const auto dir = scratch_dir();
  io::write_atomic(dir / "j.csv", "omega,J\n0,0\n1,0.5\n2,0.25\n");
  const SpectralDensity sd = io::load_spectral_table(dir / "j.csv");
  CHECK(sd.kind == SpectralDensity::Kind::tabulated);
  io::write_atomic(dir / "bad.csv", "omega,J\n0,0\n1,abc\n");
  CHECK_THROWS_AS(io::load_spectral_table(dir / "bad.csv"), ValidationError);
  fs::remove_all(dir);
}
