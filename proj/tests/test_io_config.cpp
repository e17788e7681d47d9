#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

#include "kinklab/acceptance.hpp"
#include "kinklab/config.hpp"
#include "kinklab/error.hpp"
#include "kinklab/io.hpp"

using namespace kinklab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "kinklab_tests";
  fs::create_directories(dir);
  return dir / name;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const KinkError& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("numbers round-trip through 17 digits") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, 40.0 * u(rng));
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("checkpoint round-trip") {
  FieldSnapshot s{Grid{-3.5, 0.25, 5}, {1.0, 0.5, -0.25, 1e-300, -1.0}, {0.0, 0.1, 0.2, 0.3, 0.4}, {1, -1}};
  const auto path = scratch("rt.klck");
  write_checkpoint(path, s, 12.75);
  const auto c = read_checkpoint(path);
  CHECK(c.t == 12.75);
  CHECK(c.snapshot.grid == s.grid);
  CHECK(c.snapshot.phi == s.phi);
  CHECK(c.snapshot.phidot == s.phidot);
  CHECK(c.snapshot.sector == s.sector);
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
  CHECK(fs::file_size(path) == 4 + 4 + 8 + 8 + 8 + 4 + 4 + 8 + 2 * 5 * 8);
}

TEST_CASE("malformed checkpoints are rejected") {
  FieldSnapshot s{Grid{0.0, 1.0, 3}, {1, 2, 3}, {4, 5, 6}, {1, 1}};
  const auto path = scratch("bad.klck");
  write_checkpoint(path, s, 0.0);
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write_raw = [&](const std::string& b) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << b;
  };
  write_raw(bytes.substr(0, bytes.size() - 3));
  CHECK(code_of([&] { read_checkpoint(path); }) == ErrorCode::IoError);
  write_raw("XXXX" + bytes.substr(4));
  CHECK(code_of([&] { read_checkpoint(path); }) == ErrorCode::IoError);
  CHECK(code_of([&] { read_checkpoint(scratch("missing.klck")); }) == ErrorCode::IoError);
}

TEST_CASE("csv rendering") {
  const CsvTable t{{"t", "x"}, {{0.0, 0.1}, {1.0, -2.5}}};
  CHECK(t.render() == "t,x\n0,0.10000000000000001\n1,-2.5\n");
}

TEST_CASE("config parse and serialize") {
  const std::string text =
      "# comment\n"
      "potential = phi4   # trailing comment\n"
      "positions = -6, 6\n"
      "\n"
      "T = 40\n"
      "track = true\n";
  const auto c = ExperimentConfig::parse(text);
  CHECK(c.text("potential") == "phi4");
  CHECK(c.reals("positions") == std::vector<double>{-6.0, 6.0});
  CHECK(c.real("T") == 40.0);
  CHECK(c.flag("track"));
  CHECK(c.real("L", 12.0) == 12.0);
  CHECK(ExperimentConfig::parse(c.serialize()) == c);
  CHECK(ExperimentConfig::parse(c.serialize()).serialize() == c.serialize());
}

TEST_CASE("config errors") {
  auto err = [](const std::string& text) {
    return code_of([&] { ExperimentConfig::parse(text); });
  };
  CHECK(err("nonsense = 3\n") == ErrorCode::ConfigError);
  CHECK(err("T = forty\n") == ErrorCode::ConfigError);
  CHECK(err("n = 2.5\n") == ErrorCode::ConfigError);
  CHECK(err("positions = 1,,2\n") == ErrorCode::ConfigError);
  CHECK(err("T = 1\nT = 2\n") == ErrorCode::ConfigError);
  CHECK(err("just a line\n") == ErrorCode::ConfigError);
  CHECK(err("potential.cosines = 1:2, 3\n") == ErrorCode::ConfigError);
  CHECK(code_of([] { ExperimentConfig{}.real("T"); }) == ErrorCode::ConfigError);
}

TEST_CASE("potentials from configs") {
  auto c = ExperimentConfig::parse("potential = custom\npotential.coefficients = 0.125, -0.25, 0.125\n");
  CHECK(potential_from_config(c).u(0.3) == doctest::Approx(phi4_potential().u(0.3)));
  const double pi2 = std::numbers::pi * std::numbers::pi;
  c = ExperimentConfig::parse("potential = custom\npotential.coefficients = " + format_number(1 / pi2) +
                              "\npotential.cosines = " + format_number(1 / pi2) + ":" +
                              format_number(std::numbers::pi) + "\n");
  CHECK(potential_from_config(c).u(0.3) == doctest::Approx(sine_gordon_potential().u(0.3)));
  CHECK(code_of([] { potential_from_config(ExperimentConfig::parse("potential = custom\n")); }) ==
        ErrorCode::ConfigError);
  CHECK(code_of([] { potential_from_config(ExperimentConfig::parse("potential = nope\n")); }) ==
        ErrorCode::InvalidPotential);
  CHECK(potential_from_config(ExperimentConfig{}).name() == "phi4");
}

TEST_CASE("checked-in acceptance configs match the built-in ones") {
  for (const auto& name : criterion_names()) {
    INFO(name);
    const fs::path path = fs::path(KINKLAB_SOURCE_DIR) / "configs" / (name + ".cfg");
    REQUIRE(fs::exists(path));
    CHECK(ExperimentConfig::load(path) == default_config(name));
  }
  CHECK(code_of([] { default_config("nope"); }) == ErrorCode::ConfigError);
}
