#include "accent/accent.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace accent;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string(ACCENT_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("accent_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST(RunConfigJson, RoundTrip) {
  RunConfig c;
  c.alignment = Alignment::Vertical;
  c.accel = 2.0 / 3.0;
  c.separation = 0.1 + 0.2;
  c.y_over_L = 1e-4;
  c.d1 = Vec3(0.6, 0.8, 0.0);
  c.initial_state = "E";
  c.horizon = 12.5;
  c.output_format = "json";
  c.include_free_space_companion = true;
  c.sweep = SweepSection{"separation", {0.1, 0.2, 1.0 / 3.0}};
  EXPECT_EQ(run_config_from_json(json::parse(to_json(c).dump())), c);

  Mat4c rho = density_matrix(XState{0.25, 0.25, 0.2, 0.3, cplx(0.01, -0.02), cplx(0.0, 0.1)});
  c.initial_state = rho;
  const RunConfig back = run_config_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(back, c);
  EXPECT_NO_THROW(back.validate());
}

TEST(RunConfigJson, NamedFieldErrors) {
  auto message = [](const std::string& text) {
    try {
      run_config_from_json(json::parse(text)).validate();
    } catch (const InvalidInput& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(R"({"acceleration": 0.5})").find("acceleration"), std::string::npos);
  EXPECT_NE(message(R"({"accel": "fast"})").find("accel"), std::string::npos);
  EXPECT_NE(message(R"({"accel": -1})").find("accel"), std::string::npos);
  EXPECT_NE(message(R"({"d1": [1, 0]})").find("d1"), std::string::npos);
  EXPECT_NE(message(R"({"d2": [1, 1, 0]})").find("d2"), std::string::npos);
  EXPECT_NE(message(R"({"y_over_L": 0})").find("y_over_L"), std::string::npos);
  EXPECT_NE(message(R"({"alignment": "diagonal"})").find("alignment"), std::string::npos);
  EXPECT_NE(message(R"({"initial_state": "W"})").find("initial_state"), std::string::npos);
  EXPECT_NE(message(R"({"output_format": "xml"})").find("output_format"), std::string::npos);
  EXPECT_NE(message(R"({"sweep": {"axis": "accel", "step": 1}})").find("step"), std::string::npos);
  EXPECT_NE(message(R"({"initial_state": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,1]]})").find("initial_state"),
            std::string::npos);
  EXPECT_EQ(message(R"({"accel": 0.5, "initial_state": "S"})"), "");
}

TEST(Serialization, SeventeenDigits) {
  EXPECT_EQ(fmt17(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(fmt17(2.0 / 3.0)), 2.0 / 3.0);
}

TEST(Serialization, TrajectoryCsvSchema) {
  const std::vector<double> t{0.0, 0.5};
  const Trajectory tr = propagate(
      build_generator(assemble(make_config(Alignment::Parallel, 0.5, 1.0, 0.5, Vec3::UnitX(), Vec3::UnitX()))),
      XState::symmetric(), t);
  const auto ls = lines(trajectory_csv(tr, metadata("evolve", json::object(), 0.5, 0.5)));
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0].rfind("# metadata: {", 0), 0u);
  EXPECT_EQ(ls[1], "gamma0_tau,pG,pE,pA,pS,re_rhoAS,im_rhoAS,re_rhoGE,im_rhoGE,concurrence");
  const auto row = fields(ls[3]);
  ASSERT_EQ(row.size(), 10u);
  EXPECT_EQ(std::stod(row[4]), tr.states[1].pS);
  EXPECT_EQ(std::stod(row[9]), tr.concurrence[1]);
}

TEST(Serialization, MetadataRecordsTolerances) {
  const json m = metadata("evolve", json{{"accel", 0.5}}, 20.0, 0.01);
  EXPECT_EQ(m["version"], kVersion);
  EXPECT_EQ(m["tolerances"]["horizon"], 20.0);
  EXPECT_EQ(m["tolerances"]["trace_tolerance"], kTraceTolerance);
  EXPECT_EQ(m["tolerances"]["event_resolution"], kEventResolution);
  EXPECT_EQ(m["config"]["accel"], 0.5);
}

TEST(Serialization, OutputDirectoryFromEnvironment) {
  const auto dir = temp_dir("env");
  setenv(kOutputDirEnv, dir.c_str(), 1);
  EXPECT_EQ(resolve_output_path("out.csv"), dir / "out.csv");
  EXPECT_EQ(resolve_output_path("/abs/out.csv"), std::filesystem::path("/abs/out.csv"));
  write_output("sub/x.txt", "hello\n");
  std::ifstream in(dir / "sub" / "x.txt");
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "hello");
  unsetenv(kOutputDirEnv);
  EXPECT_EQ(resolve_output_path("out.csv"), std::filesystem::path("out.csv"));
}

TEST(Cli, CoefficientsDoubleAtTheBoundary) {
  const CliRun r = cli("coeffs --alignment parallel --accel 0.5 --separation 1 --y-over-L 1e-4 --d1 0 1 0 --d2 0 1 0 "
                       "--companion");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[1], "provenance,boundary,A1,A2,A3,B1,B2,B3");
  const double bound = std::stod(fields(ls[2])[2]);
  const double free = std::stod(fields(ls[3])[2]);
  EXPECT_EQ(fields(ls[3])[1], "false");
  EXPECT_NEAR(bound / free, 2.0, 2e-3);
}

TEST(Cli, FrozenEvolutionKeepsConcurrence) {
  const CliRun r = cli("evolve --alignment parallel --accel 0.5 --y-over-L 1e-4 --d1 1 0 0 --d2 0 0 1 "
                       "--initial-state S --horizon 10 --sample-step 0.1");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 103u);
  for (std::size_t i = 2; i < ls.size(); ++i) EXPECT_NEAR(std::stod(fields(ls[i])[9]), 1.0, 1e-6) << ls[i];
}

TEST(Cli, EvolveCompanionWritesSiblingFile) {
  const auto dir = temp_dir("companion");
  const CliRun r = cli("evolve --accel 0.5 --horizon 1 --sample-step 0.5 --companion -o " + (dir / "t.csv").string());
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "t.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "t_free_space.csv"));
}

TEST(Cli, ConfigFileWithOverrides) {
  const auto dir = temp_dir("config");
  {
    std::ofstream f(dir / "run.json");
    f << R"({"alignment": "vertical", "accel": 0.5, "separation": 1, "y_over_L": 0.1, "initial_state": "S",
             "horizon": 20, "output_format": "json"})";
  }
  const CliRun r = cli("events -c " + (dir / "run.json").string());
  ASSERT_EQ(r.status, 0);
  const json doc = json::parse(r.out);
  EXPECT_FALSE(doc["events"]["revival_intervals"].empty());
  const CliRun p = cli("events -c " + (dir / "run.json").string() + " --alignment parallel");
  ASSERT_EQ(p.status, 0);
  EXPECT_TRUE(json::parse(p.out)["events"]["revival_intervals"].empty());

  {
    std::ofstream f(dir / "bad.json");
    f << R"({"accel": 0.5, "colour": "red"})";
  }
  EXPECT_EQ(cli("coeffs -c " + (dir / "bad.json").string()).status, 1);
}

TEST(Cli, PresetsListing) {
  const CliRun r = cli("presets");
  ASSERT_EQ(r.status, 0);
  for (int i = 2; i <= 16; ++i) EXPECT_NE(r.out.find("fig" + std::to_string(i) + "\t"), std::string::npos) << i;
  const CliRun s = cli("presets --show fig2");
  ASSERT_EQ(s.status, 0);
  EXPECT_EQ(json::parse(s.out)["axis"], "time");
}

TEST(Cli, SweepFromPresetIsDeterministic) {
  const CliRun a = cli("sweep --preset fig8 --horizon 5 --threads 1");
  const CliRun b = cli("sweep --preset fig8 --horizon 5 --threads 4");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out)[0].rfind("# metadata: {", 0), 0u);
}

TEST(Cli, ExitStatuses) {
  EXPECT_EQ(cli("coeffs --accel -1").status, 1);
  EXPECT_EQ(cli("coeffs --d1 1 1 0").status, 1);
  EXPECT_EQ(cli("frobnicate").status, 1);
  EXPECT_EQ(cli("coeffs --accel 1e300").status, 2);
  EXPECT_EQ(cli("validate --accel 0.05 --separation 0.1 --y-over-L 0.1 --window-factor 0.5").status, 2);
  EXPECT_EQ(cli("validate --accel 0.5 --separation 1 --y-over-L 0.7").status, 0);
}
