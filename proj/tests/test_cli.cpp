#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  std::string cmd = std::string(LAGPSD_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

fs::path scratch() {
  fs::path d = fs::temp_directory_path() / ("lagpsd_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, NodesZerosOne) {
  CliRun r = run("nodes --family zeros --n 1 --rho1 1");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][column(rows[0], "theta")], "-0.5");
  EXPECT_EQ(r.out.rfind("# config: ", 0), 0u);
}

TEST(Cli, NodesExtremaOne) {
  CliRun r = run("nodes --family extrema --n 1 --rho1 1");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  int th = column(rows[0], "theta"), w = column(rows[0], "weight");
  EXPECT_EQ(std::stod(rows[1][th]), 0.0);
  EXPECT_EQ(std::stod(rows[2][th]), -1.0);
  EXPECT_DOUBLE_EQ(std::stod(rows[1][w]), 0.5);
  EXPECT_DOUBLE_EQ(std::stod(rows[2][w]), 0.5);
}

TEST(Cli, InvalidNWritesNothing) {
  fs::path f = scratch() / "nodes.csv";
  CliRun r = run("nodes --family zeros --n 0 --output " + f.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(f));
}

TEST(Cli, UnknownFamilyAndCase) {
  EXPECT_EQ(run("nodes --family hermite --n 3").code, 2);
  EXPECT_EQ(run("converge --case zz --n 3").code, 2);
  EXPECT_EQ(run("converge --case a2 --n 10,5").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, ConvergeA1) {
  CliRun r = run("converge --case a1 --family zeros --rho1 1 --n 1,5,10");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  int e = column(rows[0], "abs_error");
  ASSERT_GE(e, 0);
  EXPECT_GE(column(rows[0], "bound_dn"), 0);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::stod(rows[i][e]), 1e-12);
}

TEST(Cli, ConvergeDoubleRootTwoRows) {
  CliRun r = run("converge --case c --family extrema --n 20");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(csv_rows(r.out).size(), 3u);
}

TEST(Cli, ConvergeQuadratureModesDiffer) {
  auto errors = [](const std::string& q) {
    auto rows = csv_rows(run("converge --case e --rho1 2 --n 20,40 --quad " + q).out);
    int e = column(rows[0], "abs_error");
    return std::make_pair(std::stod(rows[1][e]), std::stod(rows[2][e]));
  };
  auto [g20, g40] = errors("gauss");
  auto [a20, a40] = errors("adaptive");
  // algebraic decay for the Gauss arm, far below it with exact integrals
  double slope = std::log(g40 / g20) / std::log(2.0);
  EXPECT_GT(slope, -5.0);
  EXPECT_LT(slope, -1.5);
  EXPECT_LT(a40, 1e-3 * g40);
  EXPECT_LT(a20, 1e-3 * g20);
}

TEST(Cli, OracleReducedSpectrum) {
  CliRun r = run("oracle --suite reduced-spectrum --family extrema --n 5");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LE(std::stod(rows[1][column(rows[0], "max_re_offset")]), 1e-6);
}

TEST(Cli, OracleBounds) {
  CliRun r = run("oracle --suite bounds --mu -1 --family zeros --n 2,6,12,20");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  int m = column(rows[0], "measured"), b = column(rows[0], "bound");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::stod(rows[i][m]), std::stod(rows[i][b]));
}

TEST(Cli, OracleEquivalenceDeterministic) {
  CliRun a = run("oracle --suite equivalence --seed 7 --count 40");
  CliRun b = run("oracle --suite equivalence --seed 7 --count 40");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto rows = csv_rows(a.out);
  int c = column(rows[0], "rel_diff");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::stod(rows[i][c]), 1e-10);
}

TEST(Cli, BifurcateBlowflies) {
  fs::path pre = scratch() / "bf";
  CliRun r = run("bifurcate --model blowflies --mu 2 --param beta0 --range 7:40 --steps 20 --n 20 --output " +
              pre.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream f(pre.string() + ".bifurcations.csv");
  std::stringstream ss;
  ss << f.rdbuf();
  auto rows = csv_rows(ss.str());
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "BP");
  EXPECT_NEAR(std::stod(rows[1][1]), 14.778112197861301, 1e-6);
  EXPECT_TRUE(fs::exists(pre.string() + ".branch.csv"));
}

TEST(Cli, BifurcateBerettaBredaTwoHopf) {
  fs::path pre = scratch() / "bb";
  CliRun r = run("bifurcate --model beretta-breda --m 7 --param tau --range 0.3:6 --n 10 --rho-fraction 0.5 --output " +
              pre.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream f(pre.string() + ".bifurcations.csv");
  std::stringstream ss;
  ss << f.rdbuf();
  auto rows = csv_rows(ss.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "H");
  EXPECT_EQ(rows[2][0], "H");
}

TEST(Cli, BifurcateCurve) {
  CliRun r = run("bifurcate --model beretta-breda --curve m=6.5:7.5 --m-step 0.5 --n 10 --rho-fraction 0.5");
  ASSERT_EQ(r.code, 0);
  auto rows = csv_rows(r.out);
  EXPECT_EQ(rows[0][0], "m");
  EXPECT_EQ(rows.size(), 7u);
}

TEST(Cli, BifurcateRejectsForeignParameter) {
  EXPECT_EQ(run("bifurcate --model blowflies --tau 2").code, 2);
  EXPECT_EQ(run("bifurcate --model beretta-breda --curve m=2:3").code, 2);
}

TEST(Cli, ConfigFile) {
  fs::path d = scratch();
  fs::path cfg = d / "run.json";
  std::ofstream(cfg) << R"({"command":"converge","case":"a2","family":"zeros","rho1":1,"N":[5,10],"format":"json"})";
  CliRun r = run("--config " + cfg.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"rows\""), std::string::npos);
  EXPECT_NE(r.out.find("\"abs_error\""), std::string::npos);

  // command line wins over the file
  CliRun r2 = run("--config " + cfg.string() + " converge --n 3 --format csv");
  ASSERT_EQ(r2.code, 0);
  EXPECT_EQ(csv_rows(r2.out).size(), 2u);

  fs::path bad = d / "bad.json";
  std::ofstream(bad) << R"({"command":"converge","case":"a2","colour":"red"})";
  EXPECT_EQ(run("--config " + bad.string()).code, 2);

  fs::path wrong = d / "wrong.json";
  std::ofstream(wrong) << R"({"command":"nodes","case":"a2","N":3})";
  EXPECT_EQ(run("--config " + wrong.string()).code, 2);

  fs::path broken = d / "broken.json";
  std::ofstream(broken) << "{not json";
  EXPECT_EQ(run("--config " + broken.string()).code, 2);
}

TEST(Cli, JsonMirrorsCsv) {
  CliRun c = run("nodes --family zeros --n 3 --rho1 0.5");
  CliRun j = run("nodes --family zeros --n 3 --rho1 0.5 --format json");
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(csv_rows(c.out).size(), 4u);
  EXPECT_NE(j.out.find("\"config\""), std::string::npos);
}
