#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(ALLADIFF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  Result r;
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("alladiff-cli-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, RationalProgressionCsv) {
  const auto r = run("alladi-rational --q 3 --mod x --res 1 --n 12 --out csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# alladiff 0.1.0: alladiff alladi-rational --q 3 --mod x --res 1 --n 12 --out csv\n", 0), 0u);
  EXPECT_NE(r.out.find("target=1/2 (0.5)"), std::string::npos);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 13u);
  EXPECT_EQ(lines[0], "level,numerator,denominator,approx,residual,increment");
  const auto last = split(lines.back());
  EXPECT_EQ(last[0], "12");
  EXPECT_EQ(last[1], "93040");
  EXPECT_EQ(last[2], "177147");
}

TEST(Cli, DualityFuzzPasses) {
  const auto r = run("duality-fuzz --q 2 --deg 6 --trials 50");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("50/50 passed"), std::string::npos);
}

TEST(Cli, ApRecoverFinalEstimate) {
  const auto r = run("ap-recover --p 5 --a 1 --b 1 --n 12 --mode all");
  ASSERT_EQ(r.code, 0);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 13u);
  const auto head = split(lines[0]);
  ASSERT_EQ(head.back(), "estimate");
  const double est = std::stod(split(lines.back()).back());
  EXPECT_EQ(std::lround(est), -3);
  EXPECT_LT(std::abs(est + 3), 0.5);
}

TEST(Cli, JsonCarriesExactRationals) {
  const auto r = run("alladi-rational --q 2 --n 4 --out json");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["tool"], "alladiff");
  EXPECT_EQ(doc["command"], "alladi-rational");
  ASSERT_EQ(doc["rows"].size(), 4u);
  EXPECT_TRUE(doc["rows"][0]["value"]["num"].is_string());
  EXPECT_EQ(doc["target"]["num"], "1");
  EXPECT_EQ(doc["target"]["den"], "1");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("alladi-rational --q 4x --n 3").code, 1);
  EXPECT_EQ(run("alladi-rational --q 3 --mod x --res 0 --n 3").code, 1);
  EXPECT_EQ(run("ap-recover --p 3 --a 1 --b 1 --n 4").code, 1);
  EXPECT_EQ(run("alladi-rational --q 2 --n 4 --bogus").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("sato-tate --a 0 --b 0 --x 100").code, 1);
  EXPECT_EQ(run("alladi-rational --q 2 --n 999").code, 1);
  EXPECT_EQ(run("alladi-rational --q 2 --n 3 --out xml").code, 1);
  EXPECT_EQ(run("identity-check --q 2 --n 5").code, 0);
}

TEST(Cli, NaiveMatchesDp) {
  const auto dp = data_lines(run("alladi-rational --q 3 --mod x --res 2 --n 7").out);
  const auto naive = data_lines(run("alladi-rational --q 3 --mod x --res 2 --n 7 --naive --workers 3").out);
  ASSERT_EQ(dp.size(), naive.size());
  EXPECT_EQ(dp, naive);
  EXPECT_EQ(data_lines(run("alladi-rational --q 2 --n 8").out), data_lines(run("alladi-rational --q 2 --n 8 --naive").out));
}

TEST(Cli, IdentityCheckRows) {
  const auto r = run("identity-check --q 2 --mod x^2+x+1 --res 1 --n 6");
  ASSERT_EQ(r.code, 0);
  const auto lines = data_lines(r.out);
  ASSERT_EQ(lines.size(), 7u);
  for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_EQ(split(lines[i]).back(), "yes");
}

TEST(Cli, OutputIsDeterministic) {
  for (const std::string args : {"sato-tate --a 1 --b 1 --x 2000 --bins 12 --workers 4", "psi --q 2 --pairs 16:8,12:6",
                                 "duality-fuzz --q 3 --deg 4 --trials 10 --seed 7", "alladi-curve --p 5 --a 1 --b 1 --n 8"}) {
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, TableCacheLifecycle) {
  const fs::path d = temp_dir("cache");
  const std::string dir = "--cache-dir " + d.string();
  ASSERT_EQ(run("table-cache warm --q 2 --n 12 " + dir).code, 0);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d)) ++files;
  EXPECT_EQ(files, 1u);
  ASSERT_EQ(run("table-cache warm --p 5 --a 1 --b 1 --n 8 " + dir).code, 0);
  std::ofstream(d / "keep.txt") << "x\n";
  const auto listing = run("table-cache inspect " + dir);
  ASSERT_EQ(listing.code, 0);
  EXPECT_NE(listing.out.find("q=2 n=12"), std::string::npos);
  EXPECT_NE(listing.out.find("q=5 nmax=8"), std::string::npos);
  EXPECT_EQ(listing.out.find("keep.txt"), std::string::npos);
  const auto warm_again = run("alladi-rational --q 2 --n 12 " + dir);
  EXPECT_EQ(warm_again.out, run("alladi-rational --q 2 --n 12 " + dir).out);
  ASSERT_EQ(run("table-cache clear " + dir).code, 0);
  EXPECT_TRUE(fs::exists(d / "keep.txt"));
  files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d)) ++files;
  EXPECT_EQ(files, 1u);
  EXPECT_EQ(run("table-cache inspect").code, 1);
  fs::remove_all(d);
}

TEST(Cli, ConfigFileAndEnvironment) {
  const fs::path d = temp_dir("cfg");
  std::ofstream(d / "alladiff.toml") << "out = \"json\"\n";
  const auto r = run("--config " + (d / "alladiff.toml").string() + " alladi-rational --q 2 --n 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.front(), '{');
  const auto flag = run("--config " + (d / "alladiff.toml").string() + " alladi-rational --q 2 --n 3 --out csv");
  EXPECT_EQ(flag.out.front(), '#');
  std::ofstream(d / "bad.toml") << "nonsense = 1\n";
  EXPECT_EQ(run("--config " + (d / "bad.toml").string() + " alladi-rational --q 2 --n 3").code, 1);
  const auto env = run("table-cache warm --q 3 --n 4", "ALLADIFF_CACHE=" + d.string());
  EXPECT_EQ(env.code, 0);
  EXPECT_TRUE(fs::exists(d) && std::distance(fs::directory_iterator(d), fs::directory_iterator()) == 3);
  fs::remove_all(d);
}
