// End-to-end checks of the installed command-line surface: real process
// spawns, exit-code taxonomy, JSON shape, cache round trips, determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

#ifndef KLCHAR_CLI_PATH
#error "KLCHAR_CLI_PATH must point at the built binary"
#endif

struct Result {
  int code = -1;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(KLCHAR_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  Result res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    res.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "klchar-cli-XXXXXX").string();
    path = mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("klpoly prints the polynomial") {
  const auto res = run_cli("--no-cache --format text klpoly A2sc --y e --w w0");
  CHECK(res.code == 0);
  CHECK(res.out == "v^3\n");
}

TEST_CASE("weylchar reports the dimension") {
  const auto res = run_cli("--no-cache weylchar A2sc --lambda 1,1");
  CHECK(res.code == 0);
  const json j = json::parse(res.out);
  CHECK(j["schema"] == "weylchar/1");
  CHECK(j["dimension"] == "8");
}

TEST_CASE("tiltchar emits the induced expansion and the validity caveat") {
  const auto res = run_cli("--no-cache tiltchar A1sc --p 5 --lambda 6");
  CHECK(res.code == 0);
  const json j = json::parse(res.out);
  CHECK(j["schema"] == "tiltchar/1");
  CHECK(j["basis"] == "KL (valid for p >> 0)");
  REQUIRE(j["induced_expansion"].size() == 2);
  CHECK(j["induced_expansion"][0]["weight"] == json::array({2}));
  CHECK(j["induced_expansion"][0]["mult"] == 1);
  CHECK(j["induced_expansion"][1]["weight"] == json::array({6}));
  CHECK(j["induced_expansion"][1]["mult"] == 1);
}

TEST_CASE("exit codes follow the documented taxonomy") {
  // parse error
  CHECK(run_cli("--no-cache weylchar Z9sc --lambda 1").code == 2);
  CHECK(run_cli("--no-cache weylchar A2sc --lambda 1").code == 2);  // wrong arity
  CHECK(run_cli("--no-cache tiltchar A1sc --p 4 --lambda 1").code == 2);  // p not prime
  // guard refusal names the violated guard
  {
    const std::string cmd = std::string(KLCHAR_CLI_PATH) +
                            " --no-cache simplechar A2sc --p 2 --lambda 1,1 2>&1";
    std::array<char, 4096> buffer{};
    std::string all;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
      all.append(buffer.data(), n);
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 3);
    CHECK(all.find("p >= h") != std::string::npos);
  }
  // out of truncation
  CHECK(run_cli("--no-cache humphreys A1sc --p 7 --lambda 40 --bound 2").code == 5);
}

TEST_CASE("humphreys reports cells and packaged orbit labels") {
  const auto res = run_cli("--no-cache humphreys A1sc --p 5 --lambda 8 --bound 6");
  CHECK(res.code == 0);
  const json j = json::parse(res.out);
  CHECK(j["cell"] == "[0]");
  CHECK(j["orbit"] == "zero orbit");
  CHECK(j["mode"] == "traditional");
  const auto rel = run_cli("--no-cache humphreys A1sc --p 5 --lambda 0 --mode relative");
  const json jr = json::parse(rel.out);
  CHECK(jr["cell"] == "[]");
  CHECK(jr["orbit"] == "regular nilpotent orbit");
}

TEST_CASE("asppoly reports both computation routes") {
  const auto res = run_cli("--no-cache asppoly A1sc --y e --w 0");
  CHECK(res.code == 0);
  const json j = json::parse(res.out);
  CHECK(j["poly"] == "v");
  CHECK(j["value_at_one"] == "1");
}

TEST_CASE("blocks lists the dominant orbit") {
  const auto res = run_cli("--no-cache blocks A1sc --p 5 --lambda 6 --bound 2");
  CHECK(res.code == 0);
  const json j = json::parse(res.out);
  CHECK(j["base"] == json::array({2}));
  CHECK(j["J"].empty());
  CHECK(j["x_word"] == "[0]");
  REQUIRE(j["dominant_orbit"].size() == 3);
  CHECK(j["dominant_orbit"][2]["weight"] == json::array({12}));
}

TEST_CASE("text format serializes characters as weight tuples") {
  const auto res = run_cli("--no-cache --format text tiltchar A1sc --p 5 --lambda 6");
  CHECK(res.code == 0);
  CHECK(res.out.find("(6): 1") != std::string::npos);
  CHECK(res.out.find("(2): 1") != std::string::npos);
  CHECK(res.out.find(" -> {") != std::string::npos);
  CHECK(res.out.find("basis: KL (valid for p >> 0)") != std::string::npos);
}

TEST_CASE("translate-check sweeps pairs") {
  const auto res = run_cli("--no-cache translate-check A1sc --p 5 --k 0 --max-length 3");
  CHECK(res.code == 0);
  const json j = json::parse(res.out);
  CHECK(j["all_ok"] == true);
  CHECK(j["checks"].size() > 0);
}

TEST_CASE("cells command reports completeness") {
  const auto res = run_cli("--no-cache cells A1sc --bound 4");
  CHECK(res.code == 0);
  const json j = json::parse(res.out);
  REQUIRE(j["cells"].size() == 2);
  CHECK(j["cells"][0]["complete"] == true);
  CHECK(j["cells"][1]["complete"] == false);
  CHECK(j["warnings"].size() == 1);
}

TEST_CASE("warm cache runs are byte-identical and cache admin works") {
  TempDir dir;
  const std::string cache = "--cache-dir " + dir.path.string();
  const auto first = run_cli(cache + " tiltchar A1sc --p 5 --lambda 6");
  CHECK(first.code == 0);
  CHECK(fs::exists(dir.path / "A1sc.klcache"));
  const auto second = run_cli(cache + " tiltchar A1sc --p 5 --lambda 6");
  CHECK(second.code == 0);
  CHECK(first.out == second.out);

  const auto stats = run_cli(cache + " cache stats A1sc");
  CHECK(stats.code == 0);
  const json js = json::parse(stats.out);
  CHECK(js["files"][0]["kind"] == "KLCACHE");
  CHECK(js["files"][0]["entries"].get<int>() > 0);

  const auto verify = run_cli(cache + " cache verify A1sc");
  CHECK(verify.code == 0);
  CHECK(json::parse(verify.out)["defects"].empty());

  // corrupt one byte and verify again
  {
    const fs::path file = dir.path / "A1sc.klcache";
    std::ifstream in(file);
    std::string contents((std::istreambuf_iterator<char>(in)), {});
    in.close();
    contents[contents.rfind("0^1") + 2] = '3';
    std::ofstream(file, std::ios::trunc) << contents;
  }
  const auto bad = run_cli(cache + " cache verify A1sc");
  CHECK(bad.code == 2);
  // the report still lists every defect
  const json jbad = json::parse(bad.out);
  CHECK(jbad["ok"] == false);
  CHECK_FALSE(jbad["defects"].empty());
}

TEST_CASE("cache import validates and installs provider tables") {
  TempDir dir;
  const std::string cache = "--cache-dir " + dir.path.string();
  // build a KL cache, then import it as a table
  CHECK(run_cli(cache + " tiltchar A1sc --p 5 --lambda 8").code == 0);
  const fs::path table = dir.path / "A1sc.klcache";
  const auto imported = run_cli(cache + " cache import A1sc " + table.string());
  CHECK(imported.code == 0);
  const json j = json::parse(imported.out);
  CHECK(j.contains("table_hash"));
  CHECK(fs::exists(j["imported"].get<std::string>()));

  // use the table as a provider: inside its range it works...
  const auto ok = run_cli("--no-cache tiltchar A1sc --p 5 --lambda 6 --provider " +
                          table.string());
  CHECK(ok.code == 0);
  const json jo = json::parse(ok.out);
  const std::string basis = jo["basis"].get<std::string>();
  CHECK(basis.rfind("p-canonical (table ", 0) == 0);
  // ... outside it the CLI refuses with the provider exit code
  CHECK(run_cli("--no-cache tiltchar A1sc --p 5 --lambda 30 --provider " + table.string())
            .code == 4);
}
