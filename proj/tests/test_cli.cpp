#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

const std::filesystem::path kCli = GREENRAN_CLI_PATH;
const std::filesystem::path kConfigs = GREENRAN_CONFIG_DIR;

int run(const std::string& args) {
    const std::string cmd = kCli.string() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("greenran_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("check reports dimensions for the shipped configs") {
    CHECK(run("check --config " + (kConfigs / "l10_k6.json").string()) == 0);
    CHECK(run("check --config " + (kConfigs / "small_oracle.json").string()) == 0);
}

TEST_CASE("configuration errors exit with code 2") {
    const auto dir = scratch("bad");
    std::ofstream(dir / "bad.json") << R"({"schema_version": 1, "trials": -3})";
    CHECK(run("check --config " + (dir / "bad.json").string()) == 2);
    CHECK(run("simulate --config " + (dir / "bad.json").string()) == 2);
    CHECK(run("simulate") == 2);
    CHECK(run("simulate --config " + (kConfigs / "small_oracle.json").string() + " --algos nope") == 2);
}

TEST_CASE("simulate writes identical files for serial and parallel runs") {
    const auto dir = scratch("sim");
    const std::string base = "simulate --config " + (kConfigs / "small_oracle.json").string() +
                             " --trials 2 --sinr-db 0 --algos l2box,gsbf";
    REQUIRE(run(base + " --parallel 1 --out " + (dir / "a").string()) == 0);
    REQUIRE(run(base + " --parallel 4 --out " + (dir / "b").string()) == 0);
    const std::string a = read_file(dir / "a" / "results.csv");
    CHECK(a.size() > 0);
    CHECK(a == read_file(dir / "b" / "results.csv"));
    CHECK(read_file(dir / "a" / "summary.csv") == read_file(dir / "b" / "summary.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("unreachable targets exit with code 3") {
    const auto dir = scratch("infeasible");
    CHECK(run("simulate --config " + (kConfigs / "small_oracle.json").string() +
              " --trials 1 --sinr-db 60 --algos gsbf --out " + (dir / "r").string()) == 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("trace writes one row per outer iteration") {
    const auto dir = scratch("trace");
    const auto out = dir / "trace.csv";
    REQUIRE(run("trace --config " + (kConfigs / "small_oracle.json").string() + " --algo l2box --trial 1 --out " +
                out.string()) == 0);
    const std::string text = read_file(out);
    CHECK(text.rfind("t,lambda,residual,tol1,tol2,lagrangian\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') >= 2);
    CHECK(run("trace --config " + (kConfigs / "small_oracle.json").string() + " --algo gsbf --out " + out.string()) == 2);
    std::filesystem::remove_all(dir);
}
