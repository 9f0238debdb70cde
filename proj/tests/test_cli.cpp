#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

namespace {

const std::string kCli = LIMITSET_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_runtime(std::string text) {
    return std::regex_replace(text, std::regex("\"runtime_seconds\": [0-9.e+-]+"),
                              "\"runtime_seconds\": X");
}

}  // namespace

TEST_CASE("generate then analyze round trip") {
    const auto gen = run("generate example1 --n 2 --depth 20 --seed 7 --out /tmp/cli_e1.txt");
    CHECK(gen.exit_code == 0);
    // sum of k for k = 1..20
    CHECK(gen.output.find("210 points") != std::string::npos);

    const auto ana = run("analyze /tmp/cli_e1.txt");
    CHECK(ana.exit_code == 0);
    CHECK(ana.output.find("\"delta_hat\"") != std::string::npos);
    CHECK(ana.output.find("\"generator\": \"example1\"") != std::string::npos);
}

TEST_CASE("invalid parameters exit with code 2 and name the precondition") {
    const auto r = run("generate alphabeta --n 2 --depth 10 --alpha 0.5 --out /tmp/cli_bad.txt");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("alpha must be >= 1") != std::string::npos);

    const auto r2 = run("generate nonsense --out /tmp/cli_bad.txt");
    CHECK(r2.exit_code == 2);

    const auto r3 = run("analyze /tmp/does_not_exist.txt");
    CHECK(r3.exit_code == 2);
}

TEST_CASE("analyze refuses unseeded files unless told otherwise") {
    const auto gen = run("generate ray --n 2 --depth 12 --seed 3 --out /tmp/cli_ray.txt");
    REQUIRE(gen.exit_code == 0);
    {
        std::ofstream meta("/tmp/cli_ray.txt.meta.json");
        meta << "{\"generator\": \"ray\"}\n";
    }
    const auto refused = run("analyze /tmp/cli_ray.txt");
    CHECK(refused.exit_code == 2);
    CHECK(refused.output.find("seed") != std::string::npos);
    const auto allowed = run("analyze /tmp/cli_ray.txt --allow-unseeded");
    CHECK(allowed.exit_code == 0);
}

TEST_CASE("schottky and parabolic orbits reach files with word metadata") {
    const auto gen = run("generate schottky --t 4 --max-len 5 --out /tmp/cli_orbit.txt");
    CHECK(gen.exit_code == 0);
    const std::string meta = slurp("/tmp/cli_orbit.txt.meta.json");
    CHECK(meta.find("word_length_counts") != std::string::npos);
    CHECK(meta.find("\"t\": 4") != std::string::npos);

    const auto par = run("generate parabolic --steps 50 --out /tmp/cli_par.txt");
    CHECK(par.exit_code == 0);
    const auto ana = run("analyze /tmp/cli_par.txt --profiles");
    CHECK(ana.exit_code == 0);
    CHECK(ana.output.find("\"beta_fit\"") != std::string::npos);
}

TEST_CASE("construct subcommands write scaffolds") {
    const auto net = run("construct net --ratio 0.3333333333333333 --depth 10 --seed 3 --out /tmp/cli_net.txt");
    CHECK(net.exit_code == 0);
    const auto vit = run("construct vitali --ratio 0.25 --s 0.9 --depth 8 --out /tmp/cli_vit.txt");
    CHECK(vit.exit_code == 0);
    CHECK(vit.output.find("8/8 layers materialized") != std::string::npos);
    const auto fs = run("construct fsigma --parts 0.3333333333333333:0.9,0.25:0.9 --depth 28 "
                        "--out /tmp/cli_fs.txt");
    CHECK(fs.exit_code == 0);
    const auto bad = run("construct vitali --ratio 0.25 --s 0.4 --depth 8 --out /tmp/cli_bad2.txt");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("csv emission") {
    run("generate example1 --n 2 --depth 12 --seed 7 --out /tmp/cli_csv_src.txt");
    const auto r = run("analyze /tmp/cli_csv_src.txt --csv-bins /tmp/cli_bins.csv");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp("/tmp/cli_bins.csv");
    CHECK(csv.rfind("k,N_k,log2_N_k\n", 0) == 0);
    CHECK(csv.find("\n12,12,") != std::string::npos);
}

TEST_CASE("verify exits 0 on pass and writes stable reports") {
    const auto v1 = run("verify gammaradial --out /tmp/cli_ver1.json");
    CHECK(v1.exit_code == 0);
    CHECK(v1.output.find("verify gammaradial: PASS") != std::string::npos);
    const auto v2 = run("verify gammaradial --out /tmp/cli_ver2.json");
    CHECK(v2.exit_code == 0);
    CHECK(strip_runtime(slurp("/tmp/cli_ver1.json")) == strip_runtime(slurp("/tmp/cli_ver2.json")));

    const auto unknown = run("verify nonsense");
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("generated files are byte identical across runs and thread counts") {
    const std::string flags = "generate example4 --n 2 --depth 16 --seed 11 --out ";
    setenv("LIMITSET_THREADS", "1", 1);
    run(flags + "/tmp/cli_det1.txt");
    setenv("LIMITSET_THREADS", "8", 1);
    run(flags + "/tmp/cli_det2.txt");
    unsetenv("LIMITSET_THREADS");
    CHECK(slurp("/tmp/cli_det1.txt") == slurp("/tmp/cli_det2.txt"));
    CHECK(slurp("/tmp/cli_det1.txt.meta.json") == slurp("/tmp/cli_det2.txt.meta.json"));
}
