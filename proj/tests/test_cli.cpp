#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "abelfuchs/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args)
{
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() / ("abelfuchs_cli_" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string(ABELFUCHS_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove(out);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("abelfuchs_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("argument and config errors exit with 2")
{
    CHECK(run("").code == 2);
    CHECK(run("stability --weights 0.3,0.3").code == 2);
    CHECK(run("stability --weights 0.3,0.25,0.2,0.6").code == 2);
    CHECK(run("stability --set nonsense=1").code == 2);
    CHECK(run("stability -N 4").code == 2);
    CHECK(run("stability --m 1").code == 2);
    CHECK(run("stability --config /nonexistent/abelfuchs.cfg").code == 2);
    const fs::path d = scratch_dir("cfg");
    {
        std::ofstream(d / "bad.cfg") << "weights = 0.3, 0.25, 0.2, 0.15\nbogus = 4\n";
        std::ofstream(d / "good.cfg") << "# generic weights\nweights = 0.3, 0.25, 0.2, 0.15\nm = 2.5\nu = 0.4, 0.3\n";
    }
    CHECK(run("stability --config " + (d / "bad.cfg").string()).code == 2);
    const Run good = run("stability --config " + (d / "good.cfg").string());
    CHECK(good.code == 0);
    const auto j = abelfuchs::Json::parse(good.out);
    CHECK(j["biswas"].get<bool>());
    fs::remove_all(d);
}

TEST_CASE("stability report for inadmissible weights still succeeds")
{
    const Run r = run("stability --weights 0.45,0.45,0.45,0.05");
    CHECK(r.code == 0);
    const auto j = abelfuchs::Json::parse(r.out);
    CHECK_FALSE(j["biswas"].get<bool>());
    CHECK(j["special_u"].size() == 4);
}

TEST_CASE("non-unitarizable lambda is labelled")
{
    const auto j = abelfuchs::Json::parse(run("monodromy --lambda 0.7,-0.2").out);
    CHECK(j["status"].get<std::string>() == "non-unitarizable (complex trace)");
    CHECK(j["relation_defect"].get<double>() < 1e-7);
}

TEST_CASE("inadmissible weights are refused by volume")
{
    CHECK(run("volume --weights 0.45,0.05,0.05,0.05 -N 8").code == 2);
}

TEST_CASE("inspection commands emit json")
{
    for (const char* cmd : {"system", "monodromy --lambda 0.1,0.05", "beta"}) {
        const Run r = run(cmd);
        CHECK(r.code == 0);
        CHECK(abelfuchs::Json::accept(r.out));
    }
    const auto j = abelfuchs::Json::parse(run("monodromy").out);
    CHECK(j.contains("status"));
    CHECK(j["local_trace_errors"].size() == 4);
}

TEST_CASE("volume run writes its reports and honours the gate")
{
    const fs::path d = scratch_dir("vol");
    const Run ok = run("volume --weights 0.25,0.25,0.25,0.25 -N 12 --threads 2 --output-dir " + d.string());
    CHECK(ok.code == 0);
    REQUIRE(fs::exists(d / "volume.json"));
    CHECK(fs::exists(d / "ms_grid.csv"));
    std::ifstream in(d / "volume.json");
    const auto j = abelfuchs::Json::parse(in);
    CHECK(j["closed_form"].get<double>() == doctest::Approx(19.739208802178716));
    const Run gated = run("volume -N 12 --set error_gate=1e-12 --output-dir " + d.string());
    CHECK(gated.code == 5);
    fs::remove_all(d);
}
