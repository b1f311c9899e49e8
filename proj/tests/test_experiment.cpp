#include "helpers.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixpt/experiment.hpp"

using namespace fixpt;
namespace fs = std::filesystem;

namespace {

std::string bin() { return std::getenv("FIXPT_BIN"); }

fs::path scratch(const std::string& name)
{
    const char* s = std::getenv("FIXPT_SCRATCH");
    const fs::path p = fs::path(s ? s : fs::temp_directory_path().string()) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int sh(const std::string& cmd)
{
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kLineConfig = R"({
  "problem": {
    "sets": {"L": {"kind": "Hyperplane", "normal": [0, 1], "offset": 0}},
    "algorithm": {"kind": "Projector", "set": {"ref": "L"}}
  },
  "run": {"x0": [1, 4], "stop": {"residual_tol": 1e-12, "max_iter": 100, "divergence_radius": 1e8}},
  "checks": {"converged": true, "limit": {"point": [1, 0], "tol": 1e-12}}
})";

} // namespace

TEST_CASE("a case study replays byte for byte from its config.json")
{
    REQUIRE(std::getenv("FIXPT_BIN"));
    const auto dir = scratch("replay");
    REQUIRE(sh(bin() + " case triangle --out " + (dir / "a").string()) == kExitPass);
    for (const char* f : {"config.json", "trace.csv", "summary.json", "certificate.json", "checks.json"})
        CHECK_MESSAGE(fs::exists(dir / "a" / f), f);
    REQUIRE(sh(bin() + " run " + (dir / "a" / "config.json").string() + " --out " + (dir / "b").string()) == kExitPass);
    std::size_t compared = 0;
    for (const auto& e : fs::directory_iterator(dir / "a")) {
        CHECK_MESSAGE(slurp(e.path()) == slurp(dir / "b" / e.path().filename()), e.path().filename().string());
        ++compared;
    }
    CHECK(compared >= 5);
    CHECK(sh("diff -r " + (dir / "a").string() + " " + (dir / "b").string()) == 0);
}

TEST_CASE("the seed comes from the environment")
{
    const auto dir = scratch("seed");
    REQUIRE(sh("FIXPOINT_SEED=1234 " + bin() + " case triangle --out " + (dir / "s").string()) == kExitPass);
    CHECK(slurp(dir / "s" / "trace.csv").find("# seed: 1234\n") != std::string::npos);
    CHECK(sh("FIXPOINT_SEED=abc " + bin() + " case triangle --out " + (dir / "t").string()) == kExitConfig);
}

TEST_CASE("generic configs run and their checks decide the exit status")
{
    const auto dir = scratch("generic");
    spit(dir / "line.json", kLineConfig);
    CHECK(sh(bin() + " run " + (dir / "line.json").string() + " --out " + (dir / "ok").string()) == kExitPass);
    const auto trace = slurp(dir / "ok" / "trace.csv");
    CHECK(trace.find("k,x_1,x_2,residual,dist_to_S,q_factor") != std::string::npos);

    Json j = Json::parse(kLineConfig);
    j["checks"]["limit"]["point"] = {2, 0};
    spit(dir / "wrong.json", j.dump());
    CHECK(sh(bin() + " run " + (dir / "wrong.json").string() + " --out " + (dir / "bad").string()) == kExitFail);
    const Json checks = Json::parse(slurp(dir / "bad" / "checks.json"));
    CHECK(checks["passed"] == false);
    CHECK(!checks["failures"].empty());
}

TEST_CASE("configuration errors exit with status 2")
{
    const auto dir = scratch("errors");
    Json unknown = Json::parse(kLineConfig);
    unknown["run"]["x_0"] = {1, 1};
    spit(dir / "unknown.json", unknown.dump());
    spit(dir / "broken.json", "{\n \"problem\": {,\n}");
    Json weights = Json::parse(kLineConfig);
    weights["problem"]["algorithm"] = {{"kind", "Average"},
                                       {"ops", {{{"kind", "Projector"}, {"set", {{"ref", "L"}}}}}},
                                       {"weights", {0.5}}};
    spit(dir / "weights.json", weights.dump());
    Json noref = Json::parse(kLineConfig);
    noref["checks"]["max_q"] = 0.5;
    spit(dir / "noref.json", noref.dump());
    for (const char* f : {"unknown.json", "broken.json", "weights.json", "noref.json"})
        CHECK_MESSAGE(sh(bin() + " run " + (dir / f).string() + " --out " + (dir / "o").string()) == kExitConfig, f);
    CHECK(sh(bin() + " case no_such_case --out " + (dir / "o").string()) == kExitConfig);
    CHECK(sh(bin() + " case triangle --param nope=1 --out " + (dir / "o").string()) == kExitConfig);
    CHECK(sh(bin() + " sweep " + (dir / "unknown.json").string() + " --param run.nothing --values 1 --out " +
             (dir / "o").string()) == kExitConfig);

    try {
        load_config(dir / "broken.json");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("broken.json:2:") != std::string::npos);
    }
    Json cfg = Json::parse(kLineConfig);
    CHECK_THROWS_CODE(resolve_path(cfg, "run.x0.7"), ErrorCode::PathResolutionError);
    CHECK(resolve_path(cfg, "run.x0.1") == 4);
}

TEST_CASE("sweeps write one row per value in ascending order")
{
    const auto dir = scratch("sweep");
    Json j = Json::parse(kLineConfig);
    j["checks"].erase("limit");
    spit(dir / "line.json", j.dump());
    REQUIRE(sh(bin() + " sweep " + (dir / "line.json").string() + " --param run.x0.0 --values 3,-1,2 --out " +
               (dir / "s").string()) == kExitPass);
    std::istringstream rows(slurp(dir / "s" / "sweep.csv"));
    std::string line;
    std::vector<std::string> data;
    while (std::getline(rows, line))
        if (!line.empty() && line[0] != '#') data.push_back(line);
    REQUIRE(data.size() == 4);
    CHECK(data[0].rfind("value,outcome,iterations,max_q,certified_c", 0) == 0);
    CHECK(data[1].rfind("-1,converged,1", 0) == 0);
    CHECK(data[2].rfind("2,", 0) == 0);
    CHECK(data[3].rfind("3,", 0) == 0);
    for (int i = 0; i < 3; ++i) CHECK(fs::exists(dir / "s" / ("row_" + std::to_string(i)) / "config.json"));
}

TEST_CASE("normalization fills case defaults and drops the output directory")
{
    const Json c = normalize_config(Json{{"case", {{"name", "circles"}, {"params", {{"r", 2.0}}}}}, {"output", {{"directory", "x"}}}},
                                    RunOptions{7, Execution::serial});
    CHECK(c["case"]["params"]["r"] == 2.0);
    CHECK(c["case"]["params"].contains("samples"));
    CHECK(c["run"]["seed"] == 7);
    CHECK(!c["output"].contains("directory"));
    CHECK(config_directory(Json{{"output", {{"directory", "x"}}}}) == fs::path("x"));
}

TEST_CASE("shipped example configs pass")
{
    const char* dir = std::getenv("FIXPT_CONFIGS");
    REQUIRE(dir);
    const auto out = scratch("shipped");
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        ++n;
        CHECK_MESSAGE(sh(bin() + " run " + e.path().string() + " --out " + (out / e.path().stem()).string()) == kExitPass,
                      e.path().filename().string());
    }
    CHECK(n >= 2);
}
