#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "fixpt/experiment.hpp"

using namespace fixpt;

namespace {

// k=v with v read as JSON when it parses, else as a plain string
Json params_from(const std::vector<std::string>& kv)
{
    Json p = Json::object();
    for (const auto& s : kv) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) parse_fail("--param", "expected key=value, got '" + s + "'");
        const std::string k = s.substr(0, eq), v = s.substr(eq + 1);
        Json val = Json::parse(v, nullptr, false);
        p[k] = val.is_discarded() ? Json(v) : val;
    }
    return p;
}

int report(const std::string& what, const RunRow& row, const std::filesystem::path& out)
{
    std::printf("%s: %s (%s, %zu iterations) -> %s\n", what.c_str(), row.passed ? "pass" : "FAIL",
                std::string(to_string(row.outcome)).c_str(), row.iterations, out.string().c_str());
    for (const auto& f : row.failures) std::printf("  failed: %s\n", f.c_str());
    return row.passed ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fixpt: fixed-point iterations, regularity estimates and rate certificates"};
    app.set_version_flag("--version", std::string("fixpt ") + FIXPT_VERSION);
    app.require_subcommand(1);
    bool serial = false;
    app.add_flag("--serial", serial, "run estimator kernels serially");

    auto* cs = app.add_subcommand("case", "run a built-in case study");
    std::string name;
    std::vector<std::string> kv;
    std::string out;
    std::vector<std::string> formats;
    cs->add_option("name", name, "case study")->required()->check(CLI::IsMember(case_names()));
    cs->add_option("--param", kv, "parameter override key=value (repeatable)");
    cs->add_option("--out", out, "output directory")->required();
    cs->add_option("--format", formats, "output formats (csv, json)")->delimiter(',');

    auto* rn = app.add_subcommand("run", "run an experiment config");
    std::string config;
    rn->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
    rn->add_option("--out", out, "output directory (default: output.directory of the config)");

    auto* sw = app.add_subcommand("sweep", "sweep one numeric config entry");
    std::string path;
    std::vector<double> values;
    sw->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
    sw->add_option("--param", path, "dotted path of the swept entry")->required();
    sw->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sw->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        RunOptions opt;
        opt.seed_override = env_seed();
        opt.execution = serial ? Execution::serial : Execution::parallel;

        if (cs->parsed()) {
            Json cfg = Json::object();
            cfg["case"] = {{"name", name}, {"params", params_from(kv)}};
            cfg["run"] = {{"seed", 0}};
            if (!formats.empty()) {
                Json f = Json::array();
                for (const auto& s : formats) f.push_back(s);
                cfg["output"] = {{"formats", f}};
            }
            return report("case " + name, execute_config(normalize_config(cfg, opt), out, opt), out);
        }
        if (rn->parsed()) {
            const Json raw = load_config(config);
            std::filesystem::path dir = out;
            if (out.empty()) {
                const auto d = config_directory(raw);
                if (!d) parse_fail("--out", "no output directory given and the config names none");
                dir = *d;
            }
            return report("run " + config, execute_config(normalize_config(raw, opt), dir, opt), dir);
        }
        const int rc = sweep(config, path, values, out, opt);
        std::printf("sweep %s over %zu values: %s -> %s\n", path.c_str(), values.size(), rc == kExitPass ? "pass" : "FAIL",
                    (std::filesystem::path(out) / "sweep.csv").string().c_str());
        return rc;
    } catch (const Error& e) {
        std::fprintf(stderr, "fixpt: %s: %s\n", std::string(to_string(e.code())).c_str(), e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fixpt: %s\n", e.what());
        return kExitConfig;
    }
}
