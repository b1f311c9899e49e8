#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fixpt/cases.hpp"
#include "fixpt/output.hpp"

namespace fixpt {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
    std::optional<std::uint64_t> seed_override; // normally FIXPOINT_SEED
    Execution execution = Execution::parallel;
};

// FIXPOINT_SEED when set; ParseError when it is not a nonnegative integer
std::optional<std::uint64_t> env_seed();

// ParseError carrying line and column on malformed text
Json parse_json_text(const std::string& text, const std::string& source);
Json load_config(const std::filesystem::path& path);

/* The config with defaults filled in, the seed override applied and the output
 * directory dropped. This is what config.json records and what the header hash
 * covers, so a case study and a replay of its config.json agree byte for byte. */
Json normalize_config(const Json& config, const RunOptions& opt = {});

struct RunRow {
    bool passed = false;
    Outcome outcome = Outcome::max_iter;
    std::size_t iterations = 0;
    std::optional<double> max_q;
    std::optional<double> certified_c;
    std::vector<std::string> failures;
};

// runs a normalized config and writes every output file into `out`
RunRow execute_config(const Json& normalized, const std::filesystem::path& out, const RunOptions& opt = {});

// exit status 0 when every check passes, 1 otherwise; errors propagate
int run_case_study(const std::string& name, const Json& params, const std::filesystem::path& out,
                   const RunOptions& opt = {}, const Formats& formats = {});
int run_config(const std::filesystem::path& config, const std::filesystem::path& out, const RunOptions& opt = {});

// the scalar at a dotted path; numeric components index arrays
Json& resolve_path(Json& j, const std::string& dotted);

int sweep(const std::filesystem::path& config, const std::string& parameter, const std::vector<double>& values,
          const std::filesystem::path& out, const RunOptions& opt = {});

// the output directory named inside a config, if any
std::optional<std::filesystem::path> config_directory(const Json& config);

} // namespace fixpt
