#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fixpt/serialize.hpp"

namespace fixpt {

struct OutputHeader {
    std::string version = FIXPT_VERSION;
    std::uint64_t seed = 0;
    std::string config_hash;
};

// FNV-1a 64 over the compact dump of the config, as 16 hex digits
std::string config_hash(const Json& config);

// %.12g; inf/nan spelled out
std::string fmt_num(double v);
// empty cell when absent
std::string fmt_num(const std::optional<double>& v);

struct Formats {
    bool csv = true;
    bool json = true;
};

Formats formats_from_json(const Json& j, const std::string& path);
Json to_json(const Formats& f);

using CsvRow = std::vector<std::string>;

/* Writes result files into one directory. CSV files open with a '#' header
 * block; JSON files carry the same data in a leading "header" object. Files
 * of a format not selected are silently skipped. */
class OutputWriter {
public:
    OutputWriter(std::filesystem::path dir, OutputHeader header, Formats formats);

    const std::filesystem::path& dir() const { return dir_; }
    const Formats& formats() const { return formats_; }

    void csv(const std::string& file, const CsvRow& columns, const std::vector<CsvRow>& rows) const;
    void json(const std::string& file, const Json& body) const;
    void trace(const std::string& file, const Trace& t) const;

private:
    void write(const std::string& file, const std::string& text) const;

    std::filesystem::path dir_;
    OutputHeader header_;
    Formats formats_;
};

// the config record itself, written regardless of formats
void write_config(const std::filesystem::path& dir, const Json& config);

Json summary_json(const Trace& t, const std::vector<AnnulusRate>& annuli);

} // namespace fixpt
