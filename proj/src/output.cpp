#include "fixpt/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fixpt {

std::string config_hash(const Json& config)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt_num(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string fmt_num(const std::optional<double>& v) { return v ? fmt_num(*v) : std::string(); }

Formats formats_from_json(const Json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) parse_fail(path, "expected a nonempty array drawn from \"csv\", \"json\"");
    Formats f{false, false};
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto s = get_string(j[i], path + "[" + std::to_string(i) + "]");
        if (s == "csv") f.csv = true;
        else if (s == "json") f.json = true;
        else parse_fail(path + "[" + std::to_string(i) + "]", "unknown format '" + s + "'");
    }
    return f;
}

Json to_json(const Formats& f)
{
    Json a = Json::array();
    if (f.csv) a.push_back("csv");
    if (f.json) a.push_back("json");
    return a;
}

OutputWriter::OutputWriter(std::filesystem::path dir, OutputHeader header, Formats formats)
    : dir_(std::move(dir)), header_(std::move(header)), formats_(formats)
{
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    require(!ec, ErrorCode::InvalidParameter, "cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputWriter::write(const std::string& file, const std::string& text) const
{
    const auto p = dir_ / file;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::InvalidParameter, "cannot write " + p.string());
    out << text;
    require(static_cast<bool>(out), ErrorCode::InvalidParameter, "write failed for " + p.string());
}

void OutputWriter::csv(const std::string& file, const CsvRow& columns, const std::vector<CsvRow>& rows) const
{
    if (!formats_.csv) return;
    std::ostringstream s;
    s << "# fixpt " << header_.version << "\n# seed: " << header_.seed << "\n# config_hash: " << header_.config_hash
      << "\n";
    auto line = [&](const CsvRow& r) {
        for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << r[i];
        s << "\n";
    };
    line(columns);
    for (const auto& r : rows) line(r);
    write(file, s.str());
}

void OutputWriter::json(const std::string& file, const Json& body) const
{
    if (!formats_.json) return;
    Json j = Json::object();
    j["header"] = {{"tool", "fixpt"}, {"version", header_.version}, {"seed", header_.seed},
                   {"config_hash", header_.config_hash}};
    for (const auto& [k, v] : body.items()) j[k] = rounded(v);
    write(file, j.dump(2) + "\n");
}

void OutputWriter::trace(const std::string& file, const Trace& t) const
{
    if (!formats_.csv || t.iterates.empty()) return;
    const std::size_t n = t.iterates.front().dim();
    CsvRow cols{"k"};
    for (std::size_t i = 1; i <= n; ++i) cols.push_back("x_" + std::to_string(i));
    cols.insert(cols.end(), {"residual", "dist_to_S", "q_factor"});
    std::vector<CsvRow> rows;
    rows.reserve(t.iterates.size());
    for (std::size_t k = 0; k < t.iterates.size(); ++k) {
        CsvRow r{std::to_string(k)};
        for (double v : t.iterates[k]) r.push_back(fmt_num(v));
        r.push_back(k < t.residuals.size() ? fmt_num(t.residuals[k]) : std::string());
        r.push_back(t.ref_distances ? fmt_num((*t.ref_distances)[k]) : std::string());
        r.push_back(k < t.q_factors.size() ? fmt_num(t.q_factors[k]) : std::string());
        rows.push_back(std::move(r));
    }
    csv(file, cols, rows);
}

void write_config(const std::filesystem::path& dir, const Json& config)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, ErrorCode::InvalidParameter, "cannot create output directory " + dir.string());
    std::ofstream out(dir / "config.json", std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::InvalidParameter, "cannot write " + (dir / "config.json").string());
    out << config.dump(2) << "\n";
}

Json summary_json(const Trace& t, const std::vector<AnnulusRate>& annuli)
{
    return {{"outcome", std::string(to_string(t.outcome))},
            {"iterations", t.iterations()},
            {"final_residual", num(t.final_residual())},
            {"max_q", num(t.max_q())},
            {"annuli", to_json(annuli)}};
}

} // namespace fixpt
