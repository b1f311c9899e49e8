#pragma once

#include <map>
#include <set>
#include <string>

#include <json.hpp>

#include "fixpt/driver.hpp"

namespace fixpt {

using Json = nlohmann::ordered_json;

/* Strict reader for one JSON object: every key must be consumed, and any key
 * left over at done() is reported as a ParseError naming its full path. */
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path);

    const Json& req(const std::string& key);
    const Json* opt(const std::string& key);
    bool has(const std::string& key) const { return j_.contains(key); }
    std::string path(const std::string& key) const { return path_ + "." + key; }
    const std::string& path() const { return path_; }
    void done() const;

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

[[noreturn]] void parse_fail(const std::string& path, const std::string& why);

double get_number(const Json& j, const std::string& path);
std::int64_t get_int(const Json& j, const std::string& path);
std::uint64_t get_uint(const Json& j, const std::string& path);
bool get_bool(const Json& j, const std::string& path);
std::string get_string(const Json& j, const std::string& path);
std::vector<double> get_numbers(const Json& j, const std::string& path);

// values rounded to 12 significant digits; non-finite values become null
double round12(double v);
Json num(double v);
Json num(const std::optional<double>& v);
// round every floating-point value inside a tree
Json rounded(const Json& j);

Json to_json(const Point& p);
Point point_from_json(const Json& j, const std::string& path);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& path);

// named sets and functions that {"ref": name} may point at
struct Definitions {
    std::map<std::string, SetSpec> sets;
    std::map<std::string, FunctionSpec> functions;
};

Json to_json(const SetSpec& s);
SetSpec set_from_json(const Json& j, const std::string& path, const Definitions* defs = nullptr);

Json to_json(const FunctionSpec& f);
FunctionSpec function_from_json(const Json& j, const std::string& path, const Definitions* defs = nullptr);

Json to_json(const OperatorSpec& T);
OperatorSpec operator_from_json(const Json& j, const std::string& path, const Definitions* defs = nullptr);

Json to_json(const SelectionPolicy& p);
SelectionPolicy policy_from_json(const Json& j, const std::string& path);

Json to_json(const StopRule& s);
StopRule stop_from_json(const Json& j, const std::string& path);

Json to_json(const SampleRegion& r);
SampleRegion region_from_json(const Json& j, const std::string& path);

Json to_json(const ProductPoint& x);
ProductPoint product_from_json(const Json& j, const std::string& path);
Json to_json(const DifferenceVector& z);

Json to_json(const EstimateReport& r);
Json to_json(const ViolationProfile& p);
Json to_json(const RateCertificate& c);
Json to_json(const std::vector<AnnulusRate>& annuli);
Json to_json(const Verdict& v);

} // namespace fixpt
