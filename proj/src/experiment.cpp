#include "fixpt/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fixpt {

std::optional<std::uint64_t> env_seed()
{
    const char* s = std::getenv("FIXPOINT_SEED");
    if (!s || !*s) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (errno || *end || *s == '-') parse_fail("FIXPOINT_SEED", std::string("not a nonnegative integer: '") + s + "'");
    return v;
}

Json parse_json_text(const std::string& text, const std::string& source)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(ErrorCode::ParseError,
             source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" + e.what() + ")");
    }
}

Json load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::ParseError, path.string() + ": cannot open config");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path.string());
}

std::optional<std::filesystem::path> config_directory(const Json& config)
{
    if (config.is_object() && config.contains("output") && config["output"].is_object() &&
        config["output"].contains("directory"))
        return std::filesystem::path(get_string(config["output"]["directory"], "config.output.directory"));
    return std::nullopt;
}

namespace {

/* generic form */

struct EstimatorConfig {
    std::string type;
    SampleRegion region;
    Point point;
    std::vector<double> alphas;
};

struct CertificateConfig {
    bool from_estimates = false;
    double epsilon = 0.0, alpha = 0.5, kappa = 1.0;
    std::optional<SampleRegion> validity;
};

struct CheckConfig {
    std::optional<bool> converged, verdict;
    std::optional<double> max_q, final_residual;
    std::optional<std::pair<Point, double>> limit;
};

struct GenericConfig {
    OperatorSpec algorithm;
    Point x0;
    StopRule stop;
    SelectionPolicy policy;
    std::uint64_t seed = 0;
    std::optional<ZeroSet> reference;
    bool annuli = false;
    std::optional<double> delta_bar;
    double gamma = 0.5;
    std::vector<EstimatorConfig> estimators;
    std::optional<CertificateConfig> certificate;
    CheckConfig checks;
    Formats formats;
};

SampleRegion region_with_seed(const Json& j, const std::string& path, std::uint64_t seed)
{
    SampleRegion r = region_from_json(j, path);
    if (!j.contains("seed")) r.seed = seed;
    return r;
}

GenericConfig parse_generic(const Json& config)
{
    GenericConfig g;
    ObjectReader top(config, "config");

    Definitions defs;
    {
        ObjectReader pr(top.req("problem"), top.path("problem"));
        if (const auto* sets = pr.opt("sets")) {
            if (!sets->is_object()) parse_fail(pr.path("sets"), "expected an object of named sets");
            for (const auto& [k, v] : sets->items()) defs.sets[k] = set_from_json(v, pr.path("sets") + "." + k, &defs);
        }
        if (const auto* fns = pr.opt("functions")) {
            if (!fns->is_object()) parse_fail(pr.path("functions"), "expected an object of named functions");
            for (const auto& [k, v] : fns->items())
                defs.functions[k] = function_from_json(v, pr.path("functions") + "." + k, &defs);
        }
        g.algorithm = operator_from_json(pr.req("algorithm"), pr.path("algorithm"), &defs);
        pr.done();
    }

    ObjectReader run(top.req("run"), top.path("run"));
    if (const auto* s = run.opt("seed")) g.seed = get_uint(*s, run.path("seed"));
    {
        const auto& x0 = run.req("x0");
        if (x0.is_object()) {
            ObjectReader xr(x0, run.path("x0"));
            ObjectReader rr(xr.req("random"), xr.path("random"));
            const auto dim = get_uint(rr.req("dim"), rr.path("dim"));
            if (dim < 1) parse_fail(rr.path("dim"), "must be at least 1");
            double radius = 1.0;
            if (const auto* r = rr.opt("radius")) radius = get_number(*r, rr.path("radius"));
            rr.done();
            xr.done();
            SampleRegion reg;
            reg.center = Point::zeros(dim);
            reg.outer_radius = radius;
            reg.count = 1;
            reg.seed = g.seed;
            validate(reg);
            g.x0 = sample_points(reg).front();
        } else {
            g.x0 = point_from_json(x0, run.path("x0"));
        }
    }
    const std::size_t n = ambient_dim(g.algorithm);
    if (n && n != g.x0.dim())
        parse_fail(run.path("x0"), "dimension " + std::to_string(g.x0.dim()) + " differs from the algorithm's " +
                                       std::to_string(n));
    if (const auto* s = run.opt("stop")) g.stop = stop_from_json(*s, run.path("stop"));
    if (const auto* p = run.opt("policy")) g.policy = policy_from_json(*p, run.path("policy"));
    if (g.policy.mode == SelectionMode::all_branches)
        parse_fail(run.path("policy.mode"), "a Picard run needs a single-branch policy");
    if (const auto* ref = run.opt("reference")) {
        ObjectReader rr(*ref, run.path("reference"));
        if (rr.has("points") == rr.has("set")) parse_fail(run.path("reference"), "needs exactly one of 'points' or 'set'");
        if (const auto* pts = rr.opt("points")) {
            if (!pts->is_array() || pts->empty()) parse_fail(rr.path("points"), "expected a nonempty array of points");
            std::vector<Point> v;
            for (std::size_t i = 0; i < pts->size(); ++i)
                v.push_back(point_from_json((*pts)[i], rr.path("points") + "[" + std::to_string(i) + "]"));
            g.reference = v;
        } else {
            g.reference = set_from_json(rr.req("set"), rr.path("set"), &defs);
        }
        rr.done();
    }
    run.done();

    std::optional<SampleRegion> subreg_region;
    std::optional<std::pair<double, double>> eps_at; // (alpha, epsilon) filled at run time
    if (const auto* an = top.opt("analysis")) {
        ObjectReader ar(*an, top.path("analysis"));
        if (const auto* a = ar.opt("annuli")) {
            ObjectReader rr(*a, ar.path("annuli"));
            g.annuli = true;
            if (const auto* d = rr.opt("delta_bar")) g.delta_bar = get_number(*d, rr.path("delta_bar"));
            if (const auto* gm = rr.opt("gamma")) g.gamma = get_number(*gm, rr.path("gamma"));
            if (!(g.gamma > 0.0 && g.gamma < 1.0)) parse_fail(rr.path("gamma"), "must lie in (0,1)");
            if (g.delta_bar && !(*g.delta_bar > 0.0)) parse_fail(rr.path("delta_bar"), "must be positive");
            if (!g.reference) parse_fail(ar.path("annuli"), "needs run.reference");
            rr.done();
        }
        if (const auto* es = ar.opt("estimators")) {
            if (!es->is_array()) parse_fail(ar.path("estimators"), "expected an array");
            for (std::size_t i = 0; i < es->size(); ++i) {
                const std::string path = ar.path("estimators") + "[" + std::to_string(i) + "]";
                ObjectReader er((*es)[i], path);
                EstimatorConfig e;
                e.type = get_string(er.req("type"), er.path("type"));
                e.region = region_with_seed(er.req("region"), er.path("region"), g.seed);
                if (e.type == "violation") {
                    e.point = point_from_json(er.req("point"), er.path("point"));
                    if (const auto* al = er.opt("alphas")) e.alphas = get_numbers(*al, er.path("alphas"));
                } else if (e.type == "subregularity") {
                    if (!g.reference) parse_fail(path, "a subregularity estimate needs run.reference");
                    subreg_region = e.region;
                } else {
                    parse_fail(er.path("type"), "unknown estimator '" + e.type + "'");
                }
                er.done();
                g.estimators.push_back(std::move(e));
            }
        }
        if (const auto* c = ar.opt("certificate")) {
            ObjectReader cr(*c, ar.path("certificate"));
            CertificateConfig cc;
            if (const auto* f = cr.opt("from_estimates")) cc.from_estimates = get_bool(*f, cr.path("from_estimates"));
            cc.alpha = get_number(cr.req("alpha"), cr.path("alpha"));
            if (!(cc.alpha > 0.0 && cc.alpha < 1.0)) parse_fail(cr.path("alpha"), "must lie in (0,1)");
            if (cc.from_estimates) {
                const bool has_v = std::any_of(g.estimators.begin(), g.estimators.end(),
                                               [](const EstimatorConfig& e) { return e.type == "violation"; });
                if (!has_v || !subreg_region)
                    parse_fail(cr.path("from_estimates"), "needs a violation and a subregularity estimator");
                cc.validity = subreg_region;
            } else {
                cc.epsilon = get_number(cr.req("epsilon"), cr.path("epsilon"));
                cc.kappa = get_number(cr.req("kappa"), cr.path("kappa"));
            }
            if (const auto* v = cr.opt("validity")) cc.validity = region_with_seed(*v, cr.path("validity"), g.seed);
            cr.done();
            g.certificate = cc;
        }
        ar.done();
    }
    if (const auto* ch = top.opt("checks")) {
        ObjectReader cr(*ch, top.path("checks"));
        if (const auto* v = cr.opt("converged")) g.checks.converged = get_bool(*v, cr.path("converged"));
        if (const auto* v = cr.opt("verdict")) g.checks.verdict = get_bool(*v, cr.path("verdict"));
        if (const auto* v = cr.opt("max_q")) g.checks.max_q = get_number(*v, cr.path("max_q"));
        if (const auto* v = cr.opt("final_residual")) g.checks.final_residual = get_number(*v, cr.path("final_residual"));
        if (const auto* v = cr.opt("limit")) {
            ObjectReader lr(*v, cr.path("limit"));
            Point p = point_from_json(lr.req("point"), lr.path("point"));
            double tol = 1e-8;
            if (const auto* t = lr.opt("tol")) tol = get_number(*t, lr.path("tol"));
            lr.done();
            g.checks.limit = std::make_pair(p, tol);
        }
        if (g.checks.verdict && !g.certificate) parse_fail(cr.path("verdict"), "needs analysis.certificate");
        if (g.checks.max_q && !g.reference) parse_fail(cr.path("max_q"), "q-factors need run.reference");
        cr.done();
    }
    if (const auto* o = top.opt("output")) {
        ObjectReader orr(*o, top.path("output"));
        if (const auto* f = orr.opt("formats")) g.formats = formats_from_json(*f, orr.path("formats"));
        orr.opt("directory");
        orr.done();
    }
    top.done();
    return g;
}

Json checks_json(const std::vector<Check>& checks, const std::optional<Verdict>& v)
{
    Json list = Json::array(), failures = Json::array();
    bool passed = true;
    for (const auto& c : checks) {
        list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        if (!c.pass) failures.push_back(c.name);
        passed = passed && c.pass;
    }
    Json j = {{"passed", passed}, {"failures", failures}, {"checks", list}};
    if (v) j["verdict"] = to_json(*v);
    return j;
}

void write_profile(const OutputWriter& w, const ViolationProfile& p)
{
    std::vector<CsvRow> rows;
    for (const auto& e : p.entries) rows.push_back({fmt_num(e.alpha), fmt_num(e.epsilon)});
    w.csv("profile.csv", {"alpha", "epsilon"}, rows);
}

RunRow finish(const OutputWriter& w, const Trace& primary, const std::vector<AnnulusRate>& annuli,
              const std::vector<Check>& checks, const std::optional<Verdict>& v,
              const std::optional<RateCertificate>& cert)
{
    w.json("summary.json", summary_json(primary, annuli));
    if (cert) w.json("certificate.json", to_json(*cert));
    w.json("checks.json", checks_json(checks, v));

    RunRow row;
    row.outcome = primary.outcome;
    row.iterations = primary.iterations();
    row.max_q = primary.max_q();
    if (cert && cert->mode != CertificateMode::no_certificate) row.certified_c = cert->c;
    row.passed = true;
    for (const auto& c : checks)
        if (!c.pass) {
            row.passed = false;
            row.failures.push_back(c.name);
        }
    return row;
}

RunRow execute_case(const Json& cfg, const OutputWriter& w, const RunOptions& opt)
{
    const std::string name = cfg["case"]["name"];
    const CaseResult r = run_case(name, cfg["case"]["params"], {cfg["run"]["seed"].get<std::uint64_t>(), opt.execution});
    for (const auto& t : r.traces) w.trace(t.file, t.trace);
    w.json("estimates.json", r.estimates);
    if (r.profile) write_profile(w, *r.profile);
    std::vector<CsvRow> rows;
    for (const auto& c : r.comparison)
        rows.push_back({c.quantity, fmt_num(c.closed_form), fmt_num(c.estimated), fmt_num(c.observed)});
    w.csv("comparison.csv", {"quantity", "closed_form", "estimated", "observed"}, rows);
    return finish(w, r.primary(), r.annuli, r.checks, r.verdict, r.certificate);
}

RunRow execute_generic(const Json& cfg, const OutputWriter& w, const RunOptions& opt)
{
    const GenericConfig g = parse_generic(cfg);
    EstimatorOptions eo;
    eo.execution = opt.execution;

    const Trace trace = picard(g.algorithm, g.x0, g.stop, g.policy, g.reference);
    std::vector<AnnulusRate> annuli;
    if (g.annuli) {
        const double delta = g.delta_bar.value_or(distance_to(*g.reference, g.x0));
        if (delta > 0.0) annuli = annular_rate_analysis(trace, delta, g.gamma);
    }

    Json estimates = Json::object();
    std::optional<double> eps_hat, kappa_hat;
    std::optional<ViolationProfile> profile;
    const double cert_alpha = g.certificate ? g.certificate->alpha : 0.5;
    for (std::size_t i = 0; i < g.estimators.size(); ++i) {
        const auto& e = g.estimators[i];
        const std::string key = e.type + "_" + std::to_string(i);
        if (e.type == "violation") {
            auto grid = e.alphas.empty() ? default_alpha_grid(cert_alpha) : e.alphas;
            if (g.certificate && std::find(grid.begin(), grid.end(), cert_alpha) == grid.end()) grid.push_back(cert_alpha);
            auto p = estimate_violation_profile(g.algorithm, e.point, e.region, grid, eo);
            estimates[key] = to_json(p);
            eps_hat = p.epsilon_at(cert_alpha);
            profile = std::move(p);
        } else {
            const auto k = estimate_subregularity(g.algorithm, *g.reference, e.region, eo);
            estimates[key] = to_json(k);
            kappa_hat = k.constant;
        }
    }

    std::optional<RateCertificate> cert;
    std::optional<Verdict> v;
    if (g.certificate) {
        const auto& c = *g.certificate;
        if (c.from_estimates) {
            cert = certify_linear_rate(std::max(0.0, *eps_hat), c.alpha, *kappa_hat);
            cert->provenance = "estimated epsilon and kappa";
        } else {
            cert = certify_linear_rate(c.epsilon, c.alpha, c.kappa);
            cert->provenance = "configured constants";
        }
        cert->validity = c.validity;
        if (cert->mode != CertificateMode::no_certificate) v = verdict(trace, *cert);
    }

    std::vector<Check> checks;
    auto add = [&](std::string name, bool ok, std::string detail) { checks.push_back({std::move(name), ok, std::move(detail)}); };
    if (g.checks.converged)
        add("converged", (trace.outcome == Outcome::converged) == *g.checks.converged,
            "outcome " + std::string(to_string(trace.outcome)));
    if (g.checks.max_q) {
        const auto q = trace.max_q();
        add("max_q", q && *q <= *g.checks.max_q, "max q " + fmt_num(q) + " vs " + fmt_num(*g.checks.max_q));
    }
    if (g.checks.final_residual)
        add("final_residual", trace.final_residual() <= *g.checks.final_residual,
            "final residual " + fmt_num(trace.final_residual()));
    if (g.checks.limit) {
        const auto& [p, tol] = *g.checks.limit;
        const double d = p.dim() == trace.last().dim() ? distance(trace.last(), p) : INFINITY;
        add("limit", d <= tol, "limit error " + fmt_num(d));
    }
    if (g.checks.verdict && *g.checks.verdict) add("verdict", v && v->pass, v ? v->reason : "no certified rate");

    w.trace("trace.csv", trace);
    if (!estimates.empty()) w.json("estimates.json", estimates);
    if (profile) write_profile(w, *profile);
    return finish(w, trace, annuli, checks, v, cert);
}

} // namespace

Json normalize_config(const Json& config, const RunOptions& opt)
{
    if (!config.is_object()) parse_fail("config", "expected an object");
    if (config.contains("case")) {
        ObjectReader top(config, "config");
        ObjectReader cr(top.req("case"), top.path("case"));
        const auto name = get_string(cr.req("name"), cr.path("name"));
        const Json* given = cr.opt("params");
        cr.done();
        const Json params = merge_params(name, given ? *given : Json(), cr.path("params"));
        std::uint64_t seed = 0;
        if (const auto* run = top.opt("run")) {
            ObjectReader rr(*run, top.path("run"));
            if (const auto* s = rr.opt("seed")) seed = get_uint(*s, rr.path("seed"));
            rr.done();
        }
        Formats formats;
        if (const auto* o = top.opt("output")) {
            ObjectReader orr(*o, top.path("output"));
            if (const auto* f = orr.opt("formats")) formats = formats_from_json(*f, orr.path("formats"));
            orr.opt("directory");
            orr.done();
        }
        top.done();
        if (opt.seed_override) seed = *opt.seed_override;
        Json out = Json::object();
        out["case"] = {{"name", name}, {"params", params}};
        out["run"] = {{"seed", seed}};
        out["output"] = {{"formats", to_json(formats)}};
        return out;
    }
    Json out = config;
    if (opt.seed_override && out.contains("run") && out["run"].is_object()) out["run"]["seed"] = *opt.seed_override;
    if (out.contains("output") && out["output"].is_object()) out["output"].erase("directory");
    parse_generic(out); // fail before anything is written
    return out;
}

RunRow execute_config(const Json& normalized, const std::filesystem::path& out, const RunOptions& opt)
{
    OutputHeader h;
    std::uint64_t seed = 0;
    if (normalized.contains("run") && normalized["run"].contains("seed")) seed = normalized["run"]["seed"].get<std::uint64_t>();
    h.seed = seed;
    h.config_hash = config_hash(normalized);
    Formats f;
    if (normalized.contains("output") && normalized["output"].contains("formats"))
        f = formats_from_json(normalized["output"]["formats"], "config.output.formats");

    write_config(out, normalized);
    const OutputWriter w(out, h, f);
    if (normalized.contains("case")) return execute_case(normalized, w, opt);
    return execute_generic(normalized, w, opt);
}

int run_case_study(const std::string& name, const Json& params, const std::filesystem::path& out,
                   const RunOptions& opt, const Formats& formats)
{
    Json cfg = Json::object();
    cfg["case"] = {{"name", name}, {"params", params.is_null() ? Json::object() : params}};
    cfg["run"] = {{"seed", 0}};
    cfg["output"] = {{"formats", to_json(formats)}};
    const Json norm = normalize_config(cfg, opt);
    return execute_config(norm, out, opt).passed ? kExitPass : kExitFail;
}

int run_config(const std::filesystem::path& config, const std::filesystem::path& out, const RunOptions& opt)
{
    const Json norm = normalize_config(load_config(config), opt);
    return execute_config(norm, out, opt).passed ? kExitPass : kExitFail;
}

Json& resolve_path(Json& j, const std::string& dotted)
{
    Json* cur = &j;
    std::string walked;
    std::stringstream ss(dotted);
    std::string part;
    if (dotted.empty()) fail(ErrorCode::PathResolutionError, "empty parameter path");
    while (std::getline(ss, part, '.')) {
        walked += (walked.empty() ? "" : ".") + part;
        if (part.empty()) fail(ErrorCode::PathResolutionError, "'" + dotted + "': empty component");
        if (cur->is_object()) {
            if (!cur->contains(part)) fail(ErrorCode::PathResolutionError, "'" + walked + "' does not exist");
            cur = &(*cur)[part];
        } else if (cur->is_array()) {
            const bool digits = std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; });
            if (!digits) fail(ErrorCode::PathResolutionError, "'" + walked + "': arrays need a numeric index");
            const std::size_t i = std::stoul(part);
            if (i >= cur->size()) fail(ErrorCode::PathResolutionError, "'" + walked + "': index out of range");
            cur = &(*cur)[i];
        } else {
            fail(ErrorCode::PathResolutionError, "'" + walked + "' descends into a scalar");
        }
    }
    if (!cur->is_number()) fail(ErrorCode::PathResolutionError, "'" + dotted + "' is not a numeric scalar");
    return *cur;
}

int sweep(const std::filesystem::path& config, const std::string& parameter, const std::vector<double>& values,
          const std::filesystem::path& out, const RunOptions& opt)
{
    require(!values.empty(), ErrorCode::InvalidParameter, "sweep needs at least one value");
    const Json base = normalize_config(load_config(config), opt);

    std::vector<Json> configs;
    for (double v : values) {
        Json c = base;
        Json& slot = resolve_path(c, parameter);
        if (slot.is_number_integer() && v == std::floor(v) && std::abs(v) < 9e15) slot = static_cast<std::int64_t>(v);
        else slot = v;
        configs.push_back(normalize_config(c, {}));
    }

    const std::size_t n = values.size();
    std::vector<RunRow> rows(n);
    std::vector<std::exception_ptr> errors(n);
    RunOptions inner = opt;
    inner.seed_override.reset();
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            rows[i] = execute_config(configs[i], out / ("row_" + std::to_string(i)), inner);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    OutputHeader h;
    h.seed = base.contains("run") && base["run"].contains("seed") ? base["run"]["seed"].get<std::uint64_t>() : 0;
    h.config_hash = config_hash(base);
    Formats csv_only{true, false};
    const OutputWriter w(out, h, csv_only);
    std::vector<CsvRow> table;
    bool all = true;
    for (std::size_t i : order) {
        const auto& r = rows[i];
        table.push_back({fmt_num(values[i]), std::string(to_string(r.outcome)), std::to_string(r.iterations),
                         fmt_num(r.max_q), fmt_num(r.certified_c)});
        all = all && r.passed;
    }
    w.csv("sweep.csv", {"value", "outcome", "iterations", "max_q", "certified_c"}, table);
    return all ? kExitPass : kExitFail;
}

} // namespace fixpt
