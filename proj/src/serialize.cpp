#include "fixpt/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fixpt {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// library validation failures inside a parsed object become ParseErrors at that object's path
template <class F>
void checked(const std::string& path, F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        parse_fail(path, e.what());
    }
}

std::vector<Point> points_from_json(const Json& j, const std::string& path)
{
    if (!j.is_array()) parse_fail(path, "expected an array of points");
    std::vector<Point> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point_from_json(j[i], idx(path, i)));
    return out;
}

Json points_to_json(const std::vector<Point>& pts)
{
    Json a = Json::array();
    for (const auto& p : pts) a.push_back(to_json(p));
    return a;
}

HalfSpace halfspace_from(ObjectReader& r)
{
    HalfSpace h;
    h.normal = point_from_json(r.req("normal"), r.path("normal"));
    h.offset = get_number(r.req("offset"), r.path("offset"));
    return h;
}

AffineSubspace affine_from(ObjectReader& r)
{
    AffineSubspace a;
    a.point = point_from_json(r.req("point"), r.path("point"));
    if (const auto* b = r.opt("basis")) a.basis = points_from_json(*b, r.path("basis"));
    return a;
}

Json affine_fields(const AffineSubspace& a, Json j)
{
    j["point"] = to_json(a.point);
    j["basis"] = points_to_json(a.basis);
    return j;
}

bool is_ref(const Json& j) { return j.is_object() && j.size() == 1 && j.contains("ref"); }

} // namespace

/* reader */

ObjectReader::ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path))
{
    if (!j_.is_object()) parse_fail(path_, "expected an object");
}

const Json& ObjectReader::req(const std::string& key)
{
    if (!j_.contains(key)) parse_fail(path(key), "required field is missing");
    used_.insert(key);
    return j_.at(key);
}

const Json* ObjectReader::opt(const std::string& key)
{
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
}

void ObjectReader::done() const
{
    for (const auto& [k, v] : j_.items())
        if (!used_.count(k)) parse_fail(path(k), "unknown field");
}

void parse_fail(const std::string& path, const std::string& why)
{
    fail(ErrorCode::ParseError, path + ": " + why);
}

double get_number(const Json& j, const std::string& path)
{
    if (!j.is_number()) parse_fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) parse_fail(path, "number is not finite");
    return v;
}

std::int64_t get_int(const Json& j, const std::string& path)
{
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
    }
    parse_fail(path, "expected an integer");
}

std::uint64_t get_uint(const Json& j, const std::string& path)
{
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    const auto v = get_int(j, path);
    if (v < 0) parse_fail(path, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

bool get_bool(const Json& j, const std::string& path)
{
    if (!j.is_boolean()) parse_fail(path, "expected true or false");
    return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path)
{
    if (!j.is_string()) parse_fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_numbers(const Json& j, const std::string& path)
{
    if (!j.is_array()) parse_fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], idx(path, i)));
    return out;
}

/* numbers */

double round12(double v)
{
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

Json num(double v) { return std::isfinite(v) ? Json(round12(v)) : Json(nullptr); }

Json num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

Json rounded(const Json& j)
{
    if (j.is_number_float()) return num(j.get<double>());
    if (j.is_array()) {
        Json a = Json::array();
        for (const auto& e : j) a.push_back(rounded(e));
        return a;
    }
    if (j.is_object()) {
        Json o = Json::object();
        for (const auto& [k, v] : j.items()) o[k] = rounded(v);
        return o;
    }
    return j;
}

/* points and matrices */

Json to_json(const Point& p)
{
    Json a = Json::array();
    for (double v : p) a.push_back(num(v));
    return a;
}

Point point_from_json(const Json& j, const std::string& path)
{
    auto v = get_numbers(j, path);
    if (v.empty()) parse_fail(path, "a point needs at least one coordinate");
    return Point(std::move(v));
}

Json to_json(const Matrix& m)
{
    Json a = Json::array();
    for (const auto& row : m.to_rows()) {
        Json r = Json::array();
        for (double v : row) r.push_back(num(v));
        a.push_back(r);
    }
    return a;
}

Matrix matrix_from_json(const Json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) parse_fail(path, "expected a nonempty array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(get_numbers(j[i], idx(path, i)));
    Matrix m;
    checked(path, [&] { m = Matrix::from_rows(rows); });
    return m;
}

/* sets */

Json to_json(const SetSpec& s)
{
    Json j = Json::object();
    j["kind"] = std::string(kind_name(s));
    if (!s.label.empty()) j["label"] = s.label;
    std::visit(overloaded{
                   [&](const AffineSubspace& a) { j = affine_fields(a, j); },
                   [&](const Hyperplane& h) {
                       j["normal"] = to_json(h.normal);
                       j["offset"] = num(h.offset);
                   },
                   [&](const HalfSpace& h) {
                       j["normal"] = to_json(h.normal);
                       j["offset"] = num(h.offset);
                   },
                   [&](const Sphere& sp) {
                       j["center"] = to_json(sp.center);
                       j["radius"] = num(sp.radius);
                   },
                   [&](const Ball& b) {
                       j["center"] = to_json(b.center);
                       j["radius"] = num(b.radius);
                   },
                   [&](const Cross& c) { j["dim"] = c.dim; },
                   [&](const OrthantComplement& o) { j["dim"] = o.dim; },
                   [&](const FinitePointSet& f) { j["points"] = points_to_json(f.points); },
                   [&](const Box& b) {
                       j["lower"] = to_json(b.lower);
                       j["upper"] = to_json(b.upper);
                   },
                   [&](const FourierMagnitude& f) {
                       Json m = Json::array();
                       for (double v : f.modulus) m.push_back(num(v));
                       j["modulus"] = m;
                       j["transform"] = f.transform;
                   },
                   [&](const Polyhedron& p) {
                       Json faces = Json::array();
                       for (const auto& h : p.faces) faces.push_back({{"normal", to_json(h.normal)}, {"offset", num(h.offset)}});
                       j["faces"] = faces;
                   },
                   [&](const Product& p) {
                       Json fs = Json::array();
                       for (const auto& f : p.factors) fs.push_back(to_json(f));
                       j["factors"] = fs;
                   },
               },
               s.kind);
    return j;
}

SetSpec set_from_json(const Json& j, const std::string& path, const Definitions* defs)
{
    if (is_ref(j)) {
        const auto name = get_string(j.at("ref"), path + ".ref");
        if (!defs || !defs->sets.count(name)) parse_fail(path + ".ref", "no set named '" + name + "'");
        return defs->sets.at(name);
    }
    ObjectReader r(j, path);
    const auto kind = get_string(r.req("kind"), r.path("kind"));
    SetSpec s;
    if (const auto* l = r.opt("label")) s.label = get_string(*l, r.path("label"));

    auto size_field = [&](const char* key) {
        const auto v = get_int(r.req(key), r.path(key));
        if (v < 1) parse_fail(r.path(key), "must be positive");
        return static_cast<std::size_t>(v);
    };

    if (kind == "AffineSubspace") {
        s.kind = affine_from(r);
    } else if (kind == "Hyperplane") {
        auto h = halfspace_from(r);
        s.kind = Hyperplane{h.normal, h.offset};
    } else if (kind == "HalfSpace") {
        s.kind = halfspace_from(r);
    } else if (kind == "Sphere" || kind == "Ball") {
        Point c = point_from_json(r.req("center"), r.path("center"));
        const double rad = get_number(r.req("radius"), r.path("radius"));
        if (!(rad > 0.0)) parse_fail(r.path("radius"), "must be positive");
        if (kind == "Sphere") s.kind = Sphere{c, rad};
        else s.kind = Ball{c, rad};
    } else if (kind == "Cross") {
        s.kind = Cross{size_field("dim")};
    } else if (kind == "OrthantComplement") {
        s.kind = OrthantComplement{size_field("dim")};
    } else if (kind == "FinitePointSet") {
        s.kind = FinitePointSet{points_from_json(r.req("points"), r.path("points"))};
    } else if (kind == "Box") {
        s.kind = Box{point_from_json(r.req("lower"), r.path("lower")), point_from_json(r.req("upper"), r.path("upper"))};
    } else if (kind == "FourierMagnitude") {
        FourierMagnitude f;
        f.modulus = get_numbers(r.req("modulus"), r.path("modulus"));
        if (const auto* t = r.opt("transform")) f.transform = get_string(*t, r.path("transform"));
        s.kind = f;
    } else if (kind == "Polyhedron") {
        const auto& fj = r.req("faces");
        if (!fj.is_array()) parse_fail(r.path("faces"), "expected an array of half-spaces");
        Polyhedron p;
        for (std::size_t i = 0; i < fj.size(); ++i) {
            ObjectReader fr(fj[i], idx(r.path("faces"), i));
            p.faces.push_back(halfspace_from(fr));
            fr.done();
        }
        s.kind = p;
    } else if (kind == "Product") {
        const auto& fj = r.req("factors");
        if (!fj.is_array()) parse_fail(r.path("factors"), "expected an array of sets");
        Product p;
        for (std::size_t i = 0; i < fj.size(); ++i)
            p.factors.push_back(set_from_json(fj[i], idx(r.path("factors"), i), defs));
        s.kind = p;
    } else {
        parse_fail(r.path("kind"), "unknown set kind '" + kind + "'");
    }
    r.done();
    checked(path, [&] { validate(s); });
    return s;
}

/* functions */

Json to_json(const FunctionSpec& f)
{
    Json j = Json::object();
    j["kind"] = std::string(kind_name(f));
    if (!f.label.empty()) j["label"] = f.label;
    std::visit(overloaded{
                   [&](const Quadratic& q) {
                       j["A"] = to_json(q.A);
                       j["b"] = q.b.empty() ? to_json(Point::zeros(q.A.rows())) : to_json(q.b);
                   },
                   [&](const L1& g) {
                       j["weight"] = num(g.weight);
                       Json d = Json::array();
                       for (double v : g.scaling) d.push_back(num(v));
                       j["scaling"] = d;
                   },
                   [&](const Indicator& i) { j["set"] = to_json(i.set); },
                   [&](const MoreauEnvelopeOf& m) {
                       j["fn"] = to_json(*m.inner);
                       j["lambda"] = num(m.lambda);
                   },
               },
               f.kind);
    return j;
}

FunctionSpec function_from_json(const Json& j, const std::string& path, const Definitions* defs)
{
    if (is_ref(j)) {
        const auto name = get_string(j.at("ref"), path + ".ref");
        if (!defs || !defs->functions.count(name)) parse_fail(path + ".ref", "no function named '" + name + "'");
        return defs->functions.at(name);
    }
    ObjectReader r(j, path);
    const auto kind = get_string(r.req("kind"), r.path("kind"));
    FunctionSpec f;
    if (const auto* l = r.opt("label")) f.label = get_string(*l, r.path("label"));
    if (kind == "Quadratic") {
        Quadratic q;
        q.A = matrix_from_json(r.req("A"), r.path("A"));
        if (const auto* b = r.opt("b")) q.b = point_from_json(*b, r.path("b"));
        f.kind = q;
    } else if (kind == "L1") {
        L1 g;
        g.weight = get_number(r.req("weight"), r.path("weight"));
        if (const auto* d = r.opt("scaling")) g.scaling = get_numbers(*d, r.path("scaling"));
        f.kind = g;
    } else if (kind == "Indicator") {
        f.kind = Indicator{set_from_json(r.req("set"), r.path("set"), defs)};
    } else if (kind == "MoreauEnvelopeOf") {
        auto inner = function_from_json(r.req("fn"), r.path("fn"), defs);
        f.kind = MoreauEnvelopeOf{std::make_shared<const FunctionSpec>(std::move(inner)),
                                  get_number(r.req("lambda"), r.path("lambda"))};
    } else {
        parse_fail(r.path("kind"), "unknown function kind '" + kind + "'");
    }
    r.done();
    checked(path, [&] { validate(f); });
    return f;
}

/* operators */

Json to_json(const OperatorSpec& T)
{
    Json j = Json::object();
    j["kind"] = std::string(kind_name(T));
    if (!T.label.empty()) j["label"] = T.label;
    auto ops_json = [](const std::vector<OperatorSpec>& ops) {
        Json a = Json::array();
        for (const auto& o : ops) a.push_back(to_json(o));
        return a;
    };
    std::visit(overloaded{
                   [&](const ProjectorOp& p) { j["set"] = to_json(p.set); },
                   [&](const ProxOp& p) {
                       j["fn"] = to_json(p.fn);
                       j["lambda"] = num(p.lambda);
                   },
                   [&](const ReflectorOp& r) {
                       if (std::holds_alternative<SetSpec>(r.target)) j["set"] = to_json(std::get<SetSpec>(r.target));
                       else j["fn"] = to_json(std::get<FunctionSpec>(r.target));
                   },
                   [&](const GradientStepOp& g) {
                       j["f"] = to_json(g.f);
                       j["step"] = num(g.step);
                   },
                   [&](const ComposeOp& c) { j["ops"] = ops_json(c.ops); },
                   [&](const AverageOp& a) {
                       j["ops"] = ops_json(a.ops);
                       Json w = Json::array();
                       for (double v : a.weights) w.push_back(num(v));
                       j["weights"] = w;
                   },
                   [&](const KMRelaxOp& k) {
                       j["op"] = to_json(*k.inner);
                       j["lambda"] = num(k.lambda);
                   },
                   [&](const CyclicProjectionsOp& c) {
                       Json s = Json::array();
                       for (const auto& x : c.sets) s.push_back(to_json(x));
                       j["sets"] = s;
                   },
                   [&](const DouglasRachfordOp& d) {
                       j["f"] = to_json(d.f);
                       j["g"] = to_json(d.g);
                   },
                   [&](const RAAROp& r) {
                       j["a"] = to_json(r.a);
                       j["b"] = to_json(r.b);
                       j["beta"] = num(r.beta);
                   },
               },
               T.kind);
    return j;
}

OperatorSpec operator_from_json(const Json& j, const std::string& path, const Definitions* defs)
{
    ObjectReader r(j, path);
    const auto kind = get_string(r.req("kind"), r.path("kind"));
    std::string label;
    if (const auto* l = r.opt("label")) label = get_string(*l, r.path("label"));

    auto ops_from = [&](const char* key) {
        const auto& a = r.req(key);
        if (!a.is_array() || a.empty()) parse_fail(r.path(key), "expected a nonempty array of operators");
        std::vector<OperatorSpec> ops;
        for (std::size_t i = 0; i < a.size(); ++i) ops.push_back(operator_from_json(a[i], idx(r.path(key), i), defs));
        return ops;
    };
    auto set_at = [&](const char* key) { return set_from_json(r.req(key), r.path(key), defs); };
    auto fn_at = [&](const char* key) { return function_from_json(r.req(key), r.path(key), defs); };
    auto number_at = [&](const char* key) { return get_number(r.req(key), r.path(key)); };

    OperatorSpec T;
    if (kind == "Projector") {
        T.kind = ProjectorOp{set_at("set")};
    } else if (kind == "Prox") {
        auto f = fn_at("fn");
        T.kind = ProxOp{f, number_at("lambda")};
    } else if (kind == "Reflector") {
        if (r.has("set") == r.has("fn")) parse_fail(path, "Reflector needs exactly one of 'set' or 'fn'");
        if (r.has("set")) T.kind = ReflectorOp{set_at("set")};
        else T.kind = ReflectorOp{fn_at("fn")};
    } else if (kind == "GradientStep") {
        auto f = fn_at("f");
        if (!std::holds_alternative<Quadratic>(f.kind)) parse_fail(r.path("f"), "GradientStep needs a Quadratic");
        T.kind = GradientStepOp{f, number_at("step")};
    } else if (kind == "Compose") {
        T.kind = ComposeOp{ops_from("ops")};
    } else if (kind == "Average") {
        auto ops = ops_from("ops");
        const auto w = get_numbers(r.req("weights"), r.path("weights"));
        if (w.size() != ops.size()) parse_fail(r.path("weights"), "length differs from 'ops'");
        double s = 0.0;
        for (double v : w) {
            if (v < 0.0) parse_fail(r.path("weights"), "weights must be nonnegative");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-12) parse_fail(r.path("weights"), "weights must sum to 1");
        T.kind = AverageOp{std::move(ops), w};
    } else if (kind == "KMRelax") {
        auto inner = operator_from_json(r.req("op"), r.path("op"), defs);
        const double lam = number_at("lambda");
        if (lam < 0.0 || lam > 1.0) parse_fail(r.path("lambda"), "must lie in [0,1]");
        T.kind = KMRelaxOp{std::make_shared<const OperatorSpec>(std::move(inner)), lam};
    } else if (kind == "CyclicProjections") {
        const auto& a = r.req("sets");
        if (!a.is_array()) parse_fail(r.path("sets"), "expected an array of sets");
        CyclicProjectionsOp c;
        for (std::size_t i = 0; i < a.size(); ++i) c.sets.push_back(set_from_json(a[i], idx(r.path("sets"), i), defs));
        T.kind = c;
    } else if (kind == "DouglasRachford") {
        auto f = fn_at("f");
        T.kind = DouglasRachfordOp{f, fn_at("g")};
    } else if (kind == "RAAR") {
        auto a = set_at("a");
        auto b = set_at("b");
        const double beta = number_at("beta");
        if (!(beta > 0.0 && beta < 1.0)) parse_fail(r.path("beta"), "must lie in (0,1)");
        T.kind = RAAROp{a, b, beta};
    } else if (kind == "ForwardBackward") {
        // convenience form, expands to Compose[Prox(g,1), GradientStep(f,t)]
        auto f = fn_at("f");
        auto g = fn_at("g");
        const double t = number_at("step");
        checked(path, [&] { T = forward_backward(f, g, t); });
    } else {
        parse_fail(r.path("kind"), "unknown operator kind '" + kind + "'");
    }
    r.done();
    if (!label.empty()) T.label = label;
    checked(path, [&] { validate(T); });
    return T;
}

/* run plumbing */

Json to_json(const SelectionPolicy& p)
{
    Json j = Json::object();
    j["mode"] = std::string(to_string(p.mode));
    if (p.mode == SelectionMode::random_seeded) j["seed"] = p.seed;
    if (p.mode == SelectionMode::all_branches) j["budget"] = p.budget;
    return j;
}

SelectionPolicy policy_from_json(const Json& j, const std::string& path)
{
    ObjectReader r(j, path);
    SelectionPolicy p;
    const auto mode = get_string(r.req("mode"), r.path("mode"));
    if (mode == "lexicographic_min") p.mode = SelectionMode::lexicographic_min;
    else if (mode == "random_seeded") p.mode = SelectionMode::random_seeded;
    else if (mode == "all_branches") p.mode = SelectionMode::all_branches;
    else parse_fail(r.path("mode"), "unknown selection mode '" + mode + "'");
    if (const auto* s = r.opt("seed")) p.seed = get_uint(*s, r.path("seed"));
    if (const auto* b = r.opt("budget")) {
        p.budget = get_uint(*b, r.path("budget"));
        if (p.budget < 1) parse_fail(r.path("budget"), "must be at least 1");
    }
    r.done();
    return p;
}

Json to_json(const StopRule& s)
{
    return {{"residual_tol", num(s.residual_tol)}, {"max_iter", s.max_iter}, {"divergence_radius", num(s.divergence_radius)}};
}

StopRule stop_from_json(const Json& j, const std::string& path)
{
    ObjectReader r(j, path);
    StopRule s;
    if (const auto* v = r.opt("residual_tol")) s.residual_tol = get_number(*v, r.path("residual_tol"));
    if (const auto* v = r.opt("max_iter")) s.max_iter = get_uint(*v, r.path("max_iter"));
    if (const auto* v = r.opt("divergence_radius")) s.divergence_radius = get_number(*v, r.path("divergence_radius"));
    r.done();
    checked(path, [&] { validate(s); });
    return s;
}

Json to_json(const SampleRegion& reg)
{
    Json j = Json::object();
    j["center"] = to_json(reg.center);
    j["inner_radius"] = num(reg.inner_radius);
    j["outer_radius"] = num(reg.outer_radius);
    if (reg.constraint) j["constraint"] = affine_fields(*reg.constraint, Json::object());
    j["count"] = reg.count;
    j["seed"] = reg.seed;
    return j;
}

SampleRegion region_from_json(const Json& j, const std::string& path)
{
    ObjectReader r(j, path);
    SampleRegion reg;
    reg.center = point_from_json(r.req("center"), r.path("center"));
    if (const auto* v = r.opt("inner_radius")) reg.inner_radius = get_number(*v, r.path("inner_radius"));
    if (const auto* v = r.opt("outer_radius")) reg.outer_radius = get_number(*v, r.path("outer_radius"));
    if (const auto* v = r.opt("constraint")) {
        ObjectReader cr(*v, r.path("constraint"));
        reg.constraint = affine_from(cr);
        cr.done();
    }
    if (const auto* v = r.opt("count")) reg.count = get_uint(*v, r.path("count"));
    if (const auto* v = r.opt("seed")) reg.seed = get_uint(*v, r.path("seed"));
    r.done();
    checked(path, [&] { validate(reg); });
    return reg;
}

Json to_json(const ProductPoint& x) { return points_to_json(x.blocks); }

ProductPoint product_from_json(const Json& j, const std::string& path)
{
    ProductPoint x{points_from_json(j, path)};
    checked(path, [&] { validate(x); });
    return x;
}

Json to_json(const DifferenceVector& z)
{
    return {{"blocks", points_to_json(z.blocks)}, {"source_cycle", to_json(z.source_cycle)}};
}

/* reports */

Json to_json(const EstimateReport& r)
{
    return {{"constant", num(r.constant)},
            {"samples", r.samples},
            {"argmax_point", to_json(r.argmax_point)},
            {"seed", r.seed},
            {"region", to_json(r.region)}};
}

Json to_json(const ViolationProfile& p)
{
    Json entries = Json::array();
    for (const auto& e : p.entries)
        entries.push_back({{"alpha", num(e.alpha)}, {"epsilon", num(e.epsilon)}, {"argmax", to_json(e.argmax)}});
    return {{"entries", entries},
            {"reference_point", to_json(p.reference_point)},
            {"samples", p.samples},
            {"region", to_json(p.region)}};
}

Json to_json(const RateCertificate& c)
{
    Json j = Json::object();
    j["mode"] = std::string(to_string(c.mode));
    j["epsilon"] = num(c.epsilon);
    j["alpha"] = num(c.alpha);
    j["kappa"] = num(c.kappa);
    j["c"] = num(c.c);
    j["validity"] = c.validity ? to_json(*c.validity) : Json(nullptr);
    j["provenance"] = c.provenance;
    return j;
}

Json to_json(const std::vector<AnnulusRate>& annuli)
{
    Json a = Json::array();
    for (const auto& r : annuli) a.push_back({{"i", r.i}, {"c_hat", num(r.c_hat)}, {"count", r.count}});
    return a;
}

Json to_json(const Verdict& v)
{
    return {{"pass", v.pass},
            {"first_entry", v.first_entry ? Json(*v.first_entry) : Json(nullptr)},
            {"observed_c", num(v.observed_c)},
            {"final_residual", num(v.final_residual)},
            {"outcome", std::string(to_string(v.outcome))},
            {"reason", v.reason}};
}

} // namespace fixpt
