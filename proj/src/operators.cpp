#include "fixpt/operators.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

namespace fixpt {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kDedupTol = 1e-12;

struct Ctx {
    const SelectionPolicy& policy;
    std::mt19937_64 rng;
    bool continuum = false;

    Ctx(const SelectionPolicy& p, std::uint64_t step) : policy(p)
    {
        if (p.mode == SelectionMode::random_seeded) {
            std::seed_seq seq{static_cast<std::uint32_t>(p.seed), static_cast<std::uint32_t>(p.seed >> 32),
                              static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
            rng.seed(seq);
        }
    }

    bool enumerate() const { return policy.mode == SelectionMode::all_branches; }

    void check_budget(std::size_t n) const
    {
        if (enumerate() && n > policy.budget)
            fail(ErrorCode::BranchBudgetExceeded, std::to_string(n) + " branches exceed the budget of " +
                                                      std::to_string(policy.budget));
    }

    // resolve a candidate list according to the policy
    std::vector<Point> pick(std::vector<Point> cands)
    {
        sort_unique(cands, kDedupTol);
        if (cands.size() <= 1) return cands;
        switch (policy.mode) {
        case SelectionMode::lexicographic_min: return {cands.front()};
        case SelectionMode::random_seeded: return {cands[rng() % cands.size()]};
        case SelectionMode::all_branches: check_budget(cands.size()); return cands;
        }
        return cands;
    }

    std::vector<Point> from(const ProjectionResult& r)
    {
        continuum = continuum || r.degenerate();
        return pick(r.points);
    }
};

std::vector<Point> eval(const OperatorSpec& T, const Point& x, Ctx& ctx);

std::vector<Point> eval_prox(const FunctionSpec& f, double lambda, const Point& x, Ctx& ctx)
{
    return ctx.from(prox(f, lambda, x));
}

std::vector<Point> eval_project(const SetSpec& s, const Point& x, Ctx& ctx) { return ctx.from(project(s, x)); }

// map every current branch through `step` and merge
template <class F>
std::vector<Point> flat_map(const std::vector<Point>& xs, Ctx& ctx, F&& step)
{
    std::vector<Point> out;
    for (const auto& x : xs) {
        auto ys = step(x);
        out.insert(out.end(), std::make_move_iterator(ys.begin()), std::make_move_iterator(ys.end()));
    }
    return ctx.pick(std::move(out));
}

std::vector<Point> eval_compose(const std::vector<OperatorSpec>& ops, const Point& x, Ctx& ctx)
{
    std::vector<Point> cur{x};
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
        cur = flat_map(cur, ctx, [&](const Point& y) { return eval(*it, y, ctx); });
    return cur;
}

std::vector<Point> eval(const OperatorSpec& T, const Point& x, Ctx& ctx)
{
    return std::visit(
        overloaded{
            [&](const ProjectorOp& p) { return eval_project(p.set, x, ctx); },
            [&](const ProxOp& p) { return eval_prox(p.fn, p.lambda, x, ctx); },
            [&](const ReflectorOp& r) {
                auto ps = std::holds_alternative<SetSpec>(r.target)
                              ? eval_project(std::get<SetSpec>(r.target), x, ctx)
                              : eval_prox(std::get<FunctionSpec>(r.target), 1.0, x, ctx);
                for (auto& p : ps) p = 2.0 * p - x;
                return ps;
            },
            [&](const GradientStepOp& g) {
                const auto& q = std::get<Quadratic>(g.f.kind);
                return std::vector<Point>{x - g.step * gradient(q, x)};
            },
            [&](const ComposeOp& c) { return eval_compose(c.ops, x, ctx); },
            [&](const AverageOp& a) {
                std::vector<Point> acc{Point::zeros(x.dim())};
                for (std::size_t i = 0; i < a.ops.size(); ++i) {
                    const auto ys = eval(a.ops[i], x, ctx);
                    std::vector<Point> next;
                    for (const auto& s : acc)
                        for (const auto& y : ys) next.push_back(s + a.weights[i] * y);
                    acc = ctx.pick(std::move(next));
                }
                return acc;
            },
            [&](const KMRelaxOp& k) {
                auto ys = eval(*k.inner, x, ctx);
                for (auto& y : ys) y = (1.0 - k.lambda) * x + k.lambda * y;
                return ys;
            },
            [&](const CyclicProjectionsOp& c) {
                std::vector<Point> cur = eval_project(c.sets.front(), x, ctx);
                for (std::size_t j = c.sets.size(); j-- > 0;)
                    cur = flat_map(cur, ctx, [&](const Point& y) { return eval_project(c.sets[j], y, ctx); });
                return cur;
            },
            [&](const DouglasRachfordOp& d) {
                // (1/2)(R_f R_g + Id) x = x + q - p, p in prox_g x, q in prox_f (2p - x)
                return flat_map(eval_prox(d.g, 1.0, x, ctx), ctx, [&](const Point& p) {
                    auto qs = eval_prox(d.f, 1.0, 2.0 * p - x, ctx);
                    for (auto& q : qs) q = x + q - p;
                    return qs;
                });
            },
            [&](const RAAROp& r) {
                // beta (x + q) + (1 - 2 beta) p, p in P_B x, q in P_A (2p - x)
                const double b = r.beta;
                return flat_map(eval_project(r.b, x, ctx), ctx, [&](const Point& p) {
                    auto qs = eval_project(r.a, 2.0 * p - x, ctx);
                    for (auto& q : qs) q = b * (x + q) + (1.0 - 2.0 * b) * p;
                    return qs;
                });
            },
        },
        T.kind);
}

std::size_t fn_dim(const FunctionSpec& f)
{
    return std::visit(overloaded{
                          [](const Quadratic& q) { return q.A.rows(); },
                          [](const L1& g) { return g.scaling.size(); },
                          [](const Indicator& i) { return ambient_dim(i.set); },
                          [](const MoreauEnvelopeOf& m) { return m.inner ? fn_dim(*m.inner) : 0; },
                      },
                      f.kind);
}

} // namespace

std::string_view to_string(SelectionMode m)
{
    switch (m) {
    case SelectionMode::lexicographic_min: return "lexicographic_min";
    case SelectionMode::random_seeded: return "random_seeded";
    case SelectionMode::all_branches: return "all_branches";
    }
    return "lexicographic_min";
}

std::string_view kind_name(const OperatorSpec& T)
{
    static constexpr std::array<std::string_view, 10> names{
        "Projector", "Prox", "Reflector", "GradientStep", "Compose", "Average", "KMRelax",
        "CyclicProjections", "DouglasRachford", "RAAR"};
    return names[T.kind.index()];
}

std::size_t ambient_dim(const OperatorSpec& T)
{
    auto first_nonzero = [](const std::vector<OperatorSpec>& ops) {
        for (const auto& o : ops)
            if (auto n = ambient_dim(o)) return n;
        return std::size_t{0};
    };
    return std::visit(
        overloaded{
            [](const ProjectorOp& p) { return ambient_dim(p.set); },
            [](const ProxOp& p) { return fn_dim(p.fn); },
            [](const ReflectorOp& r) {
                return std::holds_alternative<SetSpec>(r.target) ? ambient_dim(std::get<SetSpec>(r.target))
                                                                 : fn_dim(std::get<FunctionSpec>(r.target));
            },
            [](const GradientStepOp& g) { return fn_dim(g.f); },
            [&](const ComposeOp& c) { return first_nonzero(c.ops); },
            [&](const AverageOp& a) { return first_nonzero(a.ops); },
            [](const KMRelaxOp& k) { return k.inner ? ambient_dim(*k.inner) : 0; },
            [](const CyclicProjectionsOp& c) { return c.sets.empty() ? 0 : ambient_dim(c.sets.front()); },
            [](const DouglasRachfordOp& d) {
                auto n = fn_dim(d.f);
                return n ? n : fn_dim(d.g);
            },
            [](const RAAROp& r) { return ambient_dim(r.a); },
        },
        T.kind);
}

void validate(const OperatorSpec& T)
{
    auto bad = [&](const std::string& why) {
        fail(ErrorCode::InvalidParameter, std::string(kind_name(T)) + ": " + why);
    };
    std::visit(overloaded{
                   [](const ProjectorOp& p) { validate(p.set); },
                   [&](const ProxOp& p) {
                       validate(p.fn);
                       if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) bad("lambda must be positive");
                   },
                   [](const ReflectorOp& r) { std::visit([](const auto& t) { validate(t); }, r.target); },
                   [&](const GradientStepOp& g) {
                       if (!std::holds_alternative<Quadratic>(g.f.kind)) bad("f must be Quadratic");
                       validate(g.f);
                       if (!(g.step > 0.0) || !std::isfinite(g.step)) bad("step must be positive");
                   },
                   [&](const ComposeOp& c) {
                       if (c.ops.empty()) bad("needs at least one operator");
                       for (const auto& o : c.ops) validate(o);
                   },
                   [&](const AverageOp& a) {
                       if (a.ops.empty()) bad("needs at least one operator");
                       if (a.weights.size() != a.ops.size()) bad("weights and operators differ in length");
                       double s = 0.0;
                       for (double w : a.weights) {
                           if (!(w >= 0.0)) bad("weights must be nonnegative");
                           s += w;
                       }
                       if (std::abs(s - 1.0) > 1e-12) bad("weights must sum to 1");
                       for (const auto& o : a.ops) validate(o);
                   },
                   [&](const KMRelaxOp& k) {
                       if (!k.inner) bad("missing operator");
                       if (!(k.lambda >= 0.0 && k.lambda <= 1.0)) bad("lambda must lie in [0,1]");
                       validate(*k.inner);
                   },
                   [&](const CyclicProjectionsOp& c) {
                       if (c.sets.size() < 2) bad("needs at least two sets");
                       for (const auto& s : c.sets) {
                           validate(s);
                           if (ambient_dim(s) != ambient_dim(c.sets.front()))
                               fail(ErrorCode::DimensionMismatch, "CyclicProjections: sets differ in dimension");
                       }
                   },
                   [](const DouglasRachfordOp& d) {
                       validate(d.f);
                       validate(d.g);
                   },
                   [&](const RAAROp& r) {
                       validate(r.a);
                       validate(r.b);
                       if (ambient_dim(r.a) != ambient_dim(r.b))
                           fail(ErrorCode::DimensionMismatch, "RAAR: sets differ in dimension");
                       if (!(r.beta > 0.0 && r.beta < 1.0)) bad("beta must lie in (0,1)");
                   },
               },
               T.kind);
}

Images apply(const OperatorSpec& T, const Point& x, const SelectionPolicy& policy, std::uint64_t step)
{
    if (policy.mode == SelectionMode::all_branches && policy.budget < 1)
        fail(ErrorCode::InvalidParameter, "branch budget must be at least 1");
    if (auto n = ambient_dim(T); n != 0 && n != x.dim())
        fail(ErrorCode::DimensionMismatch, std::string(kind_name(T)) + " acts on R^" + std::to_string(n) +
                                               ", point has dimension " + std::to_string(x.dim()));
    Ctx ctx(policy, step);
    Images out;
    out.points = eval(T, x, ctx);
    sort_unique(out.points, kDedupTol);
    out.continuum = ctx.continuum;
    return out;
}

Point apply_one(const OperatorSpec& T, const Point& x, const SelectionPolicy& policy, std::uint64_t step)
{
    auto im = apply(T, x, policy, step);
    return std::move(im.points.front());
}

OperatorSpec projector_op(SetSpec s) { return {ProjectorOp{std::move(s)}, ""}; }

OperatorSpec prox_op(FunctionSpec f, double lambda) { return {ProxOp{std::move(f), lambda}, ""}; }

OperatorSpec reflector_op(SetSpec s) { return {ReflectorOp{std::move(s)}, ""}; }

OperatorSpec reflector_op(FunctionSpec f) { return {ReflectorOp{std::move(f)}, ""}; }

OperatorSpec gradient_step(FunctionSpec quadratic, double t)
{
    OperatorSpec T{GradientStepOp{std::move(quadratic), t}, ""};
    validate(T);
    return T;
}

OperatorSpec compose(std::vector<OperatorSpec> ops) { return {ComposeOp{std::move(ops)}, ""}; }

OperatorSpec average(std::vector<OperatorSpec> ops, std::vector<double> weights)
{
    OperatorSpec T{AverageOp{std::move(ops), std::move(weights)}, ""};
    validate(T);
    return T;
}

OperatorSpec km_relax(OperatorSpec T, double lambda)
{
    require(lambda >= 0.0 && lambda <= 1.0, ErrorCode::InvalidParameter, "KM relaxation needs lambda in [0,1]");
    return {KMRelaxOp{std::make_shared<const OperatorSpec>(std::move(T)), lambda}, ""};
}

OperatorSpec cyclic_projections(const std::vector<SetSpec>& sets)
{
    validate(OperatorSpec{CyclicProjectionsOp{sets}, ""});
    std::vector<OperatorSpec> ops;
    for (const auto& s : sets) ops.push_back(projector_op(s));
    ops.push_back(projector_op(sets.front()));
    return {ComposeOp{std::move(ops)}, "cyclic_projections"};
}

OperatorSpec forward_backward(FunctionSpec f, FunctionSpec g, double t)
{
    require(std::holds_alternative<Quadratic>(f.kind), ErrorCode::UnsupportedKind,
            "forward-backward needs a quadratic smooth part");
    require(std::holds_alternative<L1>(g.kind) || std::holds_alternative<Indicator>(g.kind),
            ErrorCode::UnsupportedKind, "forward-backward needs g to be L1 or an indicator");
    OperatorSpec T{ComposeOp{{prox_op(std::move(g), 1.0), gradient_step(std::move(f), t)}}, "forward_backward"};
    validate(T);
    return T;
}

OperatorSpec douglas_rachford(FunctionSpec f, FunctionSpec g)
{
    OperatorSpec T{DouglasRachfordOp{std::move(f), std::move(g)}, ""};
    validate(T);
    return T;
}

OperatorSpec raar(SetSpec a, SetSpec b, double beta)
{
    OperatorSpec T{RAAROp{std::move(a), std::move(b), beta}, ""};
    validate(T);
    return T;
}

} // namespace fixpt
