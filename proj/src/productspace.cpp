#include "fixpt/productspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fixpt {

namespace {

void check_sets(const std::vector<SetSpec>& sets, std::size_t m, std::size_t n)
{
    require(sets.size() >= 2, ErrorCode::InvalidParameter, "product space needs at least two sets");
    require(sets.size() == m, ErrorCode::DimensionMismatch,
            std::to_string(sets.size()) + " sets but " + std::to_string(m) + " blocks");
    for (const auto& s : sets)
        require(ambient_dim(s) == n, ErrorCode::DimensionMismatch, "set dimension differs from block dimension");
}

void check_zeta(const DifferenceVector& z, const ProductPoint& x)
{
    require(z.blocks.size() == x.m(), ErrorCode::DimensionMismatch, "difference vector block count mismatch");
    for (const auto& b : z.blocks)
        require(b.dim() == x.n(), ErrorCode::DimensionMismatch, "difference vector block dimension mismatch");
}

bool less_product(const ProductPoint& a, const ProductPoint& b) { return lex_less(flatten(a), flatten(b)); }

void sort_unique_products(std::vector<ProductPoint>& v, double tol)
{
    std::sort(v.begin(), v.end(), less_product);
    std::vector<ProductPoint> out;
    for (auto& p : v) {
        bool dup = false;
        for (const auto& q : out)
            if (max_abs_diff(flatten(p), flatten(q)) <= tol) { dup = true; break; }
        if (!dup) out.push_back(std::move(p));
    }
    v = std::move(out);
}

std::vector<Point> select(const ProjectionResult& r, const SelectionPolicy& policy)
{
    if (policy.mode == SelectionMode::all_branches) return r.points;
    return {r.points.front()};
}

} // namespace

void validate(const ProductPoint& x)
{
    require(x.m() >= 2, ErrorCode::InvalidParameter, "product point needs at least two blocks");
    for (const auto& b : x.blocks)
        require(b.dim() == x.n() && b.dim() >= 1, ErrorCode::DimensionMismatch, "blocks differ in dimension");
}

Point flatten(const ProductPoint& x)
{
    std::vector<double> out;
    out.reserve(x.m() * x.n());
    for (const auto& b : x.blocks) out.insert(out.end(), b.begin(), b.end());
    return make_unchecked(std::move(out));
}

ProductPoint unflatten(const Point& flat, std::size_t m)
{
    require(m >= 1 && flat.dim() % m == 0, ErrorCode::DimensionMismatch, "cannot split point into equal blocks");
    const std::size_t n = flat.dim() / m;
    ProductPoint x;
    for (std::size_t j = 0; j < m; ++j)
        x.blocks.push_back(make_unchecked(std::vector<double>(flat.begin() + j * n, flat.begin() + (j + 1) * n)));
    return x;
}

ProductPoint operator-(const ProductPoint& a, const ProductPoint& b)
{
    require(a.m() == b.m(), ErrorCode::DimensionMismatch, "block count mismatch");
    ProductPoint d;
    for (std::size_t j = 0; j < a.m(); ++j) d.blocks.push_back(a.blocks[j] - b.blocks[j]);
    return d;
}

double norm(const ProductPoint& x)
{
    double s = 0.0;
    for (const auto& b : x.blocks) s += norm_sq(b);
    return std::sqrt(s);
}

double distance(const ProductPoint& a, const ProductPoint& b) { return norm(a - b); }

ProductPoint permute(const ProductPoint& x)
{
    ProductPoint y;
    for (std::size_t j = 1; j < x.m(); ++j) y.blocks.push_back(x.blocks[j]);
    if (x.m() > 0) y.blocks.push_back(x.blocks.front());
    return y;
}

std::vector<ProductPoint> psi(const std::vector<SetSpec>& sets, const ProductPoint& x, const SelectionPolicy& policy)
{
    validate(x);
    check_sets(sets, x.m(), x.n());
    const ProductPoint px = permute(x);
    std::vector<ProductPoint> out{ProductPoint{}};
    for (std::size_t j = 0; j < x.m(); ++j) {
        const auto cands = select(project(sets[j], px.blocks[j]), policy);
        std::vector<ProductPoint> next;
        for (const auto& head : out)
            for (const auto& p : cands) {
                ProductPoint h = head;
                h.blocks.push_back(p - px.blocks[j]);
                next.push_back(std::move(h));
            }
        out = std::move(next);
        if (policy.mode == SelectionMode::all_branches && out.size() > policy.budget)
            fail(ErrorCode::BranchBudgetExceeded, "psi: branch budget exceeded");
    }
    sort_unique_products(out, 1e-12);
    return out;
}

std::vector<ProductPoint> lift_to_cycle(const std::vector<SetSpec>& sets, const Point& u,
                                        const SelectionPolicy& policy)
{
    const std::size_t m = sets.size();
    check_sets(sets, m, u.dim());

    // build backwards: z_m from z_1, then z_{m-1} from z_m, ...
    std::vector<std::vector<Point>> partial;
    {
        const auto r = project(sets[m - 1], u);
        if (r.degenerate()) fail(ErrorCode::ContinuumEncountered, "lift_to_cycle: singular projection onto set " +
                                                                      std::to_string(m));
        for (const auto& p : select(r, policy)) partial.push_back({p});
    }
    for (std::size_t j = m - 1; j-- > 1;) {
        std::vector<std::vector<Point>> next;
        for (const auto& tail : partial) {
            const auto r = project(sets[j], tail.front());
            if (r.degenerate())
                fail(ErrorCode::ContinuumEncountered, "lift_to_cycle: singular projection onto set " +
                                                          std::to_string(j + 1));
            for (const auto& p : select(r, policy)) {
                auto t = tail;
                t.insert(t.begin(), p);
                next.push_back(std::move(t));
            }
        }
        partial = std::move(next);
        if (policy.mode == SelectionMode::all_branches && partial.size() > policy.budget)
            fail(ErrorCode::BranchBudgetExceeded, "lift_to_cycle: branch budget exceeded");
    }

    std::vector<ProductPoint> out;
    for (auto& tail : partial) {
        ProductPoint z;
        z.blocks.push_back(u);
        for (auto& p : tail) z.blocks.push_back(std::move(p));
        for (std::size_t j = 1; j < m; ++j)
            require(contains(sets[j], z.blocks[j]), ErrorCode::InvalidParameter,
                    "lift_to_cycle: block " + std::to_string(j + 1) + " misses its set");
        out.push_back(std::move(z));
    }
    sort_unique_products(out, 1e-12);
    return out;
}

OperatorSpec p0(const std::vector<SetSpec>& sets) { return cyclic_projections(sets); }

std::vector<DifferenceVector> difference_vectors(const std::vector<SetSpec>& sets, const Point& u, std::size_t budget)
{
    const auto policy = SelectionPolicy::all(budget);
    const auto images = apply(p0(sets), u, policy);
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& y : images.points) gap = std::min(gap, distance(y, u));
    if (gap > 1e-8) fail(ErrorCode::NotAFixedPoint, "difference_vectors: u is not a fixed point of P_0 (gap " +
                                                        std::to_string(gap) + ")");

    std::vector<DifferenceVector> out;
    for (auto& z : lift_to_cycle(sets, u, policy)) {
        // only cycles closing back onto u belong to W_0
        const auto back = project(sets.front(), z.blocks[1]);
        const bool closes = std::any_of(back.points.begin(), back.points.end(),
                                        [&](const Point& p) { return distance(p, u) <= 1e-8; });
        if (!closes) continue;
        const ProductPoint zeta = z - permute(z);
        bool dup = false;
        for (const auto& d : out)
            if (max_abs_diff(flatten(d.as_product()), flatten(zeta)) <= 1e-9) { dup = true; break; }
        if (!dup) out.push_back({zeta.blocks, std::move(z)});
    }
    if (out.empty()) fail(ErrorCode::NotAFixedPoint, "difference_vectors: no cycle through u closes");
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return less_product(a.as_product(), b.as_product()); });
    return out;
}

std::vector<ProductPoint> t_zeta(const std::vector<SetSpec>& sets, const DifferenceVector& zeta,
                                 const ProductPoint& x, const SelectionPolicy& policy)
{
    validate(x);
    check_sets(sets, x.m(), x.n());
    check_zeta(zeta, x);
    std::vector<ProductPoint> out;
    for (const auto& x1 : apply(p0(sets), x.blocks.front(), policy).points) {
        ProductPoint y;
        Point cur = x1;
        y.blocks.push_back(cur);
        for (std::size_t j = 0; j + 1 < x.m(); ++j) {
            cur -= zeta.blocks[j];
            y.blocks.push_back(cur);
        }
        out.push_back(std::move(y));
    }
    return out;
}

double phi_zeta_residual(const std::vector<SetSpec>& sets, const DifferenceVector& zeta, const ProductPoint& x,
                         std::size_t budget)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : t_zeta(sets, zeta, x, SelectionPolicy::all(budget))) best = std::min(best, distance(y, x));
    return best;
}

double psi_gap(const std::vector<SetSpec>& sets, const DifferenceVector& zeta, const ProductPoint& x,
               std::size_t budget)
{
    check_zeta(zeta, x);
    double best = std::numeric_limits<double>::infinity();
    const ProductPoint z = zeta.as_product();
    for (const auto& y : psi(sets, x, SelectionPolicy::all(budget))) best = std::min(best, distance(y, z));
    return best;
}

AffineSubspace w_subspace(const DifferenceVector& zeta)
{
    const std::size_t m = zeta.blocks.size();
    require(m >= 2, ErrorCode::InvalidParameter, "difference vector needs at least two blocks");
    const std::size_t n = zeta.blocks.front().dim();
    AffineSubspace w;
    w.point = flatten(lift_into_w(zeta, Point::zeros(n)));
    const double s = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(m * n, 0.0);
        for (std::size_t j = 0; j < m; ++j) e[j * n + i] = s;
        w.basis.push_back(make_unchecked(std::move(e)));
    }
    return w;
}

ProductPoint lift_into_w(const DifferenceVector& zeta, const Point& x1)
{
    ProductPoint x;
    Point cur = x1;
    x.blocks.push_back(cur);
    for (std::size_t j = 0; j + 1 < zeta.blocks.size(); ++j) {
        cur -= zeta.blocks[j];
        x.blocks.push_back(cur);
    }
    return x;
}

} // namespace fixpt
