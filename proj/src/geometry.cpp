#include "fixpt/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fixpt {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(const SetSpec& s, const Point& x)
{
    const std::size_t n = ambient_dim(s);
    if (x.dim() != n)
        fail(ErrorCode::DimensionMismatch, "set '" + std::string(kind_name(s)) + "' lives in R^" +
                                               std::to_string(n) + ", query has dimension " +
                                               std::to_string(x.dim()));
}

ProjectionResult single(Point p) { return {{std::move(p)}, Multiplicity::unique}; }

// keep the candidates whose distance to x is within the tie tolerance of the best
ProjectionResult nearest_of(const std::vector<Point>& cands, const Point& x)
{
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> d(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        d[i] = distance(cands[i], x);
        best = std::min(best, d[i]);
    }
    const double cut = best + kTieTol * std::max(1.0, best);
    ProjectionResult r;
    for (std::size_t i = 0; i < cands.size(); ++i)
        if (d[i] <= cut) r.points.push_back(cands[i]);
    sort_unique(r.points, 0.0);
    r.multiplicity = r.points.size() > 1 ? Multiplicity::finite_tie : Multiplicity::unique;
    return r;
}

Point project_hyperplane(const Point& n, double offset, const Point& x)
{
    const double s = (dot(n, x) - offset) / norm_sq(n);
    return x - s * n;
}

Point affine_projection(const AffineSubspace& a, const Point& x)
{
    Point d = x - a.point;
    Point p = a.point;
    for (const auto& b : a.basis) p += dot(d, b) * b;
    return p;
}

// nearest point of {x : <n_i, x> = o_i, i in active}, or nothing if the normals are dependent
bool project_onto_active(const std::vector<HalfSpace>& faces, const std::vector<std::size_t>& active,
                         const Point& x, Point& out)
{
    const std::size_t k = active.size();
    if (k == 0) {
        out = x;
        return true;
    }
    Matrix g(k, k);
    std::vector<double> r(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& fi = faces[active[i]];
        r[i] = dot(fi.normal, x) - fi.offset;
        for (std::size_t j = 0; j < k; ++j) g(i, j) = dot(fi.normal, faces[active[j]].normal);
    }
    const auto eig = eigen_symmetric(g);
    if (eig.values.front() <= 1e-12 * std::max(1.0, eig.values.back())) return false;
    const Point lam = solve(g, make_unchecked(r));
    out = x;
    for (std::size_t i = 0; i < k; ++i) out -= lam[i] * faces[active[i]].normal;
    return true;
}

ProjectionResult project_polyhedron(const Polyhedron& P, const Point& x)
{
    const std::size_t m = P.faces.size();
    auto feasible = [&](const Point& p) {
        for (const auto& f : P.faces)
            if (dot(f.normal, p) - f.offset > kMembershipTol * std::max(1.0, norm(f.normal) * norm(p)))
                return false;
        return true;
    };
    if (feasible(x)) return single(x);

    // exact active-set enumeration; face counts here are tiny
    Point best;
    double best_d = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> active;
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        active.clear();
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::size_t{1} << i)) active.push_back(i);
        if (active.size() > x.dim()) continue;
        Point p;
        if (!project_onto_active(P.faces, active, x, p) || !feasible(p)) continue;
        const double d = distance(p, x);
        if (d < best_d) {
            best_d = d;
            best = p;
        }
    }
    if (best.empty()) fail(ErrorCode::InvalidParameter, "polyhedron appears to be empty");
    return single(best);
}

ProjectionResult project_fourier(const FourierMagnitude& f, const Point& x)
{
    const std::size_t n = f.modulus.size();
    const Matrix& F = dft_matrix(n);
    const Point y = F * x;
    std::vector<double> z(2 * n);
    bool singular = false;
    // coefficients this small are rounding residue of an exact zero
    const double zero_tol = 1e-14 * std::max(1.0, norm(x));
    for (std::size_t k = 0; k < n; ++k) {
        const double re = y[2 * k], im = y[2 * k + 1];
        const double a = std::hypot(re, im);
        const double b = f.modulus[k];
        if (b == 0.0) {
            z[2 * k] = z[2 * k + 1] = 0.0;
        } else if (a <= zero_tol) {
            // any phase is nearest; take phase zero
            singular = true;
            z[2 * k] = b;
            z[2 * k + 1] = 0.0;
        } else {
            z[2 * k] = b * re / a;
            z[2 * k + 1] = b * im / a;
        }
    }
    ProjectionResult r = single(transpose(F) * make_unchecked(std::move(z)));
    if (singular) r.multiplicity = Multiplicity::continuum;
    return r;
}

ProjectionResult project_product(const Product& p, const Point& x)
{
    std::vector<std::vector<double>> partial{{}};
    bool continuum = false;
    std::size_t off = 0;
    for (const auto& f : p.factors) {
        const std::size_t n = ambient_dim(f);
        std::vector<double> slice(x.begin() + off, x.begin() + off + n);
        off += n;
        const auto r = project(f, make_unchecked(std::move(slice)));
        continuum = continuum || r.degenerate();
        std::vector<std::vector<double>> next;
        next.reserve(partial.size() * r.points.size());
        for (const auto& head : partial)
            for (const auto& q : r.points) {
                auto v = head;
                v.insert(v.end(), q.begin(), q.end());
                next.push_back(std::move(v));
            }
        partial = std::move(next);
    }
    ProjectionResult out;
    for (auto& v : partial) out.points.push_back(make_unchecked(std::move(v)));
    sort_unique(out.points, 0.0);
    out.multiplicity = continuum ? Multiplicity::continuum
                       : out.points.size() > 1 ? Multiplicity::finite_tie
                                               : Multiplicity::unique;
    return out;
}

} // namespace

std::string_view kind_name(const SetSpec& s)
{
    static constexpr std::array<std::string_view, 12> names{
        "AffineSubspace", "Hyperplane", "HalfSpace", "Sphere", "Ball", "Cross",
        "OrthantComplement", "FinitePointSet", "Box", "FourierMagnitude", "Polyhedron", "Product"};
    return names[s.kind.index()];
}

std::string_view to_string(Multiplicity m)
{
    switch (m) {
    case Multiplicity::unique: return "unique";
    case Multiplicity::finite_tie: return "finite-tie";
    case Multiplicity::continuum: return "continuum";
    }
    return "unique";
}

std::size_t ambient_dim(const SetSpec& s)
{
    return std::visit(
        overloaded{
            [](const AffineSubspace& a) { return a.point.dim(); },
            [](const Hyperplane& h) { return h.normal.dim(); },
            [](const HalfSpace& h) { return h.normal.dim(); },
            [](const Sphere& sp) { return sp.center.dim(); },
            [](const Ball& b) { return b.center.dim(); },
            [](const Cross& c) { return c.dim; },
            [](const OrthantComplement& o) { return o.dim; },
            [](const FinitePointSet& f) { return f.points.empty() ? 0 : f.points.front().dim(); },
            [](const Box& b) { return b.lower.dim(); },
            [](const FourierMagnitude& f) { return 2 * f.modulus.size(); },
            [](const Polyhedron& p) { return p.faces.empty() ? 0 : p.faces.front().normal.dim(); },
            [](const Product& p) {
                std::size_t n = 0;
                for (const auto& f : p.factors) n += ambient_dim(f);
                return n;
            },
        },
        s.kind);
}

bool is_convex(const SetSpec& s)
{
    return std::visit(
        overloaded{
            [](const AffineSubspace&) { return true; },
            [](const Hyperplane&) { return true; },
            [](const HalfSpace&) { return true; },
            [](const Ball&) { return true; },
            [](const Box&) { return true; },
            [](const Polyhedron&) { return true; },
            [](const FinitePointSet& f) { return f.points.size() == 1; },
            [](const FourierMagnitude& f) {
                return std::all_of(f.modulus.begin(), f.modulus.end(), [](double b) { return b == 0.0; });
            },
            [](const Product& p) {
                return std::all_of(p.factors.begin(), p.factors.end(),
                                   [](const SetSpec& f) { return is_convex(f); });
            },
            [](const auto&) { return false; },
        },
        s.kind);
}

void validate(const SetSpec& s)
{
    auto bad = [&](const std::string& why) {
        fail(ErrorCode::InvalidParameter, std::string(kind_name(s)) +
                                              (s.label.empty() ? "" : " '" + s.label + "'") + ": " + why);
    };
    std::visit(
        overloaded{
            [&](const AffineSubspace& a) {
                if (a.point.empty()) bad("missing point");
                for (std::size_t i = 0; i < a.basis.size(); ++i) {
                    if (a.basis[i].dim() != a.point.dim()) bad("basis vector dimension mismatch");
                    for (std::size_t j = i; j < a.basis.size(); ++j) {
                        const double want = i == j ? 1.0 : 0.0;
                        if (std::abs(dot(a.basis[i], a.basis[j]) - want) > kOrthonormalTol)
                            bad("basis is not orthonormal");
                    }
                }
            },
            [&](const Hyperplane& h) {
                if (h.normal.empty() || norm(h.normal) == 0.0) bad("normal must be nonzero");
                if (!std::isfinite(h.offset)) bad("offset must be finite");
            },
            [&](const HalfSpace& h) {
                if (h.normal.empty() || norm(h.normal) == 0.0) bad("normal must be nonzero");
                if (!std::isfinite(h.offset)) bad("offset must be finite");
            },
            [&](const Sphere& sp) {
                if (sp.center.empty()) bad("missing center");
                if (!(sp.radius > 0.0) || !std::isfinite(sp.radius)) bad("radius must be positive");
            },
            [&](const Ball& b) {
                if (b.center.empty()) bad("missing center");
                if (!(b.radius > 0.0) || !std::isfinite(b.radius)) bad("radius must be positive");
            },
            [&](const Cross& c) {
                if (c.dim < 1) bad("dim must be positive");
            },
            [&](const OrthantComplement& o) {
                if (o.dim < 1) bad("dim must be positive");
            },
            [&](const FinitePointSet& f) {
                if (f.points.empty()) bad("needs at least one point");
                for (const auto& p : f.points)
                    if (p.dim() != f.points.front().dim()) bad("points differ in dimension");
            },
            [&](const Box& b) {
                if (b.lower.empty() || b.lower.dim() != b.upper.dim()) bad("lower/upper dimension mismatch");
                for (std::size_t i = 0; i < b.lower.dim(); ++i)
                    if (b.lower[i] > b.upper[i]) bad("lower exceeds upper");
            },
            [&](const FourierMagnitude& f) {
                if (f.transform != "dft") bad("unsupported transform '" + f.transform + "'");
                if (f.modulus.empty() || f.modulus.size() > kMaxFourierLength)
                    bad("signal length must be in [1, 16]");
                for (double b : f.modulus)
                    if (!(b >= 0.0) || !std::isfinite(b)) bad("modulus entries must be finite and >= 0");
            },
            [&](const Polyhedron& p) {
                if (p.faces.empty()) bad("needs at least one face");
                if (p.faces.size() > 20) bad("too many faces for exact enumeration");
                for (const auto& f : p.faces) {
                    if (f.normal.dim() != p.faces.front().normal.dim()) bad("face dimension mismatch");
                    if (norm(f.normal) == 0.0) bad("face normal must be nonzero");
                }
            },
            [&](const Product& p) {
                if (p.factors.empty()) bad("needs at least one factor");
                for (const auto& f : p.factors) validate(f);
            },
        },
        s.kind);
}

ProjectionResult project(const SetSpec& s, const Point& x)
{
    check_dim(s, x);
    return std::visit(
        overloaded{
            [&](const AffineSubspace& a) { return single(affine_projection(a, x)); },
            [&](const Hyperplane& h) { return single(project_hyperplane(h.normal, h.offset, x)); },
            [&](const HalfSpace& h) {
                return dot(h.normal, x) <= h.offset ? single(x)
                                                    : single(project_hyperplane(h.normal, h.offset, x));
            },
            [&](const Sphere& sp) {
                const Point d = x - sp.center;
                const double r = norm(d);
                if (r == 0.0)
                    return ProjectionResult{{sp.center + Point::unit(x.dim(), 0, sp.radius)},
                                            Multiplicity::continuum};
                return single(sp.center + (sp.radius / r) * d);
            },
            [&](const Ball& b) {
                const Point d = x - b.center;
                const double r = norm(d);
                return r <= b.radius ? single(x) : single(b.center + (b.radius / r) * d);
            },
            [&](const Cross&) {
                double m = 0.0;
                for (double v : x) m = std::max(m, std::abs(v));
                if (m == 0.0) return single(x);
                // distance to axis i is sqrt(|x|^2 - x_i^2): largest |x_i| wins
                std::vector<Point> cands;
                for (std::size_t i = 0; i < x.dim(); ++i)
                    if (std::abs(x[i]) >= m * (1.0 - kTieTol)) cands.push_back(Point::unit(x.dim(), i, x[i]));
                return nearest_of(cands, x);
            },
            [&](const OrthantComplement&) {
                double lo = *std::min_element(x.begin(), x.end());
                if (lo <= 0.0) return single(x);
                std::vector<Point> cands;
                for (std::size_t i = 0; i < x.dim(); ++i)
                    if (x[i] <= lo + kTieTol * std::max(1.0, lo)) {
                        Point p = x;
                        p[i] = 0.0;
                        cands.push_back(p);
                    }
                return nearest_of(cands, x);
            },
            [&](const FinitePointSet& f) { return nearest_of(f.points, x); },
            [&](const Box& b) {
                Point p = x;
                for (std::size_t i = 0; i < x.dim(); ++i) p[i] = std::clamp(x[i], b.lower[i], b.upper[i]);
                return single(p);
            },
            [&](const FourierMagnitude& f) { return project_fourier(f, x); },
            [&](const Polyhedron& p) { return project_polyhedron(p, x); },
            [&](const Product& p) { return project_product(p, x); },
        },
        s.kind);
}

std::vector<Point> reflect(const SetSpec& s, const Point& x)
{
    const auto r = project(s, x);
    std::vector<Point> out;
    out.reserve(r.points.size());
    for (const auto& p : r.points) out.push_back(2.0 * p - x);
    sort_unique(out, 0.0);
    return out;
}

double distance(const SetSpec& s, const Point& x) { return distance(project(s, x).first(), x); }

bool contains(const SetSpec& s, const Point& x, double tol)
{
    return distance(s, x) <= tol * std::max(1.0, norm(x));
}

const Matrix& dft_matrix(std::size_t n)
{
    require(n >= 1 && n <= kMaxFourierLength, ErrorCode::InvalidParameter,
            "DFT length must be in [1, 16], got " + std::to_string(n));
    static const std::array<Matrix, kMaxFourierLength + 1> cache = [] {
        std::array<Matrix, kMaxFourierLength + 1> out;
        for (std::size_t m = 1; m <= kMaxFourierLength; ++m) {
            Matrix F(2 * m, 2 * m);
            const double scale = 1.0 / std::sqrt(static_cast<double>(m));
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t j = 0; j < m; ++j) {
                    // exp(-2 pi i k j / m); reduce kj mod m first to keep the angle exact-ish
                    const double ang = -2.0 * std::numbers::pi * static_cast<double>((k * j) % m) /
                                       static_cast<double>(m);
                    const double a = scale * std::cos(ang), b = scale * std::sin(ang);
                    F(2 * k, 2 * j) = a;
                    F(2 * k, 2 * j + 1) = -b;
                    F(2 * k + 1, 2 * j) = b;
                    F(2 * k + 1, 2 * j + 1) = a;
                }
            out[m] = std::move(F);
        }
        return out;
    }();
    return cache[n];
}

std::vector<double> fourier_moduli(const Point& x)
{
    require(x.dim() % 2 == 0, ErrorCode::DimensionMismatch, "complex data needs an even dimension");
    const Point y = dft_matrix(x.dim() / 2) * x;
    std::vector<double> out(x.dim() / 2);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::hypot(y[2 * k], y[2 * k + 1]);
    return out;
}

/* functions */

std::string_view kind_name(const FunctionSpec& f)
{
    static constexpr std::array<std::string_view, 4> names{"Quadratic", "L1", "Indicator",
                                                           "MoreauEnvelopeOf"};
    return names[f.kind.index()];
}

void validate(const FunctionSpec& f)
{
    std::visit(overloaded{
                   [](const Quadratic& q) {
                       require(q.A.square() && q.A.rows() >= 1, ErrorCode::InvalidParameter,
                               "Quadratic: A must be square");
                       require(asymmetry(q.A) <= 1e-12, ErrorCode::InvalidParameter,
                               "Quadratic: A must be symmetric");
                       require(q.b.empty() || q.b.dim() == q.A.rows(), ErrorCode::DimensionMismatch,
                               "Quadratic: b dimension does not match A");
                   },
                   [](const L1& g) {
                       require(g.weight >= 0.0 && std::isfinite(g.weight), ErrorCode::InvalidParameter,
                               "L1: weight must be >= 0");
                       for (double d : g.scaling)
                           require(std::isfinite(d), ErrorCode::InvalidParameter, "L1: scaling not finite");
                   },
                   [](const Indicator& i) { validate(i.set); },
                   [](const MoreauEnvelopeOf& m) {
                       require(m.inner != nullptr, ErrorCode::InvalidParameter, "MoreauEnvelopeOf: missing function");
                       require(m.lambda > 0.0 && std::isfinite(m.lambda), ErrorCode::InvalidParameter,
                               "MoreauEnvelopeOf: lambda must be positive");
                       validate(*m.inner);
                   },
               },
               f.kind);
}

Point gradient(const Quadratic& q, const Point& x)
{
    Point g = 2.0 * (q.A * x);
    if (!q.b.empty()) g += q.b;
    return g;
}

double evaluate(const FunctionSpec& f, const Point& x)
{
    return std::visit(
        overloaded{
            [&](const Quadratic& q) {
                double v = dot(x, q.A * x);
                if (!q.b.empty()) v += dot(q.b, x);
                return v;
            },
            [&](const L1& g) {
                require(g.scaling.empty() || g.scaling.size() == x.dim(), ErrorCode::DimensionMismatch,
                        "L1: scaling length does not match point");
                double s = 0.0;
                for (std::size_t i = 0; i < x.dim(); ++i)
                    s += std::abs((g.scaling.empty() ? 1.0 : g.scaling[i]) * x[i]);
                return g.weight * s;
            },
            [&](const Indicator& ind) {
                return contains(ind.set, x, 1e-9) ? 0.0 : std::numeric_limits<double>::infinity();
            },
            [&](const MoreauEnvelopeOf& m) { return moreau_envelope(*m.inner, m.lambda, x); },
        },
        f.kind);
}

ProjectionResult prox(const FunctionSpec& f, double lambda, const Point& x)
{
    require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidParameter, "prox: lambda must be positive");
    return std::visit(
        overloaded{
            [&](const Quadratic& q) {
                const std::size_t n = q.A.rows();
                require(x.dim() == n, ErrorCode::DimensionMismatch, "prox: quadratic dimension mismatch");
                Matrix M = Matrix::identity(n);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) M(i, j) += 2.0 * lambda * q.A(i, j);
                const auto eig = eigen_symmetric(M);
                double lo = INFINITY, hi = 0.0;
                for (double v : eig.values) {
                    lo = std::min(lo, std::abs(v));
                    hi = std::max(hi, std::abs(v));
                }
                if (lo == 0.0 || hi / lo > 1e14)
                    fail(ErrorCode::SingularProx, "prox: I + 2*lambda*A is numerically singular");
                Point rhs = x;
                if (!q.b.empty()) rhs -= lambda * q.b;
                return single(solve(M, rhs));
            },
            [&](const L1& g) {
                require(g.scaling.empty() || g.scaling.size() == x.dim(), ErrorCode::DimensionMismatch,
                        "L1: scaling length does not match point");
                Point p = x;
                for (std::size_t i = 0; i < x.dim(); ++i) {
                    const double thr = lambda * g.weight * std::abs(g.scaling.empty() ? 1.0 : g.scaling[i]);
                    const double a = std::abs(x[i]) - thr;
                    p[i] = a > 0.0 ? std::copysign(a, x[i]) : 0.0;
                }
                return single(p);
            },
            [&](const Indicator& ind) { return project(ind.set, x); },
            [&](const MoreauEnvelopeOf& m) {
                // prox of the envelope e_mu f: x + lambda/(lambda+mu) (prox_{(lambda+mu) f}(x) - x)
                auto r = prox(*m.inner, lambda + m.lambda, x);
                const double w = lambda / (lambda + m.lambda);
                for (auto& p : r.points) p = x + w * (p - x);
                return r;
            },
        },
        f.kind);
}

double moreau_envelope(const FunctionSpec& f, double lambda, const Point& x)
{
    const auto r = prox(f, lambda, x);
    const Point& p = r.first();
    // prox points of an indicator lie in the set by construction
    const double fp = std::holds_alternative<Indicator>(f.kind) ? 0.0 : evaluate(f, p);
    return fp + norm_sq(p - x) / (2.0 * lambda);
}

} // namespace fixpt
