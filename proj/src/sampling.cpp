#include "fixpt/sampling.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace fixpt {

namespace {

constexpr std::array<unsigned, 40> kPrimes{2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
                                           47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
                                           109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173};

std::size_t sample_dim(const SampleRegion& r)
{
    return r.constraint ? r.constraint->basis.size() : r.center.dim();
}

} // namespace

double radical_inverse(std::uint64_t i, unsigned base)
{
    double inv = 1.0 / base, f = inv, v = 0.0;
    while (i > 0) {
        v += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return v;
}

void validate(const SampleRegion& r)
{
    require(!r.center.empty(), ErrorCode::InvalidParameter, "sample region needs a center");
    require(r.inner_radius >= 0.0 && r.outer_radius > r.inner_radius && std::isfinite(r.outer_radius),
            ErrorCode::InvalidParameter, "sample region needs 0 <= inner < outer");
    require(r.count >= 1, ErrorCode::InvalidParameter, "sample count must be positive");
    if (r.constraint) {
        validate(SetSpec{*r.constraint, "constraint"});
        require(r.constraint->point.dim() == r.center.dim(), ErrorCode::DimensionMismatch,
                "constraint lives in a different space than the region center");
    }
    const std::size_t d = sample_dim(r);
    require(2 * ((d + 1) / 2) + 1 <= kPrimes.size(), ErrorCode::InvalidParameter, "sample dimension too large");
}

std::vector<Point> sample_points(const SampleRegion& r)
{
    validate(r);
    const std::size_t d = sample_dim(r);
    Point c = r.center;
    if (r.constraint) c = project(SetSpec{*r.constraint, ""}, c).first();
    if (d == 0) return std::vector<Point>(r.count, c);

    // uniforms: 2*ceil(d/2) for Box-Muller, one for the radius
    const std::size_t nu = 2 * ((d + 1) / 2) + 1;
    std::mt19937_64 rng(r.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> shift(nu);
    for (auto& s : shift) s = unif(rng);

    const double dd = static_cast<double>(d);
    const double a = std::pow(r.inner_radius, dd), b = std::pow(r.outer_radius, dd);

    std::vector<Point> out;
    out.reserve(r.count);
    std::vector<double> u(nu), g(d);
    for (std::size_t k = 0; k < r.count; ++k) {
        for (std::size_t j = 0; j < nu; ++j) {
            double v = radical_inverse(k + 1, kPrimes[j]) + shift[j];
            u[j] = v - std::floor(v);
        }
        for (std::size_t j = 0; j < d; j += 2) {
            const double rad = std::sqrt(-2.0 * std::log(std::max(u[j], 1e-300)));
            const double th = 2.0 * std::numbers::pi * u[j + 1];
            g[j] = rad * std::cos(th);
            if (j + 1 < d) g[j + 1] = rad * std::sin(th);
        }
        double gn = 0.0;
        for (double v : g) gn += v * v;
        gn = std::sqrt(gn);
        if (gn == 0.0) {
            g.assign(d, 0.0);
            g[0] = 1.0;
            gn = 1.0;
        }
        const double rho = std::pow(a + u[nu - 1] * (b - a), 1.0 / dd);

        Point x = c;
        if (r.constraint) {
            for (std::size_t j = 0; j < d; ++j) x += (rho * g[j] / gn) * r.constraint->basis[j];
        } else {
            for (std::size_t j = 0; j < d; ++j) x[j] += rho * g[j] / gn;
        }
        out.push_back(std::move(x));
    }
    return out;
}

bool in_region(const SampleRegion& r, const Point& x, double tol)
{
    const Point c = r.constraint ? project(SetSpec{*r.constraint, ""}, r.center).first() : r.center;
    const double d = distance(x, c);
    const double s = std::max(1.0, r.outer_radius);
    return d >= r.inner_radius - tol * s && d <= r.outer_radius + tol * s;
}

SampleRegion shrink_around(const SampleRegion& r, const Point& c, double radius, std::uint64_t salt)
{
    SampleRegion s = r;
    s.center = c;
    s.inner_radius = 0.0;
    s.outer_radius = radius;
    s.seed = r.seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
    return s;
}

} // namespace fixpt
