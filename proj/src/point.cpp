#include "fixpt/point.hpp"

#include <algorithm>
#include <string>

namespace fixpt {

namespace {

void check_coords(const std::vector<double>& c)
{
    require(!c.empty(), ErrorCode::InvalidPoint, "point must have at least one coordinate");
    for (std::size_t i = 0; i < c.size(); ++i)
        require(std::isfinite(c[i]), ErrorCode::InvalidPoint,
                "coordinate " + std::to_string(i) + " is not finite");
}

} // namespace

Point::Point(std::vector<double> coords) : c_(std::move(coords)) { check_coords(c_); }

Point::Point(std::initializer_list<double> coords) : c_(coords) { check_coords(c_); }

Point Point::zeros(std::size_t n)
{
    require(n >= 1, ErrorCode::InvalidPoint, "dimension must be positive");
    return make_unchecked(std::vector<double>(n, 0.0));
}

Point Point::unit(std::size_t n, std::size_t i, double scale)
{
    Point p = zeros(n);
    p.c_.at(i) = scale;
    return p;
}

void require_same_dim(const Point& a, const Point& b, const char* what)
{
    if (a.dim() != b.dim())
        fail(ErrorCode::DimensionMismatch, std::string(what) + ": dimension " +
                                               std::to_string(a.dim()) + " vs " +
                                               std::to_string(b.dim()));
}

Point& Point::operator+=(const Point& o)
{
    require_same_dim(*this, o, "addition");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Point& Point::operator-=(const Point& o)
{
    require_same_dim(*this, o, "subtraction");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Point& Point::operator*=(double s)
{
    for (double& v : c_) v *= s;
    return *this;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator-(Point a) { return a *= -1.0; }
Point operator*(double s, Point a) { return a *= s; }
Point operator*(Point a, double s) { return a *= s; }

double dot(const Point& a, const Point& b)
{
    require_same_dim(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

double norm_sq(const Point& a)
{
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

double norm(const Point& a)
{
    // scaled to avoid overflow near the divergence radius
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    if (m == 0.0 || !std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : a) s += (v / m) * (v / m);
    return m * std::sqrt(s);
}

double distance(const Point& a, const Point& b)
{
    require_same_dim(a, b, "distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double max_abs_diff(const Point& a, const Point& b)
{
    require_same_dim(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool all_finite(const Point& a) noexcept
{
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

bool lex_less(const Point& a, const Point& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Point lerp(const Point& a, const Point& b, double t)
{
    require_same_dim(a, b, "lerp");
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = (1.0 - t) * a[i] + t * b[i];
    return make_unchecked(std::move(out));
}

void sort_unique(std::vector<Point>& pts, double tol)
{
    std::sort(pts.begin(), pts.end(), lex_less);
    std::vector<Point> out;
    out.reserve(pts.size());
    for (auto& p : pts) {
        bool dup = false;
        for (const auto& q : out)
            if (max_abs_diff(p, q) <= tol) { dup = true; break; }
        if (!dup) out.push_back(std::move(p));
    }
    pts = std::move(out);
}

} // namespace fixpt
