#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "fixpt/errors.hpp"

namespace fixpt {

/* A point of the ambient space R^n.
 *
 * The checked constructors reject empty or non-finite coordinate lists.
 * Arithmetic results are not re-validated; iterations that blow up are caught
 * by the driver's divergence test instead. A default-constructed Point has
 * dim() == 0 and only serves as an "unset" placeholder. */
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords);

    static Point zeros(std::size_t n);
    static Point unit(std::size_t n, std::size_t i, double scale = 1.0);

    std::size_t dim() const noexcept { return c_.size(); }
    bool empty() const noexcept { return c_.empty(); }

    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }

    std::span<const double> coords() const noexcept { return c_; }
    const std::vector<double>& vec() const noexcept { return c_; }

    auto begin() const noexcept { return c_.begin(); }
    auto end() const noexcept { return c_.end(); }
    auto begin() noexcept { return c_.begin(); }
    auto end() noexcept { return c_.end(); }

    Point& operator+=(const Point& o);
    Point& operator-=(const Point& o);
    Point& operator*=(double s);

    /* exact coordinatewise equality */
    friend bool operator==(const Point& a, const Point& b) { return a.c_ == b.c_; }

private:
    struct Unchecked {};
    Point(std::vector<double> coords, Unchecked) : c_(std::move(coords)) {}

    friend Point make_unchecked(std::vector<double> coords);

    std::vector<double> c_;
};

/* for internal arithmetic whose inputs are already valid */
inline Point make_unchecked(std::vector<double> coords)
{
    return Point(std::move(coords), Point::Unchecked{});
}

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator-(Point a);
Point operator*(double s, Point a);
Point operator*(Point a, double s);

double dot(const Point& a, const Point& b);
double norm_sq(const Point& a);
double norm(const Point& a);
double distance(const Point& a, const Point& b);
double max_abs_diff(const Point& a, const Point& b);
bool all_finite(const Point& a) noexcept;

/* lexicographic order on coordinates: the total order used for
 * deterministic branch selection */
bool lex_less(const Point& a, const Point& b);

/* (1 - t) a + t b */
Point lerp(const Point& a, const Point& b, double t);

void require_same_dim(const Point& a, const Point& b, const char* what);

/* sort lexicographically and merge points closer than tol in max-norm */
void sort_unique(std::vector<Point>& pts, double tol = 1e-12);

} // namespace fixpt
