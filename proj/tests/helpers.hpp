#pragma once

#include <doctest.h>

#include <random>
#include <vector>

#include "fixpt/driver.hpp"

inline std::vector<double> coords(const fixpt::Point& p) { return p.vec(); }

inline bool near(const fixpt::Point& a, const fixpt::Point& b, double tol = 1e-12)
{
    return a.dim() == b.dim() && fixpt::max_abs_diff(a, b) <= tol;
}

inline fixpt::Point gaussian_point(std::mt19937_64& g, std::size_t n, double scale = 1.0)
{
    std::normal_distribution<double> d(0.0, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = d(g);
    return fixpt::Point(v);
}

#define CHECK_THROWS_CODE(expr, c)                                  \
    do {                                                            \
        bool thrown_ = false;                                       \
        try {                                                       \
            (void)(expr);                                           \
        } catch (const fixpt::Error& e_) {                          \
            thrown_ = true;                                         \
            CHECK_MESSAGE(e_.code() == (c), e_.what());             \
        }                                                           \
        CHECK_MESSAGE(thrown_, "expected an exception: " #expr);    \
    } while (0)
