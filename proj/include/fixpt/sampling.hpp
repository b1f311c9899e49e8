#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fixpt/geometry.hpp"

namespace fixpt {

// annulus {x : inner <= |x - center| <= outer}, optionally intersected with an affine subspace
struct SampleRegion {
    Point center;
    double inner_radius = 0.0;
    double outer_radius = 1.0;
    std::optional<AffineSubspace> constraint;
    std::size_t count = 256;
    std::uint64_t seed = 0;
};

void validate(const SampleRegion& r);

/* Deterministic low-discrepancy sample: a shifted Halton sequence mapped to the
 * annulus (uniform in volume) inside the constraint subspace. The shift is drawn
 * from the seed, so a fixed (region, seed) always gives the same list, and a
 * longer list extends a shorter one. */
std::vector<Point> sample_points(const SampleRegion& r);

bool in_region(const SampleRegion& r, const Point& x, double tol = 1e-12);

// same region recentred and shrunk, keeping constraint and seed
SampleRegion shrink_around(const SampleRegion& r, const Point& c, double radius, std::uint64_t salt);

// radical inverse of i in the given base
double radical_inverse(std::uint64_t i, unsigned base);

} // namespace fixpt
