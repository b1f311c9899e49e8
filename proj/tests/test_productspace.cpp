#include "helpers.hpp"

using namespace fixpt;

namespace {

std::vector<SetSpec> triangle()
{
    const double s3 = std::sqrt(3.0);
    return {{Hyperplane{Point{0.0, 1.0}, 0.0}, ""}, {Hyperplane{Point{-s3, 1.0}, s3}, ""}, {Hyperplane{Point{s3, 1.0}, s3}, ""}};
}

const std::vector<SetSpec> kCircles{{Sphere{Point{0.0, 0.0}, 1.0}, ""}, {Sphere{Point{0.0, -1.5}, 3.0}, ""}};

ProductPoint sum_check(const DifferenceVector& z)
{
    Point s = Point::zeros(z.blocks.front().dim());
    for (const auto& b : z.blocks) s += b;
    return {{s}};
}

bool near(const ProductPoint& a, const ProductPoint& b, double tol = 1e-12)
{
    return a.m() == b.m() && distance(a, b) <= tol;
}

} // namespace

TEST_CASE("permutation, flattening and norms")
{
    const ProductPoint x{{Point{1.0, 2.0}, Point{3.0, 4.0}, Point{5.0, 6.0}}};
    const auto p = permute(x);
    CHECK(p.blocks[0] == Point{3.0, 4.0});
    CHECK(p.blocks[2] == Point{1.0, 2.0});
    CHECK(permute(permute(permute(x))).blocks == x.blocks);
    CHECK(flatten(x) == Point{1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    CHECK(unflatten(flatten(x), 3).blocks == x.blocks);
    CHECK(norm(x) == doctest::Approx(std::sqrt(91.0)));
    CHECK_THROWS_CODE(unflatten(Point{1.0, 2.0, 3.0}, 2), ErrorCode::DimensionMismatch);
    CHECK_THROWS_CODE(validate(ProductPoint{{Point{1.0}}}), ErrorCode::InvalidParameter);
    CHECK_THROWS_CODE(validate(ProductPoint{{Point{1.0}, Point{1.0, 2.0}}}), ErrorCode::DimensionMismatch);
}

TEST_CASE("one-dimensional finite sets: difference vectors per fixed point")
{
    const std::vector<SetSpec> sets{{FinitePointSet{{Point{0.0}, Point{1.0}}}, ""},
                                    {FinitePointSet{{Point{0.0}, Point{0.75}}}, ""}};
    const auto z0 = difference_vectors(sets, Point{0.0});
    REQUIRE(z0.size() == 1);
    CHECK(near(z0[0].blocks[0], Point{0.0}));
    CHECK(near(z0[0].blocks[1], Point{0.0}));
    const auto z1 = difference_vectors(sets, Point{1.0});
    REQUIRE(z1.size() == 1);
    CHECK(near(z1[0].blocks[0], Point{0.25}));
    CHECK(near(z1[0].blocks[1], Point{-0.25}));
    CHECK_THROWS_CODE(difference_vectors(sets, Point{0.5}), ErrorCode::NotAFixedPoint);
}

TEST_CASE("triangle: the lifted cycle solves psi(x) = zeta")
{
    const auto sets = triangle();
    const Point u{-1.0 / 3.0, 0.0};
    const auto cycles = lift_to_cycle(sets, u);
    REQUIRE(cycles.size() == 1);
    const auto& z = cycles[0];
    for (std::size_t j = 0; j < sets.size(); ++j) CHECK(contains(sets[j], z.blocks[j], 1e-12));
    CHECK(z.blocks[0] == u);

    const auto zs = difference_vectors(sets, u);
    REQUIRE(zs.size() == 1);
    const auto& zeta = zs[0];
    CHECK(norm(sum_check(zeta)) <= 1e-12);
    CHECK(norm(zeta.as_product()) > 0.1);
    CHECK(near(zeta.as_product(), z - permute(z)));

    const auto ps = psi(sets, z);
    REQUIRE(ps.size() == 1);
    CHECK(near(ps[0], zeta.as_product()));
    CHECK(psi_gap(sets, zeta, z) <= 1e-12);
    CHECK(phi_zeta_residual(sets, zeta, z) <= 1e-12);
    const auto tz = t_zeta(sets, zeta, z);
    REQUIRE(tz.size() == 1);
    CHECK(near(tz[0], z));
}

TEST_CASE("circles: difference vector at the top of the unit circle")
{
    const auto zs = difference_vectors(kCircles, Point{0.0, 1.0});
    REQUIRE(zs.size() == 1);
    CHECK(near(zs[0].blocks[0], Point{0.0, -0.5}));
    CHECK(near(zs[0].blocks[1], Point{0.0, 0.5}));
    CHECK(psi_gap(kCircles, zs[0], zs[0].source_cycle) <= 1e-12);
}

TEST_CASE("T_zeta keeps W(zeta) invariant; the residual on W scales with sqrt(m)")
{
    std::mt19937_64 g(11);
    for (const auto& sets : {triangle(), kCircles}) {
        const Point u = sets.size() == 3 ? Point{-1.0 / 3.0, 0.0} : Point{0.0, 1.0};
        const auto zeta = difference_vectors(sets, u).front();
        const double m = double(sets.size());
        const auto W = w_subspace(zeta);
        CHECK(W.point.dim() == 2 * sets.size());
        for (int k = 0; k < 100; ++k) {
            const Point x1 = u + gaussian_point(g, 2, 0.05);
            const auto x = lift_into_w(zeta, x1);
            CHECK(x.blocks[0] == x1);
            CHECK(near(x - permute(x), zeta.as_product(), 1e-12));
            for (const auto& y : t_zeta(sets, zeta, x)) CHECK(near(y - permute(y), zeta.as_product(), 1e-12));
            const Point step = apply_one(p0(sets), x1) - x1;
            CHECK(phi_zeta_residual(sets, zeta, x) == doctest::Approx(std::sqrt(m) * norm(step)).epsilon(1e-9));
        }
    }
}

TEST_CASE("convex sets: one difference vector for every fixed point")
{
    const std::vector<SetSpec> sets{{HalfSpace{Point{0.0, 1.0}, 0.0}, ""},
                                    {HalfSpace{Point{0.0, -1.0}, -1.0}, ""},
                                    {Box{Point{-10.0, -10.0}, Point{10.0, 10.0}}, ""}};
    std::optional<DifferenceVector> first;
    for (double t : {-3.0, -1.0, 0.0, 2.5, 7.0}) {
        const auto zs = difference_vectors(sets, Point{t, 0.0});
        REQUIRE(zs.size() == 1);
        if (!first) first = zs[0];
        CHECK(near(zs[0].as_product(), first->as_product()));
    }
    CHECK(near(first->blocks[0], Point{0.0, -1.0}));
    CHECK(near(first->blocks[1], Point{0.0, 1.0}));
    CHECK(near(first->blocks[2], Point{0.0, 0.0}));
}

TEST_CASE("product-space validation")
{
    const auto sets = triangle();
    CHECK_THROWS_CODE(lift_to_cycle({sets[0]}, Point{0.0, 0.0}), ErrorCode::InvalidParameter);
    CHECK_THROWS_CODE(lift_to_cycle(kCircles, Point{0.0, -1.5}), ErrorCode::ContinuumEncountered);
    const auto zeta = difference_vectors(sets, Point{-1.0 / 3.0, 0.0}).front();
    CHECK_THROWS_CODE(psi_gap(sets, zeta, ProductPoint{{Point{0.0, 0.0}, Point{0.0, 0.0}}}), ErrorCode::DimensionMismatch);
}
