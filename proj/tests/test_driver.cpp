#include "helpers.hpp"

using namespace fixpt;

namespace {

const FunctionSpec kHalving{Quadratic{Matrix::identity(1), Point()}, ""}; // t = 1/4 gives x -> x/2

RateCertificate cert_with(double c, double radius)
{
    RateCertificate k;
    k.c = c;
    k.mode = CertificateMode::certified_linear;
    k.validity = SampleRegion{Point{0.0}, 0.0, radius, std::nullopt};
    return k;
}

} // namespace

TEST_CASE("a projector onto a line converges after one step")
{
    const auto P = projector_op(SetSpec{Hyperplane{Point{0.0, 1.0}, 0.0}, ""});
    const auto t = picard(P, Point{1.0, 4.0});
    CHECK(t.outcome == Outcome::converged);
    CHECK(t.iterations() == 1);
    CHECK(t.last() == Point{1.0, 0.0});
    CHECK(t.final_residual() == 0.0);
}

TEST_CASE("cyclic projections on the triangle reach the unique fixed point")
{
    const double s3 = std::sqrt(3.0);
    const std::vector<SetSpec> sets{{Hyperplane{Point{0.0, 1.0}, 0.0}, ""},
                                    {Hyperplane{Point{-s3, 1.0}, s3}, ""},
                                    {Hyperplane{Point{s3, 1.0}, s3}, ""}};
    const Point xbar{-1.0 / 3.0, 0.0};
    const auto t = picard(cyclic_projections(sets), Point{0.2, 0.3}, {}, {}, ZeroSet{std::vector<Point>{xbar}});
    CHECK(t.outcome == Outcome::converged);
    CHECK(distance(t.last(), xbar) < 1e-10);
    REQUIRE(t.ref_distances);
    CHECK(t.max_q(1).value() <= std::sqrt(37.0) / 8.0 + 1e-9);
    CHECK(t.q_factors.size() == t.iterations());
}

TEST_CASE("douglas-rachford on parallel lines diverges")
{
    const auto ind = [](double off) { return FunctionSpec{Indicator{SetSpec{Hyperplane{Point{0.0, 1.0}, off}, ""}}, ""}; };
    StopRule stop;
    stop.divergence_radius = 1e3;
    const auto t = picard(douglas_rachford(ind(0.0), ind(1.0)), Point{0.3, 0.2}, stop);
    CHECK(t.outcome == Outcome::diverged);
    CHECK(norm(t.last()) > 1e3);
    CHECK(t.iterations() == 1001);
}

TEST_CASE("an undetermined projection stops the run")
{
    const auto t = picard(projector_op(SetSpec{Sphere{Point{0.0, 0.0}, 1.0}, ""}), Point{0.0, 0.0});
    CHECK(t.outcome == Outcome::continuum_degenerate);
}

TEST_CASE("annular rates of a halving map")
{
    const auto T = gradient_step(kHalving, 0.25);
    StopRule stop;
    stop.residual_tol = 1e-9;
    const auto t = picard(T, Point{1.0}, stop, {}, ZeroSet{std::vector<Point>{Point{0.0}}});
    CHECK(t.outcome == Outcome::converged);
    const auto ann = annular_rate_analysis(t, 1.0, 0.5);
    REQUIRE(ann.size() >= 10);
    for (std::size_t i = 0; i < ann.size(); ++i) {
        CHECK(ann[i].i == int(i));
        CHECK(ann[i].count == 1);
        CHECK(ann[i].c_hat == doctest::Approx(0.5));
    }
    // a coarser ratio collects several steps per annulus
    const auto coarse = annular_rate_analysis(t, 1.0, 0.25);
    CHECK(coarse.front().count == 2);
    CHECK_THROWS_CODE(annular_rate_analysis(t, 1.0, 1.5), ErrorCode::InvalidParameter);
}

TEST_CASE("verdicts compare observed and certified rates")
{
    const auto t = picard(gradient_step(kHalving, 0.25), Point{4.0}, {}, {}, ZeroSet{std::vector<Point>{Point{0.0}}});
    const auto good = verdict(t, cert_with(0.6, 1.0));
    CHECK(good.pass);
    REQUIRE(good.first_entry);
    CHECK(*good.first_entry == 2); // 4, 2, 1: x^2 is the first with |x| <= 1
    CHECK(good.observed_c.value() == doctest::Approx(0.5));
    CHECK(verdict(t, cert_with(0.49, 1.0)).pass); // within slack
    const auto bad = verdict(t, cert_with(0.4, 1.0));
    CHECK(!bad.pass);
    CHECK(!bad.reason.empty());
    CHECK(!verdict(t, RateCertificate{}).pass);
}

TEST_CASE("random selection runs are reproducible")
{
    const auto T = compose({projector_op(SetSpec{OrthantComplement{2}, ""}), projector_op(SetSpec{Ball{Point{1.0, 1.0}, 1.2}, ""})});
    StopRule stop;
    stop.max_iter = 200;
    const auto a = picard(T, Point{2.0, 2.0}, stop, SelectionPolicy::random(5));
    const auto b = picard(T, Point{2.0, 2.0}, stop, SelectionPolicy::random(5));
    CHECK(a.iterates == b.iterates);
    CHECK(a.residuals == b.residuals);
}

TEST_CASE("distances to a common point never grow for convex projections")
{
    const std::vector<SetSpec> sets{{Ball{Point{0.0, 0.0}, 1.0}, ""}, {Ball{Point{1.5, 0.0}, 1.0}, ""}};
    const Point p{0.75, 0.0};
    std::mt19937_64 g(8);
    for (int k = 0; k < 20; ++k) {
        StopRule stop;
        stop.max_iter = 500;
        const auto t = picard(cyclic_projections(sets), gaussian_point(g, 2, 3.0), stop, {},
                              ZeroSet{std::vector<Point>{p}});
        for (std::size_t i = 1; i < t.ref_distances->size(); ++i)
            CHECK((*t.ref_distances)[i] <= (*t.ref_distances)[i - 1] + 1e-12);
    }
}

TEST_CASE("stop rule validation")
{
    CHECK_THROWS_CODE(validate(StopRule{0.0, 10, 1e8}), ErrorCode::InvalidParameter);
    CHECK_THROWS_CODE(validate(StopRule{1e-9, 0, 1e8}), ErrorCode::InvalidParameter);
    CHECK_THROWS_CODE(validate(StopRule{1e-9, 10, -1.0}), ErrorCode::InvalidParameter);
}
