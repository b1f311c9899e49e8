#include "helpers.hpp"
#include "oracles.hpp"

using namespace fixpt;

namespace {

EstimatorOptions flat(Execution ex = Execution::parallel)
{
    EstimatorOptions o;
    o.execution = ex;
    o.refine_rounds = 0;
    return o;
}

} // namespace

TEST_CASE("linear contraction: subregularity modulus is 1/(1-q)")
{
    const FunctionSpec f{Quadratic{Matrix::identity(3), Point()}, ""};
    for (double t : {0.05, 0.2, 0.4}) {
        const double q = 1.0 - 2.0 * t;
        const auto T = gradient_step(f, t);
        const SampleRegion r{Point::zeros(3), 0.0, 1.0, std::nullopt, 200, 1};
        const auto rep = estimate_subregularity(T, std::vector<Point>{Point::zeros(3)}, r, flat());
        CHECK(rep.constant == doctest::Approx(1.0 / (1.0 - q)).epsilon(1e-9));
        CHECK(rep.samples == 200);
    }
}

TEST_CASE("subregularity estimates grow with the sample count and match serially")
{
    const std::vector<SetSpec> sets{{Sphere{Point{0.0, 0.0}, 1.0}, ""}, {Sphere{Point{0.0, -1.5}, 3.0}, ""}};
    const auto T = cyclic_projections(sets);
    const ZeroSet fixed = std::vector<Point>{Point{0.0, 1.0}};
    double last = 0.0;
    for (std::size_t n : {32u, 128u, 512u}) {
        const SampleRegion r{Point{0.0, 1.0}, 0.0, 0.1, std::nullopt, n, 4};
        const auto p = estimate_subregularity(T, fixed, r, flat());
        const auto s = estimate_subregularity(T, fixed, r, flat(Execution::serial));
        CHECK(p.constant == s.constant);
        CHECK(p.argmax_point == s.argmax_point);
        CHECK(p.constant >= last);
        last = p.constant;
    }
    CHECK(last > 1.0);
}

TEST_CASE("violation profile: projector onto a convex set is firmly nonexpansive")
{
    const auto P = projector_op(SetSpec{Ball{Point{0.0, 0.0}, 1.0}, ""});
    const SampleRegion r{Point{1.0, 0.0}, 0.0, 1.5, std::nullopt, 400, 2};
    const auto prof = estimate_violation_profile(P, Point{1.0, 0.0}, r, default_alpha_grid(0.5));
    REQUIRE(!prof.entries.empty());
    CHECK(prof.epsilon_at(0.5) <= 1e-9);
    for (std::size_t i = 1; i < prof.entries.size(); ++i) {
        CHECK(prof.entries[i].alpha > prof.entries[i - 1].alpha);
        CHECK(prof.entries[i].epsilon <= prof.entries[i - 1].epsilon + 1e-12);
    }
    CHECK_THROWS_CODE(prof.epsilon_at(0.123456), ErrorCode::InvalidParameter);
}

TEST_CASE("violation ratio for a single pair")
{
    // identity: |x - y|^2 / |x - y|^2 - 1 = 0 for every alpha
    const Point x{1.0, 2.0}, y{-1.0, 0.5};
    CHECK(violation_ratio({x}, {y}, x, y, 0.5) == doctest::Approx(0.0));
    // zero map: (1-alpha)/alpha - 1
    const Point z{0.0, 0.0};
    CHECK(violation_ratio({z}, {z}, x, y, 0.25) == doctest::Approx(2.0));
    CHECK(violation_ratio({z}, {z}, x, y, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("steepest descent on an indefinite quadratic stays under the closed-form violation")
{
    const Matrix A = Matrix::diagonal({1.0, -0.1});
    const double t = 0.1, beta = 0.2;
    const auto cf = closed_form_fb_quadratic(A, t, beta);
    CHECK(lookup(cf, "L") == doctest::Approx(2.0));
    CHECK(lookup(cf, "tau") == doctest::Approx(0.2));
    const double eps = lookup(cf, "epsilon");
    CHECK(eps == doctest::Approx(0.1 * (2 * 0.2 + 0.2 * 4.0)));
    const auto T = gradient_step(FunctionSpec{Quadratic{A, Point()}, ""}, t);
    const SampleRegion r{Point{0.0, 0.0}, 0.0, 1.0, std::nullopt, 1000, 9};
    const auto prof = estimate_violation_profile(T, Point{0.0, 0.0}, r, {0.5});
    CHECK(prof.epsilon_at(0.5) <= eps + 0.01);
}

TEST_CASE("elemental subregularity")
{
    const SampleRegion r{Point{1.0, 0.0}, 0.0, 0.5, std::nullopt, 400, 3};
    const SetSpec ball{Ball{Point{0.0, 0.0}, 1.0}, ""};
    const NormalPair np{Point{1.0, 0.0}, Point{1.0, 0.0}};
    CHECK(estimate_elemental_subregularity(ball, Point{1.0, 0.0}, np, r).constant <= 1e-12);

    const SetSpec circle{Sphere{Point{0.0, 0.0}, 1.0}, ""};
    double last = INFINITY;
    for (double radius : {0.4, 0.1, 0.01}) {
        SampleRegion rr = r;
        rr.outer_radius = radius;
        const double c = estimate_elemental_subregularity(circle, Point{1.0, 0.0}, np, rr).constant;
        CHECK(c >= 0.0);
        CHECK(c <= last + 1e-12);
        last = c;
    }
    CHECK(last < 0.02);

    const SetSpec cross{Cross{2}, ""};
    const double c = estimate_elemental_subregularity(cross, Point{0.0, 0.0}, NormalPair{Point{1.0, 0.0}, Point{0.0, 1.0}},
                                                      SampleRegion{Point{0.0, 0.0}, 0.0, 1.0, std::nullopt, 400, 1})
                         .constant;
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
}

TEST_CASE("linear rate certificates")
{
    const auto tri = certify_linear_rate(0.0, 0.75, 8.0 / 9.0);
    REQUIRE(tri.c);
    CHECK(*tri.c == doctest::Approx(std::sqrt(37.0) / 8.0).epsilon(1e-12));
    CHECK(tri.mode == CertificateMode::certified_linear);
    const auto circ = certify_linear_rate(0.0, 2.0 / 3.0, oracle::circles_kappa(1.0) * oracle::circles_rho(1.0));
    REQUIRE(circ.c);
    CHECK(*circ.c == doctest::Approx(0.976525).epsilon(1e-6));
    const auto none = certify_linear_rate(0.5, 0.5, 2.0);
    CHECK(!none.c);
    CHECK(none.mode == CertificateMode::no_certificate);
    const auto ok = certify_linear_rate(0.01, 0.5, 2.0);
    REQUIRE(ok.c);
    CHECK(*ok.c == doctest::Approx(oracle::rate(0.01, 0.5, 2.0)));
    CHECK_THROWS_CODE(certify_linear_rate(0.0, 1.0, 1.0), ErrorCode::InvalidParameter);
    CHECK_THROWS_CODE(certify_linear_rate(-0.1, 0.5, 1.0), ErrorCode::InvalidParameter);
}

TEST_CASE("closed-form tables agree with independent algebra")
{
    const auto tri = closed_form_triangle();
    CHECK(lookup(tri, "kappa") * lookup(tri, "sigma") == doctest::Approx(lookup(tri, "kappa_bar")));
    CHECK(lookup(tri, "c") == doctest::Approx(oracle::rate(0.0, 0.75, 8.0 / 9.0)));
    for (double r : {0.5, 1.0, 2.0, 5.0}) {
        const auto c = closed_form_circles(r);
        CHECK(lookup(c, "kappa") == doctest::Approx(oracle::circles_kappa(r)).epsilon(1e-12));
        CHECK(lookup(c, "rho_limit") == doctest::Approx(oracle::circles_rho(r)).epsilon(1e-12));
        CHECK(lookup(c, "kappa_bar") == doctest::Approx(oracle::circles_kappa(r) * oracle::circles_rho(r)).epsilon(1e-12));
        CHECK(lookup(c, "c_bound") == doctest::Approx(oracle::circles_c(r)).epsilon(1e-12));
    }
    CHECK(lookup(closed_form_circles(1.0), "c_bound") == doctest::Approx(0.976524).epsilon(1e-6));
    for (int i = 0; i < 6; ++i) {
        const auto t = closed_form_tangent(i);
        CHECK(lookup(t, "inf_ratio") == doctest::Approx(oracle::tangent_inf_ratio(i)).epsilon(1e-12));
        CHECK(lookup(t, "c") < 1.0);
    }
    CHECK(lookup(closed_form_tangent(5), "c") > lookup(closed_form_tangent(0), "c"));
    CHECK_THROWS_CODE(lookup(tri, "nope"), ErrorCode::InvalidParameter);
}

TEST_CASE("estimator input validation")
{
    const auto P = projector_op(SetSpec{Ball{Point{0.0, 0.0}, 1.0}, ""});
    CHECK_THROWS_CODE(estimate_violation_profile(P, Point{0.0, 0.0}, SampleRegion{Point{0.0, 0.0}, 0.0, -1.0, std::nullopt}, {0.5}),
                      ErrorCode::InvalidParameter);
    CHECK_THROWS_CODE(estimate_violation_profile(P, Point{0.0, 0.0, 0.0}, SampleRegion{Point{0.0, 0.0}, 0.0, 1.0, std::nullopt}, {0.5}),
                      ErrorCode::DimensionMismatch);
}
