// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "fixpt/experiment.hpp"
#include "oracles.hpp"

using namespace fixpt;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    bool ok = true;
    std::vector<std::string> notes;

    void need(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
};

std::string fmt(const char* f, double a, double b = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CaseResult timed_case(const std::string& name, double& secs, const Json& given = Json::object())
{
    const auto t0 = std::chrono::steady_clock::now();
    auto r = run_case(name, merge_params(name, given));
    secs = seconds_since(t0);
    return r;
}

Point gauss(std::mt19937_64& g, std::size_t n, double s)
{
    std::normal_distribution<double> d(0.0, s);
    std::vector<double> v(n);
    for (auto& x : v) x = d(g);
    return Point(v);
}

std::vector<SetSpec> triangle_sets()
{
    const double s3 = std::sqrt(3.0);
    return {{Hyperplane{Point{0.0, 1.0}, 0.0}, ""}, {Hyperplane{Point{-s3, 1.0}, s3}, ""}, {Hyperplane{Point{s3, 1.0}, s3}, ""}};
}

const std::vector<SetSpec> kCircles{{Sphere{Point{0.0, 0.0}, 1.0}, ""}, {Sphere{Point{0.0, -1.5}, 3.0}, ""}};

void failed_checks(Criterion& c, const CaseResult& r)
{
    for (const auto& f : r.failures()) c.need(false, r.name + ": " + f);
}

Criterion triangle()
{
    Criterion c;
    double secs = 0.0;
    const auto r = timed_case("triangle", secs);
    failed_checks(c, r);
    const Point xbar{-1.0 / 3.0, 0.0};
    c.need(distance(r.primary().last(), xbar) <= 1e-8, "limit is not (-1/3, 0)");
    const double kappa = r.estimates["kappa"]["constant"], sigma = r.estimates["sigma"]["constant"];
    c.need(std::abs(kappa - std::sqrt(2.0)) <= 0.05 * std::sqrt(2.0), fmt("kappa %.6g", kappa));
    c.need(std::abs(sigma - 4 * std::sqrt(2.0) / 9) <= 0.05 * 4 * std::sqrt(2.0) / 9, fmt("sigma %.6g", sigma));
    c.need(r.certified_c() && std::abs(*r.certified_c() - std::sqrt(37.0) / 8.0) <= 1e-15, "certified c");
    c.need(r.primary().max_q(1).value_or(0.0) <= 0.780, "q-factor after step 1");
    // independent restarts from a seeded unit ball
    std::mt19937_64 g(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int s = 0; s < 20; ++s) {
        Point d{u(g), u(g)};
        if (norm(d) > 1.0) d = (1.0 / norm(d)) * d;
        const auto t = picard(cyclic_projections(triangle_sets()), xbar + d, {}, {}, ZeroSet{std::vector<Point>{xbar}});
        c.need(distance(t.last(), xbar) <= 1e-8, "start " + std::to_string(s) + " misses the limit");
        c.need(t.max_q(1).value_or(0.0) <= 0.780, "start " + std::to_string(s) + " q-factor");
    }
    c.need(secs < 2.0, fmt("runtime %.2f s", secs));
    c.notes.push_back(fmt("kappa=%.6g sigma=%.6g", kappa, sigma) + fmt(" c=%.6g t=%.2fs", *r.certified_c(), secs));
    return c;
}

Criterion circles()
{
    Criterion c;
    double secs = 0.0;
    const auto r = timed_case("circles", secs);
    failed_checks(c, r);
    const double kappa = r.estimates["kappa"]["constant"];
    const double target = 15.0 / std::sqrt(17.0);
    c.need(std::abs(kappa - target) <= 0.05 * target, fmt("kappa %.6g", kappa));
    const double bound = oracle::circles_c(1.0);
    const double q = r.primary().max_q().value_or(INFINITY);
    c.need(q <= bound + 0.01, fmt("max q %.6g above %.6g", q, bound + 0.01));
    c.need(secs < 5.0, fmt("runtime %.2f s", secs));
    c.notes.push_back(fmt("kappa=%.6g max_q=%.6g", kappa, q) + fmt(" t=%.2fs", secs));
    return c;
}

Criterion tangent()
{
    Criterion c;
    double secs = 0.0;
    const auto r = timed_case("tangent", secs);
    failed_checks(c, r);
    const auto ann = annular_rate_analysis(r.primary(), 1.0, 0.5);
    double prev = -INFINITY;
    for (int i = 0; i <= 6; ++i) {
        const auto it = std::find_if(ann.begin(), ann.end(), [&](const AnnulusRate& a) { return a.i == i; });
        if (it == ann.end()) {
            c.need(false, "annulus " + std::to_string(i) + " never visited");
            continue;
        }
        const double ir = oracle::tangent_inf_ratio(i);
        c.need(it->c_hat <= std::sqrt(1.0 - ir * ir / 2.0) + 0.05, fmt("c_hat_%g = %.6g", i, it->c_hat));
        c.need(it->c_hat >= prev, fmt("c_hat_%g decreases", i));
        c.need(it->c_hat < 1.0, fmt("c_hat_%g >= 1", i));
        prev = it->c_hat;
    }
    const auto& d = *r.primary().ref_distances;
    double worst = -INFINITY;
    for (std::size_t k = 0; k + 1 < d.size(); ++k) {
        // g(t) = sqrt(t^2 - f(t)^2 / 2) with f(t) = t(1 - 1/sqrt(t^2 + 1))
        const double t = d[k], f = t * (1.0 - 1.0 / std::sqrt(t * t + 1.0));
        worst = std::max(worst, d[k + 1] - std::sqrt(t * t - 0.5 * f * f));
    }
    c.need(worst <= 1e-10, fmt("gauge slack %.3g", worst));
    c.notes.push_back(fmt("c_hat_0=%.6g c_hat_6=%.6g", ann.front().c_hat, prev) + fmt(" gauge_slack=%.3g", worst));
    return c;
}

Criterion averaging()
{
    Criterion c;
    std::mt19937_64 g(4);
    auto pairs = [&](const Point& center, double s, std::vector<Point>& xs, std::vector<Point>& ys) {
        xs.clear();
        ys.clear();
        for (int i = 0; i < 1000; ++i) {
            xs.push_back(center + gauss(g, center.dim(), s));
            ys.push_back(center + gauss(g, center.dim(), s));
        }
    };
    std::vector<Point> xs, ys;

    const std::vector<SetSpec> convex{{Ball{Point{0.0, 0.0, 0.0}, 1.0}, "ball"},
                                      {HalfSpace{Point{1.0, -1.0, 0.5}, 0.2}, "halfspace"},
                                      {Hyperplane{Point{0.0, 2.0, 1.0}, 1.0}, "hyperplane"},
                                      {Box{Point{-1.0, 0.0, -2.0}, Point{1.0, 1.0, 0.0}}, "box"},
                                      {AffineSubspace{Point{1.0, 0.0, 0.0}, {Point{0.0, 0.6, 0.8}}}, "affine"},
                                      {Polyhedron{{HalfSpace{Point{1.0, 0.0, 0.0}, 0.5}, HalfSpace{Point{-1.0, 1.0, 1.0}, 0.0}}}, "polyhedron"}};
    pairs(Point::zeros(3), 2.0, xs, ys);
    for (const auto& s : convex) {
        const double e = violation_on_points(branches_of(projector_op(s)), xs, ys, 0.5).value;
        c.need(e <= 1e-9, s.label + fmt(" firm nonexpansiveness residual %.3g", e));
    }

    // composition and relaxation on nonconvex projectors, measured pair by pair
    const auto P1 = projector_op(kCircles[0]), P2 = projector_op(kCircles[1]);
    pairs(Point{0.0, 1.2}, 0.3, xs, ys);
    std::vector<Point> x2, y2;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x2.push_back(apply_one(P2, xs[i]));
        y2.push_back(apply_one(P2, ys[i]));
    }
    const double e2 = violation_on_points(branches_of(P2), xs, ys, 1.0).value;
    const double e1 = violation_on_points(branches_of(P1), x2, y2, 1.0).value;
    const double e12 = violation_on_points(branches_of(compose({P1, P2})), xs, ys, 1.0).value;
    c.need(e12 <= (1 + e1) * (1 + e2) - 1 + 0.01, fmt("composition %.4g vs %.4g", e12, (1 + e1) * (1 + e2) - 1));
    const auto T = compose({P1, P2});
    for (double lambda : {0.25, 0.5, 0.9}) {
        const double e = violation_on_points(branches_of(T), xs, ys, 2.0 / 3.0).value;
        const double el = violation_on_points(branches_of(km_relax(T, lambda)), xs, ys, lambda * 2.0 / 3.0).value;
        c.need(el <= lambda * e + 0.01, fmt("relaxation %.4g vs %.4g", el, lambda * e));
    }

    // cyclic projections over convex sets at the averaging constant m/(m+1)
    pairs(Point{-1.0 / 3.0, 0.0}, 1.0, xs, ys);
    const double et = violation_on_points(branches_of(cyclic_projections(triangle_sets())), xs, ys, 0.75).value;
    c.need(et <= 1e-9, fmt("triangle P0 at 3/4: %.3g", et));
    pairs(Point::zeros(3), 2.0, xs, ys);
    const std::vector<SetSpec> four(convex.begin(), convex.begin() + 4);
    const double e4 = violation_on_points(branches_of(cyclic_projections(four)), xs, ys, 4.0 / 5.0).value;
    c.need(e4 <= 1e-9, fmt("convex P0 at 4/5: %.3g", e4));
    c.notes.push_back(fmt("composition eps=%.4g, product bound %.4g", e12, (1 + e1) * (1 + e2) - 1));
    return c;
}

Criterion product_identities()
{
    Criterion c;
    std::mt19937_64 g(5);
    const std::vector<std::pair<std::vector<SetSpec>, Point>> studies{{triangle_sets(), Point{-1.0 / 3.0, 0.0}},
                                                                      {kCircles, Point{0.0, 1.0}}};
    double worst_sqrt_m = 0.0, worst_sum = 0.0;
    for (const auto& [sets, u] : studies) {
        for (const auto& zeta : difference_vectors(sets, u)) {
            Point s = Point::zeros(2);
            for (const auto& b : zeta.blocks) s += b;
            worst_sum = std::max(worst_sum, norm(s));
            for (int k = 0; k < 100; ++k) {
                const Point x1 = u + gauss(g, 2, 0.05);
                const double lhs = phi_zeta_residual(sets, zeta, lift_into_w(zeta, x1));
                const double rhs = std::sqrt(double(sets.size())) * distance(apply_one(p0(sets), x1), x1);
                worst_sqrt_m = std::max(worst_sqrt_m, std::abs(lhs - rhs));
            }
        }
    }
    const std::vector<SetSpec> finite{{FinitePointSet{{Point{0.0}, Point{1.0}}}, ""}, {FinitePointSet{{Point{0.0}, Point{0.75}}}, ""}};
    for (double u : {0.0, 1.0})
        for (const auto& zeta : difference_vectors(finite, Point{u}))
            worst_sum = std::max(worst_sum, std::abs(zeta.blocks[0][0] + zeta.blocks[1][0]));
    c.need(worst_sqrt_m <= 1e-10, fmt("sqrt(m) identity off by %.3g", worst_sqrt_m));
    c.need(worst_sum <= 1e-10, fmt("sum of zeta %.3g", worst_sum));

    // two disjoint slabs: every fixed point carries the same difference vector
    const std::vector<SetSpec> slabs{{HalfSpace{Point{0.0, 1.0}, 0.0}, ""}, {HalfSpace{Point{0.0, -1.0}, -1.0}, ""}};
    const auto ref = difference_vectors(slabs, Point{0.0, 0.0}).front();
    double spread = 0.0;
    for (double t : {-4.0, -1.5, 0.5, 2.0, 9.0}) {
        const auto z = difference_vectors(slabs, Point{t, 0.0});
        for (const auto& zz : z) spread = std::max(spread, distance(zz.as_product(), ref.as_product()));
    }
    c.need(spread <= 1e-8, fmt("difference vectors differ by %.3g", spread));
    c.notes.push_back(fmt("sqrt_m=%.2g sum=%.2g", worst_sqrt_m, worst_sum) + fmt(" spread=%.2g", spread));
    return c;
}

Criterion forward_backward_study()
{
    Criterion c;
    double secs = 0.0;
    const auto r = timed_case("fb_soft_threshold", secs);
    failed_checks(c, r);
    // threshold 2|tau|/L^2 for A = diag(2,1): tau = 2 * 1, L = 2 * 2
    const auto [lmin, lmax] = oracle::eig2(2.0, 0.0, 1.0);
    const double threshold = 2.0 * (2.0 * lmin) / ((2.0 * lmax) * (2.0 * lmax));
    c.need(0.1 < threshold, "step above the threshold");
    c.need(r.primary().outcome == Outcome::converged, "did not converge");
    const auto cert = r.certified_c();
    const double q = r.primary().max_q().value_or(INFINITY);
    c.need(cert && q <= *cert + 0.02, cert ? fmt("max q %.4g vs c %.4g", q, *cert) : "no certificate");
    for (double t : {0.01, 0.05, 0.1, 0.15, 0.2}) {
        const auto s = run_case("fb_soft_threshold", merge_params("fb_soft_threshold", Json{{"t", t}}));
        c.need(s.primary().outcome == Outcome::converged, fmt("t = %g did not converge", t));
    }
    c.notes.push_back(fmt("max_q=%.4g c=%.4g", q, cert.value_or(NAN)));
    return c;
}

Criterion inconsistent()
{
    Criterion c;
    double secs = 0.0;
    const auto r = timed_case("dr_vs_raar", secs);
    failed_checks(c, r);
    const NamedTrace* dr = nullptr;
    const NamedTrace* ra = nullptr;
    for (const auto& t : r.traces) (t.file == "trace_dr.csv" ? dr : ra) = &t;
    c.need(dr && dr->trace.outcome == Outcome::diverged && dr->trace.iterations() <= 10000, "DR not flagged diverged");
    c.need(ra && ra->trace.outcome == Outcome::converged && ra->trace.final_residual() <= 1e-8, "RAAR lines");
    double biggest = 0.0;
    if (ra)
        for (const auto& x : ra->trace.iterates) biggest = std::max(biggest, norm(x));
    c.need(biggest < 10.0, fmt("RAAR iterates reach %.3g", biggest));

    const auto p = timed_case("phase_retrieval_toy", secs, Json{{"consistent", false}, {"perturbation", 0.1}, {"beta", 0.7}});
    failed_checks(c, p);
    c.need(p.primary().final_residual() <= 1e-8, fmt("phase retrieval residual %.3g", p.primary().final_residual()));
    double pbig = 0.0;
    for (const auto& x : p.primary().iterates) pbig = std::max(pbig, norm(x));
    c.need(std::isfinite(pbig) && pbig < 100.0, fmt("phase retrieval iterates reach %.3g", pbig));
    c.notes.push_back(fmt("DR steps=%g, RAAR steps=%g", double(dr ? dr->trace.iterations() : 0),
                          double(ra ? ra->trace.iterations() : 0)) +
                      fmt(", phase steps=%g", double(p.primary().iterations())));
    return c;
}

Criterion elemental()
{
    Criterion c;
    EstimatorOptions opt;
    // cross at the origin, x restricted to the reference point itself
    const SetSpec cross{Cross{2}, ""};
    const SetSpec origin{AffineSubspace{Point{0.0, 0.0}, {}}, ""};
    std::vector<NormalPair> axis_pairs;
    for (double a : {-1.0, -0.3, 0.5, 2.0})
        for (double s : {-0.5, 0.4}) {
            // |v| < |a| keeps a + v nearest to a
            axis_pairs.push_back({Point{a, 0.0}, Point{0.0, s * std::abs(a)}});
            axis_pairs.push_back({Point{0.0, a}, Point{s * std::abs(a), 0.0}});
        }
    const auto ec = estimate_elemental_subregularity(cross, Point{0.0, 0.0}, axis_pairs,
                                                     SampleRegion{Point{0.0, 0.0}, 0.0, 1.0, std::nullopt, 64, 1}, origin, opt);
    c.need(ec.constant <= 1e-9, fmt("cross %.3g", ec.constant));

    // unit circle at (0,1), samples on the circle within 0.1
    const SetSpec circle{Sphere{Point{0.0, 0.0}, 1.0}, ""};
    const auto eo = estimate_elemental_subregularity(circle, Point{0.0, 1.0}, {NormalPair{Point{0.0, 1.0}, Point{0.0, 1.0}}, NormalPair{Point{0.0, 1.0}, Point{0.0, -0.5}}},
                                                     SampleRegion{Point{0.0, 1.0}, 0.0, 0.1, std::nullopt, 400, 2}, circle, opt);
    c.need(eo.constant <= 0.11, fmt("circle %.4g", eo.constant));

    std::mt19937_64 g(8);
    const std::vector<SetSpec> convex{{Ball{Point{0.0, 0.0}, 1.0}, "ball"},
                                      {HalfSpace{Point{1.0, 1.0}, 0.5}, "halfspace"},
                                      {Hyperplane{Point{0.0, 1.0}, 0.3}, "hyperplane"},
                                      {Box{Point{-1.0, -0.5}, Point{1.0, 0.5}}, "box"},
                                      {AffineSubspace{Point{0.0, 1.0}, {Point{0.6, 0.8}}}, "affine"},
                                      {Polyhedron{{HalfSpace{Point{1.0, 0.0}, 0.5}, HalfSpace{Point{-1.0, 1.0}, 0.0}}}, "polyhedron"}};
    double worst = 0.0;
    for (const auto& s : convex) {
        std::vector<NormalPair> ps;
        for (int k = 0; k < 8; ++k) {
            const Point z = gauss(g, 2, 2.0);
            const Point y = project(s, z).first();
            ps.push_back({y, z - y});
        }
        const double e = estimate_elemental_subregularity(s, ps.front().y, ps,
                                                          SampleRegion{ps.front().y, 0.0, 2.0, std::nullopt, 300, 3},
                                                          std::nullopt, opt)
                             .constant;
        worst = std::max(worst, e);
        c.need(e <= 1e-9, s.label + fmt(" %.3g", e));
    }
    c.notes.push_back(fmt("cross=%.2g circle=%.4g", ec.constant, eo.constant) + fmt(" convex=%.2g", worst));
    return c;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Criterion determinism(const fs::path& out)
{
    Criterion c;
    std::size_t files = 0;
    for (const auto& name : case_names()) {
        RunOptions opt;
        opt.seed_override = 17;
        const fs::path a = out / "determinism" / name / "a", b = out / "determinism" / name / "b";
        fs::remove_all(a);
        fs::remove_all(b);
        run_case_study(name, Json::object(), a, opt);
        run_case_study(name, Json::object(), b, opt);
        for (const auto& e : fs::directory_iterator(a)) {
            ++files;
            c.need(fs::exists(b / e.path().filename()) && slurp(e.path()) == slurp(b / e.path().filename()),
                   name + "/" + e.path().filename().string() + " differs");
        }
    }
    c.notes.push_back(std::to_string(files) + " files compared");
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "fixpt_acceptance";
    fs::create_directories(out);
    const std::vector<std::pair<const char*, std::function<Criterion()>>> all{
        {"triangle reproduction", triangle},
        {"two circles at r=1", circles},
        {"tangent line and circle sublinearity", tangent},
        {"averaging calculus properties", averaging},
        {"product-space identities", product_identities},
        {"forward-backward", forward_backward_study},
        {"DR vs RAAR on inconsistent problems", inconsistent},
        {"elemental subregularity calibration", elemental},
        {"determinism", [&] { return determinism(out); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        Criterion c;
        try {
            c = all[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.notes.push_back(std::string("error: ") + e.what());
        }
        std::string detail;
        for (const auto& n : c.notes) detail += (detail.empty() ? "" : "; ") + n;
        std::printf("criterion %zu: %s  %s  [%s]\n", i + 1, c.ok ? "PASS" : "FAIL", all[i].first, detail.c_str());
        std::fflush(stdout);
        failures += !c.ok;
    }
    std::printf("%d of %zu criteria passed\n", int(all.size()) - failures, all.size());
    return failures == 0 ? 0 : 1;
}
