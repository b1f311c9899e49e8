// Serial vs OpenMP timings of the estimator kernels. Each row also confirms
// that both executions return the same constant bit for bit.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include "fixpt/driver.hpp"

using namespace fixpt;

namespace {

struct Timing {
    double seconds;
    double value;
};

Timing time_it(const std::function<double()>& f, int reps)
{
    double best = INFINITY, v = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        v = f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, s);
    }
    return {best, v};
}

int row(const char* name, const std::function<double(Execution)>& f, int reps)
{
    const auto s = time_it([&] { return f(Execution::serial); }, reps);
    const auto p = time_it([&] { return f(Execution::parallel); }, reps);
    const bool same = s.value == p.value || (std::isnan(s.value) && std::isnan(p.value));
    std::printf("%-28s %12.4f %12.4f %8.2fx  %s\n", name, s.seconds * 1e3, p.seconds * 1e3, s.seconds / p.seconds,
                same ? "equal" : "MISMATCH");
    return same ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    const std::size_t scale = argc > 1 ? std::stoul(argv[1]) : 1;
    const int reps = 3;
    std::printf("threads: %d, scale: %zu\n", omp_get_max_threads(), scale);
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

    const double s3 = std::sqrt(3.0);
    const std::vector<SetSpec> tri{{Hyperplane{Point{0.0, 1.0}, 0.0}, ""},
                                   {Hyperplane{Point{-s3, 1.0}, s3}, ""},
                                   {Hyperplane{Point{s3, 1.0}, s3}, ""}};
    const Point u{-1.0 / 3.0, 0.0};
    const auto T = p0(tri);
    const auto zeta = difference_vectors(tri, u).front();
    const auto W = w_subspace(zeta);

    const std::vector<SetSpec> circ{{Sphere{Point{0.0, 0.0}, 1.0}, ""}, {Sphere{Point{0.0, -1.5}, 3.0}, ""}};
    const auto czeta = difference_vectors(circ, Point{0.0, 1.0}).front();
    const auto CW = w_subspace(czeta);

    auto opts = [](Execution ex) {
        EstimatorOptions o;
        o.execution = ex;
        return o;
    };

    int bad = 0;
    bad += row("reduce_max (1e6 sin)", [&](Execution ex) {
        return reduce_max(ex, 1000000 * scale, [](std::size_t i) { return std::optional<double>(std::sin(double(i) * 1e-3)); }).value;
    }, reps);
    bad += row("violation profile P0", [&](Execution ex) {
        SampleRegion r;
        r.center = u;
        r.count = 4000 * scale;
        return estimate_violation_profile(T, u, r, default_alpha_grid(0.75), opts(ex)).epsilon_at(0.75);
    }, reps);
    bad += row("subtransversality triangle", [&](Execution ex) {
        SampleRegion r;
        r.center = flatten(zeta.source_cycle);
        r.count = 20000 * scale;
        const ZeroSet inv = std::vector<Point>{flatten(zeta.source_cycle)};
        return estimate_subtransversality(tri, zeta.source_cycle, zeta, r, {W, true}, inv, opts(ex)).constant;
    }, reps);
    bad += row("sigma circles", [&](Execution ex) {
        SampleRegion r;
        r.center = flatten(czeta.source_cycle);
        r.outer_radius = 0.01;
        r.count = 20000 * scale;
        return estimate_sigma(circ, czeta, r, CW, opts(ex)).constant;
    }, reps);
    bad += row("elemental circle", [&](Execution ex) {
        SampleRegion r;
        r.center = Point{0.0, 1.0};
        r.outer_radius = 0.1;
        r.count = 20000 * scale;
        const SetSpec c{Sphere{Point{0.0, 0.0}, 1.0}, ""};
        return estimate_elemental_subregularity(c, Point{0.0, 1.0}, NormalPair{Point{0.0, 1.0}, Point{0.0, 1.0}}, r, c,
                                                opts(ex))
            .constant;
    }, reps);
    return bad ? 1 : 0;
}
