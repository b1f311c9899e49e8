#include "fixpt/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fixpt {

namespace {

constexpr double kPairExclusion = 1e-9;
constexpr double kResidualExclusion = 1e-12;

using RatioFn = std::function<std::optional<double>(const Point&)>;
using TransformFn = std::function<Point(const Point&)>;

double min_dist(const std::vector<Point>& ys, const Point& x)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : ys) best = std::min(best, distance(y, x));
    return best;
}

/* max of ratio(transform(x)) over the region's sample, then a few rounds of
 * resampling a shrinking ball around the current arg-max (kept inside the region) */
EstimateReport sup_ratio(const std::string& name, const SampleRegion& region, const EstimatorOptions& opt,
                         const TransformFn& transform, const RatioFn& ratio)
{
    EstimateReport rep;
    rep.name = name;
    rep.seed = region.seed;
    rep.region = region;

    auto run = [&](const std::vector<Point>& raw) {
        std::vector<Point> pts(raw.size());
        parallel_for(opt.execution, raw.size(), [&](std::size_t i) { pts[i] = transform ? transform(raw[i]) : raw[i]; });
        const auto r = reduce_max(opt.execution, pts.size(), [&](std::size_t i) { return ratio(pts[i]); });
        return std::make_pair(r, std::move(pts));
    };

    auto raw = sample_points(region);
    auto [best, pts] = run(raw);
    if (!best.found())
        fail(ErrorCode::EmptySample, name + ": every sample was excluded (" + std::to_string(raw.size()) + " drawn)");
    rep.constant = best.value;
    rep.samples = best.counted;
    rep.argmax_point = pts[best.index];
    Point anchor = raw[best.index];

    double radius = region.outer_radius;
    for (int round = 1; round <= opt.refine_rounds; ++round) {
        radius *= opt.refine_factor;
        auto cand = sample_points(shrink_around(region, anchor, radius, static_cast<std::uint64_t>(round)));
        std::vector<Point> keep;
        for (auto& p : cand)
            if (in_region(region, p)) keep.push_back(std::move(p));
        if (keep.empty()) continue;
        auto [r, tp] = run(keep);
        rep.samples += r.counted;
        if (r.found() && r.value > rep.constant) {
            rep.constant = r.value;
            rep.argmax_point = tp[r.index];
            anchor = keep[r.index];
        }
    }
    return rep;
}

TransformFn product_transform(const std::vector<SetSpec>& sets, std::size_t m, bool anchor)
{
    if (!anchor) return {};
    return [&sets, m](const Point& flat) {
        ProductPoint x = unflatten(flat, m);
        const Point shift = project(sets.front(), x.blocks.front()).first() - x.blocks.front();
        for (auto& b : x.blocks) b += shift;
        return flatten(x);
    };
}

SampleRegion on_lambda(SampleRegion r, const AffineSubspace& lambda)
{
    r.constraint = lambda;
    return r;
}

} // namespace

SetValuedMap branches_of(const OperatorSpec& T, std::size_t budget)
{
    const auto policy = SelectionPolicy::all(budget);
    return [T, policy](const Point& x) { return apply(T, x, policy).points; };
}

double distance_to(const ZeroSet& z, const Point& x)
{
    if (const auto* pts = std::get_if<std::vector<Point>>(&z)) {
        if (pts->empty()) fail(ErrorCode::DegenerateZeroSet, "zero set is empty");
        return min_dist(*pts, x);
    }
    return distance(std::get<SetSpec>(z), x);
}

double ViolationProfile::epsilon_at(double alpha) const
{
    for (const auto& e : entries)
        if (std::abs(e.alpha - alpha) < 1e-12) return e.epsilon;
    fail(ErrorCode::InvalidParameter, "alpha " + std::to_string(alpha) + " is not on the profile grid");
}

std::vector<double> default_alpha_grid(std::optional<double> theoretical)
{
    std::vector<double> g;
    for (int k = 1; k <= 9; ++k) g.push_back(k / 10.0);
    if (theoretical) {
        bool present = false;
        for (double a : g) present = present || std::abs(a - *theoretical) < 1e-12;
        if (!present) g.push_back(*theoretical);
    }
    std::sort(g.begin(), g.end());
    return g;
}

double violation_ratio(const std::vector<Point>& xp, const std::vector<Point>& yp, const Point& x, const Point& y,
                       double alpha)
{
    const double d2 = norm_sq(x - y);
    if (std::sqrt(d2) < kPairExclusion) return std::numeric_limits<double>::quiet_NaN();
    const double w = (1.0 - alpha) / alpha;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& a : xp)
        for (const auto& b : yp) {
            const double v = (norm_sq(a - b) + w * norm_sq((x - a) - (y - b))) / d2 - 1.0;
            worst = std::max(worst, v);
        }
    return worst;
}

MaxResult violation_on_points(const SetValuedMap& T, const std::vector<Point>& xs, const std::vector<Point>& ys,
                              double alpha, Execution ex)
{
    require(xs.size() == ys.size(), ErrorCode::DimensionMismatch, "violation_on_points: unequal pair lists");
    require(alpha > 0.0 && alpha <= 1.0, ErrorCode::InvalidParameter, "alpha must lie in (0,1]");
    return reduce_max(ex, xs.size(), [&](std::size_t i) -> std::optional<double> {
        const double v = violation_ratio(T(xs[i]), T(ys[i]), xs[i], ys[i], alpha);
        if (std::isnan(v)) return std::nullopt;
        return v;
    });
}

ViolationProfile estimate_violation_profile(const SetValuedMap& T, const Point& y, const SampleRegion& region,
                                            std::vector<double> alpha_grid, const EstimatorOptions& opt)
{
    require(y.dim() == region.center.dim(), ErrorCode::DimensionMismatch, "reference point outside the region's space");
    require(!alpha_grid.empty(), ErrorCode::InvalidParameter, "alpha grid is empty");
    for (double a : alpha_grid)
        require(a > 0.0 && a <= 1.0, ErrorCode::InvalidParameter, "alpha grid must lie in (0,1]");
    std::sort(alpha_grid.begin(), alpha_grid.end());

    const auto yp = T(y);
    ViolationProfile prof;
    prof.reference_point = y;
    prof.region = region;
    for (double a : alpha_grid) {
        auto rep = sup_ratio("violation", region, opt, {}, [&](const Point& x) -> std::optional<double> {
            const double v = violation_ratio(T(x), yp, x, y, a);
            if (std::isnan(v)) return std::nullopt;
            return v;
        });
        prof.samples = std::max(prof.samples, rep.samples);
        prof.entries.push_back({a, rep.constant, rep.argmax_point});
    }
    return prof;
}

ViolationProfile estimate_violation_profile(const OperatorSpec& T, const Point& y, const SampleRegion& region,
                                            std::vector<double> alpha_grid, const EstimatorOptions& opt)
{
    return estimate_violation_profile(branches_of(T, opt.branch_budget), y, region, std::move(alpha_grid), opt);
}

EstimateReport estimate_subregularity(const SetValuedMap& T, const ZeroSet& zero_set, const SampleRegion& region,
                                      const EstimatorOptions& opt)
{
    if (const auto* pts = std::get_if<std::vector<Point>>(&zero_set); pts && pts->empty())
        fail(ErrorCode::DegenerateZeroSet, "subregularity: zero set is empty");
    return sup_ratio("subregularity", region, opt, {}, [&](const Point& x) -> std::optional<double> {
        const double res = min_dist(T(x), x);
        if (res < kResidualExclusion) return std::nullopt;
        return distance_to(zero_set, x) / res;
    });
}

EstimateReport estimate_subregularity(const OperatorSpec& T, const ZeroSet& zero_set, const SampleRegion& region,
                                      const EstimatorOptions& opt)
{
    return estimate_subregularity(branches_of(T, opt.branch_budget), zero_set, region, opt);
}

EstimateReport estimate_elemental_subregularity(const SetSpec& set, const Point& xbar,
                                                const std::vector<NormalPair>& pairs, const SampleRegion& region,
                                                const std::optional<SetSpec>& relative_to,
                                                const EstimatorOptions& opt)
{
    require(!pairs.empty(), ErrorCode::InvalidParameter, "elemental subregularity: no normal pairs");
    require(xbar.dim() == ambient_dim(set), ErrorCode::DimensionMismatch, "xbar dimension mismatch");
    for (const auto& pr : pairs) {
        const auto back = project(set, pr.y + pr.v);
        if (min_dist(back.points, pr.y) > 1e-9)
            fail(ErrorCode::NotANormalPair, "v is not a proximal normal to the set at y");
    }

    TransformFn onto;
    if (relative_to) onto = [&](const Point& x) { return project(*relative_to, x).first(); };

    auto rep = sup_ratio("elemental_subregularity", region, opt, onto, [&](const Point& x) -> std::optional<double> {
        std::optional<double> worst;
        for (const auto& xp : project(set, x).points) {
            for (const auto& pr : pairs) {
                const Point w = pr.v - (x - xp);
                const Point d = xp - pr.y;
                const double den = norm(w) * norm(d);
                if (den < 1e-12) continue;
                const double v = dot(w, d) / den;
                worst = worst ? std::max(*worst, v) : v;
            }
        }
        return worst;
    });
    rep.constant = std::clamp(rep.constant, 0.0, 1.0);
    return rep;
}

EstimateReport estimate_elemental_subregularity(const SetSpec& set, const Point& xbar, const NormalPair& pair,
                                                const SampleRegion& region,
                                                const std::optional<SetSpec>& relative_to,
                                                const EstimatorOptions& opt)
{
    return estimate_elemental_subregularity(set, xbar, std::vector<NormalPair>{pair}, region, relative_to, opt);
}

EstimateReport estimate_subtransversality(const std::vector<SetSpec>& sets, const ProductPoint& xbar,
                                          const DifferenceVector& zeta, const SampleRegion& region,
                                          const ProductSampling& sampling, const ZeroSet& inverse,
                                          const EstimatorOptions& opt)
{
    if (const auto* pts = std::get_if<std::vector<Point>>(&inverse); pts && pts->empty())
        fail(ErrorCode::InverseSetUnavailable, "subtransversality: no description of the inverse image");
    const std::size_t m = sets.size();
    require(region.center.dim() == m * xbar.n(), ErrorCode::DimensionMismatch,
            "subtransversality: region must live in the product space");
    if (psi_gap(sets, zeta, xbar, opt.branch_budget) > 1e-8)
        fail(ErrorCode::InvalidParameter, "subtransversality: zeta is not in Psi(xbar)");

    return sup_ratio("subtransversality", on_lambda(region, sampling.lambda), opt,
                     product_transform(sets, m, sampling.anchor_first_block),
                     [&](const Point& flat) -> std::optional<double> {
                         const double gap = psi_gap(sets, zeta, unflatten(flat, m), opt.branch_budget);
                         if (gap < kResidualExclusion) return std::nullopt;
                         return distance_to(inverse, flat) / gap;
                     });
}

EstimateReport estimate_sigma(const std::vector<SetSpec>& sets, const DifferenceVector& zeta,
                              const SampleRegion& region, const AffineSubspace& lambda, const EstimatorOptions& opt)
{
    const std::size_t m = sets.size();
    return sup_ratio("sigma", on_lambda(region, lambda), opt, product_transform(sets, m, true),
                     [&](const Point& flat) -> std::optional<double> {
                         const ProductPoint x = unflatten(flat, m);
                         const double res = phi_zeta_residual(sets, zeta, x, opt.branch_budget);
                         if (res < kResidualExclusion) return std::nullopt;
                         return psi_gap(sets, zeta, x, opt.branch_budget) / res;
                     });
}

EstimateReport estimate_product_subregularity(const std::vector<SetSpec>& sets, const DifferenceVector& zeta,
                                              const SampleRegion& region, const ProductSampling& sampling,
                                              const ZeroSet& inverse, const EstimatorOptions& opt)
{
    const std::size_t m = sets.size();
    return sup_ratio("product_subregularity", on_lambda(region, sampling.lambda), opt,
                     product_transform(sets, m, sampling.anchor_first_block),
                     [&](const Point& flat) -> std::optional<double> {
                         const double res = phi_zeta_residual(sets, zeta, unflatten(flat, m), opt.branch_budget);
                         if (res < kResidualExclusion) return std::nullopt;
                         return distance_to(inverse, flat) / res;
                     });
}

std::string_view to_string(CertificateMode m)
{
    switch (m) {
    case CertificateMode::certified_linear: return "certified-linear";
    case CertificateMode::no_certificate: return "no-certificate";
    case CertificateMode::closed_form: return "closed-form";
    }
    return "no-certificate";
}

RateCertificate certify_linear_rate(double epsilon, double alpha, double kappa)
{
    require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::InvalidParameter, "certificate: epsilon must be >= 0");
    require(alpha > 0.0 && alpha < 1.0, ErrorCode::InvalidParameter, "certificate: alpha must lie in (0,1)");
    require(std::isfinite(kappa) && kappa > 0.0, ErrorCode::InvalidParameter, "certificate: kappa must be positive");
    RateCertificate cert;
    cert.epsilon = epsilon;
    cert.alpha = alpha;
    cert.kappa = kappa;
    const bool ok = epsilon == 0.0 || kappa < std::sqrt((1.0 - alpha) / (epsilon * alpha));
    if (!ok) return cert;
    const double rad = 1.0 + epsilon - (1.0 - alpha) / (alpha * kappa * kappa);
    cert.c = rad <= 0.0 ? 0.0 : std::sqrt(rad);
    cert.mode = CertificateMode::certified_linear;
    return cert;
}

double lookup(const ConstantsTable& t, const std::string& name)
{
    for (const auto& [k, v] : t)
        if (k == name) return v;
    fail(ErrorCode::InvalidParameter, "no constant named '" + name + "'");
}

ConstantsTable closed_form_triangle()
{
    const double s2 = std::sqrt(2.0);
    return {{"kappa", s2},
            {"sigma", 4.0 * s2 / 9.0},
            {"kappa_bar", 8.0 / 9.0},
            {"alpha", 0.75},
            {"epsilon", 0.0},
            {"c", std::sqrt(37.0) / 8.0}};
}

ConstantsTable closed_form_circles(double r)
{
    require(r > 0.0 && std::isfinite(r), ErrorCode::InvalidParameter, "circles: r must be positive");
    const double q = 2 * r * r + 6 * r + 9;
    const double p = 4 * r * r + 12 * r + 13;
    const double a = 2 * r + 3;
    return {{"kappa", 3.0 * a / std::sqrt(q)},
            {"rho_limit", std::sqrt(2.0) * std::sqrt(q) * a / (2.0 * std::sqrt(p) * (r + 2))},
            {"kappa_bar", 3.0 * std::sqrt(2.0) * a * a / (2.0 * std::sqrt(p) * (r + 2))},
            {"alpha", 2.0 / 3.0},
            {"epsilon", 0.0},
            {"c_bound", std::sqrt(1.0 - p * (r + 2) * (r + 2) / (9.0 * std::pow(a, 4)))}};
}

ConstantsTable closed_form_tangent(int i)
{
    require(i >= 0, ErrorCode::InvalidParameter, "tangent: annulus index must be >= 0");
    const double inf_ratio = 1.0 - 1.0 / std::sqrt(std::pow(2.0, -2.0 * (i + 1)) + 1.0);
    return {{"inf_ratio", inf_ratio},
            {"modulus", 1.0 / inf_ratio},
            {"c", std::sqrt(1.0 - inf_ratio * inf_ratio / 2.0)},
            {"alpha", 2.0 / 3.0},
            {"outer_radius", std::pow(2.0, -i)},
            {"inner_radius", std::pow(2.0, -(i + 1))}};
}

ConstantsTable closed_form_fb_quadratic(const Matrix& A, double t, std::optional<double> beta)
{
    require(A.square() && asymmetry(A) <= 1e-12, ErrorCode::InvalidParameter, "fb: A must be symmetric");
    const auto eig = eigen_symmetric(A);
    const double lmin = eig.values.front(), lmax = eig.values.back();
    const double L = 2.0 * std::max(std::abs(lmin), std::abs(lmax));
    const double tau = -2.0 * lmin; // hypomonotonicity violation of grad f = 2Ax + b
    const double threshold = tau < 0.0 ? 2.0 * std::abs(tau) / (L * L) : 0.0;
    if (!beta) {
        require(tau < 0.0, ErrorCode::InvalidParameter, "fb: beta is required unless A is positive definite");
        beta = threshold;
    }
    require(t > 0.0 && t < *beta, ErrorCode::InvalidParameter, "fb: step must lie in (0, beta)");
    const double alpha0 = t / *beta;
    const double alpha = alpha0 <= 0.5 ? 2.0 / 3.0 : 2.0 * alpha0 / (alpha0 + 1.0);
    return {{"L", L},
            {"tau", tau},
            {"tau_abs", std::abs(tau)},
            {"beta", *beta},
            {"epsilon", t * (2.0 * tau + *beta * L * L)},
            {"alpha0", alpha0},
            {"alpha", alpha},
            {"step_threshold", threshold}};
}

double tangent_gauge_f(double t) { return t * (1.0 - 1.0 / std::sqrt(t * t + 1.0)); }

double tangent_gauge_g(double t)
{
    const double f = tangent_gauge_f(t);
    return std::sqrt(std::max(0.0, t * t - 0.5 * f * f));
}

} // namespace fixpt
