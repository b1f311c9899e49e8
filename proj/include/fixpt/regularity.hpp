#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fixpt/kernels.hpp"
#include "fixpt/productspace.hpp"
#include "fixpt/sampling.hpp"

namespace fixpt {

// every branch of a set-valued self-map at x
using SetValuedMap = std::function<std::vector<Point>(const Point&)>;

// the all-branches view of an operator used inside estimators
SetValuedMap branches_of(const OperatorSpec& T, std::size_t budget = 16);

// a zero set / fixed-point set: explicit points, or an analytic set
using ZeroSet = std::variant<std::vector<Point>, SetSpec>;

double distance_to(const ZeroSet& z, const Point& x);

struct EstimatorOptions {
    Execution execution = Execution::parallel;
    int refine_rounds = 3;
    double refine_factor = 0.25;
    std::size_t branch_budget = 16;
};

struct EstimateReport {
    std::string name;
    double constant = 0.0;
    std::size_t samples = 0; // samples that entered the max
    Point argmax_point;
    std::uint64_t seed = 0;
    SampleRegion region;
};

struct ViolationEntry {
    double alpha = 0.5;
    double epsilon = -1.0;
    Point argmax;
};

struct ViolationProfile {
    std::vector<ViolationEntry> entries; // sorted by alpha
    Point reference_point;
    SampleRegion region;
    std::size_t samples = 0;

    double epsilon_at(double alpha) const; // throws InvalidParameter when alpha is not on the grid
};

std::vector<double> default_alpha_grid(std::optional<double> theoretical = std::nullopt);

/* ratio behind the (epsilon, alpha) definition for one pair and all branch pairs:
 * max [|x+ - y+|^2 + (1-alpha)/alpha |(x - x+) - (y - y+)|^2] / |x - y|^2 - 1.
 * alpha = 1 measures plain nonexpansiveness. */
double violation_ratio(const std::vector<Point>& xp, const std::vector<Point>& yp, const Point& x, const Point& y,
                       double alpha);

// max violation over explicit pairs (xs[i], ys[i]); pairs closer than 1e-9 are skipped
MaxResult violation_on_points(const SetValuedMap& T, const std::vector<Point>& xs, const std::vector<Point>& ys,
                              double alpha, Execution ex = Execution::parallel);

ViolationProfile estimate_violation_profile(const SetValuedMap& T, const Point& y, const SampleRegion& region,
                                            std::vector<double> alpha_grid, const EstimatorOptions& opt = {});
ViolationProfile estimate_violation_profile(const OperatorSpec& T, const Point& y, const SampleRegion& region,
                                            std::vector<double> alpha_grid, const EstimatorOptions& opt = {});

// sup dist(x, zero_set) / dist(0, Tx - x)
EstimateReport estimate_subregularity(const SetValuedMap& T, const ZeroSet& zero_set, const SampleRegion& region,
                                      const EstimatorOptions& opt = {});
EstimateReport estimate_subregularity(const OperatorSpec& T, const ZeroSet& zero_set, const SampleRegion& region,
                                      const EstimatorOptions& opt = {});

struct NormalPair {
    Point y, v;
};

/* sup of the normalized elemental-subregularity inner product over samples
 * x in region (pushed onto `relative_to` when given) and x+ in P(x); clamped to [0,1]. */
EstimateReport estimate_elemental_subregularity(const SetSpec& set, const Point& xbar, const NormalPair& pair,
                                                const SampleRegion& region,
                                                const std::optional<SetSpec>& relative_to = std::nullopt,
                                                const EstimatorOptions& opt = {});
EstimateReport estimate_elemental_subregularity(const SetSpec& set, const Point& xbar,
                                                const std::vector<NormalPair>& pairs, const SampleRegion& region,
                                                const std::optional<SetSpec>& relative_to = std::nullopt,
                                                const EstimatorOptions& opt = {});

/* Product-space estimators. The region lives in R^{mn}; samples are pushed onto
 * Lambda. With anchor_first_block, every block is shifted by P_{Omega_1}(x_1) - x_1,
 * which keeps x in W(zeta) and puts x_1 on Omega_1. */
struct ProductSampling {
    AffineSubspace lambda;
    bool anchor_first_block = false;
};

// sup dist(x, inverse) / dist(zeta, Psi(x)); `inverse` is Psi^{-1}(zeta) cap Lambda in R^{mn}
EstimateReport estimate_subtransversality(const std::vector<SetSpec>& sets, const ProductPoint& xbar,
                                          const DifferenceVector& zeta, const SampleRegion& region,
                                          const ProductSampling& sampling, const ZeroSet& inverse,
                                          const EstimatorOptions& opt = {});

// sup dist(zeta, Psi(x)) / dist(0, Phi_zeta(x)); x_1 is always anchored on Omega_1
EstimateReport estimate_sigma(const std::vector<SetSpec>& sets, const DifferenceVector& zeta,
                              const SampleRegion& region, const AffineSubspace& lambda,
                              const EstimatorOptions& opt = {});

// sup dist(x, inverse) / dist(0, Phi_zeta(x)), the modulus of Phi_zeta measured directly
EstimateReport estimate_product_subregularity(const std::vector<SetSpec>& sets, const DifferenceVector& zeta,
                                              const SampleRegion& region, const ProductSampling& sampling,
                                              const ZeroSet& inverse, const EstimatorOptions& opt = {});

enum class CertificateMode { certified_linear, no_certificate, closed_form };

std::string_view to_string(CertificateMode m);

struct RateCertificate {
    double epsilon = 0.0, alpha = 0.5, kappa = 1.0;
    std::optional<double> c;
    CertificateMode mode = CertificateMode::no_certificate;
    std::optional<SampleRegion> validity;
    std::string provenance;
};

// c = sqrt(1 + eps - (1 - alpha)/(alpha kappa^2)) when eps = 0 or kappa < sqrt((1-alpha)/(eps alpha))
RateCertificate certify_linear_rate(double epsilon, double alpha, double kappa);

using ConstantsTable = std::vector<std::pair<std::string, double>>;

double lookup(const ConstantsTable& t, const std::string& name);

ConstantsTable closed_form_triangle();
ConstantsTable closed_form_circles(double r);
ConstantsTable closed_form_tangent(int i);
ConstantsTable closed_form_fb_quadratic(const Matrix& A, double t, std::optional<double> beta = std::nullopt);

// gauges of the tangent example
double tangent_gauge_f(double t);
double tangent_gauge_g(double t);

} // namespace fixpt
