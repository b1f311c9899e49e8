#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fixpt/regularity.hpp"

namespace fixpt {

struct StopRule {
    double residual_tol = 1e-12;
    std::size_t max_iter = 100000;
    double divergence_radius = 1e8;
};

void validate(const StopRule& s);

enum class Outcome { converged, max_iter, diverged, continuum_degenerate };

std::string_view to_string(Outcome o);

// distances below this are rounding noise; no q-factor is formed from them
inline constexpr double kQFactorFloor = 1e-12;

struct Trace {
    std::vector<Point> iterates;                 // x^0 .. x^K
    std::vector<double> residuals;               // |x^k - y^k|, y^k the selected image of x^k
    std::optional<std::vector<double>> ref_distances; // dist(x^k, S)
    std::vector<std::optional<double>> q_factors;     // dist(x^{k+1}, S) / dist(x^k, S), k < K
    Outcome outcome = Outcome::max_iter;

    std::size_t iterations() const { return iterates.empty() ? 0 : iterates.size() - 1; }
    const Point& last() const { return iterates.back(); }
    double final_residual() const { return residuals.empty() ? INFINITY : residuals.back(); }
    std::optional<double> max_q(std::size_t from = 0) const;
};

// one Picard step: images of x at iteration `step`
using StepMap = std::function<Images(const Point& x, std::uint64_t step)>;

Trace picard(const StepMap& T, const Point& x0, const StopRule& stop = {},
             const std::optional<ZeroSet>& reference = std::nullopt);
Trace picard(const OperatorSpec& T, const Point& x0, const StopRule& stop = {}, const SelectionPolicy& policy = {},
             const std::optional<ZeroSet>& reference = std::nullopt);

struct AnnulusRate {
    int i = 0;
    double c_hat = 0.0;
    std::size_t count = 0;
};

/* Steps k are bucketed by the annulus (gamma^{i+1} delta, gamma^i delta] holding
 * dist(x^k, S); c_hat_i is the largest q-factor in the bucket. Without a center
 * set the trace's own reference distances are used. */
std::vector<AnnulusRate> annular_rate_analysis(const Trace& trace, double delta_bar, double gamma,
                                               const std::optional<ZeroSet>& center_set = std::nullopt);

struct Verdict {
    bool pass = false;
    std::optional<std::size_t> first_entry; // first k with x^k in the validity region
    std::optional<double> observed_c;       // max q-factor from first_entry on
    double final_residual = 0.0;
    Outcome outcome = Outcome::max_iter;
    std::string reason;
};

inline constexpr double kVerdictSlack = 0.02;

Verdict verdict(const Trace& trace, const RateCertificate& cert, double slack = kVerdictSlack);

} // namespace fixpt
