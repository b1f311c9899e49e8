#include "fixpt/driver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace fixpt {

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::converged: return "converged";
    case Outcome::max_iter: return "max-iter";
    case Outcome::diverged: return "diverged";
    case Outcome::continuum_degenerate: return "continuum-degenerate";
    }
    return "max-iter";
}

void validate(const StopRule& s)
{
    require(s.residual_tol > 0.0 && std::isfinite(s.residual_tol), ErrorCode::InvalidParameter,
            "stop: residual_tol must be positive");
    require(s.max_iter >= 1, ErrorCode::InvalidParameter, "stop: max_iter must be positive");
    require(s.divergence_radius > 0.0, ErrorCode::InvalidParameter, "stop: divergence_radius must be positive");
}

std::optional<double> Trace::max_q(std::size_t from) const
{
    std::optional<double> m;
    for (std::size_t k = from; k < q_factors.size(); ++k)
        if (q_factors[k]) m = m ? std::max(*m, *q_factors[k]) : *q_factors[k];
    return m;
}

Trace picard(const StepMap& T, const Point& x0, const StopRule& stop, const std::optional<ZeroSet>& reference)
{
    validate(stop);
    Trace tr;
    Point x = x0;
    for (std::size_t k = 0;; ++k) {
        Images im;
        try {
            im = T(x, k);
        } catch (const Error& e) {
            throw Error(e.code(), "iteration " + std::to_string(k) + ": " + e.what());
        }
        Point y = std::move(im.points.front());
        tr.iterates.push_back(x);
        tr.residuals.push_back(distance(y, x));
        if (im.continuum) {
            tr.outcome = Outcome::continuum_degenerate;
            break;
        }
        if (tr.residuals.back() <= stop.residual_tol) {
            tr.outcome = Outcome::converged;
            break;
        }
        if (k + 1 > stop.max_iter) {
            tr.outcome = Outcome::max_iter;
            break;
        }
        if (!all_finite(y) || norm(y) > stop.divergence_radius) {
            // record the escaping iterate too, so the blow-up is visible in the trace
            tr.iterates.push_back(y);
            tr.residuals.push_back(INFINITY);
            tr.outcome = Outcome::diverged;
            break;
        }
        x = std::move(y);
    }

    if (reference) {
        std::vector<double> d;
        d.reserve(tr.iterates.size());
        for (const auto& p : tr.iterates) d.push_back(all_finite(p) ? distance_to(*reference, p) : INFINITY);
        for (std::size_t k = 0; k + 1 < d.size(); ++k) {
            if (d[k] > kQFactorFloor && std::isfinite(d[k + 1]))
                tr.q_factors.push_back(d[k + 1] / d[k]);
            else
                tr.q_factors.push_back(std::nullopt);
        }
        tr.ref_distances = std::move(d);
    }
    return tr;
}

Trace picard(const OperatorSpec& T, const Point& x0, const StopRule& stop, const SelectionPolicy& policy,
             const std::optional<ZeroSet>& reference)
{
    require(policy.mode != SelectionMode::all_branches, ErrorCode::InvalidParameter,
            "picard needs a selecting policy, not all-branches");
    validate(T);
    return picard([&](const Point& x, std::uint64_t k) { return apply(T, x, policy, k); }, x0, stop, reference);
}

std::vector<AnnulusRate> annular_rate_analysis(const Trace& trace, double delta_bar, double gamma,
                                               const std::optional<ZeroSet>& center_set)
{
    require(delta_bar > 0.0 && gamma > 0.0 && gamma < 1.0, ErrorCode::InvalidParameter,
            "annuli need delta_bar > 0 and gamma in (0,1)");
    std::vector<double> d;
    if (center_set) {
        for (const auto& p : trace.iterates) d.push_back(all_finite(p) ? distance_to(*center_set, p) : INFINITY);
    } else if (trace.ref_distances) {
        d = *trace.ref_distances;
    } else {
        fail(ErrorCode::MissingReference, "annular analysis needs reference distances or a center set");
    }

    std::map<int, AnnulusRate> buckets;
    const double lg = std::log(1.0 / gamma);
    for (std::size_t k = 0; k + 1 < d.size(); ++k) {
        if (!(d[k] > kQFactorFloor) || d[k] > delta_bar || !std::isfinite(d[k + 1])) continue;
        int i = static_cast<int>(std::floor(std::log(delta_bar / d[k]) / lg));
        // guard the floor against rounding at the annulus edges: d in (gamma^{i+1} delta, gamma^i delta]
        while (i > 0 && d[k] > std::pow(gamma, i) * delta_bar) --i;
        while (d[k] <= std::pow(gamma, i + 1) * delta_bar) ++i;
        const double q = d[k + 1] / d[k];
        auto& b = buckets[i];
        b.i = i;
        b.c_hat = b.count == 0 ? q : std::max(b.c_hat, q);
        ++b.count;
    }
    std::vector<AnnulusRate> out;
    for (const auto& [i, b] : buckets) out.push_back(b);
    return out;
}

Verdict verdict(const Trace& trace, const RateCertificate& cert, double slack)
{
    Verdict v;
    v.outcome = trace.outcome;
    v.final_residual = trace.final_residual();
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        if (!cert.validity || in_region(*cert.validity, trace.iterates[k])) {
            v.first_entry = k;
            break;
        }
    }
    if (v.first_entry) v.observed_c = trace.max_q(*v.first_entry);

    if (cert.mode == CertificateMode::no_certificate || !cert.c) {
        v.reason = "no certificate to compare against";
        return v;
    }
    if (trace.outcome == Outcome::diverged || trace.outcome == Outcome::continuum_degenerate) {
        v.reason = "run ended " + std::string(to_string(trace.outcome));
        return v;
    }
    if (!v.first_entry) {
        v.reason = "iterates never entered the validity region";
        return v;
    }
    if (v.observed_c && *v.observed_c > *cert.c + slack) {
        v.reason = "observed rate exceeds certified rate";
        return v;
    }
    v.pass = true;
    v.reason = "observed rate within certificate";
    return v;
}

} // namespace fixpt
