#include <fracflow/error_analysis.hpp>

#include <boost/math/constants/constants.hpp>

namespace fracflow
{

const char *to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::rel_error:
        return "rel_error";
    case ErrorKind::succ_diff:
        return "succ_diff";
    case ErrorKind::leading_approx:
        return "leading_approx";
    case ErrorKind::delta_r:
        return "delta_r";
    }
    return "unknown";
}

namespace
{

std::vector<RadiusPoint> radius_from(const std::vector<Rational> &coeffs, std::size_t k_lo, std::size_t k_hi,
                                     std::size_t stride)
{
    if (k_lo < 1 || k_hi > coeffs.size() || k_lo > k_hi || stride == 0) {
        throw usage_error("radius range [" + std::to_string(k_lo) + ", " + std::to_string(k_hi)
                          + "] outside flow order " + std::to_string(coeffs.size()));
    }
    std::vector<RadiusPoint> out;
    for (std::size_t k = k_lo; k <= k_hi; k += stride) {
        const Rational &c = coeffs[k - 1];
        RadiusPoint p;
        p.k = k;
        if (is_zero(c)) {
            p.skipped = true;
        } else {
            p.estimate = std::exp(-log_abs(c) / static_cast<double>(k));
        }
        out.push_back(p);
    }
    return out;
}

} // namespace

std::vector<RadiusPoint> radius_estimate(const FlowSeries<TPolynomial> &flow, const Rational &t, std::size_t k_lo,
                                         std::size_t k_hi, std::size_t stride)
{
    if (flow.mode != FlowMode::exact_polynomial) {
        throw usage_error("radius_estimate needs an exact flow");
    }
    return radius_from(eval_at_t(flow.coeffs, t).coeffs(), k_lo, k_hi, stride);
}

std::vector<RadiusPoint> radius_estimate(const FlowSeries<Rational> &flow, std::size_t k_lo, std::size_t k_hi,
                                         std::size_t stride)
{
    return radius_from(flow.coeffs.coeffs(), k_lo, k_hi, stride);
}

std::vector<ExtremaRow> extrema_table(const std::vector<double> &t_grid)
{
    const double half_pi = boost::math::constants::half_pi<double>();
    const IterateEvaluator<double> ev(sine_map<double>(), extrema_order, extrema_depth);
    std::vector<ExtremaRow> rows;
    rows.reserve(t_grid.size());
    for (const double t : t_grid) {
        if (t < 0.0 || t > 1.0) {
            throw usage_error("extrema table needs t in [0, 1]");
        }
        ExtremaRow r;
        r.t = t;
        r.computed = ev(t, half_pi);
        r.formula = std::pow(half_pi, 1.0 - std::sqrt(t));
        r.rel_discrepancy = std::fabs(r.computed - r.formula) / std::fabs(r.formula);
        rows.push_back(r);
    }
    return rows;
}

} // namespace fracflow
