#ifndef FRACFLOW_ERROR_ANALYSIS_HPP
#define FRACFLOW_ERROR_ANALYSIS_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <fracflow/conjugation.hpp>
#include <fracflow/errors.hpp>
#include <fracflow/iterate_solver.hpp>
#include <fracflow/maps_catalog.hpp>
#include <fracflow/numeric.hpp>

namespace fracflow
{

enum class ErrorKind { rel_error, succ_diff, leading_approx, delta_r };

const char *to_string(ErrorKind k);

struct ErrorRecord
{
    double x = 0.0;
    double t = 0.0;
    std::size_t order = 0;
    long depth = 0;
    double value = 0.0;
    ErrorKind kind = ErrorKind::rel_error;
};

// R_t(x, N, n) = (x_t(x) - A_{n,t}(x)) / x_t(x), with A from the evaluator
// (unit-interval reduction included).
template <typename Real>
Real relative_error_value(const IterateEvaluator<Real> &ev, const Real &t, const Real &x,
                          std::optional<long> depth = std::nullopt)
{
    const auto &map = ev.map();
    if (!map.has_exact_flow()) {
        throw usage_error("relative error needs a closed-form flow; map '" + map.name + "' has none");
    }
    const Real exact = map.exact_flow(t, x);
    if (exact == 0) {
        throw degenerate_error("relative error undefined: x_t(x) = 0", to_double(x));
    }
    const Real approx = ev(t, x, depth);
    return (exact - approx) / exact;
}

template <typename Real>
ErrorRecord relative_error(const MapSpec<Real> &map, const Real &t, const Real &x, std::size_t order, long depth)
{
    const IterateEvaluator<Real> ev(map, order, depth);
    return {to_double(x), to_double(t), order, depth, to_double(relative_error_value(ev, t, x)),
            ErrorKind::rel_error};
}

// S_t(x, n) = (A_n - A_{n-1}) / A_n.
template <typename Real>
Real successive_difference_value(const IterateEvaluator<Real> &ev, const Real &t, const Real &x, long depth)
{
    if (depth < 1) {
        throw usage_error("successive difference needs n >= 1");
    }
    const Real an = ev(t, x, depth);
    if (an == 0) {
        throw degenerate_error("successive difference undefined: A_n(x) = 0", to_double(x));
    }
    const Real prev = ev(t, x, depth - 1);
    return (an - prev) / an;
}

template <typename Real>
ErrorRecord successive_difference(const MapSpec<Real> &map, const Real &t, const Real &x, std::size_t order,
                                  long depth)
{
    const IterateEvaluator<Real> ev(map, order, depth);
    return {to_double(x), to_double(t), order, depth, to_double(successive_difference_value(ev, t, x, depth)),
            ErrorKind::succ_diff};
}

// delta_N(x, t) = (x_t(x) - P_{N,t}(x)) / x^{N+1}.
template <typename Real>
Real delta_n(const IterateEvaluator<Real> &ev, const Real &t, const Real &x)
{
    using std::pow;
    const auto &map = ev.map();
    if (!map.has_exact_flow()) {
        throw usage_error("delta_N needs a closed-form flow");
    }
    if (x == 0) {
        throw degenerate_error("delta_N undefined at x = 0", 0.0);
    }
    const auto p = ev.series_at(t);
    const Real diff = map.exact_flow(t, x) - series_eval(p, x);
    return diff / pow(x, static_cast<int>(ev.order() + 1));
}

// epsilon_n(x, t) = lambda^{n - t} x_{t-n}(x) for a hyperbolic map.
template <typename Real>
Real epsilon_n(const MapSpec<Real> &map, const Real &t, const Real &x, long depth)
{
    using std::pow;
    if (!map.has_exact_flow()) {
        throw usage_error("epsilon_n needs a closed-form flow");
    }
    if (map.kind() != MapKind::hyperbolic) {
        throw usage_error("epsilon_n needs a hyperbolic map");
    }
    const Real lam = map.multiplier();
    const Real shift = Real(depth) - t;
    return pow(lam, shift) * map.exact_flow(-shift, x);
}

template <typename Real>
struct HypergeomResult
{
    Real value;
    std::size_t terms;
};

// 2F1([1, b], [c], z) by term recursion
//   term_{k+1} = term_k (b + k) / (c + k) z,
// stopping once |term| < rel_tol |partial sum|. Needs |z| < 1.
template <typename Real>
HypergeomResult<Real> hypergeom_2f1_unit(const Real &b, const Real &c, const Real &z, double rel_tol = 1e-18)
{
    using std::abs;
    if (!(abs(z) < 1)) {
        throw domain_error("hypergeometric series needs |z| < 1", to_double(z));
    }
    Real sum(1);
    Real term(1);
    std::size_t k = 0;
    constexpr std::size_t max_terms = 1000000;
    while (k < max_terms) {
        term *= (b + Real(k)) / (c + Real(k)) * z;
        ++k;
        sum += term;
        if (abs(term) < Real(rel_tol) * abs(sum)) {
            break;
        }
    }
    return {sum, k + 1};
}

// c_k(t) = ((-2)^{k-1} / k!) prod_{j=0}^{k-1} (2^t - j) for x_1 = 2x(1-x).
template <typename Real>
Real logistic2_flow_coefficient(const Real &t, std::size_t k)
{
    using std::pow;
    const Real s = pow(Real(2), t);
    Real acc(1);
    for (std::size_t j = 0; j < k; ++j) {
        acc *= Real(-2) * (s - Real(j)) / Real(j + 1);
    }
    return acc / Real(-2);
}

// Closed-form delta_N for lambda = 2:
//   c_{N+1}(t) 2F1([1, N + 1 - 2^t], [N + 2], 2x).
template <typename Real>
Real delta_n_logistic2(const Real &t, const Real &x, std::size_t order, double rel_tol = 1e-18)
{
    using std::pow;
    const Real s = pow(Real(2), t);
    const Real lead = logistic2_flow_coefficient(t, order + 1);
    const auto h = hypergeom_2f1_unit(Real(order + 1) - s, Real(order + 2), Real(2 * x), rel_tol);
    return lead * h.value;
}

// Leading approximation to R_t(x, 2, N, n):
//   delta_N(y, t) 2^{n-N} u^{N+1} (1-2x)^{2^t (1 - 2^-n)} / (1 - (1-2x)^{2^t})
// with u = 1 - (1-2x)^{2^-n} and y = u / 2 = x_{-n}(x).
template <typename Real>
Real leading_error_logistic2(const Real &t, const Real &x, std::size_t order, long depth)
{
    using std::exp;
    using std::expm1;
    using std::log1p;
    using std::pow;
    if (!(x > 0 && x < Real(0.5))) {
        throw domain_error("leading error formula needs 0 < x < 1/2", to_double(x));
    }
    if (t < 0 || t > 1) {
        throw domain_error("leading error formula needs 0 <= t <= 1", to_double(t));
    }
    if (t == 0) {
        return Real(0);
    }
    const Real l = log1p(Real(-2) * x);
    const Real s = pow(Real(2), t);
    const Real inv_n = pow(Real(2), Real(-depth));
    const Real u = -expm1(inv_n * l);
    const Real y = u / 2;
    const Real num = pow(Real(2), Real(depth) - Real(order)) * pow(u, static_cast<int>(order + 1))
                     * exp(s * (1 - inv_n) * l);
    const Real den = -expm1(s * l);
    return delta_n_logistic2(t, y, order) * num / den;
}

// Ratio that tends to 1 under the error scaling law:
//   hyperbolic: lambda^N R(n+1) / R(n);
//   parabolic:  ((n+1)/n)^{N-1} R(n+1) / R(n).
template <typename Real>
Real scaling_ratio(const IterateEvaluator<Real> &ev, const Real &t, const Real &x, long depth)
{
    using std::pow;
    const Real rn = relative_error_value(ev, t, x, depth);
    if (rn == 0) {
        throw degenerate_error("scaling ratio undefined: R(n) = 0", to_double(x));
    }
    const Real rn1 = relative_error_value(ev, t, x, depth + 1);
    const auto &map = ev.map();
    const int order = static_cast<int>(ev.order());
    if (map.kind() == MapKind::hyperbolic) {
        return pow(map.multiplier(), order) * rn1 / rn;
    }
    if (depth < 1) {
        throw usage_error("parabolic scaling ratio needs n >= 1");
    }
    return pow(Real(depth + 1) / Real(depth), order - 1) * rn1 / rn;
}

template <typename Real>
Real scaling_check(const MapSpec<Real> &map, const Real &t, const Real &x, std::size_t order, long depth)
{
    return scaling_ratio(IterateEvaluator<Real>(map, order, depth), t, x, depth);
}

struct RadiusPoint
{
    std::size_t k = 0;
    double estimate = 0.0; // 1 / |c_k(t)|^{1/k}
    bool skipped = false;  // c_k(t) = 0
};

// Root-test radius estimates for k in [k_lo, k_hi] with the given stride.
std::vector<RadiusPoint> radius_estimate(const FlowSeries<TPolynomial> &flow, const Rational &t, std::size_t k_lo,
                                         std::size_t k_hi, std::size_t stride = 1);
std::vector<RadiusPoint> radius_estimate(const FlowSeries<Rational> &flow, std::size_t k_lo, std::size_t k_hi,
                                         std::size_t stride = 1);

struct ExtremaRow
{
    double t = 0.0;
    double computed = 0.0; // A_{5,t}(pi/2), N = 9
    double formula = 0.0;  // (pi/2)^{1 - sqrt t}
    double rel_discrepancy = 0.0;
};

inline constexpr std::size_t extrema_order = 9;
inline constexpr long extrema_depth = 5;

std::vector<ExtremaRow> extrema_table(const std::vector<double> &t_grid);

} // namespace fracflow

#endif
