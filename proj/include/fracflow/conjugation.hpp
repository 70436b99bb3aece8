#ifndef FRACFLOW_CONJUGATION_HPP
#define FRACFLOW_CONJUGATION_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include <fracflow/errors.hpp>
#include <fracflow/iterate_solver.hpp>
#include <fracflow/maps_catalog.hpp>
#include <fracflow/truncated_series.hpp>

namespace fracflow
{

// inner_forward:  A = map^-n o P o map^n   (contracting maps, e.g. sine)
// inner_inverse:  A = map^n o P o map^-n   (expanding maps, e.g. logistic)
enum class Direction { inner_forward, inner_inverse };

inline const char *to_string(Direction d)
{
    return d == Direction::inner_forward ? "inner_forward" : "inner_inverse";
}

// Act first with whichever of map, map^-1 moves x towards the fixed point.
template <typename Real>
Direction choose_direction(const MapSpec<Real> &map, const Real &x)
{
    using std::abs;
    const Real a1 = abs(map.multiplier());
    if (a1 > 1) {
        return Direction::inner_inverse;
    }
    if (a1 < 1) {
        return Direction::inner_forward;
    }
    return abs(map.forward(x)) <= abs(x) ? Direction::inner_forward : Direction::inner_inverse;
}

// outer^n o core o inner^n at x. Stages are numbered 1..n for the inner
// steps, n + 1 for the core, n + 2..2n + 1 for the outer steps; a domain
// failure is rethrown with that stage index.
template <typename Real, typename Core>
Real conjugate_eval_with(const MapSpec<Real> &map, Core &&core, long n, Direction dir, const Real &x)
{
    const auto &inner = dir == Direction::inner_forward ? map.forward : map.inverse;
    const auto &outer = dir == Direction::inner_forward ? map.inverse : map.forward;
    auto staged = [](auto &&fn, const Real &y, long stage) -> Real {
        try {
            return fn(y);
        } catch (const pole_error &e) {
            throw pole_error("stage " + std::to_string(stage) + ": " + e.what(), to_double(y),
                             static_cast<int>(stage));
        } catch (const domain_error &e) {
            throw domain_error("stage " + std::to_string(stage) + ": " + e.what(), to_double(y),
                               static_cast<int>(stage));
        }
    };
    Real y = x;
    for (long j = 1; j <= n; ++j) {
        y = staged(inner, y, j);
    }
    y = staged(core, y, n + 1);
    for (long j = 1; j <= n; ++j) {
        y = staged(outer, y, n + 1 + j);
    }
    return y;
}

// Map series long enough for an order-N parabolic flow (N + m - 1 terms).
template <typename Real>
MapSeries<Rational> exact_series_for_flow(const MapSpec<Real> &map, std::size_t order)
{
    if (!map.has_exact_series()) {
        throw usage_error("map '" + map.name + "' has no rational series");
    }
    const auto probe = map.exact_series(order);
    const std::size_t m = probe.tscale_index();
    if (m == 0) {
        return probe;
    }
    return map.exact_series(order + m - 1);
}

template <typename Real>
MapSeries<Real> real_series_for_flow(const MapSpec<Real> &map, std::size_t order)
{
    const auto probe = map.series(order);
    const std::size_t m = probe.tscale_index();
    if (probe.kind() != MapKind::parabolic || m == 0) {
        return probe;
    }
    return map.series(order + m - 1);
}

// A_{n,t} = outer^n o P_{N,t} o inner^n for one map, flow and depth.
template <typename Real>
class ConjugatedApproximant
{
public:
    using Flow = std::variant<std::shared_ptr<const FlowSeries<TPolynomial>>, FlowSeries<Real>>;

    ConjugatedApproximant(std::shared_ptr<const MapSpec<Real>> map, Flow flow, long n, Direction dir)
        : m_map(std::move(map)), m_flow(std::move(flow)), m_n(n), m_dir(dir)
    {
        if (n < 0) {
            throw usage_error("conjugation depth must be non-negative");
        }
    }

    const MapSpec<Real> &map() const noexcept
    {
        return *m_map;
    }
    long depth() const noexcept
    {
        return m_n;
    }
    Direction direction() const noexcept
    {
        return m_dir;
    }

    // P_{N,t}: the exact flow reduced at t, or the numeric flow if it was
    // solved for this very t.
    TruncatedSeries<Real> series_at(const Real &t) const
    {
        if (const auto *exact = std::get_if<0>(&m_flow)) {
            return eval_at_t((*exact)->coeffs, t);
        }
        const auto &num = std::get<1>(m_flow);
        if (!num.t || *num.t != t) {
            throw usage_error("numeric flow was solved for a different t");
        }
        return num.coeffs;
    }

    Real operator()(const Real &t, const Real &x) const
    {
        const auto p = series_at(t);
        return eval(p, x);
    }

    // Evaluate with a pre-reduced P (grid sweeps at fixed t).
    Real eval(const TruncatedSeries<Real> &p, const Real &x) const
    {
        return conjugate_eval_with(
            *m_map, [&p](const Real &y) { return series_eval(p, y); }, m_n, m_dir, x);
    }

private:
    std::shared_ptr<const MapSpec<Real>> m_map;
    Flow m_flow;
    long m_n;
    Direction m_dir;
};

template <typename Real>
Real conjugate_eval(const ConjugatedApproximant<Real> &a, const Real &t, const Real &x)
{
    return a(t, x);
}

// x_t(x) for any real t: t = k + tau with tau in [0, 1), then
// map^k(A_{n,tau}(x)). Parabolic maps with rational series share one exact
// polynomial flow across all tau; other maps are solved per tau (the last
// solve is cached). The conjugation direction is chosen per point unless
// fixed at construction.
template <typename Real>
class IterateEvaluator
{
public:
    IterateEvaluator(MapSpec<Real> map, std::size_t order, long n, std::optional<Direction> dir = std::nullopt)
        : m_map(std::make_shared<const MapSpec<Real>>(std::move(map))), m_order(order), m_n(n), m_dir(dir)
    {
        if (order < 1) {
            throw usage_error("series order must be positive");
        }
        if (n < 0) {
            throw usage_error("conjugation depth must be non-negative");
        }
        if (m_map->kind() == MapKind::parabolic && m_map->has_exact_series()) {
            m_exact = std::make_shared<const FlowSeries<TPolynomial>>(
                solve_flow_exact(exact_series_for_flow(*m_map, order), order));
        }
    }

    const MapSpec<Real> &map() const noexcept
    {
        return *m_map;
    }
    std::size_t order() const noexcept
    {
        return m_order;
    }
    long depth() const noexcept
    {
        return m_n;
    }
    const std::shared_ptr<const FlowSeries<TPolynomial>> &exact_flow_series() const noexcept
    {
        return m_exact;
    }

    // P_{N,tau}.
    TruncatedSeries<Real> series_at(const Real &tau) const
    {
        if (m_exact) {
            return eval_at_t(m_exact->coeffs, tau);
        }
        if (!m_cached || m_cached_t != tau) {
            m_cached = solve_flow_numeric(real_series_for_flow(*m_map, m_order), tau, m_order).coeffs;
            m_cached_t = tau;
        }
        return *m_cached;
    }

    Direction direction_at(const Real &x) const
    {
        return m_dir ? *m_dir : choose_direction(*m_map, x);
    }

    // A_{depth,tau}(x) with no unit-interval reduction.
    Real conjugated(const Real &tau, const Real &x, std::optional<long> depth = std::nullopt) const
    {
        const auto p = series_at(tau);
        return conjugated_with(p, x, depth);
    }

    Real conjugated_with(const TruncatedSeries<Real> &p, const Real &x, std::optional<long> depth = std::nullopt) const
    {
        const long n = depth.value_or(m_n);
        return conjugate_eval_with(
            *m_map, [&p](const Real &y) { return series_eval(p, y); }, n, direction_at(x), x);
    }

    Real operator()(const Real &t, const Real &x, std::optional<long> depth = std::nullopt) const
    {
        using std::floor;
        const Real kf = floor(t);
        const Real tau = t - kf;
        const long k = static_cast<long>(kf);
        if (tau == 0) {
            return apply_n(*m_map, k, x);
        }
        return apply_n(*m_map, k, conjugated(tau, x, depth));
    }

    ConjugatedApproximant<Real> approximant(const Real &tau, Direction dir, std::optional<long> depth = {}) const
    {
        const long n = depth.value_or(m_n);
        if (m_exact) {
            return ConjugatedApproximant<Real>(m_map, m_exact, n, dir);
        }
        auto flow = solve_flow_numeric(real_series_for_flow(*m_map, m_order), tau, m_order);
        return ConjugatedApproximant<Real>(m_map, std::move(flow), n, dir);
    }

private:
    std::shared_ptr<const MapSpec<Real>> m_map;
    std::size_t m_order;
    long m_n;
    std::optional<Direction> m_dir;
    std::shared_ptr<const FlowSeries<TPolynomial>> m_exact;
    mutable std::optional<TruncatedSeries<Real>> m_cached;
    mutable Real m_cached_t{};
};

template <typename Real>
Real iterate_eval(const MapSpec<Real> &map, const Real &t, const Real &x, std::size_t order, long n)
{
    return IterateEvaluator<Real>(map, order, n)(t, x);
}

} // namespace fracflow

#endif
