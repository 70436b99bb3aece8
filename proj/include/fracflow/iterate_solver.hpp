#ifndef FRACFLOW_ITERATE_SOLVER_HPP
#define FRACFLOW_ITERATE_SOLVER_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <fracflow/errors.hpp>
#include <fracflow/numeric.hpp>
#include <fracflow/tpolynomial.hpp>
#include <fracflow/truncated_series.hpp>

namespace fracflow
{

enum class MapKind { parabolic, hyperbolic, unsupported };

// Relative pivot tolerance for the hyperbolic order-by-order solve.
inline constexpr double resonance_tolerance = 1e-12;

// Default cap for exact polynomial-in-t solves.
inline constexpr std::size_t default_exact_order_cap = 81;

// Taylor coefficients a_1..a_N of a unit-step map x_1 about its fixed point.
template <FieldCoefficient S>
class MapSeries
{
public:
    explicit MapSeries(TruncatedSeries<S> a) : m_a(std::move(a))
    {
        if (is_zero(m_a[1])) {
            throw degenerate_error("map multiplier a_1 is zero", 0.0);
        }
    }

    std::size_t order() const noexcept
    {
        return m_a.order();
    }
    const TruncatedSeries<S> &coeffs() const noexcept
    {
        return m_a;
    }
    const S &operator[](std::size_t k) const
    {
        return m_a[k];
    }
    const S &multiplier() const
    {
        return m_a[1];
    }

    MapKind kind() const
    {
        if (m_a[1] == 1) {
            return MapKind::parabolic;
        }
        if (m_a[1] > 0) {
            return MapKind::hyperbolic;
        }
        return MapKind::unsupported;
    }

    // m = min{k > 1 : a_k != 0}; 0 when the series is the identity.
    std::size_t tscale_index() const
    {
        for (std::size_t k = 2; k <= m_a.order(); ++k) {
            if (!is_zero(m_a[k])) {
                return k;
            }
        }
        return 0;
    }

private:
    TruncatedSeries<S> m_a;
};

enum class FlowMode { exact_polynomial, numeric_at };

// Solved iterate x_t to order N. In exact mode the coefficients are
// polynomials in t; in numeric mode they are numbers for the stored t.
// `map` is the unit-step series in the same ring, truncated to N.
template <SeriesCoefficient C>
struct FlowSeries
{
    FlowMode mode;
    TruncatedSeries<C> coeffs;
    TruncatedSeries<C> map;
    std::size_t tscale_index = 0; // parabolic only
    std::optional<C> t;           // numeric mode only

    std::size_t order() const noexcept
    {
        return coeffs.order();
    }
};

namespace detail
{

// Parabolic recursion over a coefficient ring C with map scalars S. The
// x^{k+m-1} coefficient of x_1(x_t) - x_t(x_1) is linear in c_k with slope
// (m - k) a_m and free of c_j for j > k, so orders are solved one at a time
// along diagonals of the power table of x_t. c_m is the supplied scale.
template <SeriesCoefficient C, FieldCoefficient S>
TruncatedSeries<C> solve_parabolic(const TruncatedSeries<S> &a, std::size_t m, const C &cm, std::size_t order)
{
    const std::size_t top = order + m - 1;
    if (a.order() < top) {
        throw usage_error("map series of order " + std::to_string(a.order()) + " is too short: order "
                          + std::to_string(order) + " flow needs " + std::to_string(top) + " map coefficients");
    }
    const auto fpow = PowerTable<S>::of(a.truncated(top), top);
    const std::size_t w = top + 1;
    std::vector<C> g(w * w); // g[i * w + e] = [x^e] x_t^i
    std::vector<C> c(w);
    auto G = [&](std::size_t i, std::size_t e) -> C & { return g[i * w + e]; };

    c[1] = C(1);
    for (std::size_t i = 1; i <= top; ++i) {
        G(i, i) = C(1);
    }
    const S am = a[m];
    for (std::size_t k = 2; k <= order; ++k) {
        // Diagonal k of the power table, with c_k still zero.
        for (std::size_t i = 1; i + k - 1 <= top; ++i) {
            const std::size_t e = i + k - 1;
            if (i == 1) {
                G(1, e) = C{};
                continue;
            }
            C acc{};
            for (std::size_t l = 1; l < k; ++l) {
                if (is_zero(c[l])) {
                    continue;
                }
                const C &prev = G(i - 1, e - l);
                if (is_zero(prev)) {
                    continue;
                }
                acc += c[l] * prev;
            }
            G(i, e) = std::move(acc);
        }
        if (k == m) {
            c[k] = cm;
        } else {
            const std::size_t e = k + m - 1;
            C d0{};
            for (std::size_t i = 2; i <= e; ++i) {
                if (is_zero(a[i]) || is_zero(G(i, e))) {
                    continue;
                }
                d0 += G(i, e) * a[i];
            }
            for (std::size_t j = 1; j < e; ++j) {
                if (is_zero(c[j]) || is_zero(fpow.at(j, e))) {
                    continue;
                }
                d0 -= c[j] * fpow.at(j, e);
            }
            const S pivot = S(static_cast<long>(k) - static_cast<long>(m)) * am;
            c[k] = d0 / pivot;
        }
        if (!is_zero(c[k])) {
            for (std::size_t i = 1; i + k - 1 <= top; ++i) {
                G(i, i + k - 1) += c[k] * S(static_cast<long>(i));
            }
        }
    }
    c.erase(c.begin());
    c.resize(order);
    return TruncatedSeries<C>(std::move(c));
}

template <typename Real>
TruncatedSeries<Real> solve_hyperbolic(const TruncatedSeries<Real> &a, const Real &t, std::size_t order)
{
    using std::abs;
    using std::max;
    using std::pow;
    if (a.order() < order) {
        throw usage_error("map series of order " + std::to_string(a.order()) + " is too short for order "
                          + std::to_string(order));
    }
    const Real a1 = a[1];
    const auto fpow = PowerTable<Real>::of(a.truncated(order), order);
    PowerTable<Real> g(order);
    g.at(1, 1) = pow(a1, t);
    Real a1k = a1;
    for (std::size_t k = 2; k <= order; ++k) {
        a1k *= a1;
        g.fill_column(k);
        Real rhs(0);
        for (std::size_t j = 1; j < k; ++j) {
            rhs += g.at(1, j) * fpow.at(j, k);
        }
        for (std::size_t i = 2; i <= k; ++i) {
            rhs -= a[i] * g.at(i, k);
        }
        const Real pivot = a1 - a1k;
        if (abs(pivot) < Real(resonance_tolerance) * max(abs(a1), abs(a1k))) {
            throw resonance_error("resonant multiplier: pivot " + format_double(to_double(pivot)) + " at order "
                                  + std::to_string(k));
        }
        g.at(1, k) = rhs / pivot;
    }
    std::vector<Real> c(order);
    for (std::size_t k = 1; k <= order; ++k) {
        c[k - 1] = g.at(1, k);
    }
    return TruncatedSeries<Real>(std::move(c));
}

template <FieldCoefficient S>
std::size_t require_parabolic(const MapSeries<S> &f)
{
    if (f.kind() != MapKind::parabolic) {
        throw usage_error("exact polynomial flow needs a parabolic map (a_1 = 1); use the numeric solver");
    }
    const std::size_t m = f.tscale_index();
    if (m == 0) {
        throw usage_error("identity map has no t scale");
    }
    return m;
}

} // namespace detail

// Polynomial-in-t flow of a parabolic map, normalized by c_m(t) = a_m t.
// The map series must reach order N + m - 1.
FlowSeries<TPolynomial> solve_flow_exact(const MapSeries<Rational> &f, std::size_t order);

// Exact flow of a parabolic map at a fixed rational t; equal to
// solve_flow_exact evaluated at t, without polynomial arithmetic.
FlowSeries<Rational> solve_flow_at(const MapSeries<Rational> &f, const Rational &t, std::size_t order);

// Numeric flow at fixed t. Parabolic maps use the c_m = a_m t recursion in
// Real arithmetic; hyperbolic maps (a_1 > 0, a_1 != 1) set c_1 = a_1^t.
template <typename Real>
    requires is_real_v<Real>
FlowSeries<Real> solve_flow_numeric(const MapSeries<Real> &f, const Real &t, std::size_t order)
{
    switch (f.kind()) {
    case MapKind::parabolic: {
        const std::size_t m = detail::require_parabolic(f);
        auto coeffs = detail::solve_parabolic<Real, Real>(f.coeffs(), m, Real(f[m] * t), order);
        return FlowSeries<Real>{FlowMode::numeric_at, std::move(coeffs), f.coeffs().truncated(order), m, t};
    }
    case MapKind::hyperbolic:
        return FlowSeries<Real>{FlowMode::numeric_at, detail::solve_hyperbolic(f.coeffs(), t, order),
                                f.coeffs().truncated(order), 0, t};
    case MapKind::unsupported:
        break;
    }
    throw domain_error("unsupported multiplier a_1 <= 0: real flow a_1^t undefined", to_double(f.multiplier()));
}

// Rational map, numeric t: parabolic maps delegate to the exact solve
// evaluated at t; hyperbolic maps are solved in Real arithmetic.
template <typename Real>
    requires is_real_v<Real>
FlowSeries<Real> solve_flow_numeric(const MapSeries<Rational> &f, const Real &t, std::size_t order)
{
    if (f.kind() == MapKind::parabolic) {
        const auto exact = solve_flow_exact(f, order);
        return FlowSeries<Real>{FlowMode::numeric_at, eval_at_t(exact.coeffs, t),
                                series_to_real<Real>(f.coeffs().truncated(order)), exact.tscale_index, t};
    }
    return solve_flow_numeric(MapSeries<Real>(series_to_real<Real>(f.coeffs())), t, order);
}

// Reduce an exact flow to numeric mode at t.
template <typename Real>
    requires is_real_v<Real>
FlowSeries<Real> flow_at(const FlowSeries<TPolynomial> &flow, const Real &t)
{
    return FlowSeries<Real>{FlowMode::numeric_at, eval_at_t(flow.coeffs, t), eval_at_t(flow.map, t),
                            flow.tscale_index, t};
}

// v(x) = d x_t(x)/dt at t = 0: the linear-in-t coefficient of each c_k.
TruncatedSeries<Rational> velocity_series(const FlowSeries<TPolynomial> &flow);

struct UnitStepReport
{
    // Lowest order with a nonzero residual coefficient (0 when none).
    std::size_t first_nonzero_order = 0;
    // Largest |residual coefficient|; exact mode reports it rounded.
    double max_abs_residual = 0.0;

    bool exact_zero() const noexcept
    {
        return first_nonzero_order == 0;
    }
};

// Residual x_1(x_t) - x_t(x_1) through the flow's order.
template <SeriesCoefficient C>
UnitStepReport verify_unit_step(const FlowSeries<C> &flow)
{
    const auto lhs = series_compose(flow.map, flow.coeffs);
    const auto rhs = series_compose(flow.coeffs, flow.map);
    const auto res = series_sub(lhs, rhs);
    UnitStepReport report;
    for (std::size_t k = 1; k <= res.order(); ++k) {
        double mag = 0.0;
        if constexpr (std::same_as<C, TPolynomial>) {
            for (const auto &q : res[k].coeffs()) {
                mag = std::max(mag, std::fabs(rational_to_double(q)));
            }
        } else {
            using std::abs;
            mag = to_double(abs(res[k]));
        }
        if (!is_zero(res[k]) && report.first_nonzero_order == 0) {
            report.first_nonzero_order = k;
        }
        report.max_abs_residual = std::max(report.max_abs_residual, mag);
    }
    return report;
}

} // namespace fracflow

#endif
