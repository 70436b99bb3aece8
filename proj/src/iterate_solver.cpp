#include <fracflow/iterate_solver.hpp>

namespace fracflow
{

FlowSeries<TPolynomial> solve_flow_exact(const MapSeries<Rational> &f, std::size_t order)
{
    const std::size_t m = detail::require_parabolic(f);
    // c_m(t) = a_m t
    const auto cm = TPolynomial::monomial(f[m], 1);
    auto coeffs = detail::solve_parabolic<TPolynomial, Rational>(f.coeffs(), m, cm, order);
    auto map = series_convert<TPolynomial>(f.coeffs().truncated(order),
                                           [](const Rational &q) { return TPolynomial(q); });
    return FlowSeries<TPolynomial>{FlowMode::exact_polynomial, std::move(coeffs), std::move(map), m, std::nullopt};
}

FlowSeries<Rational> solve_flow_at(const MapSeries<Rational> &f, const Rational &t, std::size_t order)
{
    const std::size_t m = detail::require_parabolic(f);
    const Rational cm = f[m] * t;
    auto coeffs = detail::solve_parabolic<Rational, Rational>(f.coeffs(), m, cm, order);
    return FlowSeries<Rational>{FlowMode::numeric_at, std::move(coeffs), f.coeffs().truncated(order), m, t};
}

TruncatedSeries<Rational> velocity_series(const FlowSeries<TPolynomial> &flow)
{
    if (flow.mode != FlowMode::exact_polynomial) {
        throw usage_error("velocity_series needs an exact polynomial flow");
    }
    std::vector<Rational> v;
    v.reserve(flow.order());
    for (const auto &p : flow.coeffs.coeffs()) {
        v.push_back(p.coeff(1));
    }
    return TruncatedSeries<Rational>(std::move(v));
}

} // namespace fracflow
