#ifndef FRACFLOW_SCHROEDER_HPP
#define FRACFLOW_SCHROEDER_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <fracflow/errors.hpp>
#include <fracflow/iterate_solver.hpp>
#include <fracflow/maps_catalog.hpp>
#include <fracflow/numeric.hpp>
#include <fracflow/root_find.hpp>
#include <fracflow/truncated_series.hpp>

namespace fracflow
{

// Koenigs function psi with psi(f(x)) = a_1 psi(x), psi'(0) = 1.
template <FieldCoefficient S>
struct KoenigsSeries
{
    S multiplier;
    TruncatedSeries<S> coeffs;

    std::size_t order() const noexcept
    {
        return coeffs.order();
    }
};

template <FieldCoefficient S>
KoenigsSeries<S> koenigs_series(const MapSeries<S> &f, std::size_t order)
{
    if (f.kind() == MapKind::parabolic) {
        throw usage_error("parabolic map: use parabolic_psi");
    }
    if (f.kind() != MapKind::hyperbolic) {
        throw domain_error("unsupported multiplier a_1 <= 0", to_double(f.multiplier()));
    }
    if (f.order() < order) {
        throw usage_error("map series too short for Koenigs order " + std::to_string(order));
    }
    const S a1 = f.multiplier();
    const auto fpow = PowerTable<S>::of(f.coeffs().truncated(order), order);
    std::vector<S> b(order + 1);
    b[1] = S(1);
    S a1k = a1;
    for (std::size_t k = 2; k <= order; ++k) {
        a1k *= a1;
        S rhs(0);
        for (std::size_t j = 1; j < k; ++j) {
            if (!is_zero(b[j]) && !is_zero(fpow.at(j, k))) {
                rhs += b[j] * fpow.at(j, k);
            }
        }
        const S pivot = a1 - a1k;
        if constexpr (is_real_v<S>) {
            using std::abs;
            using std::max;
            if (abs(pivot) < S(resonance_tolerance) * max(abs(a1), abs(a1k))) {
                throw resonance_error("resonant multiplier in Koenigs solve at order " + std::to_string(k));
            }
        }
        b[k] = rhs / pivot;
    }
    b.erase(b.begin());
    return KoenigsSeries<S>{a1, TruncatedSeries<S>(std::move(b))};
}

namespace detail
{

// 1 / d for a dense power series with d[0] != 0, through index n.
template <FieldCoefficient S>
std::vector<S> dense_reciprocal(const std::vector<S> &d, std::size_t n)
{
    std::vector<S> r(n + 1);
    r[0] = S(1) / d[0];
    for (std::size_t k = 1; k <= n; ++k) {
        S acc(0);
        for (std::size_t j = 1; j <= k && j < d.size(); ++j) {
            if (!is_zero(d[j])) {
                acc += d[j] * r[k - j];
            }
        }
        r[k] = -acc * r[0];
    }
    return r;
}

} // namespace detail

// Flow generator of a hyperbolic map: v = ln(a_1) psi / psi'.
template <typename Real, FieldCoefficient S>
TruncatedSeries<Real> koenigs_velocity(const KoenigsSeries<S> &psi, std::size_t order)
{
    using std::log;
    if (order > psi.order()) {
        throw usage_error("Koenigs series shorter than requested velocity order");
    }
    // psi = x B(x), psi' = D(x); psi/psi' = x B / D.
    std::vector<S> bx(order), dx(order);
    for (std::size_t k = 1; k <= order; ++k) {
        bx[k - 1] = psi.coeffs[k];
        dx[k - 1] = psi.coeffs[k] * S(static_cast<long>(k));
    }
    const auto inv = detail::dense_reciprocal(dx, order - 1);
    std::vector<S> q(order);
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = 0; i + j < order; ++j) {
            q[i + j] += bx[i] * inv[j];
        }
    }
    const Real scale = log(to_real_of<Real>(psi.multiplier));
    std::vector<Real> v(order);
    for (std::size_t k = 0; k < order; ++k) {
        v[k] = scale * to_real_of<Real>(q[k]);
    }
    return TruncatedSeries<Real>(std::move(v));
}

// Psi(x) ~ x^rho exp(sum_k p_k x^k) near a parabolic fixed point.
struct ParabolicPsiExpansion
{
    Rational rho;
    std::map<int, Rational> p; // k in [-(m-1), max], k != 0; p_0 = 0
    std::size_t tscale_index = 0;

    int min_index() const
    {
        return p.empty() ? 0 : p.begin()->first;
    }
    int max_index() const
    {
        return p.empty() ? 0 : p.rbegin()->first;
    }
    Rational coeff(int k) const
    {
        const auto it = p.find(k);
        return it == p.end() ? Rational(0) : it->second;
    }
};

// Psi = exp(int dx / v): Laurent-expand 1/v and integrate termwise.
ParabolicPsiExpansion parabolic_psi(const TruncatedSeries<Rational> &v);

// log Psi(x) = rho ln|x| + sum p_k x^k.
template <typename Real>
Real psi_log_eval(const ParabolicPsiExpansion &e, const Real &x)
{
    using std::abs;
    using std::log;
    using std::pow;
    if (x == 0) {
        throw domain_error("Psi expansion singular at x = 0", 0.0);
    }
    Real acc = rational_to<Real>(e.rho) * log(abs(x));
    for (const auto &[k, c] : e.p) {
        if (!is_zero(c)) {
            acc += rational_to<Real>(c) * pow(x, k);
        }
    }
    return acc;
}

template <typename Real>
Real psi_eval(const ParabolicPsiExpansion &e, const Real &x)
{
    using std::exp;
    using std::isfinite;
    const Real v = exp(psi_log_eval(e, x));
    if (!isfinite(v)) {
        throw range_error("Psi overflow", to_double(x));
    }
    return v;
}

template <typename Real, FieldCoefficient S>
Real psi_eval(const KoenigsSeries<S> &psi, const Real &x)
{
    return series_eval(series_to_real_of<Real>(psi.coeffs), x);
}

// Psi(x_s(x)) / (e^s Psi(x)) - 1, computed in the log domain.
template <typename Real>
Real psi_residual(const MapSpec<Real> &map, const ParabolicPsiExpansion &e, const Real &x, long steps)
{
    using std::expm1;
    const Real y = apply_n(map, steps, x);
    return expm1(psi_log_eval(e, y) - psi_log_eval(e, x) - Real(steps));
}

// psi(x_s(x)) / (a_1^s psi(x)) - 1.
template <typename Real, FieldCoefficient S>
Real psi_residual(const MapSpec<Real> &map, const KoenigsSeries<S> &psi, const Real &x, long steps)
{
    using std::pow;
    const auto coeffs = series_to_real_of<Real>(psi.coeffs);
    const Real base = series_eval(coeffs, x);
    if (base == 0) {
        throw degenerate_error("psi(x) = 0", to_double(x));
    }
    const Real y = apply_n(map, steps, x);
    const Real kappa = to_real_of<Real>(psi.multiplier);
    return series_eval(coeffs, y) / (pow(kappa, Real(steps)) * base) - 1;
}

template <typename Real>
Real psi_residual(const MapSpec<Real> &map, const SchroederClosedForm<Real> &closed, const Real &x, long steps)
{
    using std::pow;
    const Real y = apply_n(map, steps, x);
    return closed.psi(y) / (pow(closed.kappa, Real(steps)) * closed.psi(x)) - 1;
}

// x_t(x) = psi^{-1}(a_1^t psi(x)). The reverted series gives the initial
// guess; refinement solves psi(y) = target by safeguarded Newton.
template <typename Real>
class KoenigsFlow
{
public:
    template <FieldCoefficient S>
    explicit KoenigsFlow(const KoenigsSeries<S> &psi)
        : m_multiplier(to_real_of<Real>(psi.multiplier)), m_psi(series_to_real_of<Real>(psi.coeffs)),
          m_inverse(series_revert(m_psi)), m_dpsi(derivative_coeffs(m_psi))
    {
    }

    Real psi(const Real &x) const
    {
        return series_eval(m_psi, x);
    }

    Real operator()(const Real &t, const Real &x, bool refine = true) const
    {
        using std::pow;
        if (t == 0) {
            return x;
        }
        const Real target = pow(m_multiplier, t) * psi(x);
        const Real guess = series_eval(m_inverse, target);
        if (!refine) {
            return guess;
        }
        try {
            return safeguarded_solve<Real>([this](const Real &y) { return psi(y); }, target, guess,
                                           [this](const Real &y) { return dpsi(y); });
        } catch (const domain_error &e) {
            throw domain_error(std::string("Koenigs flow: target outside the series window: ") + e.what(),
                               to_double(target));
        }
    }

private:
    static std::vector<Real> derivative_coeffs(const TruncatedSeries<Real> &s)
    {
        std::vector<Real> d(s.order());
        for (std::size_t k = 1; k <= s.order(); ++k) {
            d[k - 1] = s[k] * Real(static_cast<long>(k));
        }
        return d;
    }

    Real dpsi(const Real &y) const
    {
        Real acc(0);
        for (std::size_t k = m_dpsi.size(); k-- > 0;) {
            acc = acc * y + m_dpsi[k];
        }
        return acc;
    }

    Real m_multiplier;
    TruncatedSeries<Real> m_psi;
    TruncatedSeries<Real> m_inverse;
    std::vector<Real> m_dpsi;
};

template <typename Real, FieldCoefficient S>
Real flow_from_koenigs(const KoenigsSeries<S> &psi, const Real &t, const Real &x, bool refine = true)
{
    return KoenigsFlow<Real>(psi)(t, x, refine);
}

} // namespace fracflow

#endif
