#ifndef FRACFLOW_TRUNCATED_SERIES_HPP
#define FRACFLOW_TRUNCATED_SERIES_HPP

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <fracflow/errors.hpp>
#include <fracflow/numeric.hpp>
#include <fracflow/tpolynomial.hpp>

namespace fracflow
{

// Coefficient rings a series may carry. Mixing rings inside one series is
// impossible by construction: the ring is the template argument.
template <typename C>
concept SeriesCoefficient = std::same_as<C, Rational> || std::same_as<C, TPolynomial> || is_real_v<C>;

// Rings where every nonzero element is invertible.
template <typename C>
concept FieldCoefficient = SeriesCoefficient<C> && !std::same_as<C, TPolynomial>;

// Power series c_1 x + c_2 x^2 + ... + c_N x^N with the constant term fixed
// at zero: every map handled by the library has its fixed point at x = 0.
template <SeriesCoefficient C>
class TruncatedSeries
{
public:
    using coeff_type = C;

    explicit TruncatedSeries(std::size_t order) : m_coeffs(order)
    {
        if (order == 0) {
            throw usage_error("series order must be positive");
        }
    }

    // coeffs[0] is the coefficient of x^1.
    explicit TruncatedSeries(std::vector<C> coeffs) : m_coeffs(std::move(coeffs))
    {
        if (m_coeffs.empty()) {
            throw usage_error("series order must be positive");
        }
    }

    static TruncatedSeries identity(std::size_t order)
    {
        TruncatedSeries s(order);
        s.m_coeffs[0] = C(1);
        return s;
    }

    std::size_t order() const noexcept
    {
        return m_coeffs.size();
    }

    // Coefficient of x^k, 1 <= k <= order().
    const C &operator[](std::size_t k) const
    {
        return m_coeffs.at(k - 1);
    }
    C &operator[](std::size_t k)
    {
        return m_coeffs.at(k - 1);
    }

    const std::vector<C> &coeffs() const noexcept
    {
        return m_coeffs;
    }

    // Explicit re-truncation to a lower order.
    TruncatedSeries truncated(std::size_t order) const
    {
        if (order == 0 || order > m_coeffs.size()) {
            throw usage_error("truncation order must lie in [1, " + std::to_string(m_coeffs.size()) + "]");
        }
        return TruncatedSeries(std::vector<C>(m_coeffs.begin(), m_coeffs.begin() + static_cast<long>(order)));
    }

    // Zero padding to a higher order. The added coefficients are not known
    // to be zero for the underlying function; callers own that decision.
    TruncatedSeries zero_extended(std::size_t order) const
    {
        if (order < m_coeffs.size()) {
            throw usage_error("zero_extended cannot shrink a series");
        }
        auto c = m_coeffs;
        c.resize(order);
        return TruncatedSeries(std::move(c));
    }

    friend bool operator==(const TruncatedSeries &a, const TruncatedSeries &b)
    {
        return a.m_coeffs == b.m_coeffs;
    }

private:
    std::vector<C> m_coeffs;
};

namespace detail
{

template <typename C>
void require_same_order(const TruncatedSeries<C> &a, const TruncatedSeries<C> &b, const char *op)
{
    if (a.order() != b.order()) {
        throw usage_error(std::string(op) + ": order mismatch (" + std::to_string(a.order()) + " vs "
                          + std::to_string(b.order()) + ")");
    }
}

// Dense truncated product; index = power of x, both inputs of length n + 1.
template <typename C>
std::vector<C> dense_mul(const std::vector<C> &a, const std::vector<C> &b, std::size_t n)
{
    std::vector<C> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        if (is_zero(a[i])) {
            continue;
        }
        for (std::size_t j = 0; i + j <= n; ++j) {
            if (is_zero(b[j])) {
                continue;
            }
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

template <typename C>
std::vector<C> to_dense(const TruncatedSeries<C> &s)
{
    std::vector<C> d(s.order() + 1);
    for (std::size_t k = 1; k <= s.order(); ++k) {
        d[k] = s[k];
    }
    return d;
}

template <typename C>
TruncatedSeries<C> from_dense(std::vector<C> d)
{
    d.erase(d.begin());
    return TruncatedSeries<C>(std::move(d));
}

template <typename C>
void check_finite(const C &v, const char *what)
{
    if constexpr (is_real_v<C>) {
        using std::isfinite;
        using boost::multiprecision::isfinite;
        if (!isfinite(v)) {
            throw range_error(std::string(what) + ": non-finite result", to_double(v));
        }
    }
}

} // namespace detail

// Table of [x^e] g^i for a series g without constant term, i, e <= max.
// Columns are filled in increasing e; column e only needs g_1..g_{e-1} for
// i >= 2, which is what the order-by-order solvers rely on.
template <SeriesCoefficient C>
class PowerTable
{
public:
    explicit PowerTable(std::size_t max) : m_max(max), m_table((max + 1) * (max + 1)) {}

    std::size_t max() const noexcept
    {
        return m_max;
    }

    const C &at(std::size_t i, std::size_t e) const
    {
        return m_table[i * (m_max + 1) + e];
    }
    C &at(std::size_t i, std::size_t e)
    {
        return m_table[i * (m_max + 1) + e];
    }

    // Fill rows i = 2..e of column e from the first-power row.
    void fill_column(std::size_t e)
    {
        for (std::size_t i = 2; i <= e; ++i) {
            C acc{};
            for (std::size_t l = 1; l + (i - 1) <= e; ++l) {
                const C &g = at(1, l);
                if (is_zero(g)) {
                    continue;
                }
                const C &prev = at(i - 1, e - l);
                if (is_zero(prev)) {
                    continue;
                }
                acc += g * prev;
            }
            at(i, e) = std::move(acc);
        }
    }

    static PowerTable of(const TruncatedSeries<C> &g, std::size_t max)
    {
        PowerTable t(max);
        for (std::size_t e = 1; e <= max; ++e) {
            if (e <= g.order()) {
                t.at(1, e) = g[e];
            }
            t.fill_column(e);
        }
        return t;
    }

private:
    std::size_t m_max;
    std::vector<C> m_table;
};

template <SeriesCoefficient C>
TruncatedSeries<C> series_add(const TruncatedSeries<C> &a, const TruncatedSeries<C> &b)
{
    detail::require_same_order(a, b, "series_add");
    auto out = a;
    for (std::size_t k = 1; k <= a.order(); ++k) {
        out[k] += b[k];
    }
    return out;
}

template <SeriesCoefficient C>
TruncatedSeries<C> series_sub(const TruncatedSeries<C> &a, const TruncatedSeries<C> &b)
{
    detail::require_same_order(a, b, "series_sub");
    auto out = a;
    for (std::size_t k = 1; k <= a.order(); ++k) {
        out[k] -= b[k];
    }
    return out;
}

// Cauchy product truncated at x^N; the result starts at x^2.
template <SeriesCoefficient C>
TruncatedSeries<C> series_mul(const TruncatedSeries<C> &a, const TruncatedSeries<C> &b)
{
    detail::require_same_order(a, b, "series_mul");
    const std::size_t n = a.order();
    return detail::from_dense(detail::dense_mul(detail::to_dense(a), detail::to_dense(b), n));
}

// f(g(x)) truncated at x^N, Horner accumulation in the series ring.
template <SeriesCoefficient C>
TruncatedSeries<C> series_compose(const TruncatedSeries<C> &f, const TruncatedSeries<C> &g)
{
    detail::require_same_order(f, g, "series_compose");
    const std::size_t n = f.order();
    const auto gd = detail::to_dense(g);
    std::vector<C> acc(n + 1);
    for (std::size_t k = n; k >= 1; --k) {
        acc[0] += f[k];
        acc = detail::dense_mul(acc, gd, n);
    }
    return detail::from_dense(std::move(acc));
}

// Compositional inverse: g with f(g(x)) = x through order N.
template <FieldCoefficient C>
TruncatedSeries<C> series_revert(const TruncatedSeries<C> &f)
{
    const std::size_t n = f.order();
    if (is_zero(f[1])) {
        throw degenerate_error("series_revert: leading coefficient is zero", 0.0);
    }
    const C inv1 = C(1) / f[1];
    PowerTable<C> g(n);
    g.at(1, 1) = inv1;
    for (std::size_t k = 2; k <= n; ++k) {
        g.fill_column(k);
        C rest{};
        for (std::size_t i = 2; i <= k; ++i) {
            if (!is_zero(f[i]) && !is_zero(g.at(i, k))) {
                rest += f[i] * g.at(i, k);
            }
        }
        g.at(1, k) = -rest * inv1;
    }
    std::vector<C> out(n);
    for (std::size_t k = 1; k <= n; ++k) {
        out[k - 1] = g.at(1, k);
    }
    TruncatedSeries<C> inv(std::move(out));
    if constexpr (std::same_as<C, Rational>) {
        if (!(series_compose(f, inv) == TruncatedSeries<C>::identity(n))) {
            throw std::logic_error("series_revert: round trip failed");
        }
    }
    return inv;
}

// Horner evaluation; exact for rational inputs.
template <SeriesCoefficient C>
C series_eval(const TruncatedSeries<C> &f, const C &x)
{
    C acc = f[f.order()];
    for (std::size_t k = f.order() - 1; k >= 1; --k) {
        acc = acc * x + f[k];
    }
    acc = acc * x;
    detail::check_finite(acc, "series_eval");
    return acc;
}

// Coefficientwise conversion to another ring.
template <SeriesCoefficient To, SeriesCoefficient From, typename Fn>
TruncatedSeries<To> series_convert(const TruncatedSeries<From> &s, Fn &&fn)
{
    std::vector<To> out;
    out.reserve(s.order());
    for (const auto &c : s.coeffs()) {
        out.push_back(fn(c));
    }
    return TruncatedSeries<To>(std::move(out));
}

template <typename Real>
TruncatedSeries<Real> series_to_real(const TruncatedSeries<Rational> &s)
{
    return series_convert<Real>(s, [](const Rational &q) { return rational_to<Real>(q); });
}

template <typename Real, FieldCoefficient S>
TruncatedSeries<Real> series_to_real_of(const TruncatedSeries<S> &s)
{
    return series_convert<Real>(s, [](const S &c) { return to_real_of<Real>(c); });
}

// Reduce polynomial-in-t coefficients at a fixed t.
inline TruncatedSeries<Rational> eval_at_t(const TruncatedSeries<TPolynomial> &s, const Rational &t)
{
    return series_convert<Rational>(s, [&](const TPolynomial &p) { return p.eval(t); });
}

template <typename Real>
    requires is_real_v<Real>
TruncatedSeries<Real> eval_at_t(const TruncatedSeries<TPolynomial> &s, const Real &t)
{
    return series_convert<Real>(s, [&](const TPolynomial &p) { return p.template eval_real<Real>(t); });
}

} // namespace fracflow

#endif
