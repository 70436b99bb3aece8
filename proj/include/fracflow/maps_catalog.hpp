#ifndef FRACFLOW_MAPS_CATALOG_HPP
#define FRACFLOW_MAPS_CATALOG_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include <fracflow/errors.hpp>
#include <fracflow/iterate_solver.hpp>
#include <fracflow/numeric.hpp>
#include <fracflow/root_find.hpp>
#include <fracflow/truncated_series.hpp>

namespace fracflow
{

template <typename Real>
struct SchroederClosedForm
{
    std::string formula;
    std::function<Real(const Real &)> psi;
    // Unit-step eigenvalue: Psi(x_1(x)) = kappa Psi(x).
    Real kappa;
};

// A catalog entry. Evaluators throw domain_error (or pole_error) carrying
// the offending value when called outside their branch.
template <typename Real>
struct MapSpec
{
    using Fn = std::function<Real(const Real &)>;
    using FlowFn = std::function<Real(const Real &, const Real &)>;

    std::string name;
    std::optional<Rational> lambda;
    Fn forward;
    Fn inverse;
    // Interval where forward and inverse are both valid and inverse(forward(x)) = x.
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    // Rational Taylor coefficients, when the map has them.
    std::function<MapSeries<Rational>(std::size_t)> exact_series;
    std::function<MapSeries<Real>(std::size_t)> series;
    FlowFn exact_flow;
    std::optional<SchroederClosedForm<Real>> schroeder_closed;

    bool has_exact_flow() const noexcept
    {
        return static_cast<bool>(exact_flow);
    }
    bool has_exact_series() const noexcept
    {
        return static_cast<bool>(exact_series);
    }
    Real multiplier() const
    {
        return series(1)[1];
    }
    MapKind kind() const
    {
        return series(2).kind();
    }
};

struct MapParams
{
    std::optional<Rational> lambda;
};

namespace detail
{

template <typename Real>
Real check_finite_value(const Real &v, const char *what, const Real &input)
{
    using std::isfinite;
    using boost::multiprecision::isfinite;
    if (!isfinite(v)) {
        throw range_error(std::string(what) + ": non-finite result", to_double(input));
    }
    return v;
}

template <typename Real>
std::function<MapSeries<Real>(std::size_t)> real_series_from(std::function<MapSeries<Rational>(std::size_t)> exact)
{
    return [exact = std::move(exact)](std::size_t n) {
        return MapSeries<Real>(series_to_real<Real>(exact(n).coeffs()));
    };
}

} // namespace detail

// x_1(x) = x / (1 - x): parabolic, exact flow x / (1 - x t), Psi = exp(-1/x).
template <typename Real>
MapSpec<Real> moebius_map()
{
    using std::exp;
    MapSpec<Real> m;
    m.name = "moebius";
    m.forward = [](const Real &x) {
        const Real d = 1 - x;
        if (d == 0) {
            throw pole_error("moebius forward: pole at x = 1", to_double(x));
        }
        return x / d;
    };
    m.inverse = [](const Real &y) {
        const Real d = 1 + y;
        if (d == 0) {
            throw pole_error("moebius inverse: pole at y = -1", to_double(y));
        }
        return y / d;
    };
    m.domain_lo = -0.9;
    m.domain_hi = 0.9;
    m.exact_series = [](std::size_t n) {
        return MapSeries<Rational>(TruncatedSeries<Rational>(std::vector<Rational>(n, Rational(1))));
    };
    m.series = detail::real_series_from<Real>(m.exact_series);
    m.exact_flow = [](const Real &t, const Real &x) {
        const Real d = 1 - x * t;
        if (d == 0) {
            throw pole_error("moebius exact flow: pole at x t = 1", to_double(x));
        }
        return x / d;
    };
    m.schroeder_closed = SchroederClosedForm<Real>{"exp(-1/x)",
                                                   [](const Real &x) {
                                                       if (x == 0) {
                                                           throw domain_error("Psi singular at x = 0", 0.0);
                                                       }
                                                       return Real(exp(-1 / x));
                                                   },
                                                   Real(exp(Real(1)))};
    return m;
}

// sin, inverted by the principal arcsine on [-1, 1]. No closed-form flow.
template <typename Real>
MapSpec<Real> sine_map()
{
    using std::asin;
    using std::sin;
    MapSpec<Real> m;
    m.name = "sine";
    m.forward = [](const Real &x) { return Real(sin(x)); };
    m.inverse = [](const Real &y) {
        using std::abs;
        if (abs(y) > 1) {
            throw domain_error("arcsine outside [-1, 1]", to_double(y));
        }
        return Real(asin(y));
    };
    const double half_pi = boost::math::constants::half_pi<double>();
    m.domain_lo = -half_pi;
    m.domain_hi = half_pi;
    m.exact_series = [](std::size_t n) {
        std::vector<Rational> a(n);
        mpz_class fact = 1;
        for (std::size_t k = 1; k <= n; ++k) {
            fact *= static_cast<unsigned long>(k);
            if (k % 2 == 1) {
                Rational q(mpz_class(1), fact);
                a[k - 1] = ((k / 2) % 2 == 1) ? Rational(-q) : q;
            }
        }
        return MapSeries<Rational>(TruncatedSeries<Rational>(std::move(a)));
    };
    m.series = detail::real_series_from<Real>(m.exact_series);
    return m;
}

// lambda x (1 - x), 0 < lambda <= 4, inverted on the branch through 0.
// Closed-form flows exist for lambda = 2 and lambda = 4.
template <typename Real>
MapSpec<Real> logistic_map(const Rational &lambda)
{
    using std::asin;
    using std::exp;
    using std::expm1;
    using std::log;
    using std::log1p;
    using std::pow;
    using std::sin;
    using std::sqrt;
    if (!(lambda > 0 && lambda <= 4)) {
        throw usage_error("logistic map needs 0 < lambda <= 4, got " + to_string(lambda));
    }
    const Real lam = rational_to<Real>(lambda);
    MapSpec<Real> m;
    m.name = "logistic";
    m.lambda = lambda;
    m.forward = [lam](const Real &x) { return detail::check_finite_value(Real(lam * x * (1 - x)), "logistic", x); };
    m.inverse = [lam](const Real &y) {
        using std::abs;
        if (abs(y) > lam / 4) {
            throw domain_error("logistic inverse outside |y| <= lambda/4", to_double(y));
        }
        // (1 - sqrt(1 - 4y/lambda)) / 2 without cancellation near y = 0.
        const Real s = sqrt(1 - 4 * y / lam);
        return Real(2 * y / (lam * (1 + s)));
    };
    // |forward(x)| <= lambda/4 on [(1 - sqrt 2)/2, 1/2].
    m.domain_lo = -0.2;
    m.domain_hi = 0.5;
    m.exact_series = [lambda](std::size_t n) {
        std::vector<Rational> a(n);
        a[0] = lambda;
        if (n >= 2) {
            a[1] = -lambda;
        }
        return MapSeries<Rational>(TruncatedSeries<Rational>(std::move(a)));
    };
    m.series = detail::real_series_from<Real>(m.exact_series);
    if (lambda == 2) {
        // 1/2 (1 - (1 - 2x)^(2^t)) evaluated through expm1/log1p.
        m.exact_flow = [](const Real &t, const Real &x) {
            if (x > Real(0.5)) {
                throw domain_error("logistic(2) exact flow needs x <= 1/2", to_double(x));
            }
            if (x == Real(0.5)) {
                return Real(0.5);
            }
            return Real(-expm1(pow(Real(2), t) * log1p(-2 * x)) / 2);
        };
        m.schroeder_closed = SchroederClosedForm<Real>{"-1/2*ln(1-2x)",
                                                       [](const Real &x) {
                                                           if (x >= Real(0.5)) {
                                                               throw domain_error("Psi needs x < 1/2", to_double(x));
                                                           }
                                                           return Real(-log1p(-2 * x) / 2);
                                                       },
                                                       Real(2)};
    } else if (lambda == 4) {
        // sin^2(2^t arcsin sqrt(x)), principal branch; x in [0, 1].
        m.exact_flow = [](const Real &t, const Real &x) {
            if (x < 0 || x > 1) {
                throw domain_error("logistic(4) exact flow needs 0 <= x <= 1", to_double(x));
            }
            const Real s = sin(pow(Real(2), t) * asin(sqrt(x)));
            return Real(s * s);
        };
    }
    return m;
}

template <typename Real>
MapSpec<Real> catalog_get(const std::string &name, const MapParams &params = {})
{
    if (name == "moebius") {
        return moebius_map<Real>();
    }
    if (name == "sine") {
        return sine_map<Real>();
    }
    if (name == "logistic") {
        if (!params.lambda) {
            throw usage_error("logistic map requires lambda");
        }
        return logistic_map<Real>(*params.lambda);
    }
    throw usage_error("unknown map '" + name + "' (expected moebius, sine or logistic)");
}

// User map from a forward evaluator and its Taylor series about 0. The
// inverse is the reverted series refined by safeguarded Newton iteration
// (bisection fallback) on forward(y) = target.
template <typename Real>
MapSpec<Real> make_user_map(std::string name, typename MapSpec<Real>::Fn forward, const MapSeries<Real> &series,
                            double domain_lo, double domain_hi)
{
    MapSpec<Real> m;
    m.name = std::move(name);
    m.forward = forward;
    m.domain_lo = domain_lo;
    m.domain_hi = domain_hi;
    const auto stored = series;
    m.series = [stored](std::size_t n) {
        if (n > stored.order()) {
            throw usage_error("user map series known only to order " + std::to_string(stored.order()));
        }
        return MapSeries<Real>(stored.coeffs().truncated(n));
    };
    const auto reverted = series_revert(series.coeffs());
    m.inverse = [forward, reverted](const Real &y) {
        const Real guess = series_eval(reverted, y);
        RootOptions opt;
        opt.rel_tol = 1e-14;
        opt.max_iterations = 60;
        return safeguarded_solve<Real>(forward, y, guess, {}, opt);
    };
    return m;
}

// n-fold forward application (n > 0), inverse application (n < 0), or the
// identity (n = 0). A domain failure reports the step index j (1-based)
// and the intermediate value that could not be mapped.
template <typename Real>
Real apply_n(const MapSpec<Real> &map, long n, const Real &x)
{
    Real y = x;
    const auto &fn = n >= 0 ? map.forward : map.inverse;
    const long steps = n >= 0 ? n : -n;
    for (long j = 1; j <= steps; ++j) {
        try {
            y = fn(y);
        } catch (const pole_error &e) {
            throw pole_error("apply_n step " + std::to_string(j) + ": " + e.what(), to_double(y),
                             static_cast<int>(j));
        } catch (const domain_error &e) {
            throw domain_error("apply_n step " + std::to_string(j) + ": " + e.what(), to_double(y),
                               static_cast<int>(j));
        }
    }
    return y;
}

} // namespace fracflow

#endif
