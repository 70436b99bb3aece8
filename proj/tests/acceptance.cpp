// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include <fracflow/conjugation.hpp>
#include <fracflow/error_analysis.hpp>
#include <fracflow/iterate_solver.hpp>
#include <fracflow/schroeder.hpp>

#include "oracles.hpp"

using namespace fracflow;
using oracle::q;

namespace
{

struct Outcome
{
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what)
    {
        if (!ok) {
            pass = false;
        }
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [violated]");
    }
};

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::vector<double> grid(double lo, double hi, int count)
{
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) {
        xs.push_back(lo + (hi - lo) * i / (count - 1));
    }
    return xs;
}

Outcome moebius_exact()
{
    Outcome o;
    const auto flow = solve_flow_exact(exact_series_for_flow(catalog_get<double>("moebius"), 10), 10);
    bool ok = true;
    for (std::size_t k = 1; k <= 10; ++k) {
        ok = ok && flow.coeffs[k] == TPolynomial::monomial(q(1), k - 1);
    }
    o.require(ok, "c_k(t) = t^{k-1} for k <= 10");
    return o;
}

Outcome sine_exact()
{
    Outcome o;
    const auto flow = solve_flow_exact(exact_series_for_flow(catalog_get<double>("sine"), 9), 9);
    const auto reference = oracle::sine_reference_coefficients();
    bool ok = flow.coeffs[1] == reference[1];
    for (const std::size_t k : {3u, 5u, 7u, 9u}) {
        ok = ok && flow.coeffs[k] == reference[k];
    }
    for (const std::size_t k : {2u, 4u, 6u, 8u}) {
        ok = ok && flow.coeffs[k] == TPolynomial{};
    }
    o.require(ok, "c3, c5, c7, c9 equal the reference polynomials");
    return o;
}

Outcome logistic_coefficients()
{
    Outcome o;
    const auto f = catalog_get<double>("logistic", {q(2)}).series(10);
    double worst = 0;
    for (const double t : {0.25, 0.5, 0.75}) {
        const auto flow = solve_flow_numeric(f, t, 10);
        for (int k = 1; k <= 10; ++k) {
            const double ref = oracle::logistic2_coefficient(t, k);
            worst = std::max(worst, std::fabs(flow.coeffs[k] - ref) / std::fabs(ref));
        }
    }
    o.require(worst <= 1e-13, "max rel dev " + sci(worst) + " <= 1e-13");
    return o;
}

Outcome moebius_oracle()
{
    Outcome o;
    const auto moebius = catalog_get<double>("moebius");
    double worst = 0;
    for (std::size_t order = 2; order <= 5; ++order) {
        for (long n = 1; n <= 20; ++n) {
            const IterateEvaluator<double> ev(moebius, order, n);
            for (const double t : {0.1, 0.5, 0.9}) {
                for (int i = 1; i <= 9; ++i) {
                    const double x = 0.05 * i;
                    const double ref = oracle::moebius_relative_error(t, x, static_cast<int>(order),
                                                                      static_cast<int>(n));
                    worst = std::max(worst, std::fabs(relative_error_value(ev, t, x) - ref));
                }
            }
        }
    }
    o.require(worst <= 1e-12, "max abs dev " + sci(worst) + " <= 1e-12");
    return o;
}

Outcome moebius_asymptote()
{
    Outcome o;
    const double t = 0.5, x = 0.3;
    const long n = 1000;
    const IterateEvaluator<double> ev(catalog_get<double>("moebius"), 3, n);
    const double scaled = relative_error_value(ev, t, x) * double(n) * double(n) * (1 - t * x) / (t * t * t * x);
    o.require(scaled >= 0.98 && scaled <= 1.02, "scaled R = " + sci(scaled) + " in [0.98, 1.02]");
    return o;
}

Outcome logistic_headline()
{
    Outcome o;
    const IterateEvaluator<double> ev(catalog_get<double>("logistic", {q(2)}), 5, 7);
    double worst = 0;
    for (const double t : {0.5, 0.75}) {
        for (const double x : grid(0.01, 0.49, 97)) {
            worst = std::max(worst, std::fabs(relative_error_value(ev, t, x)));
        }
    }
    o.require(worst <= 3e-12, "max |R| = " + sci(worst) + " <= 3e-12");
    return o;
}

Outcome leading_agreement()
{
    Outcome o;
    const auto logistic = catalog_get<double>("logistic", {q(2)});
    double worst_ratio = 0;
    for (const long n : {5L, 6L, 7L}) {
        const IterateEvaluator<double> ev(logistic, 5, n);
        for (const double t : {0.5, 0.75}) {
            std::vector<double> diff;
            double max_r = 0;
            for (const double x : grid(0.01, 0.49, 97)) {
                const double r = relative_error_value(ev, t, x);
                max_r = std::max(max_r, std::fabs(r));
                diff.push_back(std::fabs(r - leading_error_logistic2(t, x, 5, n)));
            }
            worst_ratio = std::max(worst_ratio, *std::max_element(diff.begin(), diff.end()) / max_r);
        }
    }
    o.require(worst_ratio <= 0.05, "max |dR| / max |R| = " + sci(worst_ratio) + " <= 0.05");
    return o;
}

Outcome scaling_law()
{
    Outcome o;
    const auto logistic = catalog_get<Extended>("logistic", {q(2)});
    double lo = 1e300, hi = -1e300;
    for (const long n : {5L, 6L}) {
        const IterateEvaluator<Extended> ev(logistic, 5, n);
        for (const double t : {0.5, 0.75}) {
            for (const double x : grid(0.01, 0.45, 45)) {
                const double r = static_cast<double>(scaling_ratio(ev, Extended(t), Extended(x), n));
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
    }
    o.require(lo >= 0.8 && hi <= 1.2, "ratio range [" + sci(lo) + ", " + sci(hi) + "] within [0.8, 1.2]");
    return o;
}

Outcome sine_extrema()
{
    Outcome o;
    std::vector<double> ts;
    for (int i = 0; i <= 10; ++i) {
        ts.push_back(i / 10.0);
    }
    double worst = 0;
    for (const auto &r : extrema_table(ts)) {
        worst = std::max(worst, r.rel_discrepancy);
    }
    o.require(worst <= 5e-3, "max discrepancy " + sci(worst) + " <= 5e-3");
    return o;
}

Outcome sine_radius()
{
    Outcome o;
    const auto flow = solve_flow_exact(exact_series_for_flow(catalog_get<double>("sine"), 81), 81);
    const auto pts = radius_estimate(flow, q(1, 2), 31, 81, 2);
    double band_lo = 1e300, band_hi = 0, late_max = 0, mean = 0;
    int count = 0;
    for (const auto &p : pts) {
        if (p.skipped) {
            continue;
        }
        if (p.k <= 61) {
            band_lo = std::min(band_lo, p.estimate);
            band_hi = std::max(band_hi, p.estimate);
        } else {
            late_max = std::max(late_max, p.estimate);
        }
        if (p.k >= 51 && p.k <= 61) {
            mean += p.estimate;
            ++count;
        }
    }
    mean /= count;
    o.require(band_lo >= 1.2 && band_hi <= 1.5,
              "odd k in [31,61]: estimates in [" + sci(band_lo) + ", " + sci(band_hi) + "], need [1.2, 1.5]");
    o.require(late_max < mean, "k in [63,81] max " + sci(late_max) + " < k in [51,61] mean " + sci(mean));
    return o;
}

TruncatedSeries<Rational> velocity_of(const char *name, std::size_t order)
{
    return velocity_series(solve_flow_exact(exact_series_for_flow(catalog_get<double>(name), order), order));
}

Outcome schroeder_constants()
{
    Outcome o;
    const auto m = parabolic_psi(velocity_of("moebius", 6));
    o.require(m.rho == 0 && m.coeff(-1) == -1, "moebius (rho, p_-1) = (0, -1)");
    const auto s = parabolic_psi(velocity_of("sine", 9));
    o.require(s.rho == q(6, 5) && s.coeff(-2) == 3 && s.coeff(2) == q(79, 1050) && s.coeff(4) == q(29, 2625),
              "sine (rho, p_-2, p_2, p_4) = (6/5, 3, 79/1050, 29/2625)");
    return o;
}

Outcome koenigs_oracle()
{
    Outcome o;
    const auto logistic = catalog_get<double>("logistic", {q(2)});
    const auto psi = koenigs_series(logistic.exact_series(60), 60);
    bool exact = true;
    for (std::size_t k = 1; k <= 12; ++k) {
        exact = exact && psi.coeffs[k] == q(1L << (k - 1), static_cast<long>(k));
    }
    o.require(exact, "b_k = 2^{k-1}/k for k <= 12");
    const KoenigsFlow<double> flow(psi);
    double worst = 0;
    for (const double t : {0.25, 0.5, 0.75}) {
        for (const double x : grid(0.01, 0.2, 20)) {
            worst = std::max(worst, std::fabs(flow(t, x) - logistic.exact_flow(t, x)));
        }
    }
    o.require(worst <= 1e-9, "Koenigs flow max dev " + sci(worst) + " <= 1e-9");
    return o;
}

Outcome property_suite()
{
    Outcome o;
    const auto sine = catalog_get<double>("sine");
    const IterateEvaluator<double> ev(sine, 9, 5);
    double semigroup = 0, worst_x = 0;
    for (const double s : {0.25, 0.5}) {
        for (const double t : {0.25, 0.5}) {
            for (const double x : grid(0.1, 1.5, 29)) {
                const double d = std::fabs(ev(s, ev(t, x)) - ev(s + t, x));
                if (d > semigroup) {
                    semigroup = d;
                    worst_x = x;
                }
            }
        }
    }
    o.require(semigroup <= 1e-6, "semigroup max " + sci(semigroup) + " (x=" + sci(worst_x) + ") <= 1e-6");

    const double two_pi = boost::math::constants::two_pi<double>();
    double period = 0;
    for (const double t : {0.25, 0.5, 0.75}) {
        for (const double x : grid(-3, 3, 25)) {
            period = std::max(period, std::fabs(ev(t, x + two_pi) - ev(t, x)));
        }
    }
    o.require(period <= 1e-12, "periodicity max " + sci(period) + " <= 1e-12");

    std::mt19937 rng(7);
    bool round_trip = true;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Rational> c(1 + trial % 12);
        for (auto &v : c) {
            v = oracle::random_rational(rng);
        }
        if (c[0] == 0) {
            c[0] = q(1);
        }
        const TruncatedSeries<Rational> f(std::move(c));
        const auto g = series_revert(f);
        const auto id = TruncatedSeries<Rational>::identity(f.order());
        round_trip = round_trip && series_compose(f, g) == id && series_compose(g, f) == id;
    }
    o.require(round_trip, "revert round-trips exact");

    const auto exact_sine = solve_flow_exact(exact_series_for_flow(sine, 15), 15);
    const auto exact_moebius = solve_flow_exact(exact_series_for_flow(catalog_get<double>("moebius"), 15), 15);
    o.require(verify_unit_step(exact_sine).exact_zero() && verify_unit_step(exact_moebius).exact_zero(),
              "exact unit-step residual zero");
    const auto numeric =
        solve_flow_numeric(catalog_get<double>("logistic", {q(2)}).series(10), 0.5, 10);
    const double res = verify_unit_step(numeric).max_abs_residual;
    o.require(res <= 1e-12, "numeric unit-step residual " + sci(res) + " <= 1e-12");
    return o;
}

struct Criterion
{
    int id;
    const char *title;
    double limit_seconds;
    std::function<Outcome()> check;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "moebius coefficients exact", 1, moebius_exact},
        {2, "sine coefficients exact", 1, sine_exact},
        {3, "logistic lambda=2 coefficients", 1, logistic_coefficients},
        {4, "moebius error oracle", 5, moebius_oracle},
        {5, "moebius asymptote", 1, moebius_asymptote},
        {6, "logistic headline error", 5, logistic_headline},
        {7, "leading-error agreement", 5, leading_agreement},
        {8, "scaling law", 5, scaling_law},
        {9, "sine extrema", 10, sine_extrema},
        {10, "sine radius diagnostic", 120, sine_radius},
        {11, "Schroeder constants", 1, schroeder_constants},
        {12, "Koenigs oracle", 2, koenigs_oracle},
        {13, "property suite", 60, property_suite},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.check();
        } catch (const std::exception &e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.require(secs < c.limit_seconds, "runtime " + sci(secs) + " s < " + sci(c.limit_seconds) + " s");
        failures += out.pass ? 0 : 1;
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ("
                  << out.detail.str() << ")\n";
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
