#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include <fracflow/conjugation.hpp>

#include "oracles.hpp"

using namespace fracflow;
using oracle::q;

namespace
{

double rel(double a, double b)
{
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

std::vector<double> grid(double lo, double hi, int count)
{
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) {
        xs.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
    return xs;
}

} // namespace

TEST_CASE("choose_direction")
{
    const auto logistic = catalog_get<double>("logistic", {q(2)});
    for (const double x : grid(0.01, 0.49, 7)) {
        CHECK(choose_direction(logistic, x) == Direction::inner_inverse);
    }
    CHECK(choose_direction(catalog_get<double>("logistic", {q(1, 2)}), 0.3) == Direction::inner_forward);
    CHECK(choose_direction(catalog_get<double>("sine"), 1.0) == Direction::inner_forward);
    CHECK(choose_direction(catalog_get<double>("moebius"), 0.2) == Direction::inner_inverse);
    CHECK(choose_direction(catalog_get<double>("moebius"), -0.2) == Direction::inner_forward);
    // Tie at the fixed point.
    CHECK(choose_direction(catalog_get<double>("sine"), 0.0) == Direction::inner_forward);
}

TEST_CASE("moebius conjugation matches the closed conjugated form")
{
    const IterateEvaluator<double> ev(catalog_get<double>("moebius"), 3, 1, Direction::inner_inverse);
    for (const long n : {0L, 1L, 2L, 5L, 10L, 40L}) {
        for (const double t : {0.1, 0.5, 0.9}) {
            for (const double x : grid(0.05, 0.45, 9)) {
                const double a = ev.conjugated(t, x, n);
                CHECK_MESSAGE(rel(a, oracle::moebius_conjugated(t, x, 3, static_cast<int>(n))) <= 1e-13,
                              "n=" << n << " t=" << t << " x=" << x);
            }
        }
    }
}

TEST_CASE("conjugated approximant with t = 0 is the identity")
{
    const auto sine = std::make_shared<const MapSpec<double>>(catalog_get<double>("sine"));
    const auto flow = std::make_shared<const FlowSeries<TPolynomial>>(
        solve_flow_exact(exact_series_for_flow(*sine, 9), 9));
    const ConjugatedApproximant<double> a(sine, flow, 5, Direction::inner_forward);
    for (const double x : grid(-1.5, 1.5, 13)) {
        CHECK(rel(conjugate_eval(a, 0.0, x), x) <= 1e-13);
    }
    const auto logistic = std::make_shared<const MapSpec<double>>(catalog_get<double>("logistic", {q(2)}));
    const ConjugatedApproximant<double> b(logistic, solve_flow_numeric(logistic->series(6), 0.0, 6), 7,
                                          Direction::inner_inverse);
    for (const double x : grid(0.01, 0.49, 9)) {
        CHECK(rel(conjugate_eval(b, 0.0, x), x) <= 1e-13);
    }
    CHECK_THROWS_AS(conjugate_eval(b, 0.5, 0.2), usage_error);
}

TEST_CASE("sine A_{5,1}(2) is close to sin 2")
{
    const IterateEvaluator<double> ev(catalog_get<double>("sine"), 9, 5);
    const double a = ev.conjugated(1.0, 2.0);
    // Measured truncation level of the order-9 series after five conjugations.
    CHECK(rel(a, std::sin(2.0)) < 1e-9);
    CHECK(a == doctest::Approx(0.9092974268).epsilon(1e-9));
}

TEST_CASE("iterate_eval unit-interval reduction")
{
    const auto sine = catalog_get<double>("sine");
    const IterateEvaluator<double> ev(sine, 9, 5);
    CHECK(ev(3.0, 0.7) == apply_n(sine, 3, 0.7));
    CHECK(iterate_eval(catalog_get<double>("moebius"), 3.0, 0.1, 5, 5)
          == apply_n(catalog_get<double>("moebius"), 3, 0.1));
    CHECK(ev(1.5, 1.0) == std::sin(ev.conjugated(0.5, 1.0)));

    const auto moebius = catalog_get<double>("moebius");
    const IterateEvaluator<double> mv(moebius, 3, 5);
    const double v = mv(-0.5, 0.1);
    CHECK(v == apply_n(moebius, -1, mv.conjugated(0.5, 0.1)));
    // Within the order-3, five-fold conjugation error of the exact value.
    CHECK(rel(v, 0.1 / 1.05) < 1e-4);
    CHECK(v == doctest::Approx(0.0952380952).epsilon(1e-4));
}

TEST_CASE("domain escapes report the stage")
{
    // P_{9,-2} overshoots 1 at sin(1.4), so the outer arcsine (stage 3) fails.
    const IterateEvaluator<double> ev(catalog_get<double>("sine"), 9, 1, Direction::inner_forward);
    try {
        ev.conjugated(-2.0, 1.4);
        FAIL("expected domain error");
    } catch (const domain_error &e) {
        CHECK(e.stage() == 3);
        CHECK(e.value() > 1.0);
    }
    const auto moebius = catalog_get<double>("moebius");
    try {
        conjugate_eval_with(
            moebius, [&](const double &y) { return moebius.exact_flow(2.0, y); }, 0, Direction::inner_inverse, 0.5);
        FAIL("expected pole");
    } catch (const pole_error &e) {
        CHECK(e.stage() == 1);
    }
}

TEST_CASE("property: successive conjugations converge monotonically for n >= 3")
{
    struct Case
    {
        MapSpec<double> map;
        std::size_t order;
        double lo, hi;
    };
    const std::vector<Case> cases{{catalog_get<double>("moebius"), 3, 0.05, 0.45},
                                  {catalog_get<double>("sine"), 9, 0.1, 3.0},
                                  {catalog_get<double>("logistic", {q(2)}), 5, 0.01, 0.49},
                                  {catalog_get<double>("logistic", {q(37, 10)}), 5, 0.01, 0.5},
                                  {catalog_get<double>("logistic", {q(1, 2)}), 5, 0.01, 0.5}};
    for (const auto &c : cases) {
        const IterateEvaluator<double> ev(c.map, c.order, 3);
        for (const double t : {0.25, 0.5, 0.75}) {
            for (const double x : grid(c.lo, c.hi, 12)) {
                double prev = std::fabs(ev.conjugated(t, x, 4) - ev.conjugated(t, x, 3));
                for (long n = 4; n <= 10; ++n) {
                    const double a1 = ev.conjugated(t, x, n + 1);
                    const double d = std::fabs(a1 - ev.conjugated(t, x, n));
                    // Allow rounding noise once the differences reach epsilon.
                    CHECK_MESSAGE(d <= prev + 8e-16 * std::fabs(a1),
                                  c.map.name << " t=" << t << " x=" << x << " n=" << n);
                    prev = d;
                }
            }
        }
    }
}

TEST_CASE("property: conjugating the exact flow is independent of n")
{
    for (const auto &map : {catalog_get<double>("moebius"), catalog_get<double>("logistic", {q(2)}),
                            catalog_get<double>("logistic", {q(4)})}) {
        for (const double t : {0.25, 0.5, 0.75}) {
            for (const double x : grid(0.02, 0.2, 7)) {
                const auto core = [&](const double &y) { return map.exact_flow(t, y); };
                const double ref = map.exact_flow(t, x);
                for (const long n : {1L, 3L, 8L}) {
                    const double a = conjugate_eval_with(map, core, n, choose_direction(map, x), x);
                    CHECK_MESSAGE(rel(a, ref) <= 1e-12, map.name << " t=" << t << " x=" << x << " n=" << n);
                }
            }
        }
    }
}

TEST_CASE("property: one conjugation makes the sine iterate 2 pi periodic")
{
    const double two_pi = boost::math::constants::two_pi<double>();
    for (const long n : {1L, 5L}) {
        const IterateEvaluator<double> ev(catalog_get<double>("sine"), 9, n);
        for (const double t : {0.25, 0.5, 0.75}) {
            for (const double x : grid(-3.0, 3.0, 25)) {
                CHECK(std::fabs(ev(t, x + two_pi) - ev(t, x)) <= 1e-12);
            }
        }
    }
}
