#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <fracflow/numeric.hpp>
#include <fracflow/tpolynomial.hpp>
#include <fracflow/truncated_series.hpp>

#include "oracles.hpp"

using namespace fracflow;
using oracle::q;

namespace
{

TruncatedSeries<Rational> rs(std::vector<Rational> c)
{
    return TruncatedSeries<Rational>(std::move(c));
}

TruncatedSeries<Rational> random_series(std::mt19937 &rng, std::size_t n, bool invertible)
{
    std::vector<Rational> c(n);
    for (auto &x : c) {
        x = oracle::random_rational(rng);
    }
    if (invertible && is_zero(c[0])) {
        c[0] = q(1);
    }
    return rs(c);
}

// Distance in units of the last place.
double ulps(double a, double b)
{
    if (a == b) {
        return 0.0;
    }
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) / (std::nextafter(scale, INFINITY) - scale);
}

} // namespace

TEST_CASE("rational parsing is exact")
{
    CHECK(parse_rational("0.1") == q(1, 10));
    CHECK(parse_rational("-3/6") == q(-1, 2));
    CHECK(parse_rational("2.5e-1") == q(1, 4));
    CHECK(parse_rational("4") == q(4));
    CHECK_THROWS_AS(parse_rational("abc"), usage_error);
    CHECK_THROWS_AS(parse_rational("1/0"), usage_error);
}

TEST_CASE("tpolynomial canonical form")
{
    const TPolynomial p{q(1), q(0), q(0)};
    CHECK(p.degree() == 0);
    CHECK(TPolynomial{q(0), q(0)}.is_zero());
    CHECK((TPolynomial{q(0), q(1)} - TPolynomial{q(0), q(1)}).is_zero());
    const TPolynomial c5 = TPolynomial{q(-4), q(5)} * TPolynomial{q(0), q(1)} / q(120);
    CHECK(c5.eval(q(1)) == q(1, 120));
    CHECK(c5.eval(q(0)) == q(0));
    CHECK(TPolynomial::monomial(q(1), 3).to_string() == "t^3");
    CHECK(c5.to_string() == "1/24*t^2 - 1/30*t");
    CHECK(TPolynomial().to_string() == "0");
    CHECK(TPolynomial{q(-1, 2)}.to_string() == "-1/2");
}

TEST_CASE("series_add")
{
    CHECK(series_add(rs({q(1), q(0)}), rs({q(0), q(1)})) == rs({q(1), q(1)}));
    CHECK(series_add(rs({q(1), q(-1)}), rs({q(0), q(1)})) == rs({q(1), q(0)}));
    const auto a = rs({q(3), q(-2), q(1, 7)});
    CHECK(series_add(a, TruncatedSeries<Rational>(3)) == a);
    CHECK_THROWS_AS(series_add(rs({q(1)}), rs({q(1), q(2)})), usage_error);
}

TEST_CASE("series_mul")
{
    const auto x = TruncatedSeries<Rational>::identity(2);
    CHECK(series_mul(x, x) == rs({q(0), q(1)}));
    const auto s = rs({q(1), q(1), q(0)});
    CHECK(series_mul(s, s) == rs({q(0), q(1), q(2)}));
    const auto x1 = TruncatedSeries<Rational>::identity(1);
    CHECK(series_mul(x1, x1) == TruncatedSeries<Rational>(1));
    CHECK_THROWS_AS(series_mul(x, x1), usage_error);
}

TEST_CASE("series_compose")
{
    const auto g = rs({q(2), q(-1, 3), q(5)});
    CHECK(series_compose(TruncatedSeries<Rational>::identity(3), g) == g);
    // x/(1-x) after x/(1+x) is the identity.
    CHECK(series_compose(rs({q(1), q(1), q(1)}), rs({q(1), q(-1), q(1)})) == TruncatedSeries<Rational>::identity(3));
    const auto f = rs({q(1), q(1), q(0)});
    CHECK(series_compose(f, f) == rs({q(1), q(2), q(2)}));
    CHECK_THROWS_AS(series_compose(f, rs({q(1)})), usage_error);
}

TEST_CASE("series_compose agrees with naive power summation")
{
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const auto f = random_series(rng, n, false);
        const auto g = random_series(rng, n, false);
        CHECK(series_compose(f, g).coeffs() == oracle::naive_compose(f.coeffs(), g.coeffs()));
    }
}

TEST_CASE("series_revert")
{
    CHECK(series_revert(rs({q(1), q(1), q(1)})) == rs({q(1), q(-1), q(1)}));
    CHECK(series_revert(TruncatedSeries<Rational>::identity(5)) == TruncatedSeries<Rational>::identity(5));
    CHECK(series_revert(rs({q(2)})) == rs({q(1, 2)}));
    CHECK_THROWS_AS(series_revert(rs({q(0), q(1)})), degenerate_error);
}

TEST_CASE("series_eval")
{
    const auto f = rs({q(1), q(1), q(1), q(1)});
    CHECK(series_eval(f, q(1, 10)) == q(1111, 10000));
    CHECK(series_eval(f, q(0)) == q(0));
    const auto big = TruncatedSeries<double>(std::vector<double>{1.0, 1e308});
    CHECK_THROWS_AS(series_eval(big, 1e10), range_error);
    const TruncatedSeries<TPolynomial> tp(std::vector<TPolynomial>{
        TPolynomial(q(1)), TPolynomial{}, TPolynomial{q(0), q(-1, 6)}, TPolynomial{},
        TPolynomial{q(-4), q(5)} * TPolynomial{q(0), q(1)} / q(120)});
    CHECK(eval_at_t(tp, q(1))[5] == q(1, 120));
}

TEST_CASE("property: composition is associative (exact)")
{
    std::mt19937 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const auto f = random_series(rng, n, false);
        const auto g = random_series(rng, n, false);
        const auto h = random_series(rng, n, false);
        CHECK(series_compose(series_compose(f, g), h) == series_compose(f, series_compose(g, h)));
    }
}

TEST_CASE("property: reversion round-trips both ways (exact)")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const auto f = random_series(rng, n, true);
        const auto g = series_revert(f);
        const auto id = TruncatedSeries<Rational>::identity(n);
        CHECK(series_compose(f, g) == id);
        CHECK(series_compose(g, f) == id);
    }
}

TEST_CASE("property: Float64 mode tracks Rational mode within 8 ulps")
{
    // Positive coefficients keep the comparison free of cancellation, where
    // ulp distance stops being meaningful.
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> num(1, 9), den(1, 8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 6;
        std::vector<Rational> fa(n), ga(n);
        for (std::size_t k = 0; k < n; ++k) {
            fa[k] = q(num(rng), den(rng));
            ga[k] = q(num(rng), den(rng));
        }
        const auto f = rs(fa), g = rs(ga);
        const auto fd = series_to_real<double>(f), gd = series_to_real<double>(g);
        const auto exact_c = series_compose(f, g);
        const auto float_c = series_compose(fd, gd);
        const auto exact_m = series_mul(f, g);
        const auto float_m = series_mul(fd, gd);
        for (std::size_t k = 1; k <= n; ++k) {
            const double ec = rational_to_double(exact_c[k]);
            if (std::fabs(ec) <= 1e6) {
                CHECK(ulps(ec, float_c[k]) <= 8.0);
            }
            CHECK(ulps(rational_to_double(exact_m[k]), float_m[k]) <= 8.0);
        }
    }
}

TEST_CASE("truncation is explicit")
{
    const auto f = rs({q(1), q(2), q(3)});
    CHECK(f.truncated(2) == rs({q(1), q(2)}));
    CHECK(f.zero_extended(4) == rs({q(1), q(2), q(3), q(0)}));
    CHECK_THROWS_AS(f.truncated(4), usage_error);
    CHECK_THROWS_AS(TruncatedSeries<Rational>(0), usage_error);
}
